//! `H_{α,φ}(I*h) = I₁ + I₂`, split at `y = x`, with its two-sided bounds by
//! `Sh + H*h` and `K*h`, and the reduction `H_φ ≈ A` for multipliers supported
//! in `[1, ∞)`.

use serde::Serialize;

use super::classical::Classical;
use super::dunkl::{dunkl_hausdorff_partial, dunkl_hausdorff_point};
use super::multiplier::{check_phi_condition, MultiplierFunction, PhiBounds};
use crate::error::{Error, Result};
use crate::funcspace::{log_grid, GridFunction, Moments, Shaped};
use crate::par;

/// Values of the decomposition at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecompositionPoint {
    pub x: f64,
    pub i1: f64,
    pub i2: f64,
    /// `C₁(Sh + H*h) + C₃K*h`
    pub lower: f64,
    /// `C₂(Sh + H*h) + C₄K*h`
    pub upper: f64,
}

impl DecompositionPoint {
    pub fn total(&self) -> f64 {
        self.i1 + self.i2
    }
}

#[derive(Debug, Clone)]
pub struct Decomposition {
    pub i1: GridFunction,
    pub i2: GridFunction,
    pub lower: GridFunction,
    pub upper: GridFunction,
    pub points: Vec<DecompositionPoint>,
}

/// Evaluates `I₁`, `I₂` and the bounds at each `x` in `grid`.
pub fn decompose_points(mf: &MultiplierFunction, h: &GridFunction, grid: &[f64]) -> Result<Vec<DecompositionPoint>> {
    let PhiBounds { c1, c2, c3, c4 } =
        mf.bounds.ok_or_else(|| Error::hypothesis("multiplier bounds C1..C4 required"))?;
    let m0 = Moments::new(h, 0.0);
    let m1 = Moments::new(h, 1.0);
    let istar = Shaped::new(|y: f64| m0.above(y), h.nodes());
    Ok(par::map(grid, |&x| {
        let i1 = dunkl_hausdorff_partial(mf, &istar, x, 0.0, x);
        let i2 = dunkl_hausdorff_partial(mf, &istar, x, x, f64::INFINITY);
        let near = m1.below(x) / x + m0.above(x);
        let log = m0.log_above(x);
        DecompositionPoint { x, i1, i2, lower: c1 * near + c3 * log, upper: c2 * near + c4 * log }
    }))
}

/// The decomposition resampled on `grid` (default: the abscissae of `h`).
#[allow(non_snake_case)]
pub fn decompose_HIstar(mf: &MultiplierFunction, h: &GridFunction, grid: Option<&[f64]>) -> Result<Decomposition> {
    let nodes = h.nodes();
    let xs = grid.unwrap_or(&nodes);
    let points = decompose_points(mf, h, xs)?;
    let column = |f: fn(&DecompositionPoint) -> f64| {
        let ys: Vec<f64> = points.iter().map(f).collect();
        let lookup = |x: f64| {
            let i = xs.partition_point(|&p| p < x);
            ys[i.min(ys.len() - 1)]
        };
        crate::funcspace::cumulative::resample(xs, lookup)
    };
    Ok(Decomposition {
        i1: column(|p| p.i1)?,
        i2: column(|p| p.i2)?,
        lower: column(|p| p.lower)?,
        upper: column(|p| p.upper)?,
        points,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct HardyReduction {
    pub equivalent: bool,
    /// `[inf, sup]` of `(H_φ f)(x)/(Af)(x)` over the test family.
    pub ratio_band: (f64, f64),
    /// `[C₁, C₂]` with `C₁ ≤ tφ(t) ≤ C₂` on `[1, ∞)`.
    pub declared: (f64, f64),
    pub samples: usize,
}

/// Relative slack allowed around the declared band.
pub const REDUCTION_TOL: f64 = 1e-6;

/// Positive non-increasing test functions for the reduction check.
fn reduction_family() -> Vec<GridFunction> {
    let mut family = Vec::new();
    for &radius in &[0.1, 1.0, 10.0] {
        for &beta in &[0.0, 0.3, 0.6] {
            family.push(GridFunction::truncated_power(beta, radius));
        }
    }
    let xs = log_grid(1e-4, 1e4, 33);
    family.push(GridFunction::sample(&xs, |x| 1.0 / (1.0 + x * x)).expect("valid family member"));
    family.push(GridFunction::sample(&xs, |x| (-x).exp() + 0.1 / (1.0 + x)).expect("valid family member"));
    family
}

/// Checks `H_φ ≈ A` at `α = −1/2` for `supp φ ⊆ [1, ∞)`.
pub fn hausdorff_reduces_to_hardy(mf: &MultiplierFunction) -> Result<HardyReduction> {
    if (mf.alpha + 0.5).abs() > 1e-12 {
        return Err(Error::hypothesis(format!("alpha = -1/2 required, got {}", mf.alpha)));
    }
    if !mf.supported_in_unit_complement() {
        return Err(Error::hypothesis("supp(phi) subset of [1, infinity) required"));
    }
    let fit = check_phi_condition(mf);
    let declared = match mf.bounds {
        Some(b) => (b.c1, b.c2),
        None => (fit.c1, fit.c2),
    };
    let xs = log_grid(1e-3, 1e3, 25);
    let family = reduction_family();
    let ratios: Vec<(f64, f64)> = par::map(&family, |f| {
        let a = Classical::HardyAvg.prepare(f);
        let mut band = (f64::INFINITY, 0.0f64);
        for &x in &xs {
            let denom = a.at(x);
            if denom > 0.0 && denom.is_finite() {
                let r = dunkl_hausdorff_point(mf, f, x) / denom;
                band = (band.0.min(r), band.1.max(r));
            }
        }
        band
    });
    let band = ratios.iter().fold((f64::INFINITY, 0.0f64), |acc, b| (acc.0.min(b.0), acc.1.max(b.1)));
    Ok(HardyReduction {
        equivalent: band.0 >= declared.0 * (1.0 - REDUCTION_TOL) && band.1 <= declared.1 * (1.0 + REDUCTION_TOL),
        ratio_band: band,
        declared,
        samples: family.len() * xs.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_multiplier_is_the_equality_case() {
        let h = GridFunction::new(vec![0.3, 1.0, 2.0, 2.0, 6.0], vec![1.0, 2.0, 0.5, 0.25, 0.1]).unwrap();
        let h = GridFunction::with_tails(h.xs().to_vec(), h.ys().to_vec(), crate::funcspace::Tail::Power(0.5), crate::funcspace::Tail::Zero).unwrap();
        for alpha in [-0.5, 0.0, 1.0] {
            let mf = MultiplierFunction::exact(alpha);
            for p in decompose_points(&mf, &h, &[0.05, 0.7, 1.9, 4.0]).unwrap() {
                assert!((p.total() / p.lower - 1.0).abs() < 1e-8, "{alpha}: {p:?}");
                assert_eq!(p.lower, p.upper);
            }
        }
    }

    #[test]
    fn missing_bounds_are_rejected() {
        let h = GridFunction::indicator(0.0, 1.0, 1.0).unwrap();
        assert!(decompose_points(&MultiplierFunction::hardy(), &h, &[1.0]).is_err());
    }

    #[test]
    fn hardy_multiplier_reduces_exactly() {
        let r = hausdorff_reduces_to_hardy(&MultiplierFunction::hardy()).unwrap();
        assert!(r.equivalent);
        assert!((r.ratio_band.0 - 1.0).abs() < 1e-10 && (r.ratio_band.1 - 1.0).abs() < 1e-10, "{r:?}");
        assert!(hausdorff_reduces_to_hardy(&MultiplierFunction::calderon()).is_err());
    }
}
