//! Multiplier functions `φ` of the Dunkl-Hausdorff operator and the growth
//! condition `C₁ ≤ φ(x)/x^{2α} ≤ C₂` on `x ≥ 1`, `C₃ ≤ φ(x)/x^{2α+1} ≤ C₄` on `(0, 1)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::funcspace::{log_grid, GridFunction, Tail};

/// Sample points per region used when fitting the constants.
const FIT_SAMPLES: usize = 121;
/// Decades sampled on each side of `x = 1`.
const FIT_DECADES: f64 = 6.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhiBounds {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
}

#[derive(Debug, Clone)]
pub struct MultiplierFunction {
    pub phi: GridFunction,
    pub alpha: f64,
    pub bounds: Option<PhiBounds>,
}

/// Extremes of a ratio over one region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegionFit {
    pub lower: f64,
    pub upper: f64,
    /// False when the ratio vanishes or drifts without bound across decades.
    pub bounded: bool,
}

impl RegionFit {
    fn holds(&self) -> bool {
        self.bounded && self.lower > 0.0 && self.upper.is_finite()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhiCondition {
    pub holds: bool,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    /// `φ(x)/x^{2α}` on `x ≥ 1`.
    pub upper_region: RegionFit,
    /// `φ(x)/x^{2α+1}` on `0 < x < 1`.
    pub lower_region: RegionFit,
}

impl PhiCondition {
    pub fn bounds(&self) -> PhiBounds {
        PhiBounds { c1: self.c1, c2: self.c2, c3: self.c3, c4: self.c4 }
    }
}

impl MultiplierFunction {
    pub fn new(phi: GridFunction, alpha: f64) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(Error::domain(format!("alpha must be finite, got {alpha}")));
        }
        Ok(MultiplierFunction { phi, alpha, bounds: None })
    }

    /// `φ = χ_(1,∞)(t)/t` at `α = −1/2`: the Hardy averaging operator.
    pub fn hardy() -> Self {
        let phi = GridFunction::with_tails(vec![1.0, 1.0], vec![0.0, 1.0], Tail::Zero, Tail::Power(-1.0))
            .expect("valid preset");
        MultiplierFunction { phi, alpha: -0.5, bounds: None }
    }

    /// `φ = χ_(0,1)` at `α = −1/2`: the adjoint Hardy averaging operator.
    pub fn hardy_adjoint() -> Self {
        let phi = GridFunction::indicator(0.0, 1.0, 1.0).expect("valid preset");
        MultiplierFunction { phi, alpha: -0.5, bounds: None }
    }

    /// `φ₀(t) = t^{2α}` on `[1, ∞)` and `t^{2α+1}` on `(0, 1)`: all four constants equal one.
    pub fn exact(alpha: f64) -> Self {
        let phi = GridFunction::with_tails(vec![1.0], vec![1.0], Tail::Power(2.0 * alpha + 1.0), Tail::Power(2.0 * alpha))
            .expect("valid preset");
        let unit = PhiBounds { c1: 1.0, c2: 1.0, c3: 1.0, c4: 1.0 };
        MultiplierFunction { phi, alpha, bounds: Some(unit) }
    }

    /// `φ₀` at `α = −1/2`, for which `H_φ` is the Calderón operator `A + A*`.
    pub fn calderon() -> Self {
        Self::exact(-0.5)
    }

    pub fn with_bounds(mut self, bounds: PhiBounds) -> Self {
        self.bounds = Some(bounds);
        self
    }

    /// Declared bounds, or fitted ones when none were declared.
    pub fn bounds_or_fit(&self) -> PhiBounds {
        self.bounds.unwrap_or_else(|| check_phi_condition(self).bounds())
    }

    /// Whether `φ` vanishes on `(0, 1)`.
    pub fn supported_in_unit_complement(&self) -> bool {
        self.phi.segments().iter().filter(|s| s.lo < 1.0).all(|s| {
            let hi = s.hi.min(1.0);
            let mid = if s.lo == 0.0 { 0.5 * hi } else { (s.lo * hi).sqrt() };
            s.piece.at(mid) == 0.0 && s.piece.at(0.999_999 * hi) == 0.0
        })
    }
}

fn region(ratios: impl Iterator<Item = f64>, tail_drift: bool) -> RegionFit {
    let (mut lower, mut upper) = (f64::INFINITY, 0.0f64);
    for r in ratios {
        let r = if r.is_nan() { f64::INFINITY } else { r };
        lower = lower.min(r);
        upper = upper.max(r);
    }
    RegionFit { lower, upper, bounded: !tail_drift && upper.is_finite() }
}

fn drifts(tail: Tail, edge_value: f64, expected: f64) -> bool {
    match tail {
        Tail::Zero => true,
        Tail::Power(_) if edge_value == 0.0 => true,
        Tail::Power(e) => (e - expected).abs() > 1e-9 * expected.abs().max(1.0),
    }
}

/// Tightest constants over the sampled regions; `holds` is false when a ratio
/// is zero, infinite, or changes without bound along a tail.
pub fn check_phi_condition(mf: &MultiplierFunction) -> PhiCondition {
    let phi = &mf.phi;
    let a2 = 2.0 * mf.alpha;
    let span = 10f64.powf(FIT_DECADES);

    let mut upper_pts = log_grid(1.0, span, FIT_SAMPLES);
    upper_pts.extend(phi.nodes().into_iter().filter(|&x| x >= 1.0));
    let ys = phi.ys();
    let upper_drift = drifts(phi.right_tail(), ys[ys.len() - 1], a2);
    let upper_region = region(upper_pts.iter().map(|&x| phi.eval(x) / x.powf(a2)), upper_drift);

    // left limits, so a jump at 1 is read from below
    let mut lower_pts: Vec<f64> = log_grid(1.0 / span, 1.0, FIT_SAMPLES).iter().map(|x| x * (1.0 - 1e-12)).collect();
    lower_pts.extend(phi.nodes().into_iter().filter(|&x| x <= 1.0).map(|x| x * (1.0 - 1e-12)));
    let lower_drift = drifts(phi.left_tail(), ys[0], a2 + 1.0);
    let lower_region = region(lower_pts.iter().map(|&x| phi.eval(x) / x.powf(a2 + 1.0)), lower_drift);

    PhiCondition {
        holds: upper_region.holds() && lower_region.holds(),
        c1: upper_region.lower,
        c2: upper_region.upper,
        c3: lower_region.lower,
        c4: lower_region.upper,
        upper_region,
        lower_region,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn calderon_multiplier_has_unit_constants() {
        let c = check_phi_condition(&MultiplierFunction::calderon());
        assert!(c.holds);
        for v in [c.c1, c.c2, c.c3, c.c4] {
            assert!((v - 1.0).abs() < 1e-12, "{c:?}");
        }
        for alpha in [-0.5, 0.0, 1.0] {
            let c = check_phi_condition(&MultiplierFunction::exact(alpha));
            assert!(c.holds && (c.c1 - 1.0).abs() < 1e-9 && (c.c4 - 1.0).abs() < 1e-9, "{alpha}: {c:?}");
        }
    }

    #[test]
    fn exponential_multiplier_fails() {
        let xs = log_grid(1e-3, 50.0, 200);
        let phi = GridFunction::sample(&xs, f64::exp).unwrap();
        let c = check_phi_condition(&MultiplierFunction::new(phi, 0.0).unwrap());
        assert!(!c.holds);
        assert!(c.c2 > 1e8);
    }

    #[test]
    fn hardy_multiplier_is_supported_on_the_right() {
        let h = MultiplierFunction::hardy();
        assert!(h.supported_in_unit_complement());
        let c = check_phi_condition(&h);
        assert!(!c.holds && c.upper_region.holds() && c.c3 == 0.0);
        assert!(!MultiplierFunction::calderon().supported_in_unit_complement());
    }
}
