//! Lower bounds for the pairing suprema `sup ∫fg/‖f‖_{Φ(v)}`.
//!
//! Both reports carry `best_lhs`, the largest ratio found over the sampled
//! candidates. It is a lower bound for the supremum, never the supremum itself.

use serde::Serialize;

use super::{support, Integrand};
use crate::error::{Error, Result};
use crate::funcspace::cumulative::mul0;
use crate::funcspace::{log_grid, GridFunction, Moments, MonotoneSample, Weight};
use crate::nfunctions::{check_delta2, ComplementaryPair, DEFAULT_RANGE, DEFAULT_SAMPLES};
use crate::par;
use crate::quad::LogPlan;

/// Multiples of each right-hand side used to scale the Young-equality candidates.
pub const YOUNG_LAMBDAS: [f64; 5] = [0.5, 0.8, 1.0, 1.25, 2.0];

#[derive(Debug, Clone, Serialize)]
pub struct DualityReport {
    /// `‖g/v‖_{Φ̃(v)}` as a Luxemburg norm.
    pub rhs: f64,
    /// `‖g/v‖` in the Orlicz (Amemiya) norm of `Φ̃(v)`.
    pub rhs_orlicz: f64,
    /// Largest observed `∫fg/‖f‖_{Φ(v)}` (a lower bound for the supremum).
    pub best_lhs: f64,
    /// `(rhs − best_lhs)/rhs`.
    pub gap: f64,
    /// Largest ratio among the cone samples alone.
    pub best_cone_lhs: f64,
    /// Largest ratio among the Young-equality candidates alone.
    pub best_young_lhs: f64,
    pub candidates: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SawyerReport {
    /// `‖Ig/Iv‖_{Φ̃(v)}`.
    pub rhs: f64,
    /// Largest observed ratio over non-increasing candidates (a lower bound).
    pub best_lhs: f64,
    pub ratio: f64,
    pub candidates: usize,
}

fn ratio(pairing: f64, norm: f64) -> f64 {
    if pairing == 0.0 {
        0.0
    } else {
        pairing / norm
    }
}

/// `∫fg/‖f‖_{Φ(v)}` for one grid-function candidate.
fn cone_ratio(f: &GridFunction, g: &GridFunction, v: &Weight, pair: &ComplementaryPair) -> f64 {
    let (lo, hi) = support(f);
    let mut kinks = f.nodes();
    kinks.extend(g.nodes());
    kinks.extend(v.kinks());
    let plan = LogPlan::new(lo, hi, &kinks);
    let gv: Vec<f64> = plan.xs().iter().map(|&x| g.eval(x)).collect();
    let fi = Integrand::from_fn(plan, |x| f.eval(x), v);
    let pairing = fi.plan().integrate_indexed(|i, _| mul0(fi.values()[i], gv[i]));
    ratio(pairing, fi.luxemburg(&pair.primal))
}

/// Weak duality in the weighted Orlicz space: compares `∫fg/‖f‖_{Φ(v)}` over
/// the cone and over `f = φ̃(g/(vλ))` against `‖g/v‖_{Φ̃(v)}`.
pub fn duality_gap(
    g: &GridFunction,
    pair: &ComplementaryPair,
    v: &Weight,
    cone: &[MonotoneSample],
) -> Result<DualityReport> {
    let (lo, hi) = support(g);
    let mut kinks = g.nodes();
    kinks.extend(v.kinks());
    let plan = LogPlan::new(lo, hi, &kinks);
    let gv: Vec<f64> = plan.xs().iter().map(|&x| g.eval(x)).collect();
    let quotient: Vec<f64> = plan
        .xs()
        .iter()
        .zip(&gv)
        .map(|(&x, &gx)| if gx == 0.0 { 0.0 } else { gx / v.at(x) })
        .collect();
    let h = Integrand::from_values(plan.clone(), quotient.clone(), v);
    let rhs = h.luxemburg(&pair.conjugate);
    if rhs == 0.0 {
        return Ok(DualityReport {
            rhs: 0.0,
            rhs_orlicz: 0.0,
            best_lhs: 0.0,
            gap: 0.0,
            best_cone_lhs: 0.0,
            best_young_lhs: 0.0,
            candidates: 0,
        });
    }
    if !rhs.is_finite() {
        return Err(Error::numerical("right-hand side norm ||g/v|| is infinite"));
    }
    let rhs_orlicz = h.amemiya(&pair.conjugate);

    let scales: Vec<f64> = YOUNG_LAMBDAS
        .iter()
        .flat_map(|l| [l * rhs, l * rhs_orlicz])
        .collect();
    let young: Vec<f64> = par::map(&scales, |&lambda| {
        let fv: Vec<f64> = quotient.iter().map(|&q| pair.conjugate.derivative(q / lambda)).collect();
        let fi = Integrand::from_values(plan.clone(), fv, v);
        let pairing = plan.integrate_indexed(|i, _| mul0(fi.values()[i], gv[i]));
        ratio(pairing, fi.luxemburg(&pair.primal))
    });
    let cone_ratios: Vec<f64> = par::map(cone, |s| cone_ratio(&s.f, g, v, pair));

    let best_young_lhs = young.iter().copied().fold(0.0, f64::max);
    let best_cone_lhs = cone_ratios.iter().copied().fold(0.0, f64::max);
    let best_lhs = best_young_lhs.max(best_cone_lhs);
    Ok(DualityReport {
        rhs,
        rhs_orlicz,
        best_lhs,
        gap: (rhs - best_lhs) / rhs,
        best_cone_lhs,
        best_young_lhs,
        candidates: young.len() + cone_ratios.len(),
    })
}

/// Duality on the cone of non-increasing functions: compares the best pairing
/// ratio against `‖Ig/Iv‖_{Φ̃(v)}`.
pub fn sawyer_duality_gap(
    g: &GridFunction,
    pair: &ComplementaryPair,
    v: &Weight,
    cone: &[MonotoneSample],
) -> Result<SawyerReport> {
    if !check_delta2(&pair.primal, DEFAULT_RANGE, DEFAULT_SAMPLES)?.passes {
        return Err(Error::hypothesis("Phi in Delta2 required"));
    }
    if !check_delta2(&pair.conjugate, DEFAULT_RANGE, DEFAULT_SAMPLES)?.passes {
        return Err(Error::hypothesis("complementary Phi in Delta2 required"));
    }
    if !v.iv_infinite() {
        return Err(Error::hypothesis("(Iv)(infinity) = infinity required"));
    }
    let ig = Moments::new(g, 0.0);
    if !ig.left_integrable() {
        return Err(Error::domain("g is not integrable near 0"));
    }
    let mut kinks = g.nodes();
    kinks.extend(v.kinks());
    let plan = LogPlan::new(0.0, f64::INFINITY, &kinks);
    let h = Integrand::from_fn(plan, |x| ratio(ig.below(x), v.iv(x)), v);
    let rhs = h.luxemburg(&pair.conjugate);

    // level sets χ_(0,r): pairing Ig(r), norm 1/Φ⁻¹(1/Iv(r))
    let radii = log_grid(1e-3, 1e3, 25);
    let level: Vec<f64> = radii
        .iter()
        .map(|&r| {
            let norm = 1.0 / pair.primal.inv(1.0 / v.iv(r));
            ratio(ig.below(r), norm)
        })
        .collect();
    let cone_ratios: Vec<f64> = par::map(cone, |s| cone_ratio(&s.f, g, v, pair));
    let best_lhs = level.iter().chain(&cone_ratios).copied().fold(0.0, f64::max);
    Ok(SawyerReport {
        rhs,
        best_lhs,
        ratio: if rhs == 0.0 { 0.0 } else { best_lhs / rhs },
        candidates: level.len() + cone_ratios.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::{sample_cone, ConeConfig};
    use crate::nfunctions::NFunction;

    fn quadratic_pair() -> ComplementaryPair {
        NFunction::power(2.0).unwrap().complementary().unwrap()
    }

    #[test]
    fn indicator_pairing_and_norms() {
        let chi = GridFunction::indicator(0.0, 1.0, 1.0).unwrap();
        let cone = sample_cone(&ConeConfig { size: 8, ..ConeConfig::default() });
        let r = duality_gap(&chi, &quadratic_pair(), &Weight::unit(), &cone).unwrap();
        assert!((r.rhs - 0.5f64.sqrt()).abs() < 1e-8);
        assert!((r.rhs_orlicz - 2f64.sqrt()).abs() < 1e-8);
        assert!((r.best_lhs - 2f64.sqrt()).abs() < 1e-6, "{r:?}");
    }

    #[test]
    fn zero_g_has_zero_sides() {
        let cone = sample_cone(&ConeConfig { size: 2, ..ConeConfig::default() });
        let r = duality_gap(&GridFunction::zero(), &quadratic_pair(), &Weight::unit(), &cone).unwrap();
        assert_eq!((r.rhs, r.best_lhs), (0.0, 0.0));
    }

    #[test]
    fn sawyer_indicator() {
        let chi = GridFunction::indicator(0.0, 1.0, 1.0).unwrap();
        let cone = sample_cone(&ConeConfig { size: 8, ..ConeConfig::default() });
        let r = sawyer_duality_gap(&chi, &quadratic_pair(), &Weight::unit(), &cone).unwrap();
        assert!((r.rhs - 1.0).abs() < 1e-6, "{r:?}");
        assert!(r.best_lhs >= 2f64.sqrt() * (1.0 - 1e-6));
        let one = GridFunction::constant(1.0);
        let flagged = sawyer_duality_gap(&one, &quadratic_pair(), &Weight::unit(), &cone).unwrap();
        assert!(flagged.rhs.is_infinite());
    }
}
