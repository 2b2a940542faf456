//! Modulars, Luxemburg and Amemiya norms, and the duality checks.

mod duality;

pub use duality::{duality_gap, sawyer_duality_gap, DualityReport, SawyerReport, YOUNG_LAMBDAS};

use crate::funcspace::cumulative::mul0;
use crate::funcspace::{GridFunction, Tail, Weight};
use crate::nfunctions::NFunction;
use crate::quad::LogPlan;
use crate::solve::{threshold, Search, Threshold};

/// Relative bracket width of Luxemburg-norm searches.
pub const NORM_REL_WIDTH: f64 = 1e-10;

const GOLDEN: f64 = 0.618_033_988_749_894_8;

/// A function and a weight sampled at the nodes of one quadrature plan, so
/// that modulars at many scalings reuse the same evaluations.
#[derive(Debug, Clone)]
pub struct Integrand {
    plan: LogPlan,
    f: Vec<f64>,
    v: Vec<f64>,
}

/// Integration limits covering the support of `f`.
pub fn support(f: &GridFunction) -> (f64, f64) {
    let xs = f.xs();
    let lo = if f.left_tail() == Tail::Zero { xs[0] } else { 0.0 };
    let hi = if f.right_tail() == Tail::Zero { xs[xs.len() - 1] } else { f64::INFINITY };
    (lo, hi)
}

impl Integrand {
    pub fn new(f: &GridFunction, v: &Weight) -> Self {
        let (lo, hi) = support(f);
        let mut kinks = f.nodes();
        kinks.extend(v.kinks());
        Integrand::from_fn(LogPlan::new(lo, hi, &kinks), |x| f.eval(x), v)
    }

    /// Samples `f` at every node of `plan`.
    pub fn from_fn(plan: LogPlan, f: impl Fn(f64) -> f64, v: &Weight) -> Self {
        let fv = plan.xs().iter().map(|&x| f(x)).collect();
        Integrand::from_values(plan, fv, v)
    }

    pub fn from_values(plan: LogPlan, f: Vec<f64>, v: &Weight) -> Self {
        debug_assert_eq!(plan.len(), f.len());
        let vv = plan.xs().iter().map(|&x| v.at(x)).collect();
        Integrand { plan, f, v: vv }
    }

    /// The same integrand against the weight `c·v`.
    pub fn with_weight_scale(mut self, c: f64) -> Self {
        for v in &mut self.v {
            *v *= c;
        }
        self
    }

    pub fn plan(&self) -> &LogPlan {
        &self.plan
    }

    pub fn values(&self) -> &[f64] {
        &self.f
    }

    pub fn weights(&self) -> &[f64] {
        &self.v
    }

    pub fn is_zero(&self) -> bool {
        self.f.iter().zip(&self.v).all(|(&f, &v)| mul0(f, v) == 0.0)
    }

    /// `∫ Φ(c f) v`.
    pub fn modular(&self, nf: &NFunction, c: f64) -> f64 {
        self.plan.integrate_indexed(|i, _| {
            let f = self.f[i];
            if f == 0.0 {
                return 0.0;
            }
            mul0(nf.eval(c * f), self.v[i])
        })
    }

    /// `∫ f g v` for a second function sampled on the same plan.
    pub fn pairing(&self, g: &[f64]) -> f64 {
        self.plan.integrate_indexed(|i, _| mul0(mul0(self.f[i], g[i]), self.v[i]))
    }

    /// `inf {τ > 0 : ∫ Φ(f/τ) v ≤ 1}`; `+∞` when no scaling makes the modular finite.
    pub fn luxemburg(&self, nf: &NFunction) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let start = match nf.power_exponent() {
            Some(p) => {
                let rho = self.modular(nf, 1.0);
                if rho.is_finite() && rho > 0.0 { rho.powf(1.0 / p) } else { 1.0 }
            }
            None => 1.0,
        };
        let search = Search { start, floor: 1e-150, cap: 1e150, rel_width: NORM_REL_WIDTH };
        match threshold(|tau| self.modular(nf, 1.0 / tau).ln(), search) {
            Threshold::AboveCap(_) => f64::INFINITY,
            t => t.value(),
        }
    }

    /// Orlicz norm in Amemiya form, `inf_k (1 + ∫Φ(kf)v)/k`.
    pub fn amemiya(&self, nf: &NFunction) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let lux = self.luxemburg(nf);
        if !lux.is_finite() {
            return f64::INFINITY;
        }
        let h = |u: f64| {
            let k = u.exp();
            (1.0 + self.modular(nf, k)) / k
        };
        // unimodal in ln k; the minimiser lies where the modular is of order one
        let centre = (1.0 / lux).ln();
        let mut a = centre - 1.0;
        while h(a) <= h(a + 0.5) && a > centre - 60.0 {
            a -= 1.0;
        }
        let mut b = centre + 1.0;
        while h(b) <= h(b - 0.5) && b < centre + 60.0 {
            b += 1.0;
        }
        let mut c = b - GOLDEN * (b - a);
        let mut d = a + GOLDEN * (b - a);
        let (mut fc, mut fd) = (h(c), h(d));
        while b - a > 1e-9 {
            if fc <= fd {
                b = d;
                d = c;
                fd = fc;
                c = b - GOLDEN * (b - a);
                fc = h(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + GOLDEN * (b - a);
                fd = h(d);
            }
        }
        fc.min(fd)
    }
}

/// `ρ_v(f, Φ) = ∫ Φ(f) v`; divergence is reported as `+∞`.
pub fn modular(f: &GridFunction, nf: &NFunction, v: &Weight) -> f64 {
    Integrand::new(f, v).modular(nf, 1.0)
}

/// `‖f‖_{Φ(v)} = inf {τ > 0 : ρ_v(f/τ, Φ) ≤ 1}`.
pub fn luxemburg_norm(f: &GridFunction, nf: &NFunction, v: &Weight) -> f64 {
    Integrand::new(f, v).luxemburg(nf)
}

/// Orlicz (Amemiya) norm `inf_k (1 + ρ_v(kf, Φ))/k`.
pub fn orlicz_norm(f: &GridFunction, nf: &NFunction, v: &Weight) -> f64 {
    Integrand::new(f, v).amemiya(nf)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chi01() -> GridFunction {
        GridFunction::indicator(0.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn modular_of_indicator() {
        let q = NFunction::power(2.0).unwrap();
        assert!((modular(&chi01(), &q, &Weight::unit()) - 0.5).abs() < 1e-14);
        let linear = Weight::new(GridFunction::power(1.0, 1.0)).unwrap();
        let c = NFunction::power(3.0).unwrap();
        assert!((modular(&chi01(), &c, &linear) - 1.0 / 6.0).abs() < 1e-14);
        assert_eq!(modular(&GridFunction::zero(), &q, &Weight::unit()), 0.0);
    }

    #[test]
    fn luxemburg_of_indicator() {
        let q = NFunction::power(2.0).unwrap();
        let n = luxemburg_norm(&chi01(), &q, &Weight::unit());
        assert!((n - 0.5f64.sqrt()).abs() < 1e-9, "{n}");
        assert_eq!(luxemburg_norm(&GridFunction::zero(), &q, &Weight::unit()), 0.0);
        assert!(luxemburg_norm(&GridFunction::constant(1.0), &q, &Weight::unit()).is_infinite());
    }

    #[test]
    fn amemiya_of_indicator() {
        // inf_k (1 + k²/2)/k = √2 at k = √2
        let q = NFunction::power(2.0).unwrap();
        let n = orlicz_norm(&chi01(), &q, &Weight::unit());
        assert!((n - 2f64.sqrt()).abs() < 1e-9, "{n}");
    }
}
