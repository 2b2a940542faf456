//! Kernels `k(x, t)`, `0 < t < x`, of generalized Hardy operators
//! `(Kf)(x) = ∫_0^x k(x, t) f(t) dt`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::funcspace::log_grid;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Kernel {
    /// `k ≡ 1`
    One,
    /// `k(x, t) = t`
    T,
    /// `k(x, t) = ln(x/t)`
    LogRatio,
    /// `k(x, t) = ln(x/t)^q`, `q > 0`
    LogPower { q: f64 },
}

impl fmt::Display for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kernel::One => write!(f, "1"),
            Kernel::T => write!(f, "t"),
            Kernel::LogRatio => write!(f, "ln(x/t)"),
            Kernel::LogPower { q } => write!(f, "ln(x/t)^{q}"),
        }
    }
}

/// Outcome of spot-testing the kernel axioms on sampled triples `y ≤ t ≤ x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelAxioms {
    pub non_decreasing_in_x: bool,
    pub non_increasing_in_t: bool,
    /// `max k(x,y)/(k(x,t) + k(t,y))` over the sample.
    pub observed_d: f64,
    pub quasi_additive: bool,
}

impl KernelAxioms {
    pub fn all_hold(&self) -> bool {
        self.non_decreasing_in_x && self.non_increasing_in_t && self.quasi_additive
    }
}

impl Kernel {
    pub const REGISTRY: [Kernel; 3] = [Kernel::One, Kernel::T, Kernel::LogRatio];

    pub fn k(&self, x: f64, t: f64) -> f64 {
        match self {
            Kernel::One => 1.0,
            Kernel::T => t,
            Kernel::LogRatio => (x / t).ln().max(0.0),
            Kernel::LogPower { q } => (x / t).ln().max(0.0).powf(*q),
        }
    }

    /// Declared quasi-additivity constant `D` in `k(x,y) ≤ D(k(x,t) + k(t,y))`.
    pub fn d(&self) -> f64 {
        match self {
            Kernel::One => 0.5,
            Kernel::T | Kernel::LogRatio => 1.0,
            Kernel::LogPower { q } => 2f64.powf(q - 1.0).max(1.0),
        }
    }

    pub fn declared_non_increasing_in_t(&self) -> bool {
        !matches!(self, Kernel::T)
    }

    /// Spot-tests monotonicity and quasi-additivity on a log grid of triples.
    pub fn check_axioms(&self, samples: usize) -> KernelAxioms {
        let pts = log_grid(1e-3, 1e3, samples.max(3));
        let tol = 1e-12;
        let mut inc_x = true;
        let mut dec_t = true;
        let mut d_obs = 0.0f64;
        for (i, &y) in pts.iter().enumerate() {
            for (j, &t) in pts.iter().enumerate().skip(i) {
                for &x in &pts[j..] {
                    if x > t {
                        if let Some(&x2) = pts.iter().find(|&&p| p > x) {
                            inc_x &= self.k(x2, t) >= self.k(x, t) * (1.0 - tol);
                        }
                        if t > y {
                            dec_t &= self.k(x, t) <= self.k(x, y) * (1.0 + tol) + tol;
                        }
                    }
                    let denom = self.k(x, t) + self.k(t, y);
                    let num = self.k(x, y);
                    if num > 0.0 {
                        d_obs = d_obs.max(if denom > 0.0 { num / denom } else { f64::INFINITY });
                    }
                }
            }
        }
        KernelAxioms {
            non_decreasing_in_x: inc_x,
            non_increasing_in_t: dec_t,
            observed_d: d_obs,
            quasi_additive: d_obs <= self.d() * (1.0 + 1e-9),
        }
    }
}
