//! N-functions `Φ(x) = ∫_0^x φ`, their inverses and complementary functions.

mod checks;
mod conjugate;
mod table;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcspace::{GridFunction, Moments, Tail};

pub use checks::{check_delta2, check_order, Delta2Report, OrderMethod, OrderReport, DEFAULT_RANGE, DEFAULT_SAMPLES};
pub use conjugate::{ComplementaryPair, ConjugateMethod};
use table::{HermiteTable, PowerLogTable};

/// Relative tolerance attached to closed-form kinds.
pub const CLOSED_FORM_TOL: f64 = 1e-8;
/// Relative tolerance attached to tabulated kinds.
pub const TABULATED_TOL: f64 = 1e-6;

/// Configuration descriptor of an N-function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum NFunctionSpec {
    Power { p: f64 },
    PowerLog { p: f64, gamma: f64 },
    Table { s: Vec<f64>, phi: Vec<f64>, tail_exponent: f64 },
}

impl NFunctionSpec {
    pub fn build(&self) -> Result<NFunction> {
        match self {
            NFunctionSpec::Power { p } => NFunction::power(*p),
            NFunctionSpec::PowerLog { p, gamma } => NFunction::power_log(*p, *gamma),
            NFunctionSpec::Table { s, phi, tail_exponent } => NFunction::tabulated(s, phi, *tail_exponent),
        }
    }
}

#[derive(Debug)]
enum Repr {
    Power { p: f64 },
    PowerLog { p: f64, gamma: f64, table: PowerLogTable },
    Table { phi: GridFunction, cum: Moments, range: (f64, f64) },
    Hermite(HermiteTable),
}

/// A Young function generated by a non-decreasing `φ`.
#[derive(Debug, Clone)]
pub struct NFunction {
    repr: Arc<Repr>,
    tol: f64,
}

impl fmt::Display for NFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.repr {
            Repr::Power { p } => write!(f, "t^{p}/{p}"),
            Repr::PowerLog { p, gamma, .. } => write!(f, "power-log(p={p}, gamma={gamma})"),
            Repr::Table { phi, .. } => write!(f, "table({} samples)", phi.xs().len()),
            Repr::Hermite(_) => write!(f, "numeric conjugate"),
        }
    }
}

impl NFunction {
    /// `Φ(t) = t^p/p`, `p > 1`.
    pub fn power(p: f64) -> Result<Self> {
        if !(p > 1.0 && p.is_finite()) {
            return Err(Error::invalid(format!("power N-function needs p > 1, got {p}")));
        }
        Ok(NFunction { repr: Arc::new(Repr::Power { p }), tol: CLOSED_FORM_TOL })
    }

    /// Generated by `φ(s) = s^{p−1}(1 + ln(1+s))^γ` with `p > 1` and `γ ≥ 1 − p`.
    pub fn power_log(p: f64, gamma: f64) -> Result<Self> {
        if !(p > 1.0 && p.is_finite()) || !gamma.is_finite() || gamma < 1.0 - p {
            return Err(Error::invalid(format!("power-log N-function needs p > 1 and gamma >= 1 - p, got p={p}, gamma={gamma}")));
        }
        let phi = move |s: f64| power_log_phi(p, gamma, s);
        let table = PowerLogTable::build(p, &phi);
        Ok(NFunction { repr: Arc::new(Repr::PowerLog { p, gamma, table }), tol: CLOSED_FORM_TOL })
    }

    /// Generated by a sampled `φ`: log-log linear between samples, extended by
    /// power laws fitted at the left end and given by `tail_exponent` on the right.
    pub fn tabulated(s: &[f64], phi: &[f64], tail_exponent: f64) -> Result<Self> {
        if s.len() < 2 || s.len() != phi.len() {
            return Err(Error::invalid("table needs at least two (s, phi) pairs of equal length"));
        }
        if s.windows(2).any(|w| w[1] <= w[0]) || s[0] <= 0.0 {
            return Err(Error::invalid("table abscissae must be positive and strictly increasing"));
        }
        if phi.iter().any(|&v| !(v > 0.0 && v.is_finite())) || phi.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::invalid("generator samples must be positive, finite and non-decreasing"));
        }
        if !(tail_exponent > 0.0 && tail_exponent.is_finite()) {
            return Err(Error::invalid(format!(
                "generator tail exponent must be positive (got {tail_exponent}); otherwise the conjugate is not an N-function"
            )));
        }
        let left = (phi[1] / phi[0]).ln() / (s[1] / s[0]).ln();
        if left <= 0.0 {
            return Err(Error::invalid("generator must vanish at 0 (left tail exponent must be positive)"));
        }
        let g = GridFunction::with_tails(s.to_vec(), phi.to_vec(), Tail::Power(left), Tail::Power(tail_exponent))?;
        let cum = Moments::new(&g, 0.0);
        let range = (s[0], s[s.len() - 1]);
        Ok(NFunction { repr: Arc::new(Repr::Table { phi: g, cum, range }), tol: TABULATED_TOL })
    }

    fn from_hermite(table: HermiteTable) -> Self {
        NFunction { repr: Arc::new(Repr::Hermite(table)), tol: TABULATED_TOL }
    }

    /// Relative accuracy attached to evaluations.
    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    /// The exponent for closed-form power kinds.
    pub fn power_exponent(&self) -> Option<f64> {
        match &*self.repr {
            Repr::Power { p } => Some(*p),
            _ => None,
        }
    }

    /// Interval on which values are computed without tail extrapolation.
    pub fn represented_range(&self) -> (f64, f64) {
        match &*self.repr {
            Repr::Power { .. } => (0.0, f64::INFINITY),
            Repr::PowerLog { table, .. } => table.range(),
            Repr::Table { range, .. } => *range,
            Repr::Hermite(t) => t.range(),
        }
    }

    /// Whether evaluating at `x` relies on a fitted tail model.
    pub fn is_extrapolated(&self, x: f64) -> bool {
        let (lo, hi) = self.represented_range();
        x > 0.0 && (x < lo || x > hi)
    }

    /// `Φ(x)` for `x ≥ 0`; `+∞` at `+∞`.
    pub fn eval(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return if x == 0.0 { 0.0 } else { f64::NAN };
        }
        if x.is_infinite() {
            return f64::INFINITY;
        }
        match &*self.repr {
            Repr::Power { p } => x.powf(*p) / p,
            Repr::PowerLog { p, gamma, table } => table.eval(x, &|s| power_log_phi(*p, *gamma, s)),
            Repr::Table { cum, .. } => cum.below(x),
            Repr::Hermite(t) => t.eval(x),
        }
    }

    /// `Φ(x)`, rejecting negative arguments.
    pub fn try_eval(&self, x: f64) -> Result<f64> {
        if x.is_nan() || x < 0.0 {
            return Err(Error::domain(format!("N-function argument must be non-negative, got {x}")));
        }
        Ok(self.eval(x))
    }

    /// The generator `φ(x) = Φ'(x)`.
    pub fn derivative(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        match &*self.repr {
            Repr::Power { p } => x.powf(p - 1.0),
            Repr::PowerLog { p, gamma, .. } => power_log_phi(*p, *gamma, x),
            Repr::Table { phi, .. } => phi.eval(x),
            Repr::Hermite(t) => t.derivative(x),
        }
    }

    /// `x φ(x)/Φ(x)`, the local growth exponent.
    pub fn log_slope(&self, x: f64) -> f64 {
        match &*self.repr {
            Repr::Power { p } => *p,
            Repr::Hermite(t) => t.log_slope(x),
            _ => x * self.derivative(x) / self.eval(x),
        }
    }

    /// Growth exponent near infinity, estimated at the top of the default range.
    pub fn growth_index(&self) -> f64 {
        self.log_slope(DEFAULT_RANGE.1)
    }

    /// `Φ^{-1}(y)`.
    pub fn inverse(&self, y: f64) -> Result<f64> {
        if y.is_nan() || y < 0.0 {
            return Err(Error::domain(format!("inverse needs y >= 0, got {y}")));
        }
        if y == 0.0 {
            return Ok(0.0);
        }
        if y.is_infinite() {
            return Err(Error::Range("inverse of +inf is outside the extrapolable range".into()));
        }
        if let Repr::Power { p } = &*self.repr {
            return Ok((p * y).powf(1.0 / p));
        }
        let u = self
            .solve_log(y.ln())
            .ok_or_else(|| Error::Range(format!("Phi^-1({y}) lies beyond the representable range")))?;
        Ok(u.exp())
    }

    /// `Φ^{-1}(y)` with `+∞` for unrepresentable arguments; for internal sweeps.
    pub fn inv(&self, y: f64) -> f64 {
        if y.is_infinite() {
            return f64::INFINITY;
        }
        self.inverse(y).unwrap_or(if y > 1.0 { f64::INFINITY } else { 0.0 })
    }

    /// Solves `ln Φ(e^u) = target` by safeguarded Newton steps.
    fn solve_log(&self, target: f64) -> Option<f64> {
        let g = |u: f64| {
            let v = self.eval(u.exp());
            if v == 0.0 { f64::NEG_INFINITY } else { v.ln() - target }
        };
        let guess = match &*self.repr {
            Repr::Hermite(t) => t.guess_inverse(target),
            Repr::PowerLog { table, .. } => table.guess_inverse(target),
            _ => target / self.log_slope(1.0).max(1.0),
        };
        let mut lo;
        let mut hi;
        let g0 = g(guess);
        if g0 == 0.0 {
            return Some(guess);
        }
        if g0 < 0.0 {
            lo = guess;
            let mut step = 1.0;
            loop {
                hi = lo + step;
                if hi > 720.0 {
                    return None;
                }
                if g(hi) >= 0.0 {
                    break;
                }
                lo = hi;
                step *= 2.0;
            }
        } else {
            hi = guess;
            let mut step = 1.0;
            loop {
                lo = hi - step;
                if lo < -745.0 {
                    return None;
                }
                if g(lo) <= 0.0 {
                    break;
                }
                hi = lo;
                step *= 2.0;
            }
        }
        let mut u = 0.5 * (lo + hi);
        for _ in 0..200 {
            let val = g(u);
            if val == 0.0 {
                return Some(u);
            }
            if val < 0.0 {
                lo = u;
            } else {
                hi = u;
            }
            let slope = self.log_slope(u.exp());
            let mut next = u - val / slope;
            if !(next > lo && next < hi) || !next.is_finite() {
                next = 0.5 * (lo + hi);
            }
            if (next - u).abs() <= 1e-15 * u.abs().max(1.0) || hi - lo <= 1e-15 * u.abs().max(1.0) {
                return Some(next);
            }
            u = next;
        }
        Some(u)
    }
}

fn power_log_phi(p: f64, gamma: f64, s: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    s.powf(p - 1.0) * (1.0 + s.ln_1p()).powf(gamma)
}
