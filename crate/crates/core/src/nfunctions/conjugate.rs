//! Complementary functions `Φ̃(t) = sup_s (st − Φ(s))`.

use serde::Serialize;

use super::table::HermiteTable;
use super::NFunction;
use crate::error::{Error, Result};

/// Abscissa span of the numeric conjugate table.
const CONJUGATE_SPAN: (f64, f64) = (1e-30, 1e30);
const NODES_PER_DECADE: f64 = 40.0;
const GOLDEN: f64 = 0.618_033_988_749_894_8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConjugateMethod {
    Analytic,
    NumericLegendre,
}

#[derive(Debug, Clone)]
pub struct ComplementaryPair {
    pub primal: NFunction,
    pub conjugate: NFunction,
    pub method: ConjugateMethod,
}

impl NFunction {
    /// `(Φ̃(t), s*)` with `s*` a maximiser of `st − Φ(s)`, or `None` when the
    /// maximiser leaves the floating-point range.
    pub fn legendre(&self, t: f64) -> Option<(f64, f64)> {
        self.legendre_from(t, 1.0)
    }

    fn legendre_from(&self, t: f64, hint: f64) -> Option<(f64, f64)> {
        if t <= 0.0 {
            return Some((0.0, 0.0));
        }
        // the maximiser sits where φ crosses t
        let mut lo = hint.ln();
        let mut hi = lo;
        while self.derivative(lo.exp()) > t {
            lo -= 2.0;
            if lo < -700.0 {
                return None;
            }
        }
        while self.derivative(hi.exp()) < t {
            hi += 2.0;
            if hi > 700.0 {
                return None;
            }
        }
        let objective = |u: f64| {
            let s = u.exp();
            s * t - self.eval(s)
        };
        let mut a = lo;
        let mut b = hi;
        let mut c = b - GOLDEN * (b - a);
        let mut d = a + GOLDEN * (b - a);
        let mut fc = objective(c);
        let mut fd = objective(d);
        while b - a > 1e-12 * (1.0 + a.abs().max(b.abs())) {
            if fc >= fd {
                b = d;
                d = c;
                fd = fc;
                c = b - GOLDEN * (b - a);
                fc = objective(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + GOLDEN * (b - a);
                fd = objective(d);
            }
        }
        let u = 0.5 * (a + b);
        let s = u.exp();
        Some((objective(u).max(0.0), s))
    }

    /// Tabulated conjugate built from Legendre values on a log grid, interpolated
    /// as a cubic Hermite curve in `(ln t, ln Φ̃)` with exact end slopes `t s*/Φ̃`.
    pub fn numeric_conjugate(&self) -> Result<NFunction> {
        let du = std::f64::consts::LN_10 / NODES_PER_DECADE;
        let u_lo = CONJUGATE_SPAN.0.ln();
        let count = ((CONJUGATE_SPAN.1.ln() - u_lo) / du).round() as usize + 1;
        let mut hint = 1.0;
        let mut rows: Vec<Option<(f64, f64)>> = Vec::with_capacity(count);
        for i in 0..count {
            let t = (u_lo + du * i as f64).exp();
            let row = self.legendre_from(t, hint).and_then(|(value, s)| {
                let usable = value > 1e-300 && value < 1e300 && s > 0.0 && s.is_finite();
                usable.then(|| {
                    hint = s;
                    (value.ln(), t * s / value)
                })
            });
            rows.push(row);
        }
        // longest run of usable nodes
        let mut best = (0, 0);
        let mut start = 0;
        for (i, row) in rows.iter().enumerate() {
            if row.is_none() {
                start = i + 1;
            } else if i + 1 - start > best.1 - best.0 {
                best = (start, i + 1);
            }
        }
        if best.1 - best.0 < 2 {
            return Err(Error::numerical("conjugate table has fewer than two representable nodes"));
        }
        let (l, d): (Vec<f64>, Vec<f64>) = rows[best.0..best.1].iter().map(|r| r.expect("usable row")).unzip();
        Ok(NFunction::from_hermite(HermiteTable::new(u_lo + du * best.0 as f64, du, l, d)))
    }

    /// The complementary function, analytic for power kinds (cross-checked
    /// against the Legendre transform) and numeric otherwise.
    pub fn complementary(&self) -> Result<ComplementaryPair> {
        if let Some(p) = self.power_exponent() {
            let conjugate = NFunction::power(p / (p - 1.0))?;
            for &t in &[1e-3, 1.0, 1e3] {
                let (numeric, _) = self
                    .legendre(t)
                    .ok_or_else(|| Error::numerical(format!("Legendre transform out of range at t={t}")))?;
                let exact = conjugate.eval(t);
                if (numeric / exact - 1.0).abs() > 1e-6 {
                    return Err(Error::numerical(format!(
                        "analytic conjugate disagrees with Legendre transform at t={t}: {exact} vs {numeric}"
                    )));
                }
            }
            return Ok(ComplementaryPair { primal: self.clone(), conjugate, method: ConjugateMethod::Analytic });
        }
        Ok(ComplementaryPair {
            primal: self.clone(),
            conjugate: self.numeric_conjugate()?,
            method: ConjugateMethod::NumericLegendre,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_is_self_conjugate() {
        let q = NFunction::power(2.0).unwrap();
        for &t in &[1e-4, 0.3, 1.0, 7.0, 1e4] {
            let (v, s) = q.legendre(t).unwrap();
            assert!((v / (0.5 * t * t) - 1.0).abs() < 1e-12, "{t}: {v}");
            assert!((s / t - 1.0).abs() < 1e-5);
        }
        let pair = q.complementary().unwrap();
        assert_eq!(pair.method, ConjugateMethod::Analytic);
        assert_eq!(pair.conjugate.power_exponent(), Some(2.0));
        assert_eq!(pair.conjugate.eval(0.0), 0.0);
    }

    #[test]
    fn numeric_conjugate_of_power() {
        let c = NFunction::power(3.0).unwrap();
        let tilde = c.numeric_conjugate().unwrap();
        for t in [1e-3f64, 0.05, 1.0, 30.0, 1e3] {
            let exact = t.powf(1.5) / 1.5;
            assert!((tilde.eval(t) / exact - 1.0).abs() < 1e-7, "{t}: {} vs {exact}", tilde.eval(t));
        }
    }
}
