//! Log-spaced tables backing the non-closed-form kinds.

use crate::quad::GL5;

/// Lowest and highest abscissa tabulated for the power-log kind.
const POWER_LOG_SPAN: (f64, f64) = (1e-40, 1e40);
const NODES_PER_DECADE: f64 = 40.0;

/// `Φ` at log-spaced nodes; values between nodes add a Gauss-Legendre partial
/// integral of `φ(e^w)e^w` in `w = ln x`.
#[derive(Debug)]
pub(crate) struct PowerLogTable {
    u0: f64,
    du: f64,
    values: Vec<f64>,
    /// Growth exponents at the first and last node, used for extrapolation.
    left_slope: f64,
    right_slope: f64,
}

fn partial(phi: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    GL5.iter()
        .map(|(t, w)| {
            let u = mid + half * t;
            let x = u.exp();
            w * phi(x) * x
        })
        .sum::<f64>()
        * half
}

impl PowerLogTable {
    pub(crate) fn build(p: f64, phi: &dyn Fn(f64) -> f64) -> Self {
        let du = std::f64::consts::LN_10 / NODES_PER_DECADE;
        let u0 = POWER_LOG_SPAN.0.ln();
        let x0 = POWER_LOG_SPAN.0;
        // below 1e-40, (1 + ln(1+s))^γ equals 1 to double precision
        let mut values = vec![x0.powf(p) / p];
        let top = POWER_LOG_SPAN.1.ln();
        let mut u = u0;
        while u < top {
            let next = u + du;
            let v = values[values.len() - 1] + partial(phi, u, next);
            if !(v.is_finite() && v < 1e300) {
                break;
            }
            values.push(v);
            u = next;
        }
        let last = values.len() - 1;
        let x_last = (u0 + du * last as f64).exp();
        PowerLogTable {
            u0,
            du,
            left_slope: p,
            right_slope: x_last * phi(x_last) / values[last],
            values,
        }
    }

    pub(crate) fn range(&self) -> (f64, f64) {
        (self.u0.exp(), (self.u0 + self.du * (self.values.len() - 1) as f64).exp())
    }

    pub(crate) fn eval(&self, x: f64, phi: &dyn Fn(f64) -> f64) -> f64 {
        let u = x.ln();
        let last = self.values.len() - 1;
        let pos = (u - self.u0) / self.du;
        if pos <= 0.0 {
            return self.values[0] * ((u - self.u0) * self.left_slope).exp();
        }
        if pos >= last as f64 {
            let u_last = self.u0 + self.du * last as f64;
            return self.values[last] * ((u - u_last) * self.right_slope).exp();
        }
        let j = pos.floor() as usize;
        let uj = self.u0 + self.du * j as f64;
        if u == uj {
            return self.values[j];
        }
        self.values[j] + partial(phi, uj, u)
    }

    pub(crate) fn guess_inverse(&self, target: f64) -> f64 {
        let j = self.values.partition_point(|v| v.ln() < target);
        self.u0 + self.du * j.min(self.values.len() - 1) as f64
    }
}

/// Cubic Hermite interpolant of `L(u) = ln Φ(e^u)` on a uniform `u` grid.
#[derive(Debug)]
pub(crate) struct HermiteTable {
    u0: f64,
    du: f64,
    l: Vec<f64>,
    d: Vec<f64>,
}

impl HermiteTable {
    pub(crate) fn new(u0: f64, du: f64, l: Vec<f64>, d: Vec<f64>) -> Self {
        debug_assert_eq!(l.len(), d.len());
        debug_assert!(l.len() >= 2);
        HermiteTable { u0, du, l, d }
    }

    pub(crate) fn range(&self) -> (f64, f64) {
        (self.u0.exp(), (self.u0 + self.du * (self.l.len() - 1) as f64).exp())
    }

    /// `(L(u), L'(u))`.
    fn interp(&self, u: f64) -> (f64, f64) {
        let last = self.l.len() - 1;
        let pos = (u - self.u0) / self.du;
        if pos <= 0.0 {
            return (self.l[0] + self.d[0] * (u - self.u0), self.d[0]);
        }
        if pos >= last as f64 {
            let u_last = self.u0 + self.du * last as f64;
            return (self.l[last] + self.d[last] * (u - u_last), self.d[last]);
        }
        let j = (pos.floor() as usize).min(last - 1);
        let s = pos - j as f64;
        let h = self.du;
        let (l0, l1, d0, d1) = (self.l[j], self.l[j + 1], self.d[j], self.d[j + 1]);
        let s2 = s * s;
        let s3 = s2 * s;
        let value = (2.0 * s3 - 3.0 * s2 + 1.0) * l0
            + (s3 - 2.0 * s2 + s) * h * d0
            + (-2.0 * s3 + 3.0 * s2) * l1
            + (s3 - s2) * h * d1;
        let slope = ((6.0 * s2 - 6.0 * s) * l0 + (-6.0 * s2 + 6.0 * s) * l1) / h
            + (3.0 * s2 - 4.0 * s + 1.0) * d0
            + (3.0 * s2 - 2.0 * s) * d1;
        (value, slope)
    }

    pub(crate) fn eval(&self, x: f64) -> f64 {
        self.interp(x.ln()).0.exp()
    }

    pub(crate) fn log_slope(&self, x: f64) -> f64 {
        self.interp(x.ln()).1
    }

    pub(crate) fn derivative(&self, x: f64) -> f64 {
        let (l, d) = self.interp(x.ln());
        l.exp() * d / x
    }

    pub(crate) fn guess_inverse(&self, target: f64) -> f64 {
        let j = self.l.partition_point(|&v| v < target);
        self.u0 + self.du * j.min(self.l.len() - 1) as f64
    }
}
