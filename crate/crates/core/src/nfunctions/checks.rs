//! Sampled-range certificates for Δ₂ and the order relation `Φ ≺ Ψ`.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::NFunction;
use crate::error::{Error, Result};
use crate::funcspace::log_grid;

pub const DEFAULT_RANGE: (f64, f64) = (1e-6, 1e6);
pub const DEFAULT_SAMPLES: usize = 200;
/// Largest `Φ(2t)/Φ(t)` accepted as bounded.
pub const DELTA2_CEILING: f64 = 1e6;

const CONVEXITY_TOL: f64 = 1e-6;
const ORDER_SEED: u64 = 0x0bd3_5eed;
const SEQUENCE_DRAWS: usize = 64;
/// The sequence constant counts as bounded if long sequences do not push it
/// past this multiple of what short ones reach.
const SEQUENCE_GROWTH: f64 = 1.5;

#[derive(Debug, Clone, Serialize)]
pub struct Delta2Report {
    pub passes: bool,
    pub beta_estimate: f64,
    pub worst_t: f64,
    pub range: (f64, f64),
    pub samples: usize,
    pub ceiling: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrderMethod {
    Convexity,
    SequenceBound,
    None,
}

#[derive(Debug, Clone, Serialize)]
pub struct OrderReport {
    pub precedes: bool,
    pub method: OrderMethod,
    pub convex: bool,
    /// Largest observed `∑Ψ∘Φ⁻¹(aᵢ) / Ψ∘Φ⁻¹(∑aᵢ)`.
    pub sequence_constant: f64,
    pub range: (f64, f64),
    pub samples: usize,
}

fn check_range(range: (f64, f64), samples: usize) -> Result<()> {
    if !(range.0 > 0.0 && range.1 > range.0 && range.1.is_finite()) || samples < 2 {
        return Err(Error::domain(format!("need 0 < t_min < t_max and at least 2 samples, got {range:?}, {samples}")));
    }
    Ok(())
}

/// `sup Φ(2t)/Φ(t)` over a log grid.
pub fn check_delta2(nf: &NFunction, range: (f64, f64), samples: usize) -> Result<Delta2Report> {
    check_range(range, samples)?;
    let mut beta = 0.0;
    let mut worst_t = range.0;
    for t in log_grid(range.0, range.1, samples) {
        let ratio = nf.eval(2.0 * t) / nf.eval(t);
        let ratio = if ratio.is_nan() { f64::INFINITY } else { ratio };
        if ratio > beta {
            beta = ratio;
            worst_t = t;
        }
    }
    Ok(Delta2Report {
        passes: beta.is_finite() && beta <= DELTA2_CEILING,
        beta_estimate: beta,
        worst_t,
        range,
        samples,
        ceiling: DELTA2_CEILING,
    })
}

/// Convexity of `Ψ∘Φ⁻¹` from secant slopes through `(Φ(t), Ψ(t))`, backed by a
/// randomized sequence test of `∑Ψ∘Φ⁻¹(aᵢ) ≤ C Ψ∘Φ⁻¹(∑aᵢ)`.
pub fn check_order(phi: &NFunction, psi: &NFunction, range: (f64, f64), samples: usize) -> Result<OrderReport> {
    check_range(range, samples)?;
    let ts = log_grid(range.0, range.1, samples);
    let mut points = vec![(0.0, 0.0)];
    points.extend(ts.iter().map(|&t| (phi.eval(t), psi.eval(t))));
    let mut convex = true;
    let mut prev = 0.0;
    for w in points.windows(2) {
        let slope = (w[1].1 - w[0].1) / (w[1].0 - w[0].0);
        if !slope.is_finite() {
            continue;
        }
        if slope < prev * (1.0 - CONVEXITY_TOL) {
            convex = false;
            break;
        }
        prev = slope;
    }

    let (lo_y, hi_y) = (phi.eval(range.0), phi.eval(range.1));
    let composed = |y: f64| psi.eval(phi.inv(y));
    let mut short = 1.0f64;
    let mut long = 1.0f64;
    let mut rng = ChaCha8Rng::seed_from_u64(ORDER_SEED);
    for n in 2..=256usize {
        let mut record = |ratio: f64| {
            if n <= 16 {
                short = short.max(ratio);
            } else if n >= 128 {
                long = long.max(ratio);
            }
        };
        // n equal terms whose sum stays inside the sampled range
        for y in [lo_y * n as f64, (lo_y * hi_y).sqrt(), hi_y] {
            let a = y / n as f64;
            record(n as f64 * composed(a) / composed(y));
        }
        if n.is_power_of_two() {
            for _ in 0..SEQUENCE_DRAWS / 8 {
                let (ll, lh) = (lo_y.ln(), hi_y.ln());
                let terms: Vec<f64> =
                    (0..n).map(|_| (ll + rng.gen::<f64>() * (lh - ll)).exp() / n as f64).collect();
                let total: f64 = terms.iter().sum();
                let lhs: f64 = terms.iter().map(|&a| composed(a)).sum();
                record(lhs / composed(total));
            }
        }
    }
    let bounded = long.is_finite() && long <= SEQUENCE_GROWTH * short;
    let method = if convex {
        OrderMethod::Convexity
    } else if bounded {
        OrderMethod::SequenceBound
    } else {
        OrderMethod::None
    };
    Ok(OrderReport {
        precedes: convex || bounded,
        method,
        convex,
        sequence_constant: short.max(long),
        range,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta2_of_powers() {
        for p in [1.5, 2.0, 3.0] {
            let r = check_delta2(&NFunction::power(p).unwrap(), DEFAULT_RANGE, DEFAULT_SAMPLES).unwrap();
            assert!(r.passes);
            assert!((r.beta_estimate / 2f64.powf(p) - 1.0).abs() < 1e-12);
        }
        let steep = NFunction::power(21.0).unwrap();
        assert!(!check_delta2(&steep, DEFAULT_RANGE, DEFAULT_SAMPLES).unwrap().passes);
    }

    #[test]
    fn order_of_powers() {
        let q = NFunction::power(2.0).unwrap();
        let quartic = NFunction::power(4.0).unwrap();
        let up = check_order(&q, &quartic, DEFAULT_RANGE, DEFAULT_SAMPLES).unwrap();
        assert!(up.precedes && up.convex);
        let same = check_order(&q, &q, DEFAULT_RANGE, DEFAULT_SAMPLES).unwrap();
        assert!(same.precedes && same.convex);
        assert!((same.sequence_constant - 1.0).abs() < 1e-9);
        let down = check_order(&quartic, &q, DEFAULT_RANGE, DEFAULT_SAMPLES).unwrap();
        assert!(!down.convex);
        assert!(!down.precedes, "{down:?}");
    }
}
