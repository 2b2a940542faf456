//! Seeded samples from the cone of non-negative non-increasing functions.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::grid::{log_grid, GridFunction};

/// Fractions of the critical exponent used for the deterministic extremal family.
pub const EXTREMAL_FRACTIONS: [f64; 8] = [0.0, 0.2, 0.4, 0.6, 0.8, 0.9, 0.95, 0.99];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConeConfig {
    pub seed: u64,
    /// Number of random samples; the extremal family is added on top.
    pub size: usize,
    /// Support radius `R`.
    pub radius: f64,
    /// Critical power exponent: `x^{-β}χ_(0,R)` has a finite modular only for `β` below it.
    pub beta_critical: f64,
    pub extremal: bool,
}

impl Default for ConeConfig {
    fn default() -> Self {
        ConeConfig { seed: 0, size: 64, radius: 1.0, beta_critical: 0.5, extremal: true }
    }
}

impl ConeConfig {
    pub fn with_radius(&self, radius: f64) -> Self {
        ConeConfig { radius, ..*self }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SampleKind {
    Step { levels: usize },
    Power { beta: f64, support: f64 },
    Mixture { levels: usize, beta: f64 },
    Extremal { beta: f64 },
}

#[derive(Debug, Clone)]
pub struct MonotoneSample {
    pub index: usize,
    pub kind: SampleKind,
    pub f: GridFunction,
}

/// Critical exponent `(1 + a)/p` for a weight `v ∝ x^a` near zero and an
/// N-function growing like `t^p` at infinity; capped at 4.
pub fn critical_exponent(growth_index: f64, weight_left_exponent: Option<f64>) -> f64 {
    match weight_left_exponent {
        Some(a) if growth_index > 0.0 => ((1.0 + a) / growth_index).min(4.0),
        _ => 4.0,
    }
}

/// Random samples `0..config.size` followed by the extremal family.
///
/// Sample `i` depends only on `(seed, i)`, so a larger cone extends a smaller one.
pub fn sample_cone(config: &ConeConfig) -> Vec<MonotoneSample> {
    let mut out: Vec<MonotoneSample> = (0..config.size).map(|i| random_sample(config, i)).collect();
    if config.extremal {
        out.extend(extremal_family(config.beta_critical, config.radius, config.size));
    }
    out
}

/// `x^{-β}χ_(0,R)` for `β` sweeping toward the critical exponent.
pub fn extremal_family(beta_critical: f64, radius: f64, first_index: usize) -> Vec<MonotoneSample> {
    EXTREMAL_FRACTIONS
        .iter()
        .enumerate()
        .map(|(k, frac)| {
            let beta = beta_critical * frac;
            MonotoneSample {
                index: first_index + k,
                kind: SampleKind::Extremal { beta },
                f: GridFunction::truncated_power(beta, radius),
            }
        })
        .collect()
}

struct Steps {
    breaks: Vec<f64>,
    levels: Vec<f64>,
}

impl Steps {
    fn draw(rng: &mut ChaCha8Rng, radius: f64) -> Steps {
        let count = rng.gen_range(1..=6);
        let mut js: Vec<i32> = vec![0];
        while js.len() < count {
            let j = rng.gen_range(1..16);
            if !js.contains(&j) {
                js.push(j);
            }
        }
        js.sort_unstable_by(|a, b| b.cmp(a));
        let breaks: Vec<f64> = js.iter().map(|&j| radius * 2f64.powi(-j)).collect();
        // levels[k] is the value on (breaks[k-1], breaks[k]); built from the right
        let mut levels = vec![0.0; count];
        let mut acc = 0.0;
        for k in (0..count).rev() {
            acc += 0.05 + rng.gen::<f64>() * 2.0;
            levels[k] = acc;
        }
        Steps { breaks, levels }
    }

    fn value(&self, x: f64) -> f64 {
        let k = self.breaks.partition_point(|&b| b <= x);
        self.levels.get(k).copied().unwrap_or(0.0)
    }
}

fn step_function(steps: &Steps) -> GridFunction {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (k, &b) in steps.breaks.iter().enumerate() {
        xs.push(b);
        ys.push(steps.levels[k]);
        xs.push(b);
        ys.push(steps.levels.get(k + 1).copied().unwrap_or(0.0));
    }
    GridFunction::with_tails(xs, ys, super::grid::Tail::Power(0.0), super::grid::Tail::Zero)
        .expect("step samples are valid")
}

fn mixture(steps: &Steps, beta: f64, radius: f64) -> GridFunction {
    let power = |x: f64| if x < radius { x.powf(-beta) } else { 0.0 };
    let grid = log_grid(radius * 2f64.powi(-16), radius, 30);
    let mut pts: Vec<(f64, f64)> = grid
        .iter()
        .filter(|x| !steps.breaks.iter().any(|b| (*x - b).abs() <= 1e-12 * b))
        .map(|&x| (x, steps.value(x) + power(x)))
        .collect();
    for (k, &b) in steps.breaks.iter().enumerate() {
        let left = steps.levels[k] + b.powf(-beta);
        let right = steps.levels.get(k + 1).map(|l| l + b.powf(-beta)).unwrap_or(0.0);
        pts.push((b, left));
        pts.push((b, right));
    }
    // stable sort keeps each (left, right) pair in order
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (xs, ys): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
    GridFunction::new(xs, ys).expect("mixture samples are valid")
}

/// Sample `index` of the random part of the cone.
pub fn random_sample(config: &ConeConfig, index: usize) -> MonotoneSample {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(index as u64);
    let radius = config.radius;
    let beta_max = 0.9 * config.beta_critical;
    let (kind, f) = match rng.gen_range(0..3) {
        0 => {
            let steps = Steps::draw(&mut rng, radius);
            (SampleKind::Step { levels: steps.levels.len() }, step_function(&steps))
        }
        1 => {
            let beta = rng.gen::<f64>() * beta_max;
            let support = radius * 2f64.powi(-rng.gen_range(0..5));
            (SampleKind::Power { beta, support }, GridFunction::truncated_power(beta, support))
        }
        _ => {
            let steps = Steps::draw(&mut rng, radius);
            let beta = rng.gen::<f64>() * beta_max;
            (SampleKind::Mixture { levels: steps.levels.len(), beta }, mixture(&steps, beta, radius))
        }
    };
    MonotoneSample { index, kind, f }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_are_non_increasing_and_deterministic() {
        let cfg = ConeConfig { size: 40, ..ConeConfig::default() };
        let a = sample_cone(&cfg);
        let b = sample_cone(&cfg);
        assert_eq!(a.len(), 48);
        for (s, t) in a.iter().zip(&b) {
            assert!(s.f.is_non_increasing(), "{:?}", s.kind);
            assert_eq!(s.f, t.f);
        }
    }

    #[test]
    fn cones_are_prefix_stable() {
        let small = sample_cone(&ConeConfig { size: 5, extremal: false, ..ConeConfig::default() });
        let large = sample_cone(&ConeConfig { size: 9, extremal: false, ..ConeConfig::default() });
        for (s, l) in small.iter().zip(&large) {
            assert_eq!(s.f, l.f);
        }
    }
}
