//! Random fixtures and independent quadrature used by the test oracles.

use oh_core::funcspace::{GridFunction, Tail};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Sorted random abscissae, log-uniform on `[lo, hi]`.
pub fn random_nodes(rng: &mut ChaCha8Rng, lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let mut xs: Vec<f64> = (0..n).map(|_| (lo.ln() + rng.gen::<f64>() * (hi / lo).ln()).exp()).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    xs
}

/// Positive log-log piecewise-linear function supported on its node span.
pub fn random_function(rng: &mut ChaCha8Rng, lo: f64, hi: f64, n: usize) -> GridFunction {
    let xs = random_nodes(rng, lo, hi, n);
    let ys = xs.iter().map(|_| 0.1 + 3.0 * rng.gen::<f64>()).collect();
    GridFunction::with_tails(xs, ys, Tail::Zero, Tail::Zero).unwrap()
}

/// Positive weight, constant beyond its outermost nodes.
pub fn random_weight_density(rng: &mut ChaCha8Rng) -> GridFunction {
    let xs = random_nodes(rng, 0.05, 20.0, 4);
    let ys = xs.iter().map(|_| 0.2 + 2.0 * rng.gen::<f64>()).collect();
    GridFunction::with_tails(xs, ys, Tail::Power(0.0), Tail::Power(0.0)).unwrap()
}

/// `g/v` as a grid function, for `g` from [`random_function`] (zero outside its
/// nodes, so the quotient needs the nodes of both factors inside that span).
pub fn quotient(g: &GridFunction, density: &GridFunction) -> GridFunction {
    let (g0, g1) = (g.xs()[0], *g.xs().last().unwrap());
    // g's own samples are read from the table: eval at the end nodes sees the zero tails
    let mut pts: Vec<(f64, f64)> = g.xs().iter().copied().zip(g.ys().iter().copied()).collect();
    pts.extend(density.nodes().into_iter().filter(|&x| x > g0 && x < g1).map(|x| (x, g.eval(x))));
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    pts.dedup_by(|a, b| a.0 == b.0);
    let (xs, ys) = pts.into_iter().map(|(x, y)| (x, y / density.eval(x))).unzip();
    GridFunction::with_tails(xs, ys, Tail::Zero, Tail::Zero).unwrap()
}

/// `Σ c_k χ_(t_k, t_{k+1})` with random breakpoints in `[lo, hi]`.
pub struct Steps {
    pub breaks: Vec<f64>,
    pub values: Vec<f64>,
}

impl Steps {
    pub fn random(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> Steps {
        let n = rng.gen_range(2..6);
        let breaks = random_nodes(rng, lo, hi, n + 1);
        let values = (0..breaks.len() - 1).map(|_| 0.2 + 2.0 * rng.gen::<f64>()).collect();
        Steps { breaks, values }
    }

    pub fn grid(&self) -> GridFunction {
        let mut xs = vec![self.breaks[0]];
        let mut ys = vec![self.values[0]];
        for k in 1..self.values.len() {
            xs.extend([self.breaks[k], self.breaks[k]]);
            ys.extend([self.values[k - 1], self.values[k]]);
        }
        xs.push(*self.breaks.last().unwrap());
        ys.push(*self.values.last().unwrap());
        GridFunction::with_tails(xs, ys, Tail::Zero, Tail::Zero).unwrap()
    }

    fn pieces(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.values.iter().enumerate().map(|(k, &c)| (self.breaks[k], self.breaks[k + 1], c))
    }

    /// `(1/x)∫_0^x t h(t) dt`
    pub fn s(&self, x: f64) -> f64 {
        self.pieces().map(|(a, b, c)| if x <= a { 0.0 } else { c * (b.min(x).powi(2) - a * a) / 2.0 }).sum::<f64>() / x
    }

    /// `∫_x^∞ h`
    pub fn h_star(&self, x: f64) -> f64 {
        self.pieces().map(|(a, b, c)| if x >= b { 0.0 } else { c * (b - a.max(x)) }).sum()
    }

    /// `∫_x^∞ ln(t/x) h(t) dt`
    pub fn k_star(&self, x: f64) -> f64 {
        let anti = |t: f64| t * (t / x).ln() - t;
        self.pieces().map(|(a, b, c)| if x >= b { 0.0 } else { c * (anti(b) - anti(a.max(x))) }).sum()
    }
}

/// Exact `∫ g` over `[lo, hi]` for `g` a pure power on each interval between `breaks`.
pub fn power_piecewise_integral(breaks: &[f64], g: impl Fn(f64) -> f64) -> f64 {
    let mut pts = breaks.to_vec();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts.windows(2)
        .map(|w| {
            let (a, b) = (w[0], w[1]);
            let (a1, b1) = (a * (1.0 + 1e-13), b * (1.0 - 1e-13));
            let (ga, gb) = (g(a1), g(b1));
            if ga == 0.0 || gb == 0.0 {
                return 0.0;
            }
            let k = (gb / ga).ln() / (b1 / a1).ln();
            // ∫_a^b c x^k dx = g(a)·a·((b/a)^{k+1} − 1)/(k+1), without forming x^k
            let ga_exact = ga * (a / a1).powf(k);
            let l = (b / a).ln();
            let m = (k + 1.0) * l;
            if m.abs() < 1e-12 {
                ga_exact * a * l
            } else {
                ga_exact * a * m.exp_m1() / (k + 1.0)
            }
        })
        .sum()
}

/// Composite Simpson in `u = ln x` on each interval between sorted `breaks`.
pub fn simpson_log(breaks: &[f64], per_piece: usize, f: impl Fn(f64) -> f64) -> f64 {
    let mut pts = breaks.to_vec();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let n = per_piece + per_piece % 2;
    pts.windows(2)
        .map(|w| {
            let (ua, ub) = (w[0].ln(), w[1].ln());
            let h = (ub - ua) / n as f64;
            let g = |u: f64| {
                let x = u.exp();
                f(x) * x
            };
            let interior: f64 = (1..n).map(|i| if i % 2 == 1 { 4.0 } else { 2.0 } * g(ua + h * i as f64)).sum();
            // endpoints nudged inside so one-sided limits are used
            let (a, b) = (w[0] * (1.0 + 1e-12), w[1] * (1.0 - 1e-12));
            let (ea, eb) = (f(a) * a, f(b) * b);
            h / 3.0 * (ea + eb + interior)
        })
        .sum()
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}
