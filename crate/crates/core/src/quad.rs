//! Quadrature on the half line in logarithmic coordinates.
//!
//! Integrals over `(lo, hi) ⊆ (0, ∞)` are computed in `u = ln x`. The finite
//! part between the outermost kinks is split at every kink and into pieces no
//! wider than half a decade, each handled by a 15-point Kronrod rule. The
//! semi-infinite ends are summed panel by panel (half a decade each); once
//! successive panel ratios agree the remainder is added as a geometric series,
//! which is exact for power-law tails. A ratio that settles at or above one
//! means the tail diverges and the integral is reported as `+∞`.
//!
//! Integrands are assumed non-negative.

use std::ops::Range;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

/// Five-point Gauss-Legendre nodes and weights on `[-1, 1]`.
pub(crate) const GL5: [(f64, f64); 5] = [
    (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
    (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.0, 0.568_888_888_888_888_9),
    (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.906_179_845_938_664, 0.236_926_885_056_189_1),
];

/// Width of a quadrature piece or tail panel in `ln x` (half a decade).
pub const PANEL_WIDTH: f64 = std::f64::consts::LN_10 / 2.0;

/// Panels summed on each semi-infinite end before falling back to the last ratio.
pub const MAX_TAIL_PANELS: usize = 80;

/// Nodes of the 15-point Kronrod rule mapped to `[a, b]`, with weights.
pub(crate) fn kronrod_nodes(a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    (0..15).map(move |i| {
        if i < 7 {
            (c - h * XGK[i], h * WGK[i])
        } else if i == 7 {
            (c, h * WGK[7])
        } else {
            let j = 14 - i;
            (c + h * XGK[j], h * WGK[j])
        }
    })
}

/// Integrates a smooth function over `[a, b]` with one Kronrod pass.
pub fn kronrod<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64) -> f64 {
    kronrod_nodes(a, b).map(|(x, w)| w * f(x)).sum()
}

/// A precomputed set of quadrature nodes for `∫_lo^hi g(x) dx`.
///
/// Building the plan once and evaluating it many times is the fast path for
/// Luxemburg-norm and constant searches, where the same abscissae are reused
/// for every trial scaling.
#[derive(Debug, Clone)]
pub struct LogPlan {
    xs: Vec<f64>,
    ws: Vec<f64>,
    finite: Range<usize>,
    lower: Vec<Range<usize>>,
    upper: Vec<Range<usize>>,
}

impl LogPlan {
    /// Plans `∫_lo^hi` with `lo ≥ 0` and `hi ≤ ∞` (empty when `hi ≤ lo`); `kinks` are points where the
    /// integrand may fail to be smooth (unsorted input is fine).
    pub fn new(lo: f64, hi: f64, kinks: &[f64]) -> LogPlan {
        debug_assert!(lo >= 0.0);
        if !(hi > lo) {
            return LogPlan { xs: Vec::new(), ws: Vec::new(), finite: 0..0, lower: Vec::new(), upper: Vec::new() };
        }
        let mut pts: Vec<f64> = kinks
            .iter()
            .copied()
            .filter(|&k| k.is_finite() && k > lo && k < hi)
            .collect();
        if lo > 0.0 {
            pts.push(lo);
        }
        if hi.is_finite() {
            pts.push(hi);
        }
        pts.sort_by(|a, b| a.total_cmp(b));
        pts.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * b.abs());
        if pts.is_empty() {
            pts.push(1.0);
        }

        let mut xs = Vec::new();
        let mut ws = Vec::new();
        for pair in pts.windows(2) {
            let (ua, ub) = (pair[0].ln(), pair[1].ln());
            let n = ((ub - ua) / PANEL_WIDTH).ceil().max(1.0) as usize;
            let step = (ub - ua) / n as f64;
            for j in 0..n {
                let a = ua + step * j as f64;
                push_panel(&mut xs, &mut ws, a, a + step);
            }
        }
        let finite = 0..xs.len();

        let mut lower = Vec::new();
        if lo == 0.0 {
            let u0 = pts[0].ln();
            for k in 0..MAX_TAIL_PANELS {
                let start = xs.len();
                let b = u0 - PANEL_WIDTH * k as f64;
                push_panel(&mut xs, &mut ws, b - PANEL_WIDTH, b);
                lower.push(start..xs.len());
            }
        }
        let mut upper = Vec::new();
        if hi.is_infinite() {
            let u0 = pts[pts.len() - 1].ln();
            for k in 0..MAX_TAIL_PANELS {
                let start = xs.len();
                let a = u0 + PANEL_WIDTH * k as f64;
                push_panel(&mut xs, &mut ws, a, a + PANEL_WIDTH);
                upper.push(start..xs.len());
            }
        }
        LogPlan { xs, ws, finite, lower, upper }
    }

    /// All abscissae of the plan; index `i` here matches the index passed to
    /// the integrand in [`LogPlan::integrate_indexed`].
    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut g: F) -> f64 {
        self.integrate_indexed(|_, x| g(x))
    }

    /// Integrates `g(i, x_i)`; tail nodes are only visited until the tail sum
    /// has converged.
    pub fn integrate_indexed<F: FnMut(usize, f64) -> f64>(&self, mut g: F) -> f64 {
        let mut total = 0.0;
        for i in self.finite.clone() {
            total += self.ws[i] * g(i, self.xs[i]);
        }
        if !total.is_finite() {
            return f64::INFINITY;
        }
        let lower = tail_sum(&self.lower, &self.xs, &self.ws, &mut g);
        if !lower.is_finite() {
            return f64::INFINITY;
        }
        let upper = tail_sum(&self.upper, &self.xs, &self.ws, &mut g);
        total + lower + upper
    }
}

fn push_panel(xs: &mut Vec<f64>, ws: &mut Vec<f64>, ua: f64, ub: f64) {
    for (u, w) in kronrod_nodes(ua, ub) {
        let x = u.exp();
        xs.push(x);
        ws.push(w * x);
    }
}

fn tail_sum<F: FnMut(usize, f64) -> f64>(
    panels: &[Range<usize>],
    xs: &[f64],
    ws: &[f64],
    g: &mut F,
) -> f64 {
    let mut total = 0.0;
    let mut prev: Option<f64> = None;
    let mut prev_ratio: Option<f64> = None;
    let mut negligible = 0;
    for panel in panels {
        let p: f64 = panel.clone().map(|i| ws[i] * g(i, xs[i])).sum::<f64>().abs();
        if !p.is_finite() {
            return f64::INFINITY;
        }
        total += p;
        if let Some(q) = prev {
            if p == 0.0 && q == 0.0 {
                return total;
            }
            if q > 0.0 && p > 0.0 {
                let rho = p / q;
                if let Some(r0) = prev_ratio {
                    if (rho - r0).abs() <= 1e-7 * rho.max(r0) {
                        if rho >= 1.0 - 1e-9 {
                            return f64::INFINITY;
                        }
                        return total + p * rho / (1.0 - rho);
                    }
                }
                prev_ratio = Some(rho);
            } else {
                prev_ratio = None;
            }
        }
        if p <= 1e-17 * total {
            negligible += 1;
            if negligible >= 2 {
                return total;
            }
        } else {
            negligible = 0;
        }
        prev = Some(p);
    }
    match (prev, prev_ratio) {
        (Some(p), Some(rho)) if p > 0.0 => {
            if rho >= 1.0 - 1e-6 {
                f64::INFINITY
            } else {
                total + p * rho / (1.0 - rho)
            }
        }
        _ => total,
    }
}
