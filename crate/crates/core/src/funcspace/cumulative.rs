//! Exact cumulative integrals of grid functions.
//!
//! For a grid function `f` and a power `s`, [`Moments`] tabulates at every
//! node `x_j`
//!
//! * `∫_0^{x_j} t^s f(t) dt` and `∫_{x_j}^∞ t^s f(t) dt`,
//! * `∫_0^{x_j} ln(x_j/t) t^s f(t) dt` and `∫_{x_j}^∞ ln(t/x_j) t^s f(t) dt`,
//!
//! and evaluates all four at arbitrary points by adding one partial segment.
//! The log moments use two-term recurrences in which every summand is
//! non-negative, so no cancellation occurs.

use super::grid::{GridFunction, Piece, Segment, Tail};
use crate::error::{Error, Result};

/// `a·b` with the convention `0·∞ = 0`.
pub(crate) fn mul0(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        0.0
    } else {
        a * b
    }
}

/// Prefix and suffix moments of `t^s f(t)`.
#[derive(Debug, Clone)]
pub struct Moments {
    nodes: Vec<f64>,
    segs: Vec<Segment>,
    below: Vec<f64>,
    above: Vec<f64>,
    log_below: Vec<f64>,
    log_above: Vec<f64>,
}

impl Moments {
    pub fn new(f: &GridFunction, s: f64) -> Moments {
        let segs: Vec<Segment> = f
            .segments()
            .iter()
            .map(|seg| {
                let at = if seg.lo > 0.0 { seg.lo } else { seg.hi };
                Segment { lo: seg.lo, hi: seg.hi, piece: seg.piece.times_power(s, at) }
            })
            .collect();
        // segs[0] = (0, x_0), segs[k] = (x_{k-1}, x_k), segs[n+1] = (x_n, ∞)
        let nodes: Vec<f64> = segs[1..].iter().map(|s| s.lo).collect();
        let n = nodes.len();

        let mut below = vec![0.0; n];
        let mut log_below = vec![0.0; n];
        below[0] = segs[0].piece.integral(0.0, nodes[0]);
        log_below[0] = segs[0].piece.log_below(0.0, nodes[0]);
        for j in 1..n {
            let seg = &segs[j];
            below[j] = below[j - 1] + seg.piece.integral(seg.lo, seg.hi);
            log_below[j] = log_below[j - 1]
                + mul0((seg.hi / seg.lo).ln(), below[j - 1])
                + seg.piece.log_below(seg.lo, seg.hi);
        }

        let mut above = vec![0.0; n];
        let mut log_above = vec![0.0; n];
        let last = &segs[n];
        above[n - 1] = last.piece.integral(last.lo, f64::INFINITY);
        log_above[n - 1] = last.piece.log_above(last.lo, f64::INFINITY);
        for j in (0..n - 1).rev() {
            let seg = &segs[j + 1];
            above[j] = above[j + 1] + seg.piece.integral(seg.lo, seg.hi);
            log_above[j] = seg.piece.log_above(seg.lo, seg.hi)
                + log_above[j + 1]
                + mul0((seg.hi / seg.lo).ln(), above[j + 1]);
        }
        Moments { nodes, segs, below, above, log_below, log_above }
    }

    /// Distinct abscissae of the underlying function.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    fn locate(&self, x: f64) -> usize {
        self.segs.partition_point(|s| s.lo <= x).saturating_sub(1)
    }

    fn piece(&self, k: usize) -> (&Piece, f64, f64) {
        let s = &self.segs[k];
        (&s.piece, s.lo, s.hi)
    }

    /// `∫_0^x t^s f(t) dt`.
    pub fn below(&self, x: f64) -> f64 {
        let k = self.locate(x);
        let (p, lo, _) = self.piece(k);
        let base = if k == 0 { 0.0 } else { self.below[k - 1] };
        base + p.integral(lo, x)
    }

    /// `∫_x^∞ t^s f(t) dt`.
    pub fn above(&self, x: f64) -> f64 {
        let k = self.locate(x);
        let (p, _, hi) = self.piece(k);
        let rest = if k < self.nodes.len() { self.above[k] } else { 0.0 };
        p.integral(x, hi) + rest
    }

    /// `∫_0^x ln(x/t) t^s f(t) dt`.
    pub fn log_below(&self, x: f64) -> f64 {
        let k = self.locate(x);
        let (p, lo, _) = self.piece(k);
        if k == 0 {
            return p.log_below(0.0, x);
        }
        self.log_below[k - 1] + mul0((x / lo).ln(), self.below[k - 1]) + p.log_below(lo, x)
    }

    /// `∫_x^∞ ln(t/x) t^s f(t) dt`.
    pub fn log_above(&self, x: f64) -> f64 {
        let k = self.locate(x);
        let (p, _, hi) = self.piece(k);
        if k == self.nodes.len() {
            return p.log_above(x, f64::INFINITY);
        }
        p.log_above(x, hi) + self.log_above[k] + mul0((hi / x).ln(), self.above[k])
    }

    /// `∫_0^∞ t^s f(t) dt`.
    pub fn total(&self) -> f64 {
        self.below[0] + self.above[0]
    }

    /// Whether the left tail is integrable.
    pub fn left_integrable(&self) -> bool {
        self.below[0].is_finite()
    }

    /// Whether the right tail is integrable.
    pub fn right_integrable(&self) -> bool {
        self.above[self.above.len() - 1].is_finite()
    }
}

/// Samples a function at `xs` and fits tails; non-finite values are kept as `+∞`.
pub(crate) fn resample(xs: &[f64], f: impl Fn(f64) -> f64) -> Result<GridFunction> {
    let ys: Vec<f64> = xs.iter().map(|&x| {
        let y = f(x);
        if y.is_nan() { f64::INFINITY } else { y.max(0.0) }
    }).collect();
    if xs.len() == 1 {
        return GridFunction::with_tails(xs.to_vec(), ys, Tail::Power(0.0), Tail::Power(0.0));
    }
    GridFunction::new(xs.to_vec(), ys)
}

/// `x ↦ ∫_0^x g` on the distinct abscissae of `g`.
pub fn cumulative_i(g: &GridFunction) -> Result<GridFunction> {
    let m = Moments::new(g, 0.0);
    if !m.left_integrable() {
        return Err(Error::domain("left tail is not integrable: Ig is infinite"));
    }
    resample(m.nodes(), |x| m.below(x))
}

/// `x ↦ ∫_x^∞ g` on the distinct abscissae of `g`; divergent tails yield `+∞` values.
pub fn cumulative_istar(g: &GridFunction) -> Result<GridFunction> {
    let m = Moments::new(g, 0.0);
    resample(m.nodes(), |x| m.above(x))
}
