//! Non-negative functions on `(0, ∞)` sampled on a logarithmic grid.
//!
//! Between samples a function is a local power law (log-log linear). A
//! segment with exactly one zero endpoint is interpolated linearly instead,
//! and a repeated abscissa encodes a jump: the first value is the left limit,
//! the second the right limit. Beyond the outermost samples the function
//! follows a power-law tail model. Every segment is therefore a sum of at most
//! two monomials, which makes integrals and cumulatives exact.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tail behaviour outside the sampled range: `value ∝ x^exponent` or identically zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Tail {
    Zero,
    Power(f64),
}

impl Tail {
    pub fn exponent(&self) -> Option<f64> {
        match self {
            Tail::Zero => None,
            Tail::Power(e) => Some(*e),
        }
    }
}

/// The monomial `value·(x/anchor)^exponent`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub value: f64,
    pub anchor: f64,
    pub exponent: f64,
}

impl Term {
    pub fn new(value: f64, anchor: f64, exponent: f64) -> Term {
        Term { value, anchor, exponent }
    }

    pub fn at(&self, x: f64) -> f64 {
        if self.exponent == 0.0 || self.value == 0.0 {
            self.value
        } else {
            self.value * (self.exponent * (x / self.anchor).ln()).exp()
        }
    }

    fn ln_abs_at(&self, x: f64) -> f64 {
        self.value.abs().ln() + self.exponent * (x / self.anchor).ln()
    }

    /// Pointwise product, re-anchored at `at` (a point inside the segment of use).
    pub fn times(&self, other: &Term, at: f64) -> Term {
        Term { value: self.at(at) * other.at(at), anchor: at, exponent: self.exponent + other.exponent }
    }

    /// Multiplies by `x^s`.
    pub fn times_power(&self, s: f64, at: f64) -> Term {
        Term { value: self.at(at) * at.powf(s), anchor: at, exponent: self.exponent + s }
    }

    /// The same monomial read through `t = x/y`, as a function of `y`.
    pub fn reflect(&self, x: f64) -> Term {
        Term { value: self.value, anchor: x / self.anchor, exponent: -self.exponent }
    }

    /// The same monomial read through `t = y/x`, as a function of `y`.
    pub fn dilate(&self, x: f64) -> Term {
        Term { value: self.value, anchor: x * self.anchor, exponent: self.exponent }
    }

    /// `∫_lo^hi term(t) dt` for `0 ≤ lo ≤ hi ≤ ∞`.
    pub fn integral(&self, lo: f64, hi: f64) -> f64 {
        if self.value == 0.0 || lo >= hi {
            return 0.0;
        }
        let sign = self.value.signum();
        let m = self.exponent + 1.0;
        if lo == 0.0 {
            if hi.is_infinite() || m <= 0.0 {
                return sign * f64::INFINITY;
            }
            return self.at(hi) * hi / m;
        }
        if hi.is_infinite() {
            if m >= 0.0 {
                return sign * f64::INFINITY;
            }
            return self.at(lo) * lo / -m;
        }
        let l = (hi / lo).ln();
        let ml = m * l;
        if ml > 40.0 {
            return sign * (self.ln_abs_at(lo) + lo.ln() + ml - m.ln()).exp() * -(-ml).exp_m1();
        }
        self.at(lo) * lo * e1(m, l)
    }

    /// `∫_lo^hi ln(hi/t)·term(t) dt` for `0 ≤ lo ≤ hi < ∞`.
    pub fn log_below(&self, lo: f64, hi: f64) -> f64 {
        if self.value == 0.0 || lo >= hi {
            return 0.0;
        }
        let m = self.exponent + 1.0;
        if lo == 0.0 {
            if m <= 0.0 {
                return self.value.signum() * f64::INFINITY;
            }
            return self.at(hi) * hi / (m * m);
        }
        let l = (hi / lo).ln();
        let ml = m * l;
        if ml > 40.0 {
            // dominated by e^{ml}/m²
            let lead = (self.ln_abs_at(lo) + lo.ln() + ml - 2.0 * m.ln()).exp();
            return self.value.signum() * lead * (1.0 - (1.0 + ml) * (-ml).exp());
        }
        self.at(lo) * lo * g2(m, l)
    }

    /// `∫_lo^hi ln(t/lo)·term(t) dt` for `0 < lo ≤ hi ≤ ∞`.
    pub fn log_above(&self, lo: f64, hi: f64) -> f64 {
        if self.value == 0.0 || lo >= hi {
            return 0.0;
        }
        let m = self.exponent + 1.0;
        if hi.is_infinite() {
            if m >= 0.0 {
                return self.value.signum() * f64::INFINITY;
            }
            return self.at(lo) * lo / (m * m);
        }
        let l = (hi / lo).ln();
        let ml = m * l;
        if ml > 40.0 {
            let lead = (self.ln_abs_at(lo) + lo.ln() + ml - 2.0 * m.ln()).exp();
            return self.value.signum() * lead * ((ml - 1.0) + (-ml).exp());
        }
        self.at(lo) * lo * g1(m, l)
    }
}

/// `∫_0^l e^{m w} dw`.
fn e1(m: f64, l: f64) -> f64 {
    let ml = m * l;
    if ml.abs() < 1e-8 {
        l * (1.0 + 0.5 * ml)
    } else {
        ml.exp_m1() / m
    }
}

/// `∫_0^l (l − w) e^{m w} dw`.
fn g2(m: f64, l: f64) -> f64 {
    let ml = m * l;
    if ml.abs() < 0.1 {
        // l² Σ (ml)^n / (n+2)!
        let mut term = 0.5;
        let mut sum = 0.0;
        for n in 0..12 {
            sum += term;
            term *= ml / (n as f64 + 3.0);
        }
        l * l * sum
    } else {
        (ml.exp_m1() - ml) / (m * m)
    }
}

/// `∫_0^l w e^{m w} dw`.
fn g1(m: f64, l: f64) -> f64 {
    let ml = m * l;
    if ml.abs() < 0.1 {
        // l² Σ (n+1)(ml)^n / (n+2)!
        let mut fact = 0.5;
        let mut pow = 1.0;
        let mut sum = 0.0;
        for n in 0..12 {
            sum += (n as f64 + 1.0) * pow * fact;
            pow *= ml;
            fact /= n as f64 + 3.0;
        }
        l * l * sum
    } else {
        (ml.exp() * (ml - 1.0) + 1.0) / (m * m)
    }
}

/// The closed form of a function on one segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Piece {
    Zero,
    Infinite,
    Terms { terms: [Term; 2], len: u8 },
}

impl Piece {
    pub fn one(t: Term) -> Piece {
        Piece::Terms { terms: [t, t], len: 1 }
    }

    pub fn two(a: Term, b: Term) -> Piece {
        Piece::Terms { terms: [a, b], len: 2 }
    }

    pub fn terms(&self) -> &[Term] {
        match self {
            Piece::Terms { terms, len } => &terms[..*len as usize],
            _ => &[],
        }
    }

    pub fn at(&self, x: f64) -> f64 {
        match self {
            Piece::Zero => 0.0,
            Piece::Infinite => f64::INFINITY,
            Piece::Terms { .. } => self.terms().iter().map(|t| t.at(x)).sum::<f64>().max(0.0),
        }
    }

    fn fold(&self, lo: f64, hi: f64, f: impl Fn(&Term) -> f64) -> f64 {
        if lo >= hi {
            return 0.0;
        }
        match self {
            Piece::Zero => 0.0,
            Piece::Infinite => f64::INFINITY,
            Piece::Terms { .. } => self.terms().iter().map(f).sum(),
        }
    }

    pub fn integral(&self, lo: f64, hi: f64) -> f64 {
        self.fold(lo, hi, |t| t.integral(lo, hi))
    }

    pub fn log_below(&self, lo: f64, hi: f64) -> f64 {
        self.fold(lo, hi, |t| t.log_below(lo, hi))
    }

    pub fn log_above(&self, lo: f64, hi: f64) -> f64 {
        self.fold(lo, hi, |t| t.log_above(lo, hi))
    }

    pub fn times_power(&self, s: f64, at: f64) -> Piece {
        match self {
            Piece::Terms { terms, len } => Piece::Terms {
                terms: [terms[0].times_power(s, at), terms[1].times_power(s, at)],
                len: *len,
            },
            other => *other,
        }
    }
}

/// A segment `(lo, hi)` of the half line with its closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub lo: f64,
    pub hi: f64,
    pub piece: Piece,
}

/// Something that can be evaluated pointwise and knows where it is not smooth.
pub trait Profile: Sync {
    fn value(&self, x: f64) -> f64;
    fn kinks(&self) -> Vec<f64>;
}

/// A closure with declared breakpoints.
pub struct Shaped<F> {
    pub f: F,
    pub kinks: Vec<f64>,
}

impl<F: Fn(f64) -> f64 + Sync> Shaped<F> {
    pub fn new(f: F, kinks: Vec<f64>) -> Self {
        Shaped { f, kinks }
    }
}

impl<F: Fn(f64) -> f64 + Sync> Profile for Shaped<F> {
    fn value(&self, x: f64) -> f64 {
        (self.f)(x)
    }
    fn kinks(&self) -> Vec<f64> {
        self.kinks.clone()
    }
}

/// A sampled non-negative function with power-law tails.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    xs: Vec<f64>,
    ys: Vec<f64>,
    left: Tail,
    right: Tail,
    segments: Vec<Segment>,
}

impl GridFunction {
    /// Builds a function from samples, fitting both tails from the two
    /// outermost distinct abscissae.
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        validate(&xs, &ys)?;
        let left = fit_left(&xs, &ys)?;
        let right = fit_right(&xs, &ys)?;
        Ok(Self::assemble(xs, ys, left, right))
    }

    /// Builds a function from samples with explicit tails.
    pub fn with_tails(xs: Vec<f64>, ys: Vec<f64>, left: Tail, right: Tail) -> Result<Self> {
        validate(&xs, &ys)?;
        for t in [left, right] {
            if let Tail::Power(e) = t {
                if !e.is_finite() {
                    return Err(Error::invalid("tail exponent must be finite"));
                }
            }
        }
        Ok(Self::assemble(xs, ys, left, right))
    }

    /// Samples `f` at `xs` and fits tails.
    pub fn sample(xs: &[f64], f: impl Fn(f64) -> f64) -> Result<Self> {
        let ys = xs.iter().map(|&x| f(x)).collect();
        Self::new(xs.to_vec(), ys)
    }

    /// `c·x^e` on the whole half line.
    pub fn power(scale: f64, exponent: f64) -> Self {
        Self::assemble(vec![1.0], vec![scale], Tail::Power(exponent), Tail::Power(exponent))
    }

    pub fn constant(c: f64) -> Self {
        Self::power(c, 0.0)
    }

    pub fn zero() -> Self {
        Self::assemble(vec![1.0], vec![0.0], Tail::Zero, Tail::Zero)
    }

    /// `c·χ_(a,b)` with `0 ≤ a < b ≤ ∞`.
    pub fn indicator(a: f64, b: f64, c: f64) -> Result<Self> {
        if !(a >= 0.0 && b > a) || c < 0.0 {
            return Err(Error::domain(format!("indicator needs 0 <= a < b and c >= 0, got ({a}, {b}, {c})")));
        }
        let f = match (a == 0.0, b.is_infinite()) {
            (true, true) => Self::constant(c),
            (true, false) => Self::assemble(vec![b, b], vec![c, 0.0], Tail::Power(0.0), Tail::Zero),
            (false, true) => Self::assemble(vec![a, a], vec![0.0, c], Tail::Zero, Tail::Power(0.0)),
            (false, false) => {
                Self::assemble(vec![a, a, b, b], vec![0.0, c, c, 0.0], Tail::Zero, Tail::Zero)
            }
        };
        Ok(f)
    }

    /// `x^{-β}·χ_(0,R)`.
    pub fn truncated_power(beta: f64, radius: f64) -> Self {
        Self::assemble(vec![radius, radius], vec![radius.powf(-beta), 0.0], Tail::Power(-beta), Tail::Zero)
    }

    fn assemble(xs: Vec<f64>, ys: Vec<f64>, left: Tail, right: Tail) -> Self {
        let segments = build_segments(&xs, &ys, left, right);
        GridFunction { xs, ys, left, right, segments }
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn left_tail(&self) -> Tail {
        self.left
    }

    pub fn right_tail(&self) -> Tail {
        self.right
    }

    /// Segments covering `(0, ∞)` in order, tails included.
    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// Distinct abscissae.
    pub fn nodes(&self) -> Vec<f64> {
        let mut n = self.xs.clone();
        n.dedup();
        n
    }

    fn segment_index(&self, x: f64) -> usize {
        // last segment whose lower end is ≤ x; right-continuous at jumps
        self.segments.partition_point(|s| s.lo <= x).saturating_sub(1)
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x.is_nan() || x < 0.0 {
            return f64::NAN;
        }
        let s = &self.segments[self.segment_index(x)];
        s.piece.at(x)
    }

    pub fn segment_at(&self, x: f64) -> &Segment {
        &self.segments[self.segment_index(x)]
    }

    /// `∫_a^b f` with `0 ≤ a < b ≤ ∞`, exact for the represented function.
    pub fn integrate(&self, a: f64, b: f64) -> Result<f64> {
        if !(a >= 0.0 && b > a) {
            return Err(Error::domain(format!("integration interval ({a}, {b}) is empty or invalid")));
        }
        let mut total = 0.0;
        for s in &self.segments {
            let lo = s.lo.max(a);
            let hi = s.hi.min(b);
            if lo < hi {
                total += s.piece.integral(lo, hi);
            }
        }
        Ok(total.max(0.0))
    }

    pub fn scaled(&self, c: f64) -> Self {
        let ys = self.ys.iter().map(|y| y * c).collect();
        Self::assemble(self.xs.clone(), ys, self.left, self.right)
    }

    /// Largest relative mismatch between each declared tail exponent and the
    /// exponent implied by the two outermost samples (`None` when either side
    /// cannot be fitted).
    pub fn tail_mismatch(&self) -> (Option<f64>, Option<f64>) {
        let l = match (self.left, fit_left(&self.xs, &self.ys)) {
            (Tail::Power(a), Ok(Tail::Power(b))) => Some((a - b).abs() / b.abs().max(1.0)),
            _ => None,
        };
        let r = match (self.right, fit_right(&self.xs, &self.ys)) {
            (Tail::Power(a), Ok(Tail::Power(b))) => Some((a - b).abs() / b.abs().max(1.0)),
            _ => None,
        };
        (l, r)
    }

    /// True when values never increase, tails included.
    pub fn is_non_increasing(&self) -> bool {
        let samples_ok = self.ys.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12));
        let left_ok = match self.left {
            Tail::Zero => self.ys.iter().all(|&y| y == 0.0),
            Tail::Power(e) => e <= 0.0 || self.ys[0] == 0.0,
        };
        let right_ok = match self.right {
            Tail::Zero => true,
            Tail::Power(e) => e <= 0.0 || self.ys[self.ys.len() - 1] == 0.0,
        };
        samples_ok && left_ok && right_ok
    }

    /// Smallest and largest abscissa.
    pub fn span(&self) -> (f64, f64) {
        (self.xs[0], self.xs[self.xs.len() - 1])
    }
}

impl Profile for GridFunction {
    fn value(&self, x: f64) -> f64 {
        self.eval(x)
    }
    fn kinks(&self) -> Vec<f64> {
        self.nodes()
    }
}

fn validate(xs: &[f64], ys: &[f64]) -> Result<()> {
    if xs.is_empty() || xs.len() != ys.len() {
        return Err(Error::invalid("abscissae and values must be non-empty and of equal length"));
    }
    if xs.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
        return Err(Error::invalid("abscissae must be finite and positive"));
    }
    for (i, w) in xs.windows(2).enumerate() {
        if w[1] < w[0] {
            return Err(Error::invalid(format!("abscissae must be non-decreasing (index {})", i + 1)));
        }
        if i + 2 < xs.len() && w[1] == w[0] && xs[i + 2] == w[1] {
            return Err(Error::invalid("an abscissa may repeat at most once"));
        }
    }
    if ys.iter().any(|&y| y.is_nan() || y < 0.0) {
        return Err(Error::invalid("values must be non-negative"));
    }
    Ok(())
}

fn fit_exponent(x0: f64, y0: f64, x1: f64, y1: f64) -> Tail {
    if y0 == 0.0 && y1 == 0.0 {
        Tail::Zero
    } else if y0 > 0.0 && y1 > 0.0 && y0.is_finite() && y1.is_finite() {
        Tail::Power((y1 / y0).ln() / (x1 / x0).ln())
    } else {
        Tail::Power(0.0)
    }
}

fn fit_left(xs: &[f64], ys: &[f64]) -> Result<Tail> {
    if ys[0] == 0.0 {
        return Ok(Tail::Zero);
    }
    let j = xs.iter().position(|&x| x > xs[0]).ok_or_else(|| {
        Error::invalid("tails cannot be fitted from a single abscissa; give them explicitly")
    })?;
    // the left limit at the second abscissa
    Ok(fit_exponent(xs[0], ys[0], xs[j], ys[j]))
}

fn fit_right(xs: &[f64], ys: &[f64]) -> Result<Tail> {
    let n = xs.len() - 1;
    if ys[n] == 0.0 {
        return Ok(Tail::Zero);
    }
    let j = xs.iter().rposition(|&x| x < xs[n]).ok_or_else(|| {
        Error::invalid("tails cannot be fitted from a single abscissa; give them explicitly")
    })?;
    Ok(fit_exponent(xs[j], ys[j], xs[n], ys[n]))
}

fn tail_piece(y: f64, anchor: f64, tail: Tail) -> Piece {
    match tail {
        Tail::Zero => Piece::Zero,
        Tail::Power(_) if y == 0.0 => Piece::Zero,
        Tail::Power(_) if y.is_infinite() => Piece::Infinite,
        Tail::Power(e) => Piece::one(Term::new(y, anchor, e)),
    }
}

fn interior_piece(x0: f64, y0: f64, x1: f64, y1: f64) -> Piece {
    if y0 == 0.0 && y1 == 0.0 {
        Piece::Zero
    } else if y0.is_infinite() || y1.is_infinite() {
        Piece::Infinite
    } else if y0 > 0.0 && y1 > 0.0 {
        Piece::one(Term::new(y0, x0, (y1 / y0).ln() / (x1 / x0).ln()))
    } else {
        let slope = (y1 - y0) / (x1 - x0);
        Piece::two(Term::new(y0 - slope * x0, x0, 0.0), Term::new(slope * x0, x0, 1.0))
    }
}

fn build_segments(xs: &[f64], ys: &[f64], left: Tail, right: Tail) -> Vec<Segment> {
    let n = xs.len();
    let mut segs = Vec::with_capacity(n + 1);
    segs.push(Segment { lo: 0.0, hi: xs[0], piece: tail_piece(ys[0], xs[0], left) });
    for i in 0..n - 1 {
        if xs[i + 1] > xs[i] {
            segs.push(Segment {
                lo: xs[i],
                hi: xs[i + 1],
                piece: interior_piece(xs[i], ys[i], xs[i + 1], ys[i + 1]),
            });
        }
    }
    segs.push(Segment { lo: xs[n - 1], hi: f64::INFINITY, piece: tail_piece(ys[n - 1], xs[n - 1], right) });
    segs
}

/// `n` log-spaced points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| {
            if i == n - 1 {
                hi
            } else {
                (a + (b - a) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}

/// Default grid: 512 log-spaced points on `[1e-6, 1e6]`.
pub fn default_grid() -> Vec<f64> {
    log_grid(1e-6, 1e6, 512)
}

/// Sorted union of `grid` and `extra`, dropping near-duplicates.
pub fn merge_points(grid: &[f64], extra: &[f64]) -> Vec<f64> {
    let mut all: Vec<f64> = grid.iter().chain(extra).copied().filter(|x| *x > 0.0 && x.is_finite()).collect();
    all.sort_by(|a, b| a.total_cmp(b));
    all.dedup_by(|a, b| (*a - *b).abs() <= 1e-13 * b.abs());
    all
}
