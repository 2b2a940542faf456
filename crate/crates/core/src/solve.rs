//! Bracketing search for thresholds of monotone functionals.
//!
//! Every constant search in the crate has the same shape: find the smallest
//! positive `x` for which a monotone predicate becomes true. Callers supply an
//! `excess(x)` that is non-increasing in `x` and non-positive exactly where the
//! predicate holds (typically `ln(lhs/rhs)`). The search runs Brent's method in
//! `ln x` on a bracket grown geometrically from a starting guess.

/// Outcome of a threshold search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Threshold {
    /// The predicate fails at `lo` and holds at `hi`, with `hi/lo ≤ 1 + rel_width`.
    Bracketed { lo: f64, hi: f64 },
    /// The predicate already holds at the floor.
    BelowFloor(f64),
    /// The predicate still fails at the cap.
    AboveCap(f64),
}

impl Threshold {
    /// Smallest value known to satisfy the predicate; `+∞` when capped, the
    /// floor when the predicate holds everywhere searched.
    pub fn value(&self) -> f64 {
        match *self {
            Threshold::Bracketed { hi, .. } => hi,
            Threshold::BelowFloor(f) => f,
            Threshold::AboveCap(_) => f64::INFINITY,
        }
    }

    pub fn is_capped(&self) -> bool {
        matches!(self, Threshold::AboveCap(_))
    }
}

/// Search parameters.
#[derive(Debug, Clone, Copy)]
pub struct Search {
    pub start: f64,
    pub floor: f64,
    pub cap: f64,
    pub rel_width: f64,
}

impl Default for Search {
    fn default() -> Self {
        Search { start: 1.0, floor: 1e-12, cap: 1e12, rel_width: 1e-8 }
    }
}

fn sanitize(e: f64) -> f64 {
    if e.is_nan() {
        1e6
    } else {
        e.clamp(-1e6, 1e6)
    }
}

/// Finds `inf {x > 0 : excess(x) ≤ 0}` for a non-increasing `excess`.
pub fn threshold<F: FnMut(f64) -> f64>(mut excess: F, search: Search) -> Threshold {
    let Search { start, floor, cap, rel_width } = search;
    let start = start.clamp(floor, cap);
    let e0 = sanitize(excess(start));

    // (x_fail, e_fail) has excess > 0, (x_ok, e_ok) has excess ≤ 0
    let (mut xf, mut ef, mut xo, mut eo);
    if e0 <= 0.0 {
        xo = start;
        eo = e0;
        loop {
            if xo <= floor {
                return Threshold::BelowFloor(floor);
            }
            let x = (xo / 10.0).max(floor);
            let e = sanitize(excess(x));
            if e > 0.0 {
                xf = x;
                ef = e;
                break;
            }
            xo = x;
            eo = e;
        }
    } else {
        xf = start;
        ef = e0;
        loop {
            if xf >= cap {
                return Threshold::AboveCap(cap);
            }
            let x = (xf * 10.0).min(cap);
            let e = sanitize(excess(x));
            if e <= 0.0 {
                xo = x;
                eo = e;
                break;
            }
            xf = x;
            ef = e;
        }
    }
    let tol = (1.0 + rel_width).ln();
    let (lo, hi) = brent_bracket(&mut excess, xf.ln(), ef, xo.ln(), eo, tol);
    Threshold::Bracketed { lo: lo.exp(), hi: hi.exp() }
}

/// Brent's method on `u ↦ excess(e^u)`, shrinking the bracket `[uf, uo]`
/// (excess > 0 at `uf`, ≤ 0 at `uo`) until it is narrower than `tol`.
fn brent_bracket<F: FnMut(f64) -> f64>(
    excess: &mut F,
    uf: f64,
    ef: f64,
    uo: f64,
    eo: f64,
    tol: f64,
) -> (f64, f64) {
    // b is the current best estimate, c the contrapoint, a the previous b
    let (mut a, mut fa) = (uf, ef);
    let (mut b, mut fb) = (uo, eo);
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..200 {
        if (fb > 0.0) == (fc > 0.0) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let width = (c - b).abs();
        if width <= tol {
            break;
        }
        let tol1 = 0.25 * tol;
        let xm = 0.5 * (c - b);
        if fb == 0.0 {
            // pinch toward the failing side to certify the bracket width
            let step = if c > b { tol1.min(xm) } else { (-tol1).max(xm) };
            a = b;
            fa = fb;
            b += step;
            fb = sanitize(excess(b.exp()));
            continue;
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * xm * q - (tol1 * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = sanitize(excess(b.exp()));
    }
    // b and c straddle the sign change; return (failing, holding)
    if fb <= 0.0 {
        (c, b)
    } else {
        (b, c)
    }
}
