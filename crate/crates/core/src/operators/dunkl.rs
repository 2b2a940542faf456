//! The Dunkl-Hausdorff operator
//! `(H_{α,φ}f)(x) = ∫₀^∞ φ(t) t^{−2α−2} f(x/t) dt = x^{−2α−1} ∫₀^∞ φ(x/y) y^{2α} f(y) dy`
//! and its adjoint `(H*_{α,φ}g)(x) = x^{2α} ∫₀^∞ φ(y/x) y^{−2α−1} g(y) dy`.
//!
//! For grid functions both integrands are products of piecewise monomials in
//! `y`, so they are integrated exactly between the merged breakpoints.

use super::multiplier::MultiplierFunction;
use crate::funcspace::cumulative::mul0;
use crate::funcspace::{GridFunction, Piece, Profile, Term};
use crate::quad::LogPlan;

#[derive(Debug, Clone, Copy)]
enum Reading {
    /// `φ(x/y)`
    Reflect,
    /// `φ(y/x)`
    Dilate,
}

impl Reading {
    fn breakpoint(self, x: f64, t: f64) -> f64 {
        match self {
            Reading::Reflect => x / t,
            Reading::Dilate => x * t,
        }
    }

    fn argument(self, x: f64, y: f64) -> f64 {
        match self {
            Reading::Reflect => x / y,
            Reading::Dilate => y / x,
        }
    }

    fn term(self, t: &Term, x: f64) -> Term {
        match self {
            Reading::Reflect => t.reflect(x),
            Reading::Dilate => t.dilate(x),
        }
    }
}

fn interior(lo: f64, hi: f64) -> f64 {
    if lo == 0.0 {
        0.5 * hi
    } else if hi.is_infinite() {
        2.0 * lo
    } else {
        (lo * hi).sqrt()
    }
}

/// `∫_lo^hi f(y) φ(τ(y)) y^s dy` for one pair of closed-form pieces.
fn piece_product(f: &Piece, phi: &Piece, reading: Reading, x: f64, s: f64, lo: f64, hi: f64) -> f64 {
    match (f, phi) {
        (Piece::Zero, _) | (_, Piece::Zero) => 0.0,
        (Piece::Infinite, _) | (_, Piece::Infinite) => f64::INFINITY,
        _ => {
            let at = interior(lo, hi);
            let mut total = 0.0;
            for a in f.terms() {
                for b in phi.terms() {
                    let b = reading.term(b, x);
                    total += a.times(&b, at).times_power(s, at).integral(lo, hi);
                }
            }
            total
        }
    }
}

/// `∫₀^∞ f(y) φ(τ(y)) y^s dy`, exact for grid functions.
fn product_integral(f: &GridFunction, phi: &GridFunction, x: f64, reading: Reading, s: f64) -> f64 {
    let mut cuts: Vec<f64> = f.nodes();
    cuts.extend(phi.nodes().into_iter().map(|t| reading.breakpoint(x, t)));
    cuts.retain(|c| *c > 0.0 && c.is_finite());
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut bounds = Vec::with_capacity(cuts.len() + 2);
    bounds.push(0.0);
    bounds.extend(cuts);
    bounds.push(f64::INFINITY);

    let mut total = 0.0;
    for w in bounds.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if hi <= lo {
            continue;
        }
        let y = interior(lo, hi);
        let fp = f.segment_at(y).piece;
        let pp = phi.segment_at(reading.argument(x, y)).piece;
        total += piece_product(&fp, &pp, reading, x, s, lo, hi);
    }
    if total.is_nan() {
        f64::INFINITY
    } else {
        total.max(0.0)
    }
}

/// `(H_{α,φ}f)(x)`.
pub fn dunkl_hausdorff_point(mf: &MultiplierFunction, f: &GridFunction, x: f64) -> f64 {
    let a2 = 2.0 * mf.alpha;
    mul0(x.powf(-a2 - 1.0), product_integral(f, &mf.phi, x, Reading::Reflect, a2))
}

/// `(H*_{α,φ}g)(x)`.
pub fn dunkl_hausdorff_adjoint_point(mf: &MultiplierFunction, g: &GridFunction, x: f64) -> f64 {
    let a2 = 2.0 * mf.alpha;
    mul0(x.powf(a2), product_integral(g, &mf.phi, x, Reading::Dilate, -a2 - 1.0))
}

/// Plan for `∫_lo^hi φ(x/y) y^{2α} f(y) dy` with the breakpoints of both factors.
fn reflected_plan(mf: &MultiplierFunction, f: &impl Profile, x: f64, lo: f64, hi: f64) -> LogPlan {
    let mut kinks = f.kinks();
    kinks.extend(mf.phi.nodes().into_iter().map(|t| x / t));
    LogPlan::new(lo, hi, &kinks)
}

/// `x^{−2α−1} ∫_lo^hi φ(x/y) y^{2α} f(y) dy` by quadrature, for profiles
/// without a closed form (such as `I*h`).
pub fn dunkl_hausdorff_partial(mf: &MultiplierFunction, f: &impl Profile, x: f64, lo: f64, hi: f64) -> f64 {
    let a2 = 2.0 * mf.alpha;
    let plan = reflected_plan(mf, f, x, lo, hi);
    let integral = plan.integrate(|y| {
        let weight = mf.phi.eval(x / y) * y.powf(a2);
        mul0(weight, f.value(y))
    });
    mul0(x.powf(-a2 - 1.0), integral)
}

/// `(H_{α,φ}f)(x)` by quadrature.
pub fn dunkl_hausdorff_at(mf: &MultiplierFunction, f: &impl Profile, x: f64) -> f64 {
    dunkl_hausdorff_partial(mf, f, x, 0.0, f64::INFINITY)
}
