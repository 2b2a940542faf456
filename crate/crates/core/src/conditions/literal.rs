//! The conditions written out one by one, each with its own norm argument
//! and outer integrand.

use super::{Assembled, ConditionContext, ConditionId, ConditionPoint};
use crate::error::Result;
use crate::funcspace::{GridFunction, Weight};
use crate::nfunctions::NFunction;
use crate::orlicz::Integrand;
use crate::quad::LogPlan;

fn kinks(ctx: &ConditionContext, r: f64) -> Vec<f64> {
    let mut k = ctx.v.kinks();
    k.extend(ctx.w0.kinks());
    k.extend(ctx.w1.nodes());
    k.push(r);
    k
}

/// `‖h‖_{nf(ε·u)}` with `h` supported on `(lo, hi)`.
fn norm_on(nf: &NFunction, u: &Weight, eps: f64, lo: f64, hi: f64, kinks: &[f64], h: impl Fn(f64) -> f64) -> f64 {
    Integrand::from_fn(LogPlan::new(lo, hi, kinks), h, u).with_weight_scale(eps).luxemburg(nf)
}

fn outer_on<'a>(
    outer: &'a NFunction,
    w: &Weight,
    lo: f64,
    hi: f64,
    kinks: &[f64],
    rhs: f64,
    f: impl Fn(f64) -> f64,
) -> Assembled<'a> {
    let integrand = Integrand::from_fn(LogPlan::new(lo, hi, kinks), f, w);
    Assembled::Integral { integrand, outer, rhs }
}

pub(crate) fn assemble<'a>(ctx: &'a ConditionContext, id: ConditionId, r: f64, eps: f64) -> Result<Assembled<'a>> {
    use ConditionId::*;
    let ks = kinks(ctx, r);
    let inf = f64::INFINITY;
    let (v, w0) = (&ctx.v, &ctx.w0);
    let (phi, phi_c) = (&ctx.phi.primal, &ctx.phi.conjugate);
    let (psi, psi_c) = (&ctx.psi.primal, &ctx.psi.conjugate);
    let unit = GridFunction::constant(1.0);
    let w1 = if matches!(id, LF2 | LGii) { &unit } else { &ctx.w1 };
    let iv = |t: f64| v.iv(t);

    let assembled = match id {
        T21C1 | LF2 => {
            let n = norm_on(phi_c, v, eps, 0.0, r, &ks, |t| t / (eps * iv(t)));
            outer_on(psi, w0, r, inf, &ks, phi.inv(1.0 / eps), |x| w1.eval(x) / x * n)
        }
        T21C2 | LGii => {
            let n = norm_on(phi_c, v, eps, r, inf, &ks, |t| 1.0 / (eps * iv(t)));
            outer_on(psi, w0, 0.0, r, &ks, phi.inv(1.0 / eps), |x| w1.eval(x) * n)
        }
        T21C3 => {
            let n = norm_on(phi_c, v, eps, r, inf, &ks, |t| (t / r).ln() / (eps * iv(t)));
            outer_on(psi, w0, 0.0, r, &ks, phi.inv(1.0 / eps), |x| w1.eval(x) * n)
        }
        T21C4 => {
            let n = norm_on(phi_c, v, eps, r, inf, &ks, |t| 1.0 / (eps * iv(t)));
            outer_on(psi, w0, 0.0, r, &ks, phi.inv(1.0 / eps), |x| w1.eval(x) * n * (r / x).ln())
        }
        T31C1 => {
            let n = norm_on(psi, w0, eps, 0.0, r, &ks, |_| 1.0 / eps);
            outer_on(phi_c, v, r, inf, &ks, psi_c.inv(1.0 / eps), |x| n / iv(x))
        }
        T31C2 => {
            let n = norm_on(psi, w0, eps, r, inf, &ks, |t| 1.0 / (eps * t));
            outer_on(phi_c, v, 0.0, r, &ks, psi_c.inv(1.0 / eps), |x| x * n / iv(x))
        }
        T31C3 => {
            let n = norm_on(psi, w0, eps, 0.0, r, &ks, |t| (r / t).ln() / eps);
            outer_on(phi_c, v, r, inf, &ks, psi_c.inv(1.0 / eps), |x| n / iv(x))
        }
        T31C4 => {
            let n = norm_on(psi, w0, eps, 0.0, r, &ks, |_| 1.0 / eps);
            outer_on(phi_c, v, r, inf, &ks, psi_c.inv(1.0 / eps), |x| n * (x / r).ln() / iv(x))
        }
        LF1 | LGiii => Assembled::Level { lhs: psi.inv(psi.eval(eps) * w0.iv(r)), rhs_nf: phi, eps, scale: v.iv(r) },
        TC1 | TC2 | TD1 | TD2 => unreachable!("generic ids are assembled by the generic path"),
    };
    Ok(assembled)
}

/// Evaluates a written-out condition with constant `c`; the generic ids are rejected.
pub fn eval_literal(ctx: &ConditionContext, id: ConditionId, c: f64, r: f64, eps: f64) -> Result<ConditionPoint> {
    if matches!(id, ConditionId::TC1 | ConditionId::TC2 | ConditionId::TD1 | ConditionId::TD2) {
        return Err(crate::Error::Config(format!("{id} has no written-out form")));
    }
    ctx.check(id)?;
    Ok(assemble(ctx, id, r, eps)?.at(c))
}
