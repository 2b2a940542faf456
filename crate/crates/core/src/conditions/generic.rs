//! Both displays of the characterizations for a generalized Hardy operator
//! `Kf(x) = ∫_0^x k(x,t) f(t) dt` and its adjoint, for any registry kernel
//! and weights `a, b, v, w`.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::{Assembled, ConditionContext, Roles};
use crate::error::{Error, Result};
use crate::funcspace::Weight;
use crate::nfunctions::NFunction;
use crate::operators::Kernel;
use crate::orlicz::Integrand;
use crate::quad::LogPlan;

/// A pointwise weight given by a closure, with the points where it may kink.
#[derive(Clone)]
pub struct WeightFn {
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    kinks: Vec<f64>,
}

impl fmt::Debug for WeightFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WeightFn").field("kinks", &self.kinks).finish_non_exhaustive()
    }
}

impl WeightFn {
    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'static, kinks: Vec<f64>) -> Self {
        WeightFn { f: Arc::new(f), kinks }
    }

    pub fn at(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    pub fn kinks(&self) -> &[f64] {
        &self.kinks
    }
}

/// Family C (the operator `K`) or family D (its adjoint `K*`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Family {
    C,
    D,
}

/// Kernel and weights of a generic condition. `v` weights the inner norm and
/// the right-hand modular, `w` the outer integral.
#[derive(Debug, Clone)]
pub struct Generic {
    pub kernel: Kernel,
    pub a: WeightFn,
    pub b: WeightFn,
    pub v: Weight,
    pub w: Weight,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GenericValues {
    pub lhs1: f64,
    pub lhs2: f64,
    pub rhs: f64,
}

impl Generic {
    /// `a = w₁/x` (or `w₁`), `b = Iv/v`, inner weight `v`, outer weight `w₀`.
    pub fn modular_substitution(ctx: &ConditionContext, kernel: Kernel, a_over_x: bool) -> Generic {
        let w1 = ctx.w1.clone();
        let a_kinks = w1.nodes();
        let a = if a_over_x {
            WeightFn::new(move |x| w1.eval(x) / x, a_kinks)
        } else {
            WeightFn::new(move |x| w1.eval(x), a_kinks)
        };
        let v = ctx.v.clone();
        let b = WeightFn::new(move |t| v.iv(t) / v.at(t), ctx.v.kinks());
        Generic { kernel, a, b, v: ctx.v.clone(), w: ctx.w0.clone() }
    }

    /// `a = x/Iv` (or `1/Iv`), `b = t/w₀` (or `1/w₀`), inner weight `w₀`,
    /// outer weight `v`.
    pub fn dual_substitution(ctx: &ConditionContext, kernel: Kernel, a_times_x: bool, b_times_t: bool) -> Generic {
        let v = ctx.v.clone();
        let a = WeightFn::new(move |x| if a_times_x { x } else { 1.0 } / v.iv(x), ctx.v.kinks());
        let w0 = ctx.w0.clone();
        let b = WeightFn::new(move |t| if b_times_t { t } else { 1.0 } / w0.at(t), ctx.w0.kinks());
        Generic { kernel, a, b, v: ctx.w0.clone(), w: ctx.v.clone() }
    }

    fn kinks(&self, r: f64) -> Vec<f64> {
        let mut k = self.a.kinks().to_vec();
        k.extend_from_slice(self.b.kinks());
        k.extend(self.v.kinks());
        k.extend(self.w.kinks());
        k.push(r);
        k
    }

    /// `‖g/(ε v b)‖_{nf(εv)}` with `g` supported on `(lo, hi)`.
    fn norm(&self, nf: &NFunction, eps: f64, lo: f64, hi: f64, kinks: &[f64], g: impl Fn(f64) -> f64) -> f64 {
        let h = |t: f64| {
            let vt = self.v.at(t);
            if vt == 0.0 {
                0.0
            } else {
                g(t) / (eps * vt * self.b.at(t))
            }
        };
        Integrand::from_fn(LogPlan::new(lo, hi, kinks), h, &self.v).with_weight_scale(eps).luxemburg(nf)
    }
}

pub(crate) fn assemble<'a>(
    g: &Generic,
    family: Family,
    second: bool,
    roles: Roles<'a>,
    r: f64,
    eps: f64,
) -> Result<Assembled<'a>> {
    if !Kernel::REGISTRY.contains(&g.kernel) {
        return Err(Error::Config(format!("kernel {} is not in the registry", g.kernel)));
    }
    let ks = g.kinks(r);
    let k = |x: f64, t: f64| g.kernel.k(x, t);
    let inf = f64::INFINITY;
    let rhs = roles.rhs.inv(1.0 / eps);
    let (lo, hi, f): (f64, f64, Box<dyn Fn(f64) -> f64>) = match (family, second) {
        (Family::C, false) => {
            let n = g.norm(roles.norm, eps, 0.0, r, &ks, |t| k(r, t));
            (r, inf, Box::new(move |x| g.a.at(x) * n))
        }
        (Family::C, true) => {
            let n = g.norm(roles.norm, eps, 0.0, r, &ks, |_| 1.0);
            (r, inf, Box::new(move |x| g.a.at(x) * n * k(x, r)))
        }
        (Family::D, false) => {
            let n = g.norm(roles.norm, eps, r, inf, &ks, |t| k(t, r));
            (0.0, r, Box::new(move |x| g.a.at(x) * n))
        }
        (Family::D, true) => {
            let n = g.norm(roles.norm, eps, r, inf, &ks, |_| 1.0);
            (0.0, r, Box::new(move |x| g.a.at(x) * n * k(r, x)))
        }
    };
    let integrand = Integrand::from_fn(LogPlan::new(lo, hi, &ks), f, &g.w);
    Ok(Assembled::Integral { integrand, outer: roles.outer, rhs })
}

/// Both displays of `family` with constant `c` at `(r, ε)`.
pub fn eval_generic(g: &Generic, family: Family, roles: Roles<'_>, c: f64, r: f64, eps: f64) -> Result<GenericValues> {
    super::check_point(c, r, eps)?;
    let first = assemble(g, family, false, roles, r, eps)?.at(c);
    let second = assemble(g, family, true, roles, r, eps)?.at(c);
    Ok(GenericValues { lhs1: first.lhs, lhs2: second.lhs, rhs: first.rhs })
}

pub fn eval_theorem_c(g: &Generic, roles: Roles<'_>, c: f64, r: f64, eps: f64) -> Result<GenericValues> {
    eval_generic(g, Family::C, roles, c, r, eps)
}

pub fn eval_theorem_d(g: &Generic, roles: Roles<'_>, c: f64, r: f64, eps: f64) -> Result<GenericValues> {
    eval_generic(g, Family::D, roles, c, r, eps)
}
