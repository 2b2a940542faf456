//! Weight conditions of the modular and norm characterizations, evaluated
//! pointwise in `(r, ε)`, and the search for their minimal constants.
//!
//! Every condition with an operator kernel has the shape
//! `F⁻¹[∫ F(a(x)/A · N(r, ε) · m(x)) w(x) dx] ≤ G⁻¹(1/ε)` where `N` is a
//! Luxemburg norm taken in the dummy variable against the weight `ε·u`. The
//! roles of `F`, the norm function and `G` are collected in [`Roles`].

mod generic;
mod literal;
mod report;

pub use generic::{eval_generic, eval_theorem_c, eval_theorem_d, Family, Generic, GenericValues, WeightFn};
pub use literal::eval_literal;
pub use report::{
    minimal_constant, point_threshold, shared_constants, ConditionGrid, ConditionReport, ConditionRow, SharedConstant,
    Trend, CONSTANT_CAP, CONSTANT_REL_WIDTH,
};

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::funcspace::{GridFunction, Weight};
use crate::nfunctions::{ComplementaryPair, NFunction};
use crate::orlicz::Integrand;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConditionId {
    T21C1,
    T21C2,
    T21C3,
    T21C4,
    T31C1,
    T31C2,
    T31C3,
    T31C4,
    /// First display of the generic kernel characterization.
    TC1,
    TC2,
    /// First display of the generic adjoint characterization.
    TD1,
    TD2,
    LF1,
    LF2,
    LGii,
    LGiii,
}

impl ConditionId {
    pub const ALL: [ConditionId; 16] = [
        ConditionId::T21C1,
        ConditionId::T21C2,
        ConditionId::T21C3,
        ConditionId::T21C4,
        ConditionId::T31C1,
        ConditionId::T31C2,
        ConditionId::T31C3,
        ConditionId::T31C4,
        ConditionId::TC1,
        ConditionId::TC2,
        ConditionId::TD1,
        ConditionId::TD2,
        ConditionId::LF1,
        ConditionId::LF2,
        ConditionId::LGii,
        ConditionId::LGiii,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ConditionId::T21C1 => "T21-c1",
            ConditionId::T21C2 => "T21-c2",
            ConditionId::T21C3 => "T21-c3",
            ConditionId::T21C4 => "T21-c4",
            ConditionId::T31C1 => "T31-c1",
            ConditionId::T31C2 => "T31-c2",
            ConditionId::T31C3 => "T31-c3",
            ConditionId::T31C4 => "T31-c4",
            ConditionId::TC1 => "TC-1",
            ConditionId::TC2 => "TC-2",
            ConditionId::TD1 => "TD-1",
            ConditionId::TD2 => "TD-2",
            ConditionId::LF1 => "LF-1",
            ConditionId::LF2 => "LF-2",
            ConditionId::LGii => "LG-ii",
            ConditionId::LGiii => "LG-iii",
        }
    }

    /// Whether the condition is only meaningful under `Iv(∞) = ∞`.
    pub fn requires_iv_infinite(&self) -> bool {
        !matches!(self, ConditionId::LF1 | ConditionId::LF2 | ConditionId::TC1 | ConditionId::TC2 | ConditionId::TD1 | ConditionId::TD2)
    }

    /// Conditions checked by each theorem-level id, in report order.
    pub fn for_theorem(theorem: &str) -> Result<Vec<ConditionId>> {
        use ConditionId::*;
        let ids = match theorem {
            "2.1" | "2.2" | "C2.1" | "C2.2" | "C2.4" | "3.2" | "3.3" => vec![T21C1, T21C2, T21C3, T21C4],
            "C2.5" => vec![T21C1, T21C2],
            "3.1" => vec![T31C1, T31C2, T31C3, T31C4],
            "F" | "LF" => vec![LF1, LF2],
            "G" | "LG" => vec![LGii, LGiii],
            "C" | "TC" => vec![TC1, TC2],
            "D" | "TD" => vec![TD1, TD2],
            other => vec![other.parse()?],
        };
        Ok(ids)
    }
}

impl fmt::Display for ConditionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ConditionId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ConditionId::ALL
            .iter()
            .copied()
            .find(|c| c.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Config(format!("unknown condition or theorem id '{s}'")))
    }
}

impl Serialize for ConditionId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// Which N-function plays which part in a condition.
#[derive(Debug, Clone, Copy)]
pub struct Roles<'a> {
    /// Applied to the integrand and inverted on the left.
    pub outer: &'a NFunction,
    /// Gauge of the inner Luxemburg norm.
    pub norm: &'a NFunction,
    /// Inverted at `1/ε` on the right.
    pub rhs: &'a NFunction,
}

/// N-functions and weights shared by all conditions of one configuration.
#[derive(Debug, Clone)]
pub struct ConditionContext {
    pub phi: ComplementaryPair,
    pub psi: ComplementaryPair,
    pub v: Weight,
    pub w0: Weight,
    pub w1: GridFunction,
    /// Kernel and weights `a`, `b` for the generic ids.
    pub generic: Option<Generic>,
}

impl ConditionContext {
    pub fn new(phi: ComplementaryPair, psi: ComplementaryPair, v: Weight, w0: Weight, w1: GridFunction) -> Self {
        ConditionContext { phi, psi, v, w0, w1, generic: None }
    }

    /// `Φ = Ψ = t^p/p` with the given weights.
    pub fn power(p: f64, v: Weight, w0: Weight, w1: GridFunction) -> Result<Self> {
        let pair = NFunction::power(p)?.complementary()?;
        Ok(ConditionContext::new(pair.clone(), pair, v, w0, w1))
    }

    pub fn with_generic(mut self, generic: Generic) -> Self {
        self.generic = Some(generic);
        self
    }

    /// `(Ψ, Φ̃, Φ)`: the modular characterization.
    pub fn modular_roles(&self) -> Roles<'_> {
        Roles { outer: &self.psi.primal, norm: &self.phi.conjugate, rhs: &self.phi.primal }
    }

    /// `(Φ̃, Ψ, Ψ̃)`: the dual characterization behind the norm inequality.
    pub fn dual_roles(&self) -> Roles<'_> {
        Roles { outer: &self.phi.conjugate, norm: &self.psi.primal, rhs: &self.psi.conjugate }
    }

    pub fn check(&self, id: ConditionId) -> Result<()> {
        if id.requires_iv_infinite() && !self.v.iv_infinite() {
            return Err(Error::hypothesis("(Iv)(infinity) = infinity required"));
        }
        Ok(())
    }
}

/// One evaluation of a condition at a constant and a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConditionPoint {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl ConditionPoint {
    pub(crate) fn new(lhs: f64, rhs: f64) -> Self {
        let lhs = if lhs.is_nan() { f64::INFINITY } else { lhs };
        ConditionPoint { lhs, rhs, holds: lhs <= rhs }
    }
}

/// A condition at fixed `(r, ε)`, ready to be evaluated at many constants.
#[derive(Debug, Clone)]
pub(crate) enum Assembled<'a> {
    /// `outer⁻¹[∫ outer(f/A) w] ≤ rhs`, with `f` and `w` on one plan.
    Integral { integrand: Integrand, outer: &'a NFunction, rhs: f64 },
    /// `lhs ≤ G⁻¹[G(Bε)·scale]`.
    Level { lhs: f64, rhs_nf: &'a NFunction, eps: f64, scale: f64 },
}

impl Assembled<'_> {
    pub(crate) fn at(&self, c: f64) -> ConditionPoint {
        match self {
            Assembled::Integral { integrand, outer, rhs } => {
                let lhs = if integrand.is_zero() { 0.0 } else { outer.inv(integrand.modular(outer, 1.0 / c)) };
                ConditionPoint::new(lhs, *rhs)
            }
            Assembled::Level { lhs, rhs_nf, eps, scale } => {
                let rhs = rhs_nf.inv(rhs_nf.eval(c * eps) * scale);
                ConditionPoint::new(*lhs, rhs)
            }
        }
    }
}

fn check_point(c: f64, r: f64, eps: f64) -> Result<()> {
    if !(c > 0.0 && r > 0.0 && eps > 0.0) || !r.is_finite() || !eps.is_finite() {
        return Err(Error::domain(format!("constant, r and eps must be positive (got {c}, {r}, {eps})")));
    }
    Ok(())
}

pub(crate) fn assemble<'a>(ctx: &'a ConditionContext, id: ConditionId, r: f64, eps: f64) -> Result<Assembled<'a>> {
    ctx.check(id)?;
    match id {
        ConditionId::TC1 | ConditionId::TC2 | ConditionId::TD1 | ConditionId::TD2 => {
            let generic = ctx
                .generic
                .as_ref()
                .ok_or_else(|| Error::Config(format!("{id} needs a kernel and weights a, b")))?;
            let (family, second) = match id {
                ConditionId::TC1 => (Family::C, false),
                ConditionId::TC2 => (Family::C, true),
                ConditionId::TD1 => (Family::D, false),
                _ => (Family::D, true),
            };
            generic::assemble(generic, family, second, ctx.modular_roles(), r, eps)
        }
        _ => literal::assemble(ctx, id, r, eps),
    }
}

/// Evaluates condition `id` with constant `c` at `(r, ε)`.
pub fn eval_condition_point(ctx: &ConditionContext, id: ConditionId, c: f64, r: f64, eps: f64) -> Result<ConditionPoint> {
    check_point(c, r, eps)?;
    Ok(assemble(ctx, id, r, eps)?.at(c))
}

/// Level conditions `LF1`, `LF2`, `LGii`, `LGiii` with constant `b`.
pub fn eval_lemma_fg(ctx: &ConditionContext, id: ConditionId, r: f64, eps: f64, b: f64) -> Result<bool> {
    if !matches!(id, ConditionId::LF1 | ConditionId::LF2 | ConditionId::LGii | ConditionId::LGiii) {
        return Err(Error::Config(format!("{id} is not a level condition")));
    }
    Ok(eval_condition_point(ctx, id, b, r, eps)?.holds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::{log_grid, Tail};
    use crate::operators::Kernel;

    fn quadratic() -> ConditionContext {
        ConditionContext::power(2.0, Weight::unit(), Weight::unit(), GridFunction::constant(1.0)).unwrap()
    }

    fn flip(ctx: &ConditionContext, id: ConditionId, r: f64, eps: f64, at: f64) {
        assert!(!eval_condition_point(ctx, id, at * 0.99, r, eps).unwrap().holds, "{id} below {at} at ({r}, {eps})");
        assert!(eval_condition_point(ctx, id, at * 1.01, r, eps).unwrap().holds, "{id} above {at} at ({r}, {eps})");
    }

    #[test]
    fn quadratic_thresholds() {
        let ctx = quadratic();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for (r, eps) in [(1e-3, 1e3), (0.5, 2.0), (1.0, 1.0), (40.0, 1e-3), (1e3, 1e3)] {
            flip(&ctx, ConditionId::T21C1, r, eps, 0.5);
            flip(&ctx, ConditionId::T21C2, r, eps, 0.5);
            flip(&ctx, ConditionId::T21C3, r, eps, s);
            flip(&ctx, ConditionId::T21C4, r, eps, s);
            flip(&ctx, ConditionId::T31C1, r, eps, 0.5);
            flip(&ctx, ConditionId::T31C2, r, eps, 0.5);
            flip(&ctx, ConditionId::T31C3, r, eps, s);
            flip(&ctx, ConditionId::T31C4, r, eps, s);
            flip(&ctx, ConditionId::LF1, r, eps, 1.0);
            flip(&ctx, ConditionId::LF2, r, eps, 0.5);
            flip(&ctx, ConditionId::LGii, r, eps, 0.5);
            flip(&ctx, ConditionId::LGiii, r, eps, 1.0);
        }
    }

    #[test]
    fn closed_form_lhs() {
        let ctx = quadratic();
        let (a, r, eps) = (0.7f64, 3.0, 0.2f64);
        let p = eval_condition_point(&ctx, ConditionId::T21C1, a, r, eps).unwrap();
        assert!((p.lhs - 1.0 / (a * (2.0 * eps).sqrt())).abs() < 1e-9 * p.lhs);
        assert!((p.rhs - (2.0 / eps).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn doubled_weight_moves_level_threshold() {
        let mut ctx = quadratic();
        ctx.w0 = Weight::unit().scaled(2.0);
        let t = point_threshold(&ctx, ConditionId::LF1, 2.0, 0.3).unwrap();
        assert!((t.threshold / std::f64::consts::SQRT_2 - 1.0).abs() < 2e-3, "{t:?}");
    }

    #[test]
    fn finite_iv_is_rejected() {
        let mut ctx = quadratic();
        let density = GridFunction::with_tails(vec![1.0], vec![1.0], Tail::Power(0.0), Tail::Power(-2.0)).unwrap();
        ctx.v = Weight::new(density).unwrap();
        let err = eval_condition_point(&ctx, ConditionId::T21C1, 1.0, 1.0, 1.0).unwrap_err();
        assert!(err.to_string().contains("(Iv)(infinity) = infinity required"));
        assert!(eval_condition_point(&ctx, ConditionId::LF1, 1.0, 1.0, 1.0).is_ok());
    }

    #[test]
    fn ladder_is_monotone() {
        let density = GridFunction::new(vec![0.1, 1.0, 10.0], vec![3.0, 1.0, 0.5]).unwrap();
        let pair = NFunction::power(3.0).unwrap().complementary().unwrap();
        let psi = NFunction::power_log(2.0, 0.5).unwrap().complementary().unwrap();
        let ctx = ConditionContext::new(pair, psi, Weight::new(density).unwrap(), Weight::unit(), GridFunction::constant(1.0));
        for id in [ConditionId::T21C1, ConditionId::T21C2, ConditionId::T21C3, ConditionId::T21C4, ConditionId::T31C2] {
            let ladder = log_grid(1e-2, 1e2, 10);
            let holds: Vec<bool> =
                ladder.iter().map(|&a| eval_condition_point(&ctx, id, a, 2.0, 0.5).unwrap().holds).collect();
            assert!(holds.windows(2).all(|w| !w[0] || w[1]), "{id}: {holds:?}");
        }
    }

    #[test]
    fn literal_and_generic_paths_agree() {
        let density = GridFunction::new(vec![0.2, 1.0, 5.0], vec![2.0, 1.0, 0.25]).unwrap();
        let v = Weight::new(density).unwrap();
        let w0 = Weight::new(GridFunction::new(vec![0.5, 3.0], vec![1.0, 2.0]).unwrap()).unwrap();
        let w1 = GridFunction::with_tails(vec![1.0, 4.0], vec![1.5, 0.5], Tail::Power(0.0), Tail::Power(0.0)).unwrap();
        let phi = NFunction::power(2.5).unwrap().complementary().unwrap();
        let psi = NFunction::power(3.0).unwrap().complementary().unwrap();
        let ctx = ConditionContext::new(phi, psi, v, w0, w1);
        let cases = [
            (ConditionId::T21C1, Kernel::T, Family::C, false),
            (ConditionId::T21C2, Kernel::One, Family::D, false),
            (ConditionId::T21C3, Kernel::LogRatio, Family::D, false),
            (ConditionId::T21C4, Kernel::LogRatio, Family::D, true),
        ];
        for (id, kernel, family, second) in cases {
            let g = Generic::modular_substitution(&ctx, kernel, matches!(id, ConditionId::T21C1));
            for (c, r, eps) in [(0.3, 0.4, 2.0), (2.0, 7.0, 0.05)] {
                let lit = eval_condition_point(&ctx, id, c, r, eps).unwrap();
                let gen = eval_generic(&g, family, ctx.modular_roles(), c, r, eps).unwrap();
                let lhs = if second { gen.lhs2 } else { gen.lhs1 };
                assert!(lhs.is_finite() && (lit.lhs / lhs - 1.0).abs() < 1e-9, "{id}: {} vs {lhs}", lit.lhs);
            }
        }
    }
}
