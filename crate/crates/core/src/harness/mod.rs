//! Empirical constants of the modular and norm inequalities over sampled
//! cones of non-increasing functions, and theorem-level verdicts that set
//! them against the condition thresholds.

mod empirical;
mod verify;

pub use empirical::{
    cone_divergence, empirical_modular_constant, empirical_norm_constant, eps_scaled_norm_check, modular_implies_norm, Measure,
    sample_modular_constant, sample_norm_constant, Divergence, Empirical, EpsRow, ModularNormCheck, SampleRow, Witness,
};
pub use verify::{
    verify_theorem, Assumption, Checklist, ConditionSummary, EmpiricalSummary, Setup, TheoremId, Verdict,
    VerdictPolicy, VerificationReport, VerificationStats,
};

use std::fmt;

use serde::Serialize;

use crate::funcspace::{GridFunction, Weight};
use crate::nfunctions::NFunction;
use crate::operators::{dunkl_hausdorff_adjoint_point, dunkl_hausdorff_point, Classical, MultiplierFunction};
use crate::orlicz::Integrand;
use crate::quad::LogPlan;

/// The operator `T` of an inequality.
#[derive(Debug, Clone)]
pub enum Operator {
    Dunkl(MultiplierFunction),
    DunklAdjoint(MultiplierFunction),
    Classical(Classical),
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operator::Dunkl(mf) => write!(f, "dunkl(alpha={})", mf.alpha),
            Operator::DunklAdjoint(mf) => write!(f, "adjoint(alpha={})", mf.alpha),
            Operator::Classical(c) => write!(f, "{c}"),
        }
    }
}

impl Serialize for Operator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl Operator {
    /// `Tf` sampled at every node of a plan covering its kinks, times `w₁`,
    /// against the weight `w₀`.
    pub fn image(&self, f: &GridFunction, w1: &GridFunction, w0: &Weight) -> Integrand {
        let mut kinks = f.nodes();
        let cuts = |mf: &MultiplierFunction, dilate: bool| -> Vec<f64> {
            let ts = mf.phi.nodes();
            f.nodes()
                .iter()
                .flat_map(|&y| ts.iter().map(move |&t| if dilate { y / t } else { y * t }))
                .collect()
        };
        match self {
            Operator::Dunkl(mf) => kinks.extend(cuts(mf, false)),
            Operator::DunklAdjoint(mf) => kinks.extend(cuts(mf, true)),
            Operator::Classical(_) => {}
        }
        kinks.extend(w1.nodes());
        kinks.extend(w0.kinks());
        let plan = LogPlan::new(0.0, f64::INFINITY, &kinks);
        let values: Vec<f64> = match self {
            Operator::Dunkl(mf) => plan.xs().iter().map(|&x| dunkl_hausdorff_point(mf, f, x)).collect(),
            Operator::DunklAdjoint(mf) => plan.xs().iter().map(|&x| dunkl_hausdorff_adjoint_point(mf, f, x)).collect(),
            Operator::Classical(c) => {
                let p = c.prepare(f);
                plan.xs().iter().map(|&x| p.at(x)).collect()
            }
        };
        let values = values
            .into_iter()
            .zip(plan.xs())
            .map(|(t, &x)| {
                let w = w1.eval(x);
                if t == 0.0 || w == 0.0 {
                    0.0
                } else {
                    t * w
                }
            })
            .collect();
        Integrand::from_values(plan, values, w0)
    }
}

/// One inequality `‖w₁Tf‖` against `‖f‖`: `T`, the outer and inner
/// N-functions and the weights.
#[derive(Debug, Clone)]
pub struct Problem {
    pub op: Operator,
    /// `Ψ`, applied to `w₁Tf` against `w₀`.
    pub outer: NFunction,
    /// `Φ`, applied to `f` against `v`.
    pub inner: NFunction,
    pub v: Weight,
    pub w0: Weight,
    pub w1: GridFunction,
}

impl Problem {
    pub fn new(op: Operator, outer: NFunction, inner: NFunction, v: Weight, w0: Weight, w1: GridFunction) -> Self {
        Problem { op, outer, inner, v, w0, w1 }
    }

    /// `Φ = Ψ = t^p/p` with unit weights.
    pub fn power_unit(op: Operator, p: f64) -> crate::Result<Self> {
        let nf = NFunction::power(p)?;
        Ok(Problem::new(op, nf.clone(), nf, Weight::unit(), Weight::unit(), GridFunction::constant(1.0)))
    }

    pub(crate) fn sides(&self, f: &GridFunction) -> (Integrand, Integrand) {
        (self.op.image(f, &self.w1, &self.w0), Integrand::new(f, &self.v))
    }
}
