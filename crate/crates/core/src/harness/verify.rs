//! Theorem-level verification: assumption checklist, condition thresholds,
//! empirical constants and the verdict that compares them.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize, Serializer};

use super::empirical::{
    cone_divergence, empirical_modular_constant, empirical_norm_constant, eps_scaled_norm_check, modular_implies_norm,
    Divergence, Empirical, EpsRow, Measure, ModularNormCheck,
};
use super::{Operator, Problem};
use crate::conditions::{minimal_constant, shared_constants, ConditionContext, ConditionGrid, ConditionId, SharedConstant, Trend};
use crate::error::{Error, Result};
use crate::funcspace::{critical_exponent, ConeConfig, GridFunction, Weight};
use crate::nfunctions::{check_delta2, check_order, ComplementaryPair, DEFAULT_RANGE, DEFAULT_SAMPLES};
use crate::operators::{check_phi_condition, hausdorff_reduces_to_hardy, Classical, HardyReduction, MultiplierFunction};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TheoremId {
    T21,
    T22,
    C21,
    C22,
    C24,
    C25,
    T31,
    T32,
    T33,
}

impl TheoremId {
    pub const ALL: [TheoremId; 9] = [
        TheoremId::T21,
        TheoremId::T22,
        TheoremId::C21,
        TheoremId::C22,
        TheoremId::C24,
        TheoremId::C25,
        TheoremId::T31,
        TheoremId::T32,
        TheoremId::T33,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            TheoremId::T21 => "2.1",
            TheoremId::T22 => "2.2",
            TheoremId::C21 => "C2.1",
            TheoremId::C22 => "C2.2",
            TheoremId::C24 => "C2.4",
            TheoremId::C25 => "C2.5",
            TheoremId::T31 => "3.1",
            TheoremId::T32 => "3.2",
            TheoremId::T33 => "3.3",
        }
    }

    /// Theorems characterizing a norm rather than a modular inequality.
    fn is_norm(&self) -> bool {
        matches!(self, TheoremId::T31 | TheoremId::T32 | TheoremId::T33)
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TheoremId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL
            .iter()
            .copied()
            .find(|t| t.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Config(format!("unknown theorem id '{s}'")))
    }
}

impl Serialize for TheoremId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// Thresholds that separate the three verdicts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerdictPolicy {
    /// An inconsistency needs the empirical constant to pass this multiple of the largest threshold.
    pub margin: f64,
    /// Empirical constants beyond this count as diverging.
    pub ceiling: f64,
    pub extensions: usize,
    pub growth: f64,
    /// Relative slack around the declared `[C₁, C₂]` band.
    pub band_tol: f64,
}

impl Default for VerdictPolicy {
    fn default() -> Self {
        VerdictPolicy { margin: 10.0, ceiling: 1e6, extensions: 3, growth: 2.0, band_tol: 1e-2 }
    }
}

/// Everything a verification run needs.
#[derive(Debug, Clone)]
pub struct Setup {
    pub phi: ComplementaryPair,
    pub psi: ComplementaryPair,
    pub v: Weight,
    pub w0: Weight,
    pub w1: GridFunction,
    pub multiplier: MultiplierFunction,
    pub cone: ConeConfig,
    pub grid: ConditionGrid,
    pub eps: Vec<f64>,
    pub policy: VerdictPolicy,
}

impl Setup {
    /// Default cone, grid and policy; the cone's critical exponent follows `Φ` and `v`.
    pub fn new(
        phi: ComplementaryPair,
        psi: ComplementaryPair,
        v: Weight,
        w0: Weight,
        w1: GridFunction,
        multiplier: MultiplierFunction,
    ) -> Self {
        let beta_critical = critical_exponent(phi.primal.growth_index(), v.left_exponent());
        Setup {
            phi,
            psi,
            v,
            w0,
            w1,
            multiplier,
            cone: ConeConfig { beta_critical, ..ConeConfig::default() },
            grid: ConditionGrid::default(),
            eps: vec![0.1, 1.0, 10.0],
            policy: VerdictPolicy::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Assumption {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Checklist {
    pub items: Vec<Assumption>,
    /// `C₁..C₄` as declared or fitted.
    pub phi_constants: [f64; 4],
}

impl Checklist {
    pub fn first_failure(&self) -> Option<&Assumption> {
        self.items.iter().find(|a| !a.holds)
    }
}

fn item(name: &str, holds: bool, detail: String) -> Assumption {
    Assumption { name: name.to_string(), holds, detail }
}

fn checklist(theorem: TheoremId, setup: &Setup, mf: &MultiplierFunction) -> Result<Checklist> {
    let mut items = Vec::new();
    items.push(item(
        "(Iv)(infinity) = infinity required",
        setup.v.iv_infinite(),
        format!("Iv(1e6) = {}", setup.v.iv(1e6)),
    ));
    let d_phi = check_delta2(&setup.phi.primal, DEFAULT_RANGE, DEFAULT_SAMPLES)?;
    items.push(item("Phi in Delta2 required", d_phi.passes, format!("beta = {:e}", d_phi.beta_estimate)));
    let d_conj = check_delta2(&setup.phi.conjugate, DEFAULT_RANGE, DEFAULT_SAMPLES)?;
    items.push(item("complementary Phi in Delta2 required", d_conj.passes, format!("beta = {:e}", d_conj.beta_estimate)));
    let (name, order) = if theorem == TheoremId::T31 {
        (
            "complementary Psi precedes complementary Phi required",
            check_order(&setup.psi.conjugate, &setup.phi.conjugate, DEFAULT_RANGE, DEFAULT_SAMPLES)?,
        )
    } else {
        ("Phi precedes Psi required", check_order(&setup.phi.primal, &setup.psi.primal, DEFAULT_RANGE, DEFAULT_SAMPLES)?)
    };
    items.push(item(name, order.precedes, format!("{:?}, sequence constant {:e}", order.method, order.sequence_constant)));

    let fit = check_phi_condition(mf);
    let b = mf.bounds_or_fit();
    let phi_constants = [b.c1, b.c2, b.c3, b.c4];
    match theorem {
        TheoremId::C25 => {
            let upper = fit.upper_region;
            items.push(item(
                "C1 <= x phi(x) <= C2 on [1, infinity) required",
                upper.bounded && upper.lower > 0.0,
                format!("observed [{:e}, {:e}]", upper.lower, upper.upper),
            ));
        }
        _ => {
            let holds = mf.bounds.is_some() || fit.holds;
            items.push(item("phi condition C1..C4 required", holds, format!("C = {phi_constants:?}")));
        }
    }
    if matches!(theorem, TheoremId::C21 | TheoremId::C22 | TheoremId::C25) {
        items.push(item("alpha = -1/2 required", (mf.alpha + 0.5).abs() <= 1e-12, format!("alpha = {}", mf.alpha)));
    }
    if theorem == TheoremId::C25 {
        let supported = mf.supported_in_unit_complement();
        items.push(item("supp(phi) subset of [1, infinity) required", supported, String::new()));
    }
    Ok(Checklist { items, phi_constants })
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionSummary {
    pub id: ConditionId,
    pub minimal_constant: f64,
    pub effective_constant: f64,
    pub worst_point: Option<(f64, f64)>,
    pub trend: Trend,
}

#[derive(Debug, Clone, Serialize)]
pub struct EmpiricalSummary {
    pub measure: Measure,
    pub operator: Operator,
    pub constant: f64,
    pub result: Empirical,
    pub divergence: Divergence,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub eps_rows: Vec<EpsRow>,
    pub modular_to_norm: Option<ModularNormCheck>,
    /// Averaging-operator constant and reduction band for the support-restricted corollary.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub averaging: Option<Empirical>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reduction: Option<HardyReduction>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Consistent,
    Inconsistent,
    Indeterminate,
}

/// Deterministic work counts; wall time is left to the caller.
#[derive(Debug, Clone, Default, Serialize)]
pub struct VerificationStats {
    pub condition_points: usize,
    pub cone_samples: usize,
    pub extension_runs: usize,
    pub threads: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub theorem: TheoremId,
    pub checklist: Checklist,
    pub conditions: Vec<ConditionSummary>,
    pub shared_constants: Vec<SharedConstant>,
    pub empirical: Option<EmpiricalSummary>,
    pub verdict: Verdict,
    pub reason: String,
    pub seed: u64,
    pub stats: VerificationStats,
}

impl VerificationReport {
    /// The hypothesis that failed, if the verdict was forced by the checklist.
    pub fn failed_assumption(&self) -> Option<&str> {
        self.checklist.first_failure().map(|a| a.name.as_str())
    }
}

fn threads() -> usize {
    #[cfg(feature = "parallel")]
    {
        rayon::current_num_threads()
    }
    #[cfg(not(feature = "parallel"))]
    {
        1
    }
}

/// Runs the checklist, the conditions and the empirical constant for `theorem`.
pub fn verify_theorem(theorem: TheoremId, setup: &Setup) -> Result<VerificationReport> {
    let mf = match theorem {
        TheoremId::C24 => MultiplierFunction::calderon(),
        _ => setup.multiplier.clone(),
    };
    let checklist = checklist(theorem, setup, &mf)?;
    let mut stats = VerificationStats { threads: threads(), ..Default::default() };
    if let Some(failed) = checklist.first_failure() {
        let reason = format!("hypothesis violated: {}", failed.name);
        return Ok(VerificationReport {
            theorem,
            checklist,
            conditions: Vec::new(),
            shared_constants: Vec::new(),
            empirical: None,
            verdict: Verdict::Indeterminate,
            reason,
            seed: setup.cone.seed,
            stats,
        });
    }

    let unit = GridFunction::constant(1.0);
    let w1 = if theorem.is_norm() { unit } else { setup.w1.clone() };
    let ctx = ConditionContext::new(setup.phi.clone(), setup.psi.clone(), setup.v.clone(), setup.w0.clone(), w1.clone());
    let ids = ConditionId::for_theorem(theorem.name())?;
    let mut reports = Vec::new();
    for id in ids {
        let rep = minimal_constant(&ctx, id, &setup.grid)?;
        stats.condition_points += rep.rows.len();
        reports.push(rep);
    }
    let conditions: Vec<ConditionSummary> = reports
        .iter()
        .map(|r| ConditionSummary {
            id: r.id,
            minimal_constant: r.minimal_constant,
            effective_constant: r.effective_constant(),
            worst_point: r.worst_point,
            trend: r.trend.clone(),
        })
        .collect();
    let shared = shared_constants(&reports);

    let op = match theorem {
        TheoremId::T22 | TheoremId::C22 => Operator::DunklAdjoint(mf.clone()),
        _ => Operator::Dunkl(mf.clone()),
    };
    let problem = Problem::new(
        op.clone(),
        setup.psi.primal.clone(),
        setup.phi.primal.clone(),
        setup.v.clone(),
        setup.w0.clone(),
        w1.clone(),
    );
    let measure = if theorem.is_norm() { Measure::Norm } else { Measure::Modular };
    let cone = &setup.cone;
    let (result, eps_rows) = match theorem {
        TheoremId::T33 => {
            let rows = eps_scaled_norm_check(&problem, &setup.eps, cone);
            let mut result = empirical_norm_constant(&problem, cone);
            if let Some(best) = rows.iter().max_by(|a, b| a.constant.total_cmp(&b.constant)) {
                result.constant = result.constant.max(best.constant);
            }
            (result, rows)
        }
        _ if theorem.is_norm() => (empirical_norm_constant(&problem, cone), Vec::new()),
        _ => (empirical_modular_constant(&problem, cone), Vec::new()),
    };
    stats.cone_samples += result.rows.len() * (1 + setup.eps.len() * usize::from(theorem == TheoremId::T33));
    let p = setup.policy;
    let divergence = cone_divergence(&problem, cone, measure, result.constant, p.extensions, p.growth, p.ceiling);
    stats.extension_runs += p.extensions;
    let modular_to_norm = (measure == Measure::Modular).then(|| modular_implies_norm(&problem, cone, result.constant));

    let (averaging, reduction) = if theorem == TheoremId::C25 {
        let avg = Problem { op: Operator::Classical(Classical::HardyAvg), ..problem.clone() };
        (Some(empirical_modular_constant(&avg, cone)), Some(hausdorff_reduces_to_hardy(&mf)?))
    } else {
        (None, None)
    };

    let thresholds_finite = conditions.iter().all(|c| c.effective_constant.is_finite());
    let largest = conditions.iter().map(|c| c.effective_constant).fold(0.0, f64::max);
    let emp = result.constant;
    let emp_last = divergence.constants.last().copied().unwrap_or(emp);
    let (mut verdict, mut reason) = if thresholds_finite {
        if !emp.is_finite() {
            (Verdict::Inconsistent, "thresholds are finite but a sample has an infinite empirical constant".to_string())
        } else if divergence.diverging && emp_last > p.margin * largest.max(1.0) {
            (
                Verdict::Inconsistent,
                format!("thresholds are finite but the empirical constant diverges under cone extension ({emp_last:e})"),
            )
        } else {
            (Verdict::Consistent, "all thresholds finite and empirical constant finite".to_string())
        }
    } else if !emp.is_finite() || divergence.diverging {
        (Verdict::Consistent, "a threshold is infinite and the empirical constant diverges".to_string())
    } else {
        (
            Verdict::Indeterminate,
            "a threshold is infinite but the empirical constant stays bounded on the sampled cone".to_string(),
        )
    };
    if let Some(check) = &modular_to_norm {
        if !check.violations.is_empty() {
            verdict = Verdict::Inconsistent;
            reason = format!("norm ratio exceeds the modular-implied bound on samples {:?}", check.violations);
        }
    }
    if let (Some(avg), Some(red)) = (&averaging, &reduction) {
        let ratio = emp / avg.constant;
        let (c1, c2) = red.declared;
        let inside = ratio >= c1 * (1.0 - p.band_tol) && ratio <= c2 * (1.0 + p.band_tol);
        if !(red.equivalent && (inside || !ratio.is_finite())) && verdict == Verdict::Consistent {
            verdict = Verdict::Inconsistent;
            reason = format!("constant ratio {ratio} for H_phi against A leaves the band [{c1}, {c2}]");
        }
    }

    Ok(VerificationReport {
        theorem,
        checklist,
        conditions,
        shared_constants: shared,
        empirical: Some(EmpiricalSummary {
            measure,
            operator: op,
            constant: emp,
            result,
            divergence,
            eps_rows,
            modular_to_norm,
            averaging,
            reduction,
        }),
        verdict,
        reason,
        seed: setup.cone.seed,
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::Tail;
    use crate::nfunctions::NFunction;

    fn quadratic(mf: MultiplierFunction) -> Setup {
        let pair = NFunction::power(2.0).unwrap().complementary().unwrap();
        let mut s = Setup::new(pair.clone(), pair, Weight::unit(), Weight::unit(), GridFunction::constant(1.0), mf);
        s.cone.size = 8;
        s.grid = ConditionGrid::square(1e-2, 1e2, 3);
        s
    }

    #[test]
    fn exact_multiplier_is_consistent() {
        let rep = verify_theorem(TheoremId::T21, &quadratic(MultiplierFunction::exact(0.0))).unwrap();
        assert_eq!(rep.verdict, Verdict::Consistent, "{}", rep.reason);
        assert!((rep.conditions[0].minimal_constant - 0.5).abs() < 5e-3);
    }

    #[test]
    fn finite_iv_is_indeterminate() {
        let mut s = quadratic(MultiplierFunction::exact(0.0));
        let density = GridFunction::with_tails(vec![1.0], vec![1.0], Tail::Power(0.0), Tail::Power(-2.0)).unwrap();
        s.v = Weight::new(density).unwrap();
        let rep = verify_theorem(TheoremId::T21, &s).unwrap();
        assert_eq!(rep.verdict, Verdict::Indeterminate);
        assert_eq!(rep.failed_assumption(), Some("(Iv)(infinity) = infinity required"));
    }

    #[test]
    fn support_gate_for_the_averaging_corollary() {
        let rep = verify_theorem(TheoremId::C25, &quadratic(MultiplierFunction::calderon())).unwrap();
        assert_eq!(rep.failed_assumption(), Some("supp(phi) subset of [1, infinity) required"));
        let ok = verify_theorem(TheoremId::C25, &quadratic(MultiplierFunction::hardy())).unwrap();
        assert_eq!(ok.verdict, Verdict::Consistent, "{}", ok.reason);
    }
}
