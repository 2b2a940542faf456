//! Per-sample best constants and their maxima over a cone.

use serde::Serialize;

use super::Problem;
use crate::funcspace::{sample_cone, ConeConfig, GridFunction, MonotoneSample, SampleKind};
use crate::orlicz::Integrand;
use crate::par;
use crate::solve::{threshold, Search, Threshold};

const MODULAR_SEARCH: Search = Search { start: 1.0, floor: 1e-12, cap: 1e12, rel_width: 1e-6 };
/// Relative slack of the modular-to-norm implication check.
const IMPLICATION_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub index: usize,
    pub kind: SampleKind,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleRow {
    pub index: usize,
    pub kind: SampleKind,
    pub constant: f64,
    pub lhs: f64,
    pub rhs: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Empirical {
    /// Max over the cone of the per-sample constants; a lower bound for the best constant.
    pub constant: f64,
    pub witness: Option<Witness>,
    pub cone: ConeConfig,
    pub evaluated: usize,
    pub skipped: usize,
    #[serde(skip)]
    pub rows: Vec<SampleRow>,
}

struct Measured {
    constant: f64,
    lhs: f64,
    rhs: f64,
    note: Option<String>,
}

fn modular_from_sides(problem: &Problem, image: &Integrand, input: &Integrand) -> Measured {
    let (psi, phi) = (&problem.outer, &problem.inner);
    let lhs = psi.inv(image.modular(psi, 1.0));
    if lhs == 0.0 {
        return Measured { constant: 0.0, lhs, rhs: 0.0, note: None };
    }
    if !input.modular(phi, 1.0).is_finite() {
        return Measured {
            constant: f64::NAN,
            lhs,
            rhs: f64::INFINITY,
            note: Some("right side diverges for every constant".into()),
        };
    }
    if !lhs.is_finite() {
        return Measured { constant: f64::INFINITY, lhs, rhs: f64::NAN, note: Some("left side diverges".into()) };
    }
    let rhs_at = |c: f64| phi.inv(input.modular(phi, c));
    let found = threshold(|c| (lhs / rhs_at(c)).ln(), MODULAR_SEARCH);
    match found {
        Threshold::AboveCap(_) => Measured { constant: f64::INFINITY, lhs, rhs: rhs_at(MODULAR_SEARCH.cap), note: None },
        t => Measured { constant: t.value(), lhs, rhs: rhs_at(t.value()), note: None },
    }
}

fn norm_from_sides(problem: &Problem, image: &Integrand, input: &Integrand) -> Measured {
    let lhs = image.luxemburg(&problem.outer);
    let rhs = input.luxemburg(&problem.inner);
    let constant = match (lhs == 0.0, rhs == 0.0) {
        (true, _) => 0.0,
        (false, true) => f64::INFINITY,
        _ => lhs / rhs,
    };
    let note = (!rhs.is_finite()).then(|| "input norm diverges".to_string());
    let constant = if rhs.is_finite() { constant } else { f64::NAN };
    Measured { constant, lhs, rhs, note }
}

/// Smallest `C` with `Ψ⁻¹[∫Ψ(w₁Tf)w₀] ≤ Φ⁻¹[∫Φ(Cf)v]`, or NaN when the right
/// side diverges for every `C`.
pub fn sample_modular_constant(problem: &Problem, f: &GridFunction) -> f64 {
    let (image, input) = problem.sides(f);
    modular_from_sides(problem, &image, &input).constant
}

/// `‖w₁Tf‖_{Ψ(w₀)} / ‖f‖_{Φ(v)}`.
pub fn sample_norm_constant(problem: &Problem, f: &GridFunction) -> f64 {
    let (image, input) = problem.sides(f);
    norm_from_sides(problem, &image, &input).constant
}

fn over_cone(
    samples: &[MonotoneSample],
    cone: &ConeConfig,
    measure: impl Fn(&MonotoneSample) -> Measured + Sync + Send,
) -> Empirical {
    let rows: Vec<SampleRow> = par::map(samples, |s| {
        let m = measure(s);
        SampleRow { index: s.index, kind: s.kind.clone(), constant: m.constant, lhs: m.lhs, rhs: m.rhs, note: m.note }
    });
    reduce(rows, cone)
}

fn reduce(rows: Vec<SampleRow>, cone: &ConeConfig) -> Empirical {
    let values: Vec<f64> = rows.iter().map(|r| r.constant).collect();
    let skipped = values.iter().filter(|v| v.is_nan()).count();
    let best = par::argmax(&values);
    Empirical {
        constant: best.map_or(0.0, |(_, v)| v),
        witness: best.map(|(i, _)| Witness { index: rows[i].index, kind: rows[i].kind.clone() }),
        cone: *cone,
        evaluated: rows.len() - skipped,
        skipped,
        rows,
    }
}

/// Max over the cone of the per-sample modular constants.
pub fn empirical_modular_constant(problem: &Problem, cone: &ConeConfig) -> Empirical {
    let samples = sample_cone(cone);
    over_cone(&samples, cone, |s| {
        let (image, input) = problem.sides(&s.f);
        modular_from_sides(problem, &image, &input)
    })
}

/// Max over the cone of `‖w₁Tf‖_{Ψ(w₀)} / ‖f‖_{Φ(v)}`.
pub fn empirical_norm_constant(problem: &Problem, cone: &ConeConfig) -> Empirical {
    let samples = sample_cone(cone);
    over_cone(&samples, cone, |s| {
        let (image, input) = problem.sides(&s.f);
        norm_from_sides(problem, &image, &input)
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct EpsRow {
    pub eps: f64,
    /// `1/Φ(1/ε)`
    pub eps_phi: f64,
    /// `1/Ψ(1/ε)`
    pub eps_psi: f64,
    pub constant: f64,
    pub witness: Option<Witness>,
}

/// Norm constants with the weights rescaled to `ε_Ψ·w₀` and `ε_Φ·v`.
pub fn eps_scaled_norm_check(problem: &Problem, eps: &[f64], cone: &ConeConfig) -> Vec<EpsRow> {
    let samples = sample_cone(cone);
    let sides: Vec<(Integrand, Integrand)> = par::map(&samples, |s| problem.sides(&s.f));
    eps.iter()
        .map(|&e| {
            let eps_phi = 1.0 / problem.inner.eval(1.0 / e);
            let eps_psi = 1.0 / problem.outer.eval(1.0 / e);
            let rows: Vec<SampleRow> = par::map_range(samples.len(), |i| {
                let image = sides[i].0.clone().with_weight_scale(eps_psi);
                let input = sides[i].1.clone().with_weight_scale(eps_phi);
                let m = norm_from_sides(problem, &image, &input);
                let s = &samples[i];
                SampleRow { index: s.index, kind: s.kind.clone(), constant: m.constant, lhs: m.lhs, rhs: m.rhs, note: m.note }
            });
            let summary = reduce(rows, cone);
            EpsRow { eps: e, eps_phi, eps_psi, constant: summary.constant, witness: summary.witness }
        })
        .collect()
}

/// Which empirical constant a divergence run recomputes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Measure {
    Modular,
    Norm,
}

#[derive(Debug, Clone, Serialize)]
pub struct Divergence {
    pub radii: Vec<f64>,
    pub constants: Vec<f64>,
    pub diverging: bool,
}

/// Recomputes the constant with the support radius multiplied by ten
/// `steps` times; diverging when every step grows by `growth` or the last
/// constant passes `ceiling`.
pub fn cone_divergence(
    problem: &Problem,
    cone: &ConeConfig,
    measure: Measure,
    base: f64,
    steps: usize,
    growth: f64,
    ceiling: f64,
) -> Divergence {
    let mut radii = vec![cone.radius];
    let mut constants = vec![base];
    for k in 1..=steps {
        let radius = cone.radius * 10f64.powi(k as i32);
        let extended = cone.with_radius(radius);
        let c = match measure {
            Measure::Modular => empirical_modular_constant(problem, &extended).constant,
            Measure::Norm => empirical_norm_constant(problem, &extended).constant,
        };
        radii.push(radius);
        constants.push(c);
    }
    let grows = constants.windows(2).all(|w| w[1].is_infinite() || (w[0] > 0.0 && w[1] >= growth * w[0]));
    let last = constants[constants.len() - 1];
    let diverging = grows || last > ceiling || constants.iter().any(|c| c.is_infinite());
    Divergence { radii, constants, diverging }
}

#[derive(Debug, Clone, Serialize)]
pub struct ModularNormCheck {
    pub modular_constant: f64,
    /// `C_m·max(1, Ψ(Φ⁻¹(1)))`
    pub derived_constant: f64,
    /// Normalized samples satisfying the modular inequality at `C_m`.
    pub satisfying: usize,
    /// Indices of those among them whose norm ratio exceeds the derived constant.
    pub violations: Vec<usize>,
}

/// Every sample `u = f/‖f‖_{Φ(v)}` with `Ψ⁻¹[∫Ψ(w₁Tu/C_m)w₀] ≤ Φ⁻¹[∫Φ(u)v]`
/// must have `‖w₁Tu‖_{Ψ(w₀)}` within the derived constant.
pub fn modular_implies_norm(problem: &Problem, cone: &ConeConfig, modular_constant: f64) -> ModularNormCheck {
    let (psi, phi) = (&problem.outer, &problem.inner);
    let derived = modular_constant * psi.eval(phi.inv(1.0)).max(1.0);
    let samples = sample_cone(cone);
    let outcome: Vec<Option<(usize, bool)>> = par::map(&samples, |s| {
        let (image, input) = problem.sides(&s.f);
        let norm = input.luxemburg(phi);
        if !(norm > 0.0 && norm.is_finite()) || !modular_constant.is_finite() {
            return None;
        }
        let lhs = psi.inv(image.modular(psi, 1.0 / (modular_constant * norm)));
        let rhs = phi.inv(input.modular(phi, 1.0 / norm));
        if lhs > rhs * (1.0 + IMPLICATION_TOL) {
            return None;
        }
        let ratio = image.luxemburg(psi) / norm;
        Some((s.index, ratio <= derived * (1.0 + IMPLICATION_TOL)))
    });
    let held: Vec<(usize, bool)> = outcome.into_iter().flatten().collect();
    ModularNormCheck {
        modular_constant,
        derived_constant: derived,
        satisfying: held.len(),
        violations: held.iter().filter(|(_, ok)| !ok).map(|(i, _)| *i).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::Weight;
    use crate::harness::Operator;
    use crate::nfunctions::NFunction;
    use crate::operators::{Classical, MultiplierFunction};

    fn chi01() -> GridFunction {
        GridFunction::indicator(0.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn averaging_on_the_unit_interval() {
        let nf = NFunction::power(2.0).unwrap();
        let unit_interval = Weight::new(chi01()).unwrap();
        let p = Problem::new(
            Operator::Classical(Classical::HardyAvg),
            nf.clone(),
            nf,
            unit_interval.clone(),
            unit_interval,
            GridFunction::constant(1.0),
        );
        let c = sample_modular_constant(&p, &chi01());
        assert!((c - 1.0).abs() < 1e-5, "{c}");
        assert_eq!(sample_modular_constant(&p, &GridFunction::zero()), 0.0);
    }

    #[test]
    fn hardy_norm_of_indicator() {
        let p = Problem::power_unit(Operator::Dunkl(MultiplierFunction::hardy()), 2.0).unwrap();
        let c = sample_norm_constant(&p, &chi01());
        assert!((c - 2f64.sqrt()).abs() < 1e-8, "{c}");
        let c2 = sample_norm_constant(&p, &chi01().scaled(2.0));
        assert!((c2 / c - 1.0).abs() < 1e-9);
        let m1 = sample_modular_constant(&p, &chi01());
        let m2 = sample_modular_constant(&p, &chi01().scaled(2.0));
        assert!((m1 / m2 - 1.0).abs() < 1e-5);
    }

    #[test]
    fn eps_invariance_for_equal_powers() {
        let p = Problem::power_unit(Operator::Classical(Classical::HardyAvg), 2.0).unwrap();
        let cone = ConeConfig { size: 8, ..ConeConfig::default() };
        let rows = eps_scaled_norm_check(&p, &[0.1, 1.0, 10.0], &cone);
        assert!((rows[1].eps_psi - 2.0).abs() < 1e-12);
        let (lo, hi) = rows.iter().fold((f64::INFINITY, 0.0f64), |a, r| (a.0.min(r.constant), a.1.max(r.constant)));
        assert!(hi / lo - 1.0 < 1e-6, "{lo} {hi}");
    }

    #[test]
    fn modular_bound_carries_to_norms() {
        let p = Problem::power_unit(Operator::Classical(Classical::HardyAvg), 3.0).unwrap();
        let cone = ConeConfig { size: 12, ..ConeConfig::default() };
        let m = empirical_modular_constant(&p, &cone);
        assert!(m.constant.is_finite());
        let check = modular_implies_norm(&p, &cone, m.constant);
        assert!(check.satisfying > 0 && check.violations.is_empty(), "{check:?}");
    }
}
