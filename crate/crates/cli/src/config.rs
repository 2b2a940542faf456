//! JSON experiment configuration and the descriptors it uses.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use oh_core::conditions::{ConditionContext, ConditionGrid, Generic};
use oh_core::funcspace::{io, log_grid, ConeConfig, GridFunction, Tail, Weight};
use oh_core::harness::VerdictPolicy;
use oh_core::nfunctions::{NFunction, NFunctionSpec};
use oh_core::operators::{Kernel, MultiplierFunction, PhiBounds};
use oh_core::{Error, Result};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default)]
    pub nfunctions: BTreeMap<String, NFunctionSpec>,
    #[serde(default)]
    pub pair: PairSpec,
    #[serde(default)]
    pub weights: WeightsSpec,
    pub multiplier: Option<MultiplierSpec>,
    #[serde(default)]
    pub functions: BTreeMap<String, FunctionSpec>,
    #[serde(default)]
    pub grids: GridsSpec,
    #[serde(default)]
    pub cone: ConeSpec,
    #[serde(default)]
    pub policy: VerdictPolicy,
    pub generic: Option<GenericSpec>,
    /// Directory that relative paths are resolved against.
    #[serde(skip)]
    pub base: PathBuf,
}

/// Names of the inner `Φ` and outer `Ψ` among `nfunctions`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairSpec {
    pub phi: String,
    pub psi: String,
}

impl Default for PairSpec {
    fn default() -> Self {
        PairSpec { phi: "Phi".into(), psi: "Psi".into() }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightsSpec {
    pub v: Option<FunctionSpec>,
    pub w0: Option<FunctionSpec>,
    pub w1: Option<FunctionSpec>,
}

/// A tail exponent, or `"zero"`.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged)]
pub enum TailSpec {
    Power(f64),
    Named(ZeroTail),
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ZeroTail {
    Zero,
}

impl From<TailSpec> for Tail {
    fn from(t: TailSpec) -> Tail {
        match t {
            TailSpec::Power(e) => Tail::Power(e),
            TailSpec::Named(ZeroTail::Zero) => Tail::Zero,
        }
    }
}

/// A non-negative function on `(0, ∞)`.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FunctionSpec {
    Constant {
        value: f64,
    },
    /// `scale·x^exponent`
    Power {
        #[serde(default = "one")]
        scale: f64,
        exponent: f64,
    },
    /// `value·χ_(a,b)`
    Indicator {
        a: f64,
        b: f64,
        #[serde(default = "one")]
        value: f64,
    },
    /// `x^{-beta}χ_(0,radius)`
    TruncatedPower {
        beta: f64,
        #[serde(default = "one")]
        radius: f64,
    },
    /// Samples with fitted tails unless both tails are given.
    Grid {
        x: Vec<f64>,
        y: Vec<f64>,
        left_tail: Option<TailSpec>,
        right_tail: Option<TailSpec>,
    },
    /// A grid-function CSV file.
    Csv {
        path: PathBuf,
    },
}

fn one() -> f64 {
    1.0
}

impl FunctionSpec {
    pub fn build(&self, base: &Path) -> Result<GridFunction> {
        match self {
            FunctionSpec::Constant { value } => Ok(GridFunction::constant(*value)),
            FunctionSpec::Power { scale, exponent } => Ok(GridFunction::power(*scale, *exponent)),
            FunctionSpec::Indicator { a, b, value } => GridFunction::indicator(*a, *b, *value),
            FunctionSpec::TruncatedPower { beta, radius } => Ok(GridFunction::truncated_power(*beta, *radius)),
            FunctionSpec::Grid { x, y, left_tail, right_tail } => match (left_tail, right_tail) {
                (None, None) => GridFunction::new(x.clone(), y.clone()),
                (Some(l), Some(r)) => GridFunction::with_tails(x.clone(), y.clone(), (*l).into(), (*r).into()),
                (l, r) => {
                    let fitted = GridFunction::new(x.clone(), y.clone())?;
                    let left = l.map(Tail::from).unwrap_or(fitted.left_tail());
                    let right = r.map(Tail::from).unwrap_or(fitted.right_tail());
                    GridFunction::with_tails(x.clone(), y.clone(), left, right)
                }
            },
            FunctionSpec::Csv { path } => io::read_csv(&base.join(path)),
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    Hardy,
    HardyAdjoint,
    Calderon,
    Exact,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsSpec {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
}

/// Either a preset, or `α` with a descriptor of `φ`; declared bounds are optional.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MultiplierSpec {
    pub preset: Option<Preset>,
    pub alpha: Option<f64>,
    pub phi: Option<FunctionSpec>,
    pub bounds: Option<BoundsSpec>,
}

impl MultiplierSpec {
    pub fn build(&self, base: &Path) -> Result<MultiplierFunction> {
        let mf = match (self.preset, &self.phi) {
            (Some(_), Some(_)) => return Err(Error::Config("multiplier: give either 'preset' or 'phi', not both".into())),
            (Some(Preset::Hardy), None) => MultiplierFunction::hardy(),
            (Some(Preset::HardyAdjoint), None) => MultiplierFunction::hardy_adjoint(),
            (Some(Preset::Calderon), None) => MultiplierFunction::calderon(),
            (Some(Preset::Exact), None) => MultiplierFunction::exact(self.alpha.unwrap_or(-0.5)),
            (None, Some(phi)) => {
                let alpha = self.alpha.ok_or_else(|| Error::Config("multiplier: 'alpha' is required with 'phi'".into()))?;
                MultiplierFunction::new(phi.build(base)?, alpha)?
            }
            (None, None) => return Err(Error::Config("multiplier: 'preset' or 'phi' is required".into())),
        };
        Ok(match self.bounds {
            Some(b) => mf.with_bounds(PhiBounds { c1: b.c1, c2: b.c2, c3: b.c3, c4: b.c4 }),
            None => mf,
        })
    }
}

/// Explicit points, or `n` log-spaced points on `[lo, hi]`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum AxisSpec {
    Points(Vec<f64>),
    Log { lo: f64, hi: f64, n: usize },
}

impl AxisSpec {
    pub fn points(&self) -> Result<Vec<f64>> {
        let pts = match self {
            AxisSpec::Points(p) => p.clone(),
            AxisSpec::Log { lo, hi, n } => {
                if !(*lo > 0.0 && hi > lo && *n >= 1) {
                    return Err(Error::Config(format!("grid axis needs 0 < lo < hi and n >= 1, got [{lo}, {hi}], {n}")));
                }
                log_grid(*lo, *hi, *n)
            }
        };
        if pts.is_empty() || pts.iter().any(|&p| !(p > 0.0 && p.is_finite())) {
            return Err(Error::Config("grid points must be positive and finite".into()));
        }
        Ok(pts)
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridsSpec {
    pub r: Option<AxisSpec>,
    pub eps: Option<AxisSpec>,
    /// Output abscissae for `op apply`.
    pub x: Option<AxisSpec>,
    /// The `ε` values of the scaling check.
    pub eps_scale: Option<AxisSpec>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeSpec {
    pub seed: Option<u64>,
    pub size: Option<usize>,
    pub radius: Option<f64>,
    pub beta_critical: Option<f64>,
    pub extremal: Option<bool>,
}

impl ConeSpec {
    /// Overrides the fields that are set.
    pub fn apply(&self, base: ConeConfig) -> ConeConfig {
        ConeConfig {
            seed: self.seed.unwrap_or(base.seed),
            size: self.size.unwrap_or(base.size),
            radius: self.radius.unwrap_or(base.radius),
            beta_critical: self.beta_critical.unwrap_or(base.beta_critical),
            extremal: self.extremal.unwrap_or(base.extremal),
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Substitution {
    /// `a = w₁/x` or `w₁`, `b = Iv/v`.
    Modular,
    /// `a = x/Iv` or `1/Iv`, `b = t/w₀` or `1/w₀`.
    Dual,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenericSpec {
    pub kernel: Kernel,
    pub substitution: Substitution,
    /// Multiply (dual) or divide (modular) `a` by `x`.
    #[serde(default)]
    pub a_x: bool,
    /// Multiply `b` by `t` (dual only).
    #[serde(default)]
    pub b_t: bool,
}

impl Config {
    pub fn from_str(text: &str, base: &Path) -> Result<Config> {
        let mut cfg: Config = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.base = base.to_path_buf();
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Config> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Config::from_str(&text, &base)
    }

    pub fn nfunction(&self, name: &str) -> Result<NFunction> {
        self.nfunctions
            .get(name)
            .ok_or_else(|| Error::Config(format!("no N-function named '{name}'")))?
            .build()
    }

    pub fn phi(&self) -> Result<NFunction> {
        self.nfunction(&self.pair.phi)
    }

    /// `Ψ`, falling back to `Φ` when no outer function is declared.
    pub fn psi(&self) -> Result<NFunction> {
        if self.nfunctions.contains_key(&self.pair.psi) {
            self.nfunction(&self.pair.psi)
        } else {
            self.phi()
        }
    }

    fn weight(&self, spec: &Option<FunctionSpec>) -> Result<Weight> {
        match spec {
            Some(s) => Weight::new(s.build(&self.base)?),
            None => Ok(Weight::unit()),
        }
    }

    pub fn v(&self) -> Result<Weight> {
        self.weight(&self.weights.v)
    }

    pub fn w0(&self) -> Result<Weight> {
        self.weight(&self.weights.w0)
    }

    pub fn w1(&self) -> Result<GridFunction> {
        match &self.weights.w1 {
            Some(s) => s.build(&self.base),
            None => Ok(GridFunction::constant(1.0)),
        }
    }

    pub fn multiplier(&self) -> Result<MultiplierFunction> {
        self.multiplier
            .as_ref()
            .ok_or_else(|| Error::Config("the configuration declares no multiplier".into()))?
            .build(&self.base)
    }

    pub fn function(&self, name: &str) -> Result<GridFunction> {
        self.functions
            .get(name)
            .ok_or_else(|| Error::Config(format!("no function named '{name}'")))?
            .build(&self.base)
    }

    pub fn condition_grid(&self) -> Result<ConditionGrid> {
        let mut grid = ConditionGrid::default();
        if let Some(r) = &self.grids.r {
            grid.r = r.points()?;
        }
        if let Some(eps) = &self.grids.eps {
            grid.eps = eps.points()?;
        }
        Ok(grid)
    }

    pub fn output_grid(&self) -> Result<Option<Vec<f64>>> {
        self.grids.x.as_ref().map(AxisSpec::points).transpose()
    }

    pub fn eps_scale(&self) -> Result<Option<Vec<f64>>> {
        self.grids.eps_scale.as_ref().map(AxisSpec::points).transpose()
    }

    /// Condition context with the complementary pairs built; attaches the
    /// generic kernel when one is declared.
    pub fn condition_context(&self) -> Result<ConditionContext> {
        let ctx = ConditionContext::new(
            self.phi()?.complementary()?,
            self.psi()?.complementary()?,
            self.v()?,
            self.w0()?,
            self.w1()?,
        );
        Ok(match &self.generic {
            Some(g) => {
                let generic = match g.substitution {
                    Substitution::Modular => Generic::modular_substitution(&ctx, g.kernel, g.a_x),
                    Substitution::Dual => Generic::dual_substitution(&ctx, g.kernel, g.a_x, g.b_t),
                };
                ctx.with_generic(generic)
            }
            None => ctx,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_defaults() {
        let cfg = Config::from_str(r#"{"nfunctions":{"Phi":{"kind":"power","p":2.0}}}"#, Path::new(".")).unwrap();
        assert_eq!(cfg.phi().unwrap().power_exponent(), Some(2.0));
        assert_eq!(cfg.psi().unwrap().power_exponent(), Some(2.0));
        assert!(cfg.v().unwrap().iv_infinite());
        assert_eq!(cfg.condition_grid().unwrap().r.len(), 12);
    }

    #[test]
    fn tails_and_axes() {
        let text = r#"{
            "weights": {"v": {"kind": "grid", "x": [1.0], "y": [1.0], "left_tail": 0.0, "right_tail": -2.0}},
            "grids": {"r": {"lo": 0.1, "hi": 10.0, "n": 3}, "eps": [1.0]}
        }"#;
        let cfg = Config::from_str(text, Path::new(".")).unwrap();
        assert!(!cfg.v().unwrap().iv_infinite());
        let grid = cfg.condition_grid().unwrap();
        assert_eq!(grid.r.len(), 3);
        assert_eq!(grid.eps, vec![1.0]);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        assert!(Config::from_str(r#"{"nfunction": {}}"#, Path::new(".")).is_err());
        let bad = r#"{"multiplier": {"preset": "hardy", "phi": {"kind": "constant", "value": 1.0}}}"#;
        assert!(Config::from_str(bad, Path::new(".")).unwrap().multiplier().is_err());
    }
}
