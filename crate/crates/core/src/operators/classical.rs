//! Hardy-type operators evaluated exactly from cumulative moments.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcspace::{GridFunction, Moments};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Classical {
    /// `(Af)(x) = (1/x)∫_0^x f`
    HardyAvg,
    /// `(A*f)(x) = ∫_x^∞ f(t)/t dt`
    HardyAvgAdjoint,
    /// `(Sf)(x) = (1/x)∫_0^x t f(t) dt`
    S,
    /// `(Hf)(x) = ∫_0^x f`
    H,
    /// `(H*f)(x) = ∫_x^∞ f`
    HStar,
    /// `(S*f)(x) = x∫_x^∞ f(t)/t dt`
    SStar,
    /// `(Kf)(x) = ∫_0^x ln(x/t) f(t) dt`
    K,
    /// `(K*f)(x) = ∫_x^∞ ln(t/x) f(t) dt`
    KStar,
    /// `Cf = Af + A*f`
    Calderon,
}

impl Classical {
    pub const ALL: [Classical; 9] = [
        Classical::HardyAvg,
        Classical::HardyAvgAdjoint,
        Classical::S,
        Classical::H,
        Classical::HStar,
        Classical::SStar,
        Classical::K,
        Classical::KStar,
        Classical::Calderon,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Classical::HardyAvg => "hardy",
            Classical::HardyAvgAdjoint => "hardy-adj",
            Classical::S => "S",
            Classical::H => "H",
            Classical::HStar => "Hstar",
            Classical::SStar => "Sstar",
            Classical::K => "K",
            Classical::KStar => "Kstar",
            Classical::Calderon => "calderon",
        }
    }

    /// Precomputes the moments needed to evaluate `self f` anywhere.
    pub fn prepare(self, f: &GridFunction) -> Prepared {
        let m0 = || Moments::new(f, 0.0);
        let (primary, secondary) = match self {
            Classical::HardyAvg | Classical::H | Classical::HStar | Classical::K | Classical::KStar => (m0(), None),
            Classical::HardyAvgAdjoint | Classical::SStar => (Moments::new(f, -1.0), None),
            Classical::S => (Moments::new(f, 1.0), None),
            Classical::Calderon => (m0(), Some(Moments::new(f, -1.0))),
        };
        Prepared { op: self, primary, secondary }
    }

    /// `self f` resampled on the distinct abscissae of `f` (or on `grid` when given).
    pub fn apply(self, f: &GridFunction, grid: Option<&[f64]>) -> Result<GridFunction> {
        let p = self.prepare(f);
        let nodes = f.nodes();
        let xs = grid.unwrap_or(&nodes);
        crate::funcspace::cumulative::resample(xs, |x| p.at(x))
    }
}

impl fmt::Display for Classical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Classical {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Classical::ALL
            .iter()
            .copied()
            .find(|c| c.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Config(format!("unknown operator '{s}'")))
    }
}

/// A classical operator bound to one input function.
#[derive(Debug, Clone)]
pub struct Prepared {
    op: Classical,
    primary: Moments,
    secondary: Option<Moments>,
}

impl Prepared {
    pub fn at(&self, x: f64) -> f64 {
        let m = &self.primary;
        match self.op {
            Classical::HardyAvg => m.below(x) / x,
            Classical::HardyAvgAdjoint | Classical::HStar => m.above(x),
            Classical::S => m.below(x) / x,
            Classical::H => m.below(x),
            Classical::SStar => x * m.above(x),
            Classical::K => m.log_below(x),
            Classical::KStar => m.log_above(x),
            Classical::Calderon => {
                let adj = self.secondary.as_ref().expect("calderon keeps both moments");
                m.below(x) / x + adj.above(x)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chi01() -> GridFunction {
        GridFunction::indicator(0.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn closed_forms_on_indicator() {
        let f = chi01();
        assert!((Classical::HardyAvg.prepare(&f).at(2.0) - 0.5).abs() < 1e-15);
        let s = Classical::S.prepare(&f);
        for x in [0.3f64, 1.0, 4.0] {
            let exact = if x <= 1.0 { x / 2.0 } else { 1.0 / (2.0 * x) };
            assert!((s.at(x) - exact).abs() < 1e-15);
        }
        let kstar = Classical::KStar.prepare(&f);
        // ∫_x^1 ln(t/x) dt = ln(1/x) − 1 + x
        let x = 0.25f64;
        assert!((kstar.at(x) - ((1.0 / x).ln() - 1.0 + x)).abs() < 1e-14);
    }

    #[test]
    fn calderon_is_the_sum() {
        let f = GridFunction::new(vec![0.1, 1.0, 5.0], vec![4.0, 1.0, 0.2]).unwrap();
        let c = Classical::Calderon.prepare(&f);
        let a = Classical::HardyAvg.prepare(&f);
        let b = Classical::HardyAvgAdjoint.prepare(&f);
        for x in [0.01, 0.5, 3.0, 100.0] {
            assert_eq!(c.at(x), a.at(x) + b.at(x));
        }
    }

    #[test]
    fn narrow_block_gives_log_kernel() {
        let block = GridFunction::indicator(1.0, 1.01, 100.0).unwrap();
        let k = Classical::K.prepare(&block);
        for x in [3.0f64, 10.0, 1e3] {
            assert!((k.at(x) - x.ln()).abs() < 1e-2, "{x}: {}", k.at(x));
        }
    }

    #[test]
    fn names_round_trip() {
        for c in Classical::ALL {
            assert_eq!(c.name().parse::<Classical>().unwrap(), c);
        }
    }
}
