use super::cumulative::Moments;
use super::grid::{GridFunction, Tail};
use crate::error::{Error, Result};

/// A weight density `v` together with its cumulative `Iv(x) = ∫_0^x v`.
#[derive(Debug, Clone)]
pub struct Weight {
    density: GridFunction,
    cumulative: Moments,
    iv_infinite: bool,
}

impl Weight {
    /// Fails when `Iv(0+) ≠ 0`, i.e. the left tail exponent is `≤ −1`.
    pub fn new(density: GridFunction) -> Result<Self> {
        let cumulative = Moments::new(&density, 0.0);
        if !cumulative.left_integrable() {
            return Err(Error::invalid("weight is not integrable near 0 (left tail exponent must exceed -1)"));
        }
        if density.segments().iter().any(|s| matches!(s.piece, super::grid::Piece::Infinite)) {
            return Err(Error::invalid("weight must be finite"));
        }
        let iv_infinite = !cumulative.right_integrable();
        Ok(Weight { density, cumulative, iv_infinite })
    }

    pub fn unit() -> Self {
        Weight::new(GridFunction::constant(1.0)).expect("constant weight is valid")
    }

    pub fn density(&self) -> &GridFunction {
        &self.density
    }

    pub fn at(&self, x: f64) -> f64 {
        self.density.eval(x)
    }

    /// `Iv(x)`.
    pub fn iv(&self, x: f64) -> f64 {
        self.cumulative.below(x)
    }

    pub fn cumulative(&self) -> &Moments {
        &self.cumulative
    }

    /// Whether `Iv(∞) = ∞`.
    pub fn iv_infinite(&self) -> bool {
        self.iv_infinite
    }

    /// Exponent `a` of the model `v(x) ∝ x^a` near zero (`None` when `v` vanishes there).
    pub fn left_exponent(&self) -> Option<f64> {
        match self.density.left_tail() {
            Tail::Power(a) if self.density.ys()[0] > 0.0 => Some(a),
            _ => None,
        }
    }

    /// The same weight multiplied by a positive constant.
    pub fn scaled(&self, c: f64) -> Self {
        Weight::new(self.density.scaled(c)).expect("scaling preserves validity")
    }

    pub fn kinks(&self) -> Vec<f64> {
        self.density.nodes()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tail_classification() {
        assert!(Weight::unit().iv_infinite());
        assert!(Weight::new(GridFunction::power(1.0, -1.0)).is_err());
        let decaying = GridFunction::with_tails(vec![1.0], vec![1.0], Tail::Power(0.0), Tail::Power(-2.0)).unwrap();
        assert!(!Weight::new(decaying).unwrap().iv_infinite());
        let harmonic = GridFunction::with_tails(vec![1.0], vec![1.0], Tail::Power(0.0), Tail::Power(-1.0)).unwrap();
        assert!(Weight::new(harmonic).unwrap().iv_infinite());
    }

    #[test]
    fn cumulative_of_linear_weight() {
        let w = Weight::new(GridFunction::power(1.0, 1.0)).unwrap();
        assert!((w.iv(3.0) - 4.5).abs() < 1e-14);
    }
}
