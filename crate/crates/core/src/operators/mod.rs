//! Dunkl-Hausdorff, Hardy-type and generalized Hardy operators.

pub mod classical;
pub mod decompose;
pub mod dunkl;
pub mod kernel;
pub mod multiplier;

pub use classical::{Classical, Prepared};
pub use decompose::{decompose_HIstar, decompose_points, hausdorff_reduces_to_hardy, Decomposition, DecompositionPoint, HardyReduction};
pub use dunkl::{dunkl_hausdorff_adjoint_point, dunkl_hausdorff_at, dunkl_hausdorff_partial, dunkl_hausdorff_point};
pub use kernel::{Kernel, KernelAxioms};
pub use multiplier::{check_phi_condition, MultiplierFunction, PhiBounds, PhiCondition, RegionFit};

use crate::error::Result;
use crate::funcspace::{default_grid, GridFunction};

/// Output abscissae: those of the input, or the default grid when the input
/// has fewer than two distinct abscissae.
pub fn output_grid(f: &GridFunction) -> Vec<f64> {
    let nodes = f.nodes();
    if nodes.len() < 2 {
        default_grid()
    } else {
        nodes
    }
}

/// `H_{α,φ}f` resampled on `grid` (default: [`output_grid`]).
pub fn dunkl_hausdorff(mf: &MultiplierFunction, f: &GridFunction, grid: Option<&[f64]>) -> Result<GridFunction> {
    let xs = grid.map(<[f64]>::to_vec).unwrap_or_else(|| output_grid(f));
    let ys = crate::par::map(&xs, |&x| dunkl_hausdorff_point(mf, f, x));
    GridFunction::new(xs, ys)
}

/// `H*_{α,φ}g` resampled on `grid` (default: [`output_grid`]).
pub fn dunkl_hausdorff_adjoint(mf: &MultiplierFunction, g: &GridFunction, grid: Option<&[f64]>) -> Result<GridFunction> {
    let xs = grid.map(<[f64]>::to_vec).unwrap_or_else(|| output_grid(g));
    let ys = crate::par::map(&xs, |&x| dunkl_hausdorff_adjoint_point(mf, g, x));
    GridFunction::new(xs, ys)
}
