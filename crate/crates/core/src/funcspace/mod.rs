//! Functions and weights on the half line.

pub mod cone;
pub mod cumulative;
pub mod grid;
pub mod io;
pub mod weight;

pub use cone::{critical_exponent, sample_cone, ConeConfig, MonotoneSample, SampleKind};
pub use cumulative::{cumulative_i, cumulative_istar, Moments};
pub use grid::{default_grid, log_grid, merge_points, GridFunction, Piece, Profile, Segment, Shaped, Tail, Term};
pub use weight::Weight;
