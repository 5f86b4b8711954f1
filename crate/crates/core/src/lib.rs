//! Discrete 1-potential theory on weighted grids.
//!
//! The crate models a doubling metric measure space by a weighted regular grid
//! and provides exact graph versions of perimeter, total variation, obstacle
//! problems and variational 1-capacity, together with thinness profiles and an
//! executable weak Cartan construction.

pub mod bv;
pub mod cartan;
pub mod check;
pub mod error;
pub mod fine;
pub mod flow;
pub mod grid;
pub mod shapes;
pub mod variational;

pub use bv::{
    approx_limits, coarea_check, isoperimetric_check, mt_split, perimeter, total_variation,
    ApproxLimits, GridFunction, MtSplit, ScaleLimits,
};
pub use check::{CheckRow, Status};
pub use error::{LabError, Result};
pub use flow::{enumerate_oracle, min_cut, CutProblem, CutResult};
pub use grid::{
    annulus, ball, build_grid, closed_ball, estimate_constants, CellSet, GridSpace, Layout, Point,
    SpaceConstants, WeightSpec,
};
