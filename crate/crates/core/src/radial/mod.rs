//! Radial profiles on the unit disk: graded grids, piecewise-linear functions and the
//! integrals every other module consumes.

mod function;
mod grid;
mod io;

pub use function::RadialFunction;
pub use grid::{Grading, RadialGrid, DEFAULT_ENDPOINT_GAP, DEFAULT_NODES};
pub use io::{fmt_f64, read_profile_csv, write_profile_csv};

pub(crate) use io::read_two_columns;
