//! Numerical laboratory for Trudinger-Moser suprema with singular remainder terms on the
//! unit disk.
//!
//! Radial profiles live on graded grids ([`radial`]). [`forms`] evaluates `Q(u)`, `J(u)` and the
//! Onofri and Orlicz functionals, [`groundstate`] shoots the radial equation and classifies
//! the quadratic form, [`probe`] sweeps trial families and searches for large `J`, and
//! [`rearrange`] and [`audit`] check the inequalities on sampled profiles.

pub mod audit;
pub mod cli;
pub mod error;
pub mod forms;
pub mod groundstate;
pub mod potentials;
pub mod probe;
pub mod radial;
pub mod rearrange;

pub use error::{Error, Result};
