//! Exact sheaf cohomology and Čech cohomology on finite topological spaces.
//!
//! Finite T0 spaces are posets with the Alexandrov topology (open sets are
//! up-sets). Sheaves are order representations in finitely generated
//! abelian groups, and every group computation is exact over ℤ.
//!
//! The [`wedge`] module builds the finite truncations `X_N` of a wedge of
//! `N` closed disks together with the extension-by-zero sheaf of the union
//! of open 2-cells, on which Čech cohomology of a covering and sheaf
//! cohomology disagree in degree two. [`symcolim`] carries the infinite
//! limit of that gap symbolically.

pub mod abgroup;
pub mod cech;
pub mod cli;
pub mod cohom;
pub mod error;
pub mod finspace;
pub mod sheaf;
pub mod symcolim;
pub mod wedge;

pub use error::{Error, Result};
