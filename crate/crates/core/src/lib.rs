//! Exact computation with quasi-normed cones.
//!
//! Cones are polyhedral (or one of a few special families) inside `Q^n`, and
//! quasi-norms are piecewise linear, so every infimum, supremum and distance
//! in this crate is computed exactly by linear programming over the
//! rationals.

pub mod check;
pub mod cone;
pub mod cspace;
pub mod error;
pub mod io;
pub mod linalg;
pub mod lp;
pub mod operators;
pub mod oracle;
pub mod polyhedra;
pub mod qnorm;
pub mod quotient;
pub mod rational;
pub mod sample;

pub use cone::{ConeKind, ConeSpace, Subspace};
pub use error::{Error, Result};
pub use linalg::{Matrix, QVec};
pub use qnorm::{ExtReal, PLQuasiNorm};
pub use rational::Q;
