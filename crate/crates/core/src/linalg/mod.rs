//! Exact linear algebra over the rationals: matrices, subspaces in canonical
//! form, and increasing filtrations.

mod filtration;
mod matrix;
pub mod rational;
mod subspace;

pub use filtration::Filtration;
pub use matrix::{Echelon, Matrix};
pub use rational::{format_rational, int, parse_rational, ratio, Rational};
pub use subspace::{image, kernel, ortho_complement, subspace_equal, Subspace};
