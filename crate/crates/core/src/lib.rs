//! Exact computations around weight filtrations.
//!
//! * [`linalg`]: rational matrices, subspaces and filtrations.
//! * [`mwf`]: monodromy weight filtration of a nilpotent operator.
//! * [`snc`]: nerves of normal crossings divisors, profound tori and the
//!   weight spectral sequence of the complement.
//! * [`degen`]: limit weight filtrations of semistable degenerations.
//! * [`k3`]: the K3 lattice, the operator `N_{β,ρ}` and its filtration.
//! * [`lefschetz`]: SL2(Z) Dehn twist words of elliptic Lefschetz fibrations.
//! * [`pw`]: perverse Leray filtrations of fibered surfaces and P = W checks.
//! * [`cli`]: the JSON report driver behind the `profound` binary.

pub mod cli;
pub mod degen;
pub mod error;
pub mod k3;
pub mod lefschetz;
pub mod linalg;
pub mod mwf;
pub mod pw;
pub mod snc;

pub use error::{Error, Result};
