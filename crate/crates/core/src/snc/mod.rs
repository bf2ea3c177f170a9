//! Snc pairs `(X, Y)`: the nerve of `Y`, minimal strata and profound tori,
//! the connectivity condition on minimal strata, and the weight spectral
//! sequence of `X \ Y`.

pub mod fixtures;
mod nerve;
pub mod spectral;
pub mod torus;

pub use fixtures::{coordinate_simplex, SncFixture};
pub use nerve::{
    check_star_condition, stratify, Component, Curve, Face, Nerve, ProfoundTorus, SncPair, StarReport,
    Stratification, DEFAULT_LABEL,
};
pub use spectral::{
    bound_report, check_bound, top_weight_generators, weight_spectral_sequence, weight_ss, BoundReport,
    ComponentCohomology, StratumCohomology, TopWeightGenerators, WeightSpectralSequence, WeightTable,
};
