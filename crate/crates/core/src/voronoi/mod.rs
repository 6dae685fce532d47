//! Voronoi summation for `d(n)`: the classical Bessel form, the extended
//! identity on the circle `z = 1 - e^{-i delta}`, and the general identity for
//! a Mellin transform pair.

mod classical;
mod extended;
mod pair;

pub use classical::{
    voronoi_classical, voronoi_classical_residual, voronoi_main_term, voronoi_transform, ClassicalVoronoi,
    WeightFunction,
};

pub use extended::{coefficient_envelope, extended_voronoi, extended_voronoi_check, terms_for, ExtendedVoronoi};
pub use pair::{
    compact_display_rhs, gaussian_example, gaussian_example_full, gaussian_k_taylor, k_part, master_identity,
    master_identity_residual, residue_part, t_function, t_function_mellin, GaussianExample, MasterIdentity,
    TransformPair,
};
