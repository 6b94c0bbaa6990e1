//! Exact machinery for q-matroids: finite fields, subspace lattices, rank
//! tables with axiom checking and duality, rank-metric representability,
//! constant dimension codes, determinantal zero patterns, and counting
//! bounds. Everything is deterministic; canonical-v1 ordering fixes element
//! codes, subspace enumeration order, and every serialized artifact.

pub mod bounds;
pub mod cdc;
pub mod error;
pub mod field;
pub mod json;
pub mod lattice;
pub mod matrix;
pub mod qmatroid;
pub mod repr;
pub mod zeropattern;

pub use bounds::{
    asymptotic_table, crossover, lower_bound_n, lower_bound_n_all, qbinom_sandwich,
    upper_bound_r_all, upper_bound_r_rank1, upper_bound_r_rank_k, upper_bound_r_uniform,
    BoundRow, LogValue,
};
pub use cdc::{
    cdc_to_paving, gabidulin_code, grassmann_independent_check, greedy_grassmann_independent_set,
    lifted_mrd, lifted_mrd_exact_distance, ConstantDimensionCode,
};
pub use error::{Error, Result};
pub use field::{FieldElement, FieldSpec};
pub use lattice::{
    enumerate_grassmannian, gaussian_binomial, subspace_count, LatticeIndex, Subspace,
};
pub use matrix::Matrix;
pub use qmatroid::{enumerate_qmatroids, AxiomReport, AxiomViolation, RankTable, Structure};
pub use repr::{
    qmatroid_from_generator, rank_weight, search_representation, GeneratorMatrix, RankMetricCode,
};
pub use zeropattern::{
    pattern_of_qmatroid, zero_pattern_bound, zero_pattern_bound_linear, DetSystem, ZeroPattern,
};
