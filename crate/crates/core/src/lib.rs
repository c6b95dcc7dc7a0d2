//! Kaczmarz iteration over finite-dimensional real or complex spaces, in three
//! variants: the classical scheme that projects onto one measurement direction
//! per step, the dual scheme that reads with one sequence and corrects with
//! another, and an augmented scheme that replays classical measurements
//! through a synthesis sequence built from auxiliary-frame data.
//!
//! Alongside the iterations the crate carries the diagnostics that decide
//! whether an iteration reconstructs every vector: auxiliary sequences and
//! their frame bounds, triangular sections of inner-product matrices and their
//! partial-isometry defects, spectral effectiveness oracles for periodic
//! sequences, and constructors that transport effectiveness through invertible
//! operators or recover the operator relating the two halves of a pair.

pub mod classic;
pub mod construct;
pub mod dual;
pub mod fixtures;
pub mod frames;
pub mod linalg;
pub mod random;
pub mod sequence;

mod error;
mod subspace;

pub use error::{Error, Result};

pub use classic::{
    almost_effective_bound, auxiliary_h, periodic_effectiveness_oracle, run_classic,
    triangular_section, AlmostEffectiveBound, IterationTrace, SequenceVerdict, TriangularSection,
};
pub use construct::{
    biorthogonal_pair, lift_half_power, pair_from_effective, recover_relating_operator,
    run_augmented, synthesis_dual_from_almost_effective, transform_pair, AugmentedRun,
    RecoveredOperator,
};
pub use dual::{
    auxiliary_pair, effective_pair_oracle, equivalence_report, mixed_triangular_section,
    partial_isometry_test, partial_sum_identity_check, run_dual, DualAuxiliary,
    EquivalenceReport, PairVerdict, PartialIsometryReport,
};
pub use frames::{
    analysis_coeffs, canonical_dual, duality_check, frame_bounds, frame_operator_partial,
    grammian_positive, mixed_grammian, synthesis_apply, DualityReport, FrameBounds,
    GrammianOrientation, GrammianSection, GrammianVerdict,
};
pub use linalg::{
    hermitian_eig, inner, is_psd, positive_sqrt, pseudo_inverse, spectral_radius,
    EigDecomposition, Field, FieldScalar, PsdVerdict, DEFAULT_TOL,
};
pub use sequence::{
    validate, Check, Extension, SequencePair, ValidationMode, ValidationReport, VectorSequence,
};

pub use nalgebra::{Complex, DMatrix, DVector};
