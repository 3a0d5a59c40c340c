//! Exact linear algebra over the Gaussian rationals for linear relations and
//! matrix pencils: Weyr characteristics, Kronecker invariants, strict
//! equivalence, and rank-one perturbation bounds.

pub mod error;
pub mod matrix;
pub mod pencil;
pub mod perturb;
pub mod poly;
pub mod random;
pub mod relation;
pub mod scalar;
pub mod subspace;
pub mod weyr;

pub use error::{Error, Result};
pub use matrix::ExactMatrix;
pub use pencil::{
    apply_pencil_equivalence, build_kronecker, invariants_from_weyr, minimal_rows_kernel,
    minimal_rows_range, pencil_eigenvalues, pencil_weyr_from_invariants, pencil_weyr_via_kernel,
    pencil_weyr_via_range, strictly_equivalent_pencils, KroneckerInvariants, Pencil, PencilWeyr,
};
pub use perturb::{
    check_representation_transfer, orthogonal_complement, perturbation_bound_report,
    rank_one_pencil, relation_perturbation_rank, run_perturbation_trials, BoundReport,
    PerturbationForm, RankOnePencil, TrialConfig, TrialSummary,
};
pub use poly::{rational_roots, smith_normal_form, Poly, PolyMatrix};
pub use relation::{transform_singular_chain, Chain, LinearRelation, Powers};
pub use scalar::{Rational, Scalar};
pub use subspace::Subspace;
pub use weyr::{
    multi_index_add, proper_finite_eigenvalues, strictly_equivalent_relations, weyr_at,
    weyr_characteristic, weyr_inf, weyr_multishift, weyr_singular, Partition,
    WeyrCharacteristic,
};
