//! Logical-operator cleaning, the lemma drivers built on it, and tradeoff-bound checks.

pub mod bounds;
pub mod degeneracy;
pub mod lemmas;
pub mod pullback;
pub mod suite;
pub mod transfer;

/// Schema version stamped on every report.
pub const REPORT_VERSION: u32 = 1;

pub use bounds::{
    code_distance_bound_check, evaluate_exponential_profile, evaluate_tradeoff, logical_support_evaluate,
    logical_support_params, BoundEvaluation, CodeParameters, DistanceBoundReport, ExponentialProfile,
    LogicalSupportReport,
};
pub use degeneracy::{
    flexible_degeneracy_check, flexible_degeneracy_check_with, flexible_operators, DegeneracyReport, FlexibleOperators,
};
pub use lemmas::{expansion_lemma_apply, union_lemma_apply, ExpansionReport, UnionReport};
pub use pullback::{
    cleaning_norms, cleaning_reports, code_marginal, converse_cleaning, pull_back_logical, sup_product_distance,
    twirl_defect, verify_cleaning, CleaningReport, ConverseReport, CLEANING_TOL, CONVERSE_TOL, MAX_PULLBACK_QUBITS,
};
pub use suite::{equivalence_suite, EquivalenceReport, EXACT_TOL, MAX_SUITE_QUBITS};
pub use transfer::{perturbation_transfer_check, TransferReport, MAX_TRANSFER_QUBITS, TRANSFER_TOL};
