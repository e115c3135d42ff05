//! Correctability measures: exact checks, recovery channels, decoupling, and intervals.

mod blocks;
pub mod channel;
mod decoupling;
mod extension;
mod interval;
mod kl;
mod petz;
mod recovery;
pub mod search;

pub use blocks::{tau_of, vec_of, SUPPORT_CUTOFF};
pub use channel::{Completion, KrausTerm, QuantumChannel};
pub use decoupling::DecouplingModel;
pub use extension::unitary_extension;
pub use interval::{
    decoupling_mu, decoupling_mu_probed, delta_ell_interval, disentangling_check, interval_for_channel, recovery_error, recovery_error_probed,
    sandwich_from_interval, shell_and_far, verify_decoupling_sandwich, CorrectabilityInterval, DisentanglingReport,
    SandwichReport, INTERVAL_SLACK, SANDWICH_TOL,
};
pub use kl::{knill_laflamme_check, KlReport, KL_TOL, MAX_KL_SITES};
pub use petz::petz_recovery;
pub use recovery::RecoveryModel;
pub use search::{maximize, MatrixJson, SearchBudget, SearchDiagnostics, SearchResult};
