//! States, distances, entropies and the tensor plumbing beneath them.

pub mod format;
mod metrics;
pub mod random;
mod state;
pub mod tensor;

pub use metrics::{
    bures_distance, bures_from_fidelity, check_fuchs_van_de_graaf, entropy, fidelity, mi_continuity_bound,
    mi_correctability_bound, mi_correctability_monotone_limit, mutual_information, spectrum_entropy, trace_distance,
    FuchsVanDeGraaf, ENTROPY_CUTOFF,
};
pub use state::{partial_trace, tensor, PureState, StateMatrix};
