//! Incremental symmetric eigensolver for rank-one updates and downdates.
//!
//! The state keeps B = QΛQᵀ with Q orthonormal and Λ positive. A query for
//! B ± uuᵀ projects u onto Q, deflates zero weights and repeated eigenvalues,
//! and solves the secular equation for the eigenvalues that move. Commits also
//! rebuild the eigenvectors from the reconstructed Loewner weights.

mod deflation;
mod householder;
mod loewner;
mod secular;
mod state;

pub use deflation::{
    deflate, ActiveCoordinate, DeflationGroup, DeflationPlan, DeflationTolerances,
};
pub use householder::{householder_toward_axis, Reflector};
pub use loewner::loewner_weights;
pub use secular::{secular_roots, solve_secular, SecularProblem, SecularRoot};
pub use state::{
    interlaces, QueryScratch, RankOneQuery, SpectralState, UpdatedSpectrum, FAIL_DRIFT, PSD_REL,
    RANK_DROP_REL, RANK_INCREASE_REL, REORTH_DRIFT, REORTH_PERIOD,
};
