//! Matrix-spectral set functions and the tools used to check their
//! (weak) submodularity.

mod normalize;
mod phi;
mod spectral;
mod vendi;
mod weak;

pub use normalize::{density_normalize, spectral_radius, Normalization};
pub use phi::{phi_derivative, phi_value, PhiSpec, DEFAULT_DPP_SHIFT, EIGEN_FLOOR};
pub use spectral::{spectral_eval, spectral_gain, DenseSpectralObjective, SpectralObjective};
pub use vendi::{unit_trace, vendi_score};
pub use weak::{
    counterexample_for, loewner_matrix, loewner_matrix_of_negated_derivative,
    matrix_antitone_counterexample_check, min_eigenvalue, zeta_bound, CounterexampleReport,
    ZetaReport,
};
