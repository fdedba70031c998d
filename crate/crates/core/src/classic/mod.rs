//! Facility location over sparse similarities and data scaling-law objectives.

mod facility;
mod scaling;
mod similarity;

pub use facility::{fl_commit, fl_eval, fl_gain, FacilityLocation};
pub use scaling::{
    scaling_law_value, Domain, EmptyPolicy, EpochLaw, ScalingLaw, ScalingLawObjective,
};
pub use similarity::{build_similarity, kernel_value, Kernel, SparseSimilarity, DEFAULT_TOP_K};
