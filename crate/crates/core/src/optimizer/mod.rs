//! Greedy-family subset selection under cardinality and partition-matroid
//! constraints.

mod brute;
mod constraint;
mod greedy;

pub use brute::{brute_force_constrained, brute_force_opt, BRUTE_FORCE_MAX_N};
pub use constraint::Constraint;
pub use greedy::{
    evaluate_sequence, greedy_max, heuristic_greedy_min, random_selection, stochastic_greedy,
    stochastic_sample_size, stratified_random, tie_tolerance, GreedyOptions, SelectionResult,
};
