//! Max, min, stochastic, random and class-stratified selection on one objective.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spectral_appraise::classic::{build_similarity, FacilityLocation, Kernel};
use spectral_appraise::linalg::DesignMatrix;
use spectral_appraise::optimizer::*;
use spectral_appraise::SetObjective;

fn main() -> spectral_appraise::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let labels: Vec<usize> = (0..120).map(|i| i % 3).collect();
    let rows: Vec<Vec<f64>> = labels
        .iter()
        .map(|&c| {
            vec![
                c as f64 * 4.0 + rng.gen_range(-1.5..1.5),
                rng.gen_range(-1.5..1.5),
            ]
        })
        .collect();
    let design = DesignMatrix::from_rows(&rows)?;
    let base = FacilityLocation::new(build_similarity(&design, Kernel::default(), 32)?);
    let k = Constraint::cardinality(9);
    let per_class = Constraint::partition(labels.clone(), vec![3, 3, 3]);

    let report = |name: &str, r: &SelectionResult| {
        let counts: Vec<usize> = (0..3)
            .map(|c| r.order.iter().filter(|&&i| labels[i] == c).count())
            .collect();
        println!(
            "{name:<22} value {:>7.3}  per class {counts:?}  evaluations {}",
            r.final_value, r.evaluations
        );
    };
    report(
        "max (lazy)",
        &greedy_max(&mut base.clone(), &k, GreedyOptions::default())?,
    );
    report(
        "max (eager)",
        &greedy_max(
            &mut base.clone(),
            &k,
            GreedyOptions {
                lazy: false,
                parallel: true,
            },
        )?,
    );
    report(
        "max per class",
        &greedy_max(&mut base.clone(), &per_class, GreedyOptions::default())?,
    );
    report("min", &heuristic_greedy_min(&mut base.clone(), &k, &[])?);
    report(
        "min from prefix",
        &heuristic_greedy_min(&mut base.clone(), &k, &[0, 1, 2])?,
    );
    for eps in [0.5, 0.1, 0.01] {
        report(
            &format!("stochastic eps={eps}"),
            &stochastic_greedy(&mut base.clone(), &k, eps, 1)?,
        );
    }
    report("random", &random_selection(&mut base.clone(), 9, 1)?);
    let strat = stratified_random(&labels, &[3, 3, 3], 1)?;
    let mut obj = base.clone();
    report(
        "stratified random",
        &evaluate_sequence(&mut obj, &strat, "stratified", Some(1))?,
    );
    println!(
        "brute force is limited to n <= {BRUTE_FORCE_MAX_N}; here n = {}",
        obj.ground_size()
    );
    Ok(())
}
