//! Coreset selection with facility location over a sparse RBF similarity.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spectral_appraise::classic::{build_similarity, FacilityLocation, Kernel};
use spectral_appraise::linalg::DesignMatrix;
use spectral_appraise::optimizer::{greedy_max, Constraint, GreedyOptions};

fn main() -> spectral_appraise::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let rows: Vec<Vec<f64>> = (0..300)
        .map(|_| vec![rng.gen_range(0.0..10.0), rng.gen_range(0.0..10.0)])
        .collect();
    let design = DesignMatrix::from_rows(&rows)?;
    let sim = build_similarity(&design, Kernel::Rbf { sigma: 2.0 }, 64)?;
    println!(
        "{} stored similarities ({} per column at most)",
        sim.nnz(),
        sim.top_k()
    );

    let base = FacilityLocation::new(sim);
    for k in [5, 10, 20] {
        let mut fl = base.clone();
        let r = greedy_max(
            &mut fl,
            &Constraint::cardinality(k),
            GreedyOptions::default(),
        )?;
        let centers: Vec<String> = r
            .order
            .iter()
            .map(|&i| format!("({:.1},{:.1})", rows[i][0], rows[i][1]))
            .collect();
        println!(
            "k = {k:>2}: coverage {:.2}  {}",
            r.final_value,
            centers.join(" ")
        );
    }
    Ok(())
}
