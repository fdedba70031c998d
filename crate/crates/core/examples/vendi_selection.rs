//! Pick a diverse subset of clustered points with the Vendi objective.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use spectral_appraise::linalg::DesignMatrix;
use spectral_appraise::objectives::{Normalization, PhiSpec, SpectralObjective};
use spectral_appraise::optimizer::{greedy_max, Constraint, GreedyOptions};
use spectral_appraise::SetObjective;

fn main() -> spectral_appraise::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let m = 16;
    let centers: Vec<Vec<f64>> = (0..4)
        .map(|_| (0..m).map(|_| rng.sample(StandardNormal)).collect())
        .collect();
    let mut rows = Vec::new();
    for i in 0..200 {
        let c = &centers[i % 4];
        rows.push(
            c.iter()
                .map(|x| x + 0.1 * rng.sample::<f64, _>(StandardNormal))
                .collect::<Vec<f64>>(),
        );
    }
    let design = DesignMatrix::from_rows(&rows)?;

    let mut obj = SpectralObjective::new(&design, PhiSpec::vendi(), Normalization::Trace1)?;
    let r = greedy_max(
        &mut obj,
        &Constraint::cardinality(8),
        GreedyOptions::default(),
    )?;
    let clusters: Vec<usize> = r.order.iter().map(|i| i % 4).collect();
    println!("order    {:?}", r.order);
    println!("clusters {clusters:?}");
    println!(
        "log-vendi {:.4}, vendi q=1 {:.3}, q=2 {:.3}",
        obj.value(),
        obj.vendi(1.0)?,
        obj.vendi(2.0)?
    );
    println!("{} gain evaluations", r.evaluations);
    Ok(())
}
