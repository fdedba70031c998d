//! Log-determinant selection, and the same objective grown then pruned.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use spectral_appraise::linalg::DesignMatrix;
use spectral_appraise::objectives::{Normalization, PhiSpec, SpectralObjective};
use spectral_appraise::optimizer::{greedy_max, Constraint, GreedyOptions};
use spectral_appraise::SetObjective;

fn main() -> spectral_appraise::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (n, m) = (100, 12);
    let data = (0..n * m).map(|_| rng.sample(StandardNormal)).collect();
    let design = DesignMatrix::new(n, m, data)?;

    for t in [1e-3, 1.0] {
        let mut obj =
            SpectralObjective::new(&design, PhiSpec::LogShift { t }, Normalization::None)?;
        let r = greedy_max(
            &mut obj,
            &Constraint::cardinality(6),
            GreedyOptions::default(),
        )?;
        println!("t = {t}: order {:?} value {:.4}", r.order, r.final_value);

        // removal gains say how much each chosen row contributes now
        let drop: Vec<String> = r
            .order
            .iter()
            .map(|&e| obj.remove_gain(e).map(|g| format!("{e}:{g:.3}")))
            .collect::<Result<_, _>>()?;
        println!("  removal gains {}", drop.join(" "));
        let weakest = r.order[r.order.len() - 1];
        obj.remove(weakest)?;
        println!("  after removing {weakest}: {:.4}", obj.value());
    }
    Ok(())
}
