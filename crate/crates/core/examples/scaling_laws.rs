//! Size-based data scaling laws as set functions, including the epoch law.

use spectral_appraise::classic::{Domain, EmptyPolicy, EpochLaw, ScalingLaw, ScalingLawObjective};
use spectral_appraise::optimizer::{greedy_max, Constraint, GreedyOptions};

fn main() -> spectral_appraise::Result<()> {
    let chin = ScalingLaw::Chinchilla {
        c_prime: 1.0,
        b: 2.0,
        beta: 0.35,
        empty: EmptyPolicy::NegInfinity,
    };
    for d in [1.0, 10.0, 100.0, 1000.0] {
        println!("chinchilla d = {d:>6}: {:.4}", chin.value(&[d])?);
    }

    let epoch = EpochLaw::new(1.0, 2.0, 0.35, 1000.0, 2.0)?;
    println!("epoch law, budget 1000 samples");
    for d in [50.0, 100.0, 200.0, 333.0, 500.0, 999.0, 1000.0, 4000.0] {
        println!(
            "  d = {d:>6}: {} epochs, loss {:.5}",
            epoch.epochs(d),
            epoch.loss(d)
        );
    }
    for j in 2..=5 {
        println!(
            "  derivative jump at budget/{j}: {:.3e}",
            epoch.boundary_jump(j)
        );
    }

    // two domains with different returns; greedy balances the counts
    let law = ScalingLaw::Cluster {
        c_prime: 2.0,
        domains: vec![Domain { c: 1.0, beta: 0.8 }, Domain { c: 1.0, beta: 0.3 }],
    };
    let assignment: Vec<usize> = (0..40).map(|i| i % 2).collect();
    let mut obj = ScalingLawObjective::new(law, assignment)?;
    let r = greedy_max(
        &mut obj,
        &Constraint::cardinality(12),
        GreedyOptions::default(),
    )?;
    println!(
        "cluster law: counts per domain {:?}, value {:.4}",
        obj.counts(),
        r.final_value
    );
    Ok(())
}
