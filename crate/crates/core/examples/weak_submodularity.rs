//! Which φ give submodular spectral functions, and how weak the others are.

use spectral_appraise::objectives::{
    loewner_matrix_of_negated_derivative, matrix_antitone_counterexample_check, min_eigenvalue,
    zeta_bound, PhiSpec,
};

fn main() -> spectral_appraise::Result<()> {
    let points = [0.5, 1.0, 2.0, 3.5];
    for phi in [
        PhiSpec::vendi(),
        PhiSpec::dpp(),
        PhiSpec::Power { eta: 0.5 },
        PhiSpec::NegPower { eta: 1.5 },
    ] {
        let l = loewner_matrix_of_negated_derivative(&phi, &points)?;
        println!(
            "{:>10}: Loewner min eigenvalue {:+.3e}",
            phi.name(),
            min_eigenvalue(&l, points.len())
        );
    }

    let l = loewner_matrix_of_negated_derivative(
        &PhiSpec::Powerlaw {
            alpha: 1.0,
            beta: 0.0,
        },
        &[1.0, 2.0, 3.0],
    )?;
    println!(
        "-y^-2 at (1,2,3): min eigenvalue {:.7}",
        min_eigenvalue(&l, 3)
    );
    let r = matrix_antitone_counterexample_check();
    println!(
        "-exp(-x): eigenvalues of g(B) - g(A) {:?}",
        r.difference_eigenvalues
    );

    for phi in [
        PhiSpec::Powerlaw {
            alpha: 1.0,
            beta: 1.0,
        },
        PhiSpec::Satexp,
        PhiSpec::Ratio { alpha: 1.0 },
    ] {
        for rho in [0.1, 1.0, 5.0] {
            let z = zeta_bound(&phi, rho)?;
            println!(
                "{:>9} rho = {rho:>3}: zeta {:.4}, greedy bound {:.4}",
                phi.name(),
                z.zeta,
                z.greedy_bound
            );
        }
    }
    Ok(())
}
