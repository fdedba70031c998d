use serde::Serialize;

use super::phi::PhiSpec;
use crate::error::{Error, Result};
use crate::linalg::{dense_eigen_oracle, matrix_function};

/// Weak diminishing-returns ratio for a concave, increasing φ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZetaReport {
    pub zeta: f64,
    pub spectral_radius: f64,
    /// 1 − e^{−ζ}.
    pub greedy_bound: f64,
}

/// ζ = φ′(ρ_V)/φ′(0) and the matching greedy bound.
pub fn zeta_bound(phi: &PhiSpec, spectral_radius: f64) -> Result<ZetaReport> {
    if !(spectral_radius >= 0.0 && spectral_radius.is_finite()) {
        return Err(Error::invalid("spectral radius must be finite and >= 0"));
    }
    let d0 = phi.derivative(0.0);
    if !d0.is_finite() || d0 <= 0.0 {
        return Err(Error::UnsupportedPhi(format!(
            "{} has phi'(0) = {d0}; the ratio needs a finite positive value",
            phi.name()
        )));
    }
    let dr = phi.derivative(spectral_radius);
    let everywhere_increasing = matches!(
        phi,
        PhiSpec::LogShift { .. }
            | PhiSpec::Power { .. }
            | PhiSpec::Powerlaw { .. }
            | PhiSpec::Satexp
            | PhiSpec::Ratio { .. }
    );
    // φ′ underflows to 0 for large radii.
    if dr == 0.0 && everywhere_increasing {
        return Ok(ZetaReport {
            zeta: 0.0,
            spectral_radius,
            greedy_bound: 0.0,
        });
    }
    if !(dr > 0.0) {
        return Err(Error::UnsupportedPhi(format!(
            "{} is not increasing up to {spectral_radius}",
            phi.name()
        )));
    }
    let zeta = (dr / d0).min(1.0);
    Ok(ZetaReport {
        zeta,
        spectral_radius,
        greedy_bound: -(-zeta).exp_m1(),
    })
}

/// Loewner matrix of divided differences, row-major.
pub fn loewner_matrix(
    points: &[f64],
    g: impl Fn(f64) -> f64,
    dg: impl Fn(f64) -> f64,
) -> Result<Vec<f64>> {
    if points.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::invalid("Loewner points must be strictly increasing"));
    }
    let n = points.len();
    let gv: Vec<f64> = points.iter().map(|&x| g(x)).collect();
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            l[i * n + j] = if i == j {
                dg(points[i])
            } else {
                (gv[i] - gv[j]) / (points[i] - points[j])
            };
        }
    }
    Ok(l)
}

/// Loewner matrix of −φ′.
pub fn loewner_matrix_of_negated_derivative(phi: &PhiSpec, points: &[f64]) -> Result<Vec<f64>> {
    loewner_matrix(
        points,
        |x| -phi.derivative(x),
        |x| -phi.second_derivative(x),
    )
}

pub fn min_eigenvalue(matrix: &[f64], n: usize) -> f64 {
    dense_eigen_oracle(matrix, n)
        .first()
        .copied()
        .unwrap_or(0.0)
}

/// Result of the fixed matrix example showing that −e^{−x} is not matrix
/// monotone.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CounterexampleReport {
    /// Ascending eigenvalues of B − A.
    pub increment_eigenvalues: Vec<f64>,
    /// Descending-magnitude order as usually quoted: eigenvalues of g(B) − g(A).
    pub difference_eigenvalues: Vec<f64>,
    pub difference_is_psd: bool,
}

/// A = diag(1,2,3), B = A + 0.1·11ᵀ, g(x) = −e^{−x}.
pub fn matrix_antitone_counterexample_check() -> CounterexampleReport {
    let a = [1.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 3.0];
    let b: Vec<f64> = a.iter().map(|x| x + 0.1).collect();
    counterexample_for(&a, &b, |x| -(-x).exp())
}

/// Eigen-report for g(B) − g(A) with 3×3 (or any m×m) row-major inputs.
pub fn counterexample_for(
    a: &[f64],
    b: &[f64],
    g: impl Fn(f64) -> f64 + Copy,
) -> CounterexampleReport {
    let m = (a.len() as f64).sqrt() as usize;
    let inc: Vec<f64> = b.iter().zip(a).map(|(x, y)| x - y).collect();
    let gb = matrix_function(b, m, g);
    let ga = matrix_function(a, m, g);
    let diff: Vec<f64> = gb.iter().zip(&ga).map(|(x, y)| x - y).collect();
    let mut diff_eig = dense_eigen_oracle(&diff, m);
    diff_eig.sort_by(|x, y| y.abs().total_cmp(&x.abs()));
    let tol = 1e-12;
    CounterexampleReport {
        increment_eigenvalues: dense_eigen_oracle(&inc, m),
        difference_is_psd: diff_eig.iter().all(|&x| x >= -tol),
        difference_eigenvalues: diff_eig,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn satexp_large_radius_gives_zero() {
        assert_eq!(zeta_bound(&PhiSpec::Satexp, 2000.0).unwrap().zeta, 0.0);
        assert!(zeta_bound(&PhiSpec::vendi(), 2000.0).is_err());
    }

    #[test]
    fn zeta_at_zero_is_one() {
        for phi in [
            PhiSpec::Satexp,
            PhiSpec::Ratio { alpha: 2.0 },
            PhiSpec::LogShift { t: 0.5 },
        ] {
            assert_eq!(zeta_bound(&phi, 0.0).unwrap().zeta, 1.0);
        }
    }

    #[test]
    fn singular_derivative_rejected() {
        assert!(matches!(
            zeta_bound(&PhiSpec::vendi(), 0.1),
            Err(Error::UnsupportedPhi(_))
        ));
        assert!(zeta_bound(&PhiSpec::Power { eta: 0.5 }, 0.1).is_err());
    }

    #[test]
    fn linear_loewner_is_rank_one() {
        let l = loewner_matrix(&[0.5, 1.0, 4.0], |x| 3.0 * x - 1.0, |_| 3.0).unwrap();
        assert!(l.iter().all(|&x| (x - 3.0).abs() < 1e-15));
        assert!(min_eigenvalue(&l, 3).abs() < 1e-12);
    }

    #[test]
    fn duplicate_points_rejected() {
        assert!(loewner_matrix(&[1.0, 1.0], |x| x, |_| 1.0).is_err());
    }

    #[test]
    fn identical_matrices_give_zero_difference() {
        let a = [1.0, 0.0, 0.0, 2.0];
        let r = counterexample_for(&a, &a, |x| -(-x).exp());
        assert!(r.difference_is_psd);
        assert!(r.difference_eigenvalues.iter().all(|x| x.abs() < 1e-15));
    }
}
