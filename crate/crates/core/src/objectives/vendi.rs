use crate::error::{Error, Result};
use crate::linalg::compensated_sum;

/// Renyi Vendi score of order q of a spectrum (used as given).
///
/// q = 1 is exp of the Shannon entropy, q = 0 counts nonzero eigenvalues and
/// q = ∞ is 1/λ_max.
pub fn vendi_score(eigvals: &[f64], q: f64) -> Result<f64> {
    if !(q >= 0.0) {
        return Err(Error::invalid(format!("vendi order must be >= 0, got {q}")));
    }
    let lam = eigvals
        .iter()
        .copied()
        .filter(|&x| x > super::phi::EIGEN_FLOOR);
    if q == 0.0 {
        return Ok(lam.count() as f64);
    }
    if q == 1.0 {
        return Ok(compensated_sum(lam.map(|x| -x * x.ln())).exp());
    }
    if q.is_infinite() {
        let max = lam.fold(0.0f64, f64::max);
        return Ok(if max > 0.0 { 1.0 / max } else { 0.0 });
    }
    let s = compensated_sum(lam.map(|x| x.powf(q)));
    if s == 0.0 {
        return Ok(0.0);
    }
    Ok((s.ln() / (1.0 - q)).exp())
}

/// Rescale a spectrum to unit sum; an all-zero spectrum is returned as is.
pub fn unit_trace(eigvals: &[f64]) -> Vec<f64> {
    let total = compensated_sum(eigvals.iter().copied().filter(|&x| x > 0.0));
    if total > 0.0 {
        eigvals.iter().map(|&x| x / total).collect()
    } else {
        eigvals.to_vec()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_trace_rescales() {
        let v = vendi_score(&unit_trace(&[0.02, 0.02]), 2.0).unwrap();
        assert!((v - 2.0).abs() < 1e-14);
    }

    #[test]
    fn uniform_spectrum_any_order() {
        for q in [0.0, 0.5, 1.0, 2.0, 7.0, f64::INFINITY] {
            assert!((vendi_score(&[0.5, 0.5], q).unwrap() - 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn order_zero_counts() {
        assert_eq!(vendi_score(&[1.0, 0.0, 0.0], 0.0).unwrap(), 1.0);
    }

    #[test]
    fn order_two() {
        let v = vendi_score(&[0.5, 0.25, 0.25], 2.0).unwrap();
        assert!((v - 8.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn negative_order_rejected() {
        assert!(vendi_score(&[1.0], -0.5).is_err());
    }
}
