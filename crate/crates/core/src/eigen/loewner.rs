use super::secular::SecularRoot;
use crate::error::{Error, Result};

/// Given strictly interlacing spectra old_1 < new_1 < old_2 < … < old_p < new_p
/// (both ascending), return the unique positive ṽ with eig(diag(old) + ṽṽᵀ) = new.
pub fn loewner_weights(old: &[f64], new: &[f64]) -> Result<Vec<f64>> {
    if old.len() != new.len() {
        return Err(Error::invalid("old and new spectra differ in length"));
    }
    let scale = old
        .iter()
        .chain(new)
        .fold(0.0f64, |a, &x| a.max(x.abs()))
        .max(f64::MIN_POSITIVE);
    let tol = 1e-12 * scale;
    let p = old.len();
    for i in 0..p {
        let upper = if i + 1 < p { old[i + 1] } else { f64::INFINITY };
        if new[i] < old[i] - tol || new[i] > upper + tol {
            return Err(Error::numerical(
                "loewner reconstruction",
                format!("interlacing violated at position {i}"),
            ));
        }
    }
    Ok(weights_from(
        p,
        |i, j| new[j] - old[i],
        |i, j| old[j] - old[i],
    ))
}

/// Same reconstruction using roots kept in origin/offset form.
pub(crate) fn loewner_weights_from_roots(poles: &[f64], roots: &[SecularRoot]) -> Vec<f64> {
    weights_from(
        poles.len(),
        |i, j| -roots[j].gap(poles, i),
        |i, j| poles[j] - poles[i],
    )
}

/// ṽ_i² = (μ_i − d_i) · Π_{j≠i} (μ_j − d_i)/(d_j − d_i), each ratio positive.
fn weights_from(
    p: usize,
    root_minus_pole: impl Fn(usize, usize) -> f64,
    pole_minus_pole: impl Fn(usize, usize) -> f64,
) -> Vec<f64> {
    (0..p)
        .map(|i| {
            let mut prod = root_minus_pole(i, i);
            for j in (0..p).filter(|&j| j != i) {
                prod *= root_minus_pole(i, j) / pole_minus_pole(i, j);
            }
            prod.max(0.0).sqrt()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_unit_weights() {
        let s5 = 5f64.sqrt();
        let v = loewner_weights(&[1.0, 2.0], &[(5.0 - s5) / 2.0, (5.0 + s5) / 2.0]).unwrap();
        assert!((v[0] - 1.0).abs() < 1e-14 && (v[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn single_coordinate() {
        let v = loewner_weights(&[3.0], &[7.0]).unwrap();
        assert!((v[0] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_broken_interlacing() {
        assert!(loewner_weights(&[1.0, 2.0], &[2.5, 3.0]).is_err());
    }
}
