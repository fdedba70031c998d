use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{dense_eigen_oracle, dot, DesignMatrix};

/// How rows of the design matrix are scaled before building B.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    None,
    /// Unit rows scaled by 1/√n, so trace(B_V) = 1.
    #[default]
    Trace1,
    /// Trace1 followed by a rescale to λ_max(B_V) = 1/e.
    Emax,
}

impl std::str::FromStr for Normalization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Self::None),
            "trace1" | "density_trace1" => Ok(Self::Trace1),
            "emax" | "monotone_e_lambda_max" => Ok(Self::Emax),
            other => Err(Error::invalid(format!("unknown normalization '{other}'"))),
        }
    }
}

/// Largest eigenvalue of DᵀD, via whichever Gram matrix is smaller.
pub fn spectral_radius(design: &DesignMatrix) -> f64 {
    let (n, m) = (design.rows(), design.cols());
    if n == 0 {
        return 0.0;
    }
    let eig = if m <= n {
        dense_eigen_oracle(&design.gram(&(0..n).collect::<Vec<_>>()), m)
    } else {
        let mut k = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let v = dot(design.row(i), design.row(j));
                k[i * n + j] = v;
                k[j * n + i] = v;
            }
        }
        dense_eigen_oracle(&k, n)
    };
    eig.last().copied().unwrap_or(0.0).max(0.0)
}

pub fn density_normalize(design: &DesignMatrix, mode: Normalization) -> Result<DesignMatrix> {
    if mode == Normalization::None {
        return Ok(design.clone());
    }
    let (n, m) = (design.rows(), design.cols());
    if n == 0 {
        return Err(Error::invalid("cannot normalize an empty design matrix"));
    }
    let mut out = design.clone();
    let root_n = (n as f64).sqrt();
    for i in 0..n {
        let norm = dot(design.row(i), design.row(i)).sqrt();
        if norm == 0.0 {
            return Err(Error::invalid(format!(
                "row {i} is zero and cannot be normalized"
            )));
        }
        for x in &mut out.as_mut_slice()[i * m..(i + 1) * m] {
            *x /= norm * root_n;
        }
    }
    if mode == Normalization::Emax {
        let lmax = spectral_radius(&out);
        let s = (1.0 / (std::f64::consts::E * lmax)).sqrt();
        for x in out.as_mut_slice() {
            *x *= s;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trace_one() {
        let d =
            DesignMatrix::from_rows(&[vec![3.0, 4.0], vec![1.0, 0.0], vec![0.0, -2.0]]).unwrap();
        let out = density_normalize(&d, Normalization::Trace1).unwrap();
        let trace: f64 = out.as_slice().iter().map(|x| x * x).sum();
        assert!((trace - 1.0).abs() < 1e-15);
    }

    #[test]
    fn single_row() {
        let d = DesignMatrix::from_rows(&[vec![2.0, 1.0]]).unwrap();
        let t = density_normalize(&d, Normalization::Trace1).unwrap();
        assert!((spectral_radius(&t) - 1.0).abs() < 1e-15);
        let e = density_normalize(&d, Normalization::Emax).unwrap();
        assert!((spectral_radius(&e) - (-1f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn zero_row_is_named() {
        let d = DesignMatrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 0.0]]).unwrap();
        let err = density_normalize(&d, Normalization::Trace1).unwrap_err();
        assert!(err.to_string().contains("row 1"));
    }
}
