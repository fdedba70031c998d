//! Dense helpers: the design matrix, compensated summation and the dense
//! symmetric eigensolver used as a reference.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// An n×m matrix of sample embeddings stored row-major. Row i is element i of
/// the ground set.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix {
    n: usize,
    m: usize,
    data: Vec<f64>,
}

impl DesignMatrix {
    pub fn new(n: usize, m: usize, data: Vec<f64>) -> Result<Self> {
        if m == 0 {
            return Err(Error::invalid("design matrix needs at least one column"));
        }
        if data.len() != n * m {
            return Err(Error::invalid(format!(
                "expected {} values for a {n}x{m} matrix, got {}",
                n * m,
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|x| !x.is_finite()) {
            return Err(Error::invalid(format!(
                "non-finite value at row {}, column {}",
                pos / m,
                pos % m
            )));
        }
        Ok(Self { n, m, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let m = rows.first().map_or(0, Vec::len);
        if let Some(i) = rows.iter().position(|r| r.len() != m) {
            return Err(Error::invalid(format!("row {i} has a different length")));
        }
        Self::new(rows.len(), m, rows.concat())
    }

    pub fn rows(&self) -> usize {
        self.n
    }

    pub fn cols(&self) -> usize {
        self.m
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.m..(i + 1) * self.m]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    /// Dense m×m Gram matrix Σ_{i∈subset} x_i x_iᵀ, row-major.
    pub fn gram(&self, subset: &[usize]) -> Vec<f64> {
        let m = self.m;
        let mut b = vec![0.0; m * m];
        for &i in subset {
            add_outer(&mut b, self.row(i), 1.0);
        }
        b
    }
}

/// b += rho·x xᵀ for a row-major square matrix.
pub fn add_outer(b: &mut [f64], x: &[f64], rho: f64) {
    let m = x.len();
    for (r, &xr) in x.iter().enumerate() {
        if xr == 0.0 {
            continue;
        }
        let s = rho * xr;
        for (bc, &xc) in b[r * m..(r + 1) * m].iter_mut().zip(x) {
            *bc += s * xc;
        }
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Neumaier's compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut acc = CompensatedSum::new();
    for v in values {
        acc.add(v);
    }
    acc.value()
}

/// Ascending eigenvalues of a symmetric row-major m×m matrix.
pub fn dense_eigen_oracle(b: &[f64], m: usize) -> Vec<f64> {
    assert_eq!(b.len(), m * m, "matrix must be m×m");
    if m == 0 {
        return Vec::new();
    }
    let mat = DMatrix::from_row_slice(m, m, b);
    let mut eig: Vec<f64> = mat.symmetric_eigenvalues().iter().copied().collect();
    eig.sort_by(f64::total_cmp);
    eig
}

/// Eigenvalues (ascending) and matching unit eigenvectors (as columns of a
/// row-major m×m matrix).
pub fn dense_eigen_decomposition(b: &[f64], m: usize) -> (Vec<f64>, Vec<f64>) {
    let mat = DMatrix::from_row_slice(m, m, b);
    let eig = mat.symmetric_eigen();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = vec![0.0; m * m];
    for (c, &i) in order.iter().enumerate() {
        for r in 0..m {
            vectors[r * m + c] = eig.eigenvectors[(r, i)];
        }
    }
    (values, vectors)
}

/// f(B) for symmetric B via its eigendecomposition, row-major.
pub fn matrix_function(b: &[f64], m: usize, f: impl Fn(f64) -> f64) -> Vec<f64> {
    let (vals, vecs) = dense_eigen_decomposition(b, m);
    let mut out = vec![0.0; m * m];
    for (k, &lam) in vals.iter().enumerate() {
        let fl = f(lam);
        for r in 0..m {
            let vr = vecs[r * m + k] * fl;
            for c in 0..m {
                out[r * m + c] += vr * vecs[c * m + k];
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_spectrum() {
        let b = [1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0];
        assert_eq!(dense_eigen_oracle(&b, 3), vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn diagonal_plus_rank_one() {
        let mut b = vec![1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 2.0];
        add_outer(&mut b, &[3.0, 4.0, 0.0], 1.0);
        let eig = dense_eigen_oracle(&b, 3);
        for (a, e) in eig.iter().zip([1.0, 2.0, 26.0]) {
            assert!((a - e).abs() < 1e-12);
        }
    }

    #[test]
    fn two_by_two_closed_form() {
        let eig = dense_eigen_oracle(&[2.0, 1.0, 1.0, 3.0], 2);
        let s5 = 5f64.sqrt();
        assert!((eig[0] - (5.0 - s5) / 2.0).abs() < 1e-14);
        assert!((eig[1] - (5.0 + s5) / 2.0).abs() < 1e-14);
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let s = compensated_sum([1e16, 1.0, -1e16, 1.0]);
        assert_eq!(s, 2.0);
    }
}
