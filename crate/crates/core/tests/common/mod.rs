#![allow(dead_code)]

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use spectral_appraise::linalg::{dense_eigen_oracle, DesignMatrix};
use spectral_appraise::objectives::PhiSpec;
use spectral_appraise::SetObjective;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_vec(rng: &mut ChaCha8Rng, m: usize) -> Vec<f64> {
    (0..m)
        .map(|_| rng.sample::<f64, _>(StandardNormal))
        .collect()
}

pub fn gaussian_design(rng: &mut ChaCha8Rng, n: usize, m: usize) -> DesignMatrix {
    let data = (0..n * m)
        .map(|_| rng.sample::<f64, _>(StandardNormal))
        .collect();
    DesignMatrix::new(n, m, data).unwrap()
}

/// Rows drawn from a low-dimensional subspace plus exact duplicates, so that
/// both repeated eigenvalues and in-span rows occur.
pub fn adversarial_design(rng: &mut ChaCha8Rng, n: usize, m: usize) -> DesignMatrix {
    let basis_dim = rng.gen_range(1..=m.max(1));
    let basis: Vec<Vec<f64>> = (0..basis_dim).map(|_| gaussian_vec(rng, m)).collect();
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(n);
    for i in 0..n {
        let kind = rng.gen_range(0..4);
        let row = if kind == 0 && i > 0 {
            rows[rng.gen_range(0..i)].clone()
        } else if kind == 1 {
            // an axis-aligned row, which gives exactly repeated eigenvalues
            let mut r = vec![0.0; m];
            r[rng.gen_range(0..m)] = 1.0;
            r
        } else {
            let mut r = vec![0.0; m];
            for b in &basis {
                let c: f64 = rng.sample(StandardNormal);
                for (x, y) in r.iter_mut().zip(b) {
                    *x += c * y;
                }
            }
            r
        };
        rows.push(row);
    }
    DesignMatrix::from_rows(&rows).unwrap()
}

/// Zero-pad a spectrum on the left to dimension m.
pub fn padded(eig: &[f64], m: usize) -> Vec<f64> {
    let mut v = vec![0.0; m - eig.len()];
    v.extend_from_slice(eig);
    v
}

/// Max deviation between a factorized spectrum and the dense oracle of `b`,
/// relative to the largest eigenvalue magnitude (at least `floor`).
pub fn oracle_deviation(eig: &[f64], b: &[f64], m: usize, floor: f64) -> f64 {
    let dense = dense_eigen_oracle(b, m);
    let ours = padded(eig, m);
    let scale = dense
        .iter()
        .chain(&ours)
        .fold(floor, |a, x| a.max(x.abs()))
        .max(f64::MIN_POSITIVE);
    ours.iter()
        .zip(&dense)
        .map(|(a, b)| (a - b).abs() / scale)
        .fold(0.0, f64::max)
}

/// Random chain S ⊆ T ⊂ V and an element s ∉ T.
pub fn random_chain(rng: &mut ChaCha8Rng, n: usize) -> (Vec<usize>, Vec<usize>, usize) {
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    let t_len = rng.gen_range(0..n);
    let s_len = rng.gen_range(0..=t_len);
    (perm[..s_len].to_vec(), perm[..t_len].to_vec(), perm[n - 1])
}

pub fn committed<O: SetObjective + Clone>(base: &O, set: &[usize]) -> O {
    let mut o = base.clone();
    for &e in set {
        o.commit(e).unwrap();
    }
    o
}

/// Eigenvalues of Σ_{i∈X} x_i x_iᵀ straight from nalgebra.
pub fn nalgebra_spectrum(design: &DesignMatrix, subset: &[usize]) -> Vec<f64> {
    let m = design.cols();
    let mut b = nalgebra::DMatrix::<f64>::zeros(m, m);
    for &i in subset {
        let x = nalgebra::DVector::from_column_slice(design.row(i));
        b += &x * x.transpose();
    }
    let mut e: Vec<f64> = b.symmetric_eigenvalues().iter().copied().collect();
    e.sort_by(f64::total_cmp);
    e
}

/// Σ (φ(λ) − φ(0)) over a dense spectrum, negative round-off clamped to 0.
pub fn dense_value(phi: &PhiSpec, eig: &[f64]) -> f64 {
    eig.iter().map(|&x| phi.shifted_value(x.max(0.0))).sum()
}
