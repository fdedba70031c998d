//! Built-in verification battery: the fixed non-monotonicity counterexamples,
//! ζ bounds, and randomized interlacing and diminishing-returns fuzzing.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::classic::{build_similarity, FacilityLocation, Kernel};
use crate::eigen::{interlaces, SpectralState};
use crate::error::Result;
use crate::linalg::{dot, DesignMatrix};
use crate::objectives::{
    loewner_matrix_of_negated_derivative, matrix_antitone_counterexample_check, min_eigenvalue,
    zeta_bound, Normalization, PhiSpec, SpectralObjective,
};
use crate::set_function::SetObjective;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyItem {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub items: Vec<VerifyItem>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.items.iter().all(|i| i.passed)
    }

    pub fn failed(&self) -> Vec<&str> {
        self.items
            .iter()
            .filter(|i| !i.passed)
            .map(|i| i.name.as_str())
            .collect()
    }
}

fn item(name: &str, passed: bool, detail: String) -> VerifyItem {
    VerifyItem {
        name: name.into(),
        passed,
        detail,
    }
}

fn close(name: &str, got: f64, want: f64, tol: f64) -> VerifyItem {
    item(
        name,
        (got - want).abs() <= tol,
        format!("got {got:.9e}, expected {want:.9e} ± {tol:e}"),
    )
}

fn det2(l: &[f64]) -> f64 {
    l[0] * l[3] - l[1] * l[2]
}

/// Minimum eigenvalue of the Loewner matrix of −y⁻² at (1, 2, 3).
pub fn powerlaw_loewner_min_eig() -> Result<f64> {
    // φ₁ with α = 1, β = 0 has −φ′(y) = −y⁻²
    let phi = PhiSpec::Powerlaw {
        alpha: 1.0,
        beta: 0.0,
    };
    let l = loewner_matrix_of_negated_derivative(&phi, &[1.0, 2.0, 3.0])?;
    Ok(min_eigenvalue(&l, 3))
}

/// 2×2 Loewner determinants of −φ₃′ for α = 1/2 at (1, 9), α = 1 and α = 2 at (1, 2).
pub fn ratio_loewner_determinants() -> Result<[f64; 3]> {
    let half = loewner_matrix_of_negated_derivative(&PhiSpec::Ratio { alpha: 0.5 }, &[1.0, 9.0])?;
    let one = loewner_matrix_of_negated_derivative(&PhiSpec::Ratio { alpha: 1.0 }, &[1.0, 2.0])?;
    let two = loewner_matrix_of_negated_derivative(&PhiSpec::Ratio { alpha: 2.0 }, &[1.0, 2.0])?;
    Ok([det2(&half), det2(&one), det2(&two)])
}

fn gaussian_rows(rng: &mut ChaCha8Rng, n: usize, m: usize) -> Result<DesignMatrix> {
    let data = (0..n * m)
        .map(|_| rng.sample::<f64, _>(StandardNormal))
        .collect();
    DesignMatrix::new(n, m, data)
}

/// Random rank-one updates and downdates; counts interlacing or trace failures.
pub fn interlacing_fuzz(updates: usize, seed: u64) -> Result<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    let mut done = 0;
    while done < updates {
        let m = rng.gen_range(1..=10);
        let mut state = SpectralState::new(m);
        let mut committed: Vec<Vec<f64>> = Vec::new();
        for _ in 0..rng.gen_range(1..=16) {
            if done >= updates {
                break;
            }
            let down = !committed.is_empty() && rng.gen_bool(0.3);
            let (u, rho) = if down {
                (committed[rng.gen_range(0..committed.len())].clone(), -1.0)
            } else {
                (
                    (0..m)
                        .map(|_| rng.sample(StandardNormal))
                        .collect::<Vec<f64>>(),
                    1.0,
                )
            };
            let unorm2 = dot(&u, &u);
            let (eig, _) = state.eigenvalues_after_rank_one(&u, rho)?;
            let before: f64 = state.eigvals().iter().sum();
            let after: f64 = eig.iter().sum();
            let scale = (state.lambda_max() + unorm2).max(1.0);
            let trace_ok = (after - before - rho * unorm2).abs() <= 1e-10 * scale * m as f64;
            if !interlaces(state.eigvals(), &eig, rho, unorm2, m) || !trace_ok {
                failures += 1;
            }
            if down {
                let pos = committed.iter().position(|r| *r == u).unwrap_or(0);
                committed.swap_remove(pos);
            } else {
                committed.push(u.clone());
            }
            state.commit_rank_one(&u, rho)?;
            done += 1;
        }
    }
    Ok(failures)
}

fn chain(rng: &mut ChaCha8Rng, n: usize) -> (Vec<usize>, Vec<usize>, usize) {
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    let t_len = rng.gen_range(0..n);
    let s_len = rng.gen_range(0..=t_len);
    (perm[..s_len].to_vec(), perm[..t_len].to_vec(), perm[n - 1])
}

fn committed<O: SetObjective + Clone>(base: &O, set: &[usize]) -> Result<O> {
    let mut o = base.clone();
    for &e in set {
        o.commit(e)?;
    }
    Ok(o)
}

/// Random (S ⊂ T, s ∉ T) triples; counts gain(s|S) < gain(s|T) − 1e-9.
pub fn diminishing_returns_violations<O: SetObjective + Clone>(
    base: &O,
    triples: usize,
    seed: u64,
) -> Result<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = base.ground_size();
    let mut bad = 0;
    for _ in 0..triples {
        let (s_set, t_set, s) = chain(&mut rng, n);
        let gs = committed(base, &s_set)?.gain(s)?;
        let gt = committed(base, &t_set)?.gain(s)?;
        if gs < gt - 1e-9 {
            bad += 1;
        }
    }
    Ok(bad)
}

/// Runs every battery item.
pub fn run_verify(seed: u64) -> Result<VerifyReport> {
    let mut items = Vec::new();

    items.push(close(
        "loewner_powerlaw_min_eig",
        powerlaw_loewner_min_eig()?,
        -0.0475019,
        1e-5,
    ));

    let ce = matrix_antitone_counterexample_check();
    let want = [5.04624571e-2, -2.04197907e-3, 1.04590142e-5];
    let got = &ce.difference_eigenvalues;
    let ok = got.len() == 3 && got.iter().zip(&want).all(|(g, w)| (g - w).abs() <= 1e-5);
    items.push(item(
        "satexp_matrix_counterexample",
        ok && !ce.difference_is_psd,
        format!("eigenvalues {got:?}, expected {want:?}"),
    ));

    let dets = ratio_loewner_determinants()?;
    items.push(close("loewner_ratio_half_det", dets[0], -3.81e-6, 1e-7));
    items.push(item(
        "loewner_ratio_one_two_negative",
        dets[1] < 0.0 && dets[2] < 0.0,
        format!("determinants {:.6e}, {:.6e}", dets[1], dets[2]),
    ));

    let z1 = zeta_bound(
        &PhiSpec::Powerlaw {
            alpha: 1.0,
            beta: 1.0,
        },
        0.1,
    )?;
    items.push(close("zeta_powerlaw", z1.zeta, 0.826, 1e-3));
    items.push(close("zeta_powerlaw_bound", z1.greedy_bound, 0.5623, 1e-3));
    let z2 = zeta_bound(&PhiSpec::Satexp, 0.1)?;
    items.push(close("zeta_satexp", z2.zeta, 0.905, 1e-3));
    items.push(close("zeta_satexp_bound", z2.greedy_bound, 0.595, 1e-3));

    let fails = interlacing_fuzz(1000, seed)?;
    items.push(item(
        "interlacing_fuzz",
        fails == 0,
        format!("{fails} of 1000 updates failed"),
    ));

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let design = gaussian_rows(&mut rng, 24, 6)?;
    let vendi = SpectralObjective::new(&design, PhiSpec::vendi(), Normalization::Trace1)?;
    let dpp = SpectralObjective::new(&design, PhiSpec::dpp(), Normalization::None)?;
    let fl = FacilityLocation::new(build_similarity(&design, Kernel::default(), 8)?);
    for (name, bad) in [
        (
            "submodularity_vendi",
            diminishing_returns_violations(&vendi, 200, seed)?,
        ),
        (
            "submodularity_dpp",
            diminishing_returns_violations(&dpp, 200, seed)?,
        ),
        (
            "submodularity_facility_location",
            diminishing_returns_violations(&fl, 200, seed)?,
        ),
    ] {
        items.push(item(
            name,
            bad == 0,
            format!("{bad} of 200 triples violated"),
        ));
    }

    Ok(VerifyReport { items })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn battery_passes() {
        let r = run_verify(0).unwrap();
        assert!(r.all_passed(), "{:?}", r.failed());
    }
}
