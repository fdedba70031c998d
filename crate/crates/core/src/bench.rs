//! Oracle-versus-secular timing of lazy greedy over a spectral objective.

use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::DesignMatrix;
use crate::objectives::{
    density_normalize, DenseSpectralObjective, Normalization, PhiSpec, SpectralObjective,
};
use crate::optimizer::{greedy_max, Constraint, GreedyOptions};

/// Default cap on the n·m³ work estimate of the oracle arm.
pub const DEFAULT_MAX_WORK: f64 = 5e11;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub ns: Vec<usize>,
    pub m: usize,
    pub k_fracs: Vec<f64>,
    pub repeats: usize,
    pub seed: u64,
    pub phi: PhiSpec,
    pub max_work: f64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            ns: vec![200],
            m: 128,
            k_fracs: vec![0.02, 0.05, 0.1, 0.25],
            repeats: 3,
            seed: 0,
            phi: PhiSpec::vendi(),
            max_work: DEFAULT_MAX_WORK,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchCell {
    pub n: usize,
    pub m: usize,
    pub k_frac: f64,
    pub k: usize,
    /// Minimum over repeats.
    pub oracle_seconds: f64,
    /// Minimum over repeats.
    pub secular_seconds: f64,
    pub speedup: f64,
    pub identical: bool,
    pub order: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub config: BenchConfig,
    pub cells: Vec<BenchCell>,
}

impl BenchReport {
    pub fn all_identical(&self) -> bool {
        self.cells.iter().all(|c| c.identical)
    }

    /// Fixed-width text table of the cells.
    pub fn table(&self) -> String {
        let mut s = format!(
            "{:>6} {:>6} {:>7} {:>5} {:>12} {:>12} {:>10} {:>9}\n",
            "n", "m", "k/n", "k", "oracle_s", "secular_s", "speedup", "identical"
        );
        for c in &self.cells {
            s.push_str(&format!(
                "{:>6} {:>6} {:>7.3} {:>5} {:>12.4} {:>12.6} {:>10.1} {:>9}\n",
                c.n,
                c.m,
                c.k_frac,
                c.k,
                c.oracle_seconds,
                c.secular_seconds,
                c.speedup,
                c.identical
            ));
        }
        s
    }
}

/// Standard Gaussian n×m design, trace-normalized.
pub fn random_design(n: usize, m: usize, seed: u64) -> Result<DesignMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = (0..n * m)
        .map(|_| rng.sample::<f64, _>(StandardNormal))
        .collect();
    density_normalize(&DesignMatrix::new(n, m, data)?, Normalization::Trace1)
}

pub fn cardinality_for(n: usize, k_frac: f64) -> usize {
    ((k_frac * n as f64).round() as usize).clamp(1, n)
}

/// One timed lazy-greedy run with oracle gains.
pub fn time_oracle(
    design: &Arc<DesignMatrix>,
    phi: PhiSpec,
    k: usize,
) -> Result<(f64, Vec<usize>)> {
    let start = Instant::now();
    let mut obj = DenseSpectralObjective::from_shared(design.clone(), phi)?;
    let r = greedy_max(
        &mut obj,
        &Constraint::cardinality(k),
        GreedyOptions::default(),
    )?;
    Ok((start.elapsed().as_secs_f64(), r.order))
}

/// One timed lazy-greedy run with secular gains.
pub fn time_secular(
    design: &Arc<DesignMatrix>,
    phi: PhiSpec,
    k: usize,
) -> Result<(f64, Vec<usize>)> {
    let start = Instant::now();
    let mut obj = SpectralObjective::from_shared(design.clone(), phi, Normalization::Trace1)?;
    let r = greedy_max(
        &mut obj,
        &Constraint::cardinality(k),
        GreedyOptions::default(),
    )?;
    Ok((start.elapsed().as_secs_f64(), r.order))
}

pub fn run_bench(config: &BenchConfig) -> Result<BenchReport> {
    if config.repeats == 0 {
        return Err(Error::invalid("repeats must be at least 1"));
    }
    if config.m == 0 || config.ns.is_empty() || config.k_fracs.is_empty() {
        return Err(Error::invalid(
            "bench needs m >= 1 and at least one n and one k fraction",
        ));
    }
    if let Some(&f) = config.k_fracs.iter().find(|&&f| !(f > 0.0 && f <= 1.0)) {
        return Err(Error::invalid(format!("k fraction {f} outside (0, 1]")));
    }
    for &n in &config.ns {
        let work = n as f64 * (config.m as f64).powi(3);
        if n == 0 || work > config.max_work {
            return Err(Error::invalid(format!(
                "cell n = {n}, m = {} has work estimate {work:.3e} above the ceiling {:.3e}",
                config.m, config.max_work
            )));
        }
    }
    let mut cells = Vec::new();
    for (ni, &n) in config.ns.iter().enumerate() {
        let design = Arc::new(random_design(
            n,
            config.m,
            config.seed.wrapping_add(ni as u64),
        )?);
        for &k_frac in &config.k_fracs {
            let k = cardinality_for(n, k_frac);
            let mut oracle_best = f64::INFINITY;
            let mut secular_best = f64::INFINITY;
            let mut identical = true;
            let mut reference: Option<Vec<usize>> = None;
            for _ in 0..config.repeats {
                let (ts, secular) = time_secular(&design, config.phi, k)?;
                let (to, oracle) = time_oracle(&design, config.phi, k)?;
                secular_best = secular_best.min(ts);
                oracle_best = oracle_best.min(to);
                identical &= secular == oracle;
                match &reference {
                    Some(r) => identical &= *r == secular,
                    None => reference = Some(secular),
                }
            }
            cells.push(BenchCell {
                n,
                m: config.m,
                k_frac,
                k,
                oracle_seconds: oracle_best,
                secular_seconds: secular_best,
                speedup: oracle_best / secular_best,
                identical,
                order: reference.unwrap_or_default(),
            });
        }
    }
    Ok(BenchReport {
        config: config.clone(),
        cells,
    })
}
