use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::set_function::{check_element, SetObjective};

/// What a size-based law returns for the empty set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EmptyPolicy {
    NegInfinity,
    /// Evaluate at d = ε instead of 0.
    Floor(f64),
}

/// Per-domain constants of the cluster law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    pub c: f64,
    pub beta: f64,
}

/// Epoch-aware loss: repeated passes over d samples within a budget of 𝔠
/// samples, with exponents β_j = β·2^{−(j−1)/τ} decaying per epoch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpochLaw {
    pub c_prime: f64,
    pub b: f64,
    pub beta: f64,
    pub budget: f64,
    pub tau: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum ScalingLaw {
    /// 𝒜(d) = c′ − b·d^{−β}.
    Chinchilla {
        c_prime: f64,
        b: f64,
        beta: f64,
        empty: EmptyPolicy,
    },
    /// 𝒜(d) = c′ − Σ_i (c_i + d_i)^{−β_i}.
    Cluster { c_prime: f64, domains: Vec<Domain> },
    /// 𝒜(d) = c′ − L̂(d).
    Epoch(EpochLaw),
}

impl EpochLaw {
    pub fn new(c_prime: f64, b: f64, beta: f64, budget: f64, tau: f64) -> Result<Self> {
        if !(budget > 0.0 && budget.is_finite()) {
            return Err(Error::invalid("epoch budget must be positive"));
        }
        if !(b > 0.0 && beta > 0.0 && tau > 0.0) {
            return Err(Error::invalid("b, beta and tau must be positive"));
        }
        Ok(Self {
            c_prime,
            b,
            beta,
            budget,
            tau,
        })
    }

    /// β_j for epoch j ≥ 1.
    pub fn beta_j(&self, j: u64) -> f64 {
        self.beta * 0.5f64.powf((j as f64 - 1.0) / self.tau)
    }

    /// ⌊𝔠/d⌋.
    pub fn epochs(&self, d: f64) -> u64 {
        (self.budget / d).floor() as u64
    }

    /// L̂(d); +∞ at d = 0.
    pub fn loss(&self, d: f64) -> f64 {
        if d <= 0.0 {
            return f64::INFINITY;
        }
        if d >= self.budget {
            return self.b * self.budget.powf(-self.beta);
        }
        let k = self.epochs(d).max(1);
        let next = self.beta_j(k + 1);
        let mut log =
            self.b.ln() + (next - self.beta) * d.ln() - next * (self.budget / k as f64).ln();
        for j in 2..=k {
            let jf = j as f64;
            log -= self.beta_j(j) * (jf / (jf - 1.0)).ln();
        }
        log.exp()
    }

    /// dL̂/dd away from interval boundaries: (−β + β_{k̄+1})·L̂/d, and 0 past 𝔠.
    pub fn derivative(&self, d: f64) -> f64 {
        if d >= self.budget {
            return 0.0;
        }
        let k = self.epochs(d).max(1);
        (self.beta_j(k + 1) - self.beta) * self.loss(d) / d
    }

    /// Right minus left derivative at d = 𝔠/j: (β_j − β_{j+1})·L̂/d.
    pub fn boundary_jump(&self, j: u64) -> f64 {
        let d = self.budget / j as f64;
        (self.beta_j(j) - self.beta_j(j + 1)) * self.loss(d) / d
    }

    pub fn value(&self, d: f64) -> f64 {
        self.c_prime - self.loss(d)
    }
}

impl ScalingLaw {
    pub fn validate(&self) -> Result<()> {
        match self {
            ScalingLaw::Chinchilla { b, beta, empty, .. } => {
                if !(*b > 0.0 && *beta > 0.0) {
                    return Err(Error::invalid("b and beta must be positive"));
                }
                if let EmptyPolicy::Floor(eps) = empty {
                    if !(*eps > 0.0) {
                        return Err(Error::invalid("empty-set floor must be positive"));
                    }
                }
                Ok(())
            }
            ScalingLaw::Cluster { domains, .. } => {
                if domains.is_empty() {
                    return Err(Error::invalid("cluster law needs at least one domain"));
                }
                if let Some(i) = domains.iter().position(|d| !(d.c >= 0.0 && d.beta > 0.0)) {
                    return Err(Error::invalid(format!(
                        "domain {i} needs c >= 0 and beta > 0"
                    )));
                }
                Ok(())
            }
            ScalingLaw::Epoch(e) => {
                EpochLaw::new(e.c_prime, e.b, e.beta, e.budget, e.tau).map(|_| ())
            }
        }
    }

    /// Number of count entries the law expects.
    pub fn domains(&self) -> usize {
        match self {
            ScalingLaw::Cluster { domains, .. } => domains.len(),
            _ => 1,
        }
    }

    /// 𝒜 at the given per-domain counts (a single count for size-based laws).
    pub fn value(&self, counts: &[f64]) -> Result<f64> {
        if counts.len() != self.domains() {
            return Err(Error::invalid(format!(
                "expected {} counts, got {}",
                self.domains(),
                counts.len()
            )));
        }
        if counts.iter().any(|&c| !(c >= 0.0)) {
            return Err(Error::invalid("counts must be >= 0"));
        }
        Ok(match self {
            ScalingLaw::Chinchilla {
                c_prime,
                b,
                beta,
                empty,
            } => {
                let d = counts[0];
                if d == 0.0 {
                    match empty {
                        EmptyPolicy::NegInfinity => f64::NEG_INFINITY,
                        EmptyPolicy::Floor(eps) => c_prime - b * eps.powf(-beta),
                    }
                } else {
                    c_prime - b * d.powf(-beta)
                }
            }
            ScalingLaw::Cluster { c_prime, domains } => {
                c_prime
                    - domains
                        .iter()
                        .zip(counts)
                        .map(|(dom, &d)| (dom.c + d).powf(-dom.beta))
                        .sum::<f64>()
            }
            ScalingLaw::Epoch(e) => e.value(counts[0]),
        })
    }
}

pub fn scaling_law_value(params: &ScalingLaw, counts: &[f64]) -> Result<f64> {
    params.validate()?;
    params.value(counts)
}

/// A scaling law as a set function: each element belongs to one domain and
/// f(S) = 𝒜(per-domain counts of S).
#[derive(Debug, Clone)]
pub struct ScalingLawObjective {
    law: ScalingLaw,
    assignment: Vec<usize>,
    counts: Vec<f64>,
    selected: Vec<usize>,
    in_set: Vec<bool>,
}

impl ScalingLawObjective {
    pub fn new(law: ScalingLaw, assignment: Vec<usize>) -> Result<Self> {
        law.validate()?;
        let k = law.domains();
        if let Some(i) = assignment.iter().position(|&a| a >= k) {
            return Err(Error::invalid(format!(
                "element {i} is assigned to a missing domain"
            )));
        }
        let n = assignment.len();
        Ok(Self {
            law,
            assignment,
            counts: vec![0.0; k],
            selected: Vec::new(),
            in_set: vec![false; n],
        })
    }

    pub fn counts(&self) -> &[f64] {
        &self.counts
    }
}

impl SetObjective for ScalingLawObjective {
    fn ground_size(&self) -> usize {
        self.assignment.len()
    }

    fn value(&self) -> f64 {
        self.law.value(&self.counts).unwrap_or(f64::NAN)
    }

    fn gain(&self, element: usize) -> Result<f64> {
        check_element(element, self.ground_size())?;
        let mut next = self.counts.clone();
        next[self.assignment[element]] += 1.0;
        Ok(self.law.value(&next)? - self.law.value(&self.counts)?)
    }

    fn commit(&mut self, element: usize) -> Result<()> {
        check_element(element, self.ground_size())?;
        if self.in_set[element] {
            return Err(Error::invalid(format!(
                "element {element} is already selected"
            )));
        }
        self.counts[self.assignment[element]] += 1.0;
        self.in_set[element] = true;
        self.selected.push(element);
        Ok(())
    }

    fn selected(&self) -> &[usize] {
        &self.selected
    }

    fn name(&self) -> String {
        "scaling_law".into()
    }
}
