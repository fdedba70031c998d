use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::constraint::{Constraint, Tracker};
use crate::error::{Error, Result};
use crate::set_function::SetObjective;

/// Gains closer than this are treated as equal and resolved by lowest index.
pub fn tie_tolerance(gain: f64) -> f64 {
    1e-12 * (1.0 + gain.abs())
}

/// Outcome of any selection strategy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionResult {
    /// Chosen indices in selection order.
    pub order: Vec<usize>,
    /// Marginal gain of each choice at the time it was made.
    pub gains: Vec<f64>,
    pub initial_value: f64,
    pub final_value: f64,
    /// Number of gain queries issued.
    pub evaluations: usize,
    pub strategy: String,
    pub seed: Option<u64>,
}

impl SelectionResult {
    fn start(strategy: &str, initial_value: f64, seed: Option<u64>) -> Self {
        Self {
            order: Vec::new(),
            gains: Vec::new(),
            initial_value,
            final_value: initial_value,
            evaluations: 0,
            strategy: strategy.into(),
            seed,
        }
    }
}

/// Options for [`greedy_max`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GreedyOptions {
    /// Reuse stale gains as upper bounds (exact for submodular objectives).
    pub lazy: bool,
    /// Evaluate full gain scans on the rayon pool.
    pub parallel: bool,
}

impl Default for GreedyOptions {
    fn default() -> Self {
        Self {
            lazy: true,
            parallel: true,
        }
    }
}

pub(crate) fn gains_of<O: SetObjective>(
    obj: &O,
    cands: &[usize],
    parallel: bool,
) -> Result<Vec<f64>> {
    if parallel && cands.len() > 1 {
        cands
            .par_iter()
            .with_min_len(8)
            .map(|&e| obj.gain(e))
            .collect()
    } else {
        cands.iter().map(|&e| obj.gain(e)).collect()
    }
}

/// Lowest index among the gains within tolerance of the best (max or min).
fn pick(cands: &[usize], gains: &[f64], maximize: bool) -> Option<(usize, f64)> {
    let best = if maximize {
        gains.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    } else {
        gains.iter().copied().fold(f64::INFINITY, f64::min)
    };
    if !best.is_finite() && gains.iter().all(|g| g.is_nan()) {
        return None;
    }
    let tol = tie_tolerance(best);
    cands
        .iter()
        .zip(gains)
        .filter(|(_, &g)| {
            if maximize {
                g >= best - tol
            } else {
                g <= best + tol
            }
        })
        .min_by_key(|(&e, _)| e)
        .map(|(&e, &g)| (e, g))
}

fn commit_into<O: SetObjective>(
    obj: &mut O,
    res: &mut SelectionResult,
    tracker: &mut Tracker<'_>,
    e: usize,
    gain: f64,
) -> Result<()> {
    obj.commit(e)?;
    tracker.add(e);
    res.order.push(e);
    res.gains.push(gain);
    Ok(())
}

fn feasible(tracker: &Tracker<'_>, taken: &[bool]) -> Vec<usize> {
    (0..taken.len())
        .filter(|&e| !taken[e] && tracker.can_add(e))
        .collect()
}

fn eager_loop<O: SetObjective>(
    obj: &mut O,
    tracker: &mut Tracker<'_>,
    taken: &mut [bool],
    res: &mut SelectionResult,
    maximize: bool,
    parallel: bool,
) -> Result<()> {
    while !tracker.full() {
        let cands = feasible(tracker, taken);
        if cands.is_empty() {
            break;
        }
        let gains = gains_of(obj, &cands, parallel)?;
        res.evaluations += cands.len();
        let Some((e, g)) = pick(&cands, &gains, maximize) else {
            return Err(Error::numerical("greedy", "all candidate gains are NaN"));
        };
        commit_into(obj, res, tracker, e, g)?;
        taken[e] = true;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy)]
struct Entry {
    bound: f64,
    element: usize,
    stamp: usize,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.bound
            .total_cmp(&other.bound)
            .then_with(|| other.element.cmp(&self.element))
    }
}

fn lazy_loop<O: SetObjective>(
    obj: &mut O,
    tracker: &mut Tracker<'_>,
    taken: &mut [bool],
    res: &mut SelectionResult,
    parallel: bool,
) -> Result<()> {
    let cands = feasible(tracker, taken);
    let gains = gains_of(obj, &cands, parallel)?;
    res.evaluations += cands.len();
    let stamp0 = res.order.len();
    let mut heap: BinaryHeap<Entry> = cands
        .iter()
        .zip(&gains)
        .map(|(&element, &bound)| Entry {
            bound,
            element,
            stamp: stamp0,
        })
        .collect();

    while !tracker.full() {
        let now = res.order.len();
        let mut pool: Vec<Entry> = Vec::new();
        let mut best = f64::NEG_INFINITY;
        while let Some(&top) = heap.peek() {
            if !pool.is_empty() && top.bound < best - tie_tolerance(best) {
                break;
            }
            heap.pop();
            if !tracker.can_add(top.element) {
                continue;
            }
            if top.stamp != now {
                let g = obj.gain(top.element)?;
                res.evaluations += 1;
                heap.push(Entry {
                    bound: g,
                    element: top.element,
                    stamp: now,
                });
                continue;
            }
            best = best.max(top.bound);
            pool.push(top);
        }
        if pool.is_empty() {
            break;
        }
        let tol = tie_tolerance(best);
        let chosen = *pool
            .iter()
            .filter(|en| en.bound >= best - tol)
            .min_by_key(|en| en.element)
            .expect("pool holds the maximum");
        for en in pool {
            if en.element != chosen.element {
                heap.push(en);
            }
        }
        commit_into(obj, res, tracker, chosen.element, chosen.bound)?;
        taken[chosen.element] = true;
    }
    Ok(())
}

/// Greedy maximization under a cardinality or partition-matroid constraint.
/// Fills the constraint budget; ties go to the lowest index.
pub fn greedy_max<O: SetObjective>(
    obj: &mut O,
    constraint: &Constraint,
    options: GreedyOptions,
) -> Result<SelectionResult> {
    let n = obj.ground_size();
    constraint.validate(n)?;
    let mut tracker = constraint.tracker();
    let mut taken = vec![false; n];
    for &e in obj.selected() {
        taken[e] = true;
    }
    let label = if options.lazy {
        "greedy_max_lazy"
    } else {
        "greedy_max"
    };
    let mut res = SelectionResult::start(label, obj.value(), None);
    if options.lazy {
        lazy_loop(obj, &mut tracker, &mut taken, &mut res, options.parallel)?;
    } else {
        eager_loop(
            obj,
            &mut tracker,
            &mut taken,
            &mut res,
            true,
            options.parallel,
        )?;
    }
    res.final_value = obj.value();
    Ok(res)
}

/// Repeatedly add the feasible element of smallest gain, starting from an
/// optional prefix. Carries no approximation guarantee.
pub fn heuristic_greedy_min<O: SetObjective>(
    obj: &mut O,
    constraint: &Constraint,
    prefix: &[usize],
) -> Result<SelectionResult> {
    let n = obj.ground_size();
    constraint.validate(n)?;
    let mut tracker = constraint.tracker();
    let mut taken = vec![false; n];
    let mut res = SelectionResult::start("heuristic_greedy_min", obj.value(), None);
    for &e in prefix {
        if e >= n || taken[e] {
            return Err(Error::invalid(format!(
                "prefix element {e} is out of range or repeated"
            )));
        }
        if !tracker.can_add(e) {
            return Err(Error::invalid(format!(
                "prefix element {e} violates the constraint"
            )));
        }
        let g = obj.gain(e)?;
        res.evaluations += 1;
        commit_into(obj, &mut res, &mut tracker, e, g)?;
        taken[e] = true;
    }
    eager_loop(obj, &mut tracker, &mut taken, &mut res, false, true)?;
    res.final_value = obj.value();
    Ok(res)
}

/// Sample size per step of stochastic greedy: ⌈(n/k)·ln(1/ε)⌉.
pub fn stochastic_sample_size(n: usize, k: usize, epsilon: f64) -> usize {
    ((n as f64 / k as f64) * (1.0 / epsilon).ln())
        .ceil()
        .max(1.0) as usize
}

/// Stochastic greedy: each step scores a uniform random subset of the
/// remaining elements and keeps the best. Cardinality constraints only.
pub fn stochastic_greedy<O: SetObjective>(
    obj: &mut O,
    constraint: &Constraint,
    epsilon: f64,
    seed: u64,
) -> Result<SelectionResult> {
    let Constraint::Cardinality { k } = *constraint else {
        return Err(Error::invalid(
            "stochastic greedy supports cardinality constraints only",
        ));
    };
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::invalid(format!(
            "epsilon must lie in (0, 1), got {epsilon}"
        )));
    }
    let n = obj.ground_size();
    constraint.validate(n)?;
    let per_step = stochastic_sample_size(n, k, epsilon);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tracker = constraint.tracker();
    let mut remaining: Vec<usize> = (0..n).filter(|e| !obj.selected().contains(e)).collect();
    let mut res = SelectionResult::start("stochastic_greedy", obj.value(), Some(seed));
    while !tracker.full() && !remaining.is_empty() {
        let s = per_step.min(remaining.len());
        let mut pos: Vec<usize> = sample(&mut rng, remaining.len(), s).into_vec();
        pos.sort_unstable();
        let cands: Vec<usize> = pos.iter().map(|&p| remaining[p]).collect();
        let gains = gains_of(obj, &cands, true)?;
        res.evaluations += cands.len();
        let Some((e, g)) = pick(&cands, &gains, true) else {
            return Err(Error::numerical(
                "stochastic greedy",
                "all candidate gains are NaN",
            ));
        };
        commit_into(obj, &mut res, &mut tracker, e, g)?;
        remaining.retain(|&x| x != e);
    }
    res.final_value = obj.value();
    Ok(res)
}

/// Commit elements in the given order, recording their gains.
pub fn evaluate_sequence<O: SetObjective>(
    obj: &mut O,
    order: &[usize],
    strategy: &str,
    seed: Option<u64>,
) -> Result<SelectionResult> {
    let mut res = SelectionResult::start(strategy, obj.value(), seed);
    for &e in order {
        let g = obj.gain(e)?;
        res.evaluations += 1;
        obj.commit(e)?;
        res.order.push(e);
        res.gains.push(g);
    }
    res.final_value = obj.value();
    Ok(res)
}

/// k elements drawn uniformly without replacement.
pub fn random_selection<O: SetObjective>(
    obj: &mut O,
    k: usize,
    seed: u64,
) -> Result<SelectionResult> {
    let n = obj.ground_size();
    Constraint::cardinality(k).validate(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let order = sample(&mut rng, n, k).into_vec();
    evaluate_sequence(obj, &order, "random", Some(seed))
}

/// Uniform sample without replacement within each class; quotas[c] elements
/// of class c, grouped by class in ascending order.
pub fn stratified_random(labels: &[usize], quotas: &[usize], seed: u64) -> Result<Vec<usize>> {
    let classes = labels
        .iter()
        .copied()
        .max()
        .map_or(0, |c| c + 1)
        .max(quotas.len());
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); classes];
    for (i, &c) in labels.iter().enumerate() {
        members[c].push(i);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (c, &q) in quotas.iter().enumerate() {
        if q > members[c].len() {
            return Err(Error::invalid(format!(
                "quota {q} for class {c} exceeds its {} elements",
                members[c].len()
            )));
        }
        for p in sample(&mut rng, members[c].len(), q) {
            out.push(members[c][p]);
        }
    }
    Ok(out)
}
