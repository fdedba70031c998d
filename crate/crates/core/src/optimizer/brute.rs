use super::constraint::Constraint;
use crate::error::{Error, Result};
use crate::set_function::SetObjective;

/// Largest ground set accepted by exhaustive search.
pub const BRUTE_FORCE_MAX_N: usize = 20;

/// Exhaustive maximum over all subsets of size ≤ k, grown from the
/// objective's current state. Ties keep the lexicographically first subset.
pub fn brute_force_opt<O: SetObjective + Clone>(obj: &O, k: usize) -> Result<(Vec<usize>, f64)> {
    brute_force_constrained(
        obj,
        &Constraint::cardinality(k.min(obj.ground_size()).max(1)),
    )
}

/// Exhaustive maximum over all feasible subsets of a constraint.
pub fn brute_force_constrained<O: SetObjective + Clone>(
    obj: &O,
    constraint: &Constraint,
) -> Result<(Vec<usize>, f64)> {
    let n = obj.ground_size();
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::invalid(format!(
            "brute force refused for n = {n} (limit {BRUTE_FORCE_MAX_N})"
        )));
    }
    constraint.validate(n)?;
    let mut best = (Vec::new(), obj.value());
    let mut path = Vec::new();
    let mut tracker = constraint.tracker();
    search(obj, 0, &mut path, &mut tracker, &mut best)?;
    Ok(best)
}

fn search<O: SetObjective + Clone>(
    obj: &O,
    start: usize,
    path: &mut Vec<usize>,
    tracker: &mut super::constraint::Tracker<'_>,
    best: &mut (Vec<usize>, f64),
) -> Result<()> {
    if tracker.full() {
        return Ok(());
    }
    for e in start..obj.ground_size() {
        if !tracker.can_add(e) || obj.selected().contains(&e) {
            continue;
        }
        let mut next = obj.clone();
        next.commit(e)?;
        path.push(e);
        let v = next.value();
        if v > best.1 {
            *best = (path.clone(), v);
        }
        let saved = tracker.snapshot();
        tracker.add(e);
        search(&next, e + 1, path, tracker, best)?;
        tracker.restore(saved);
        path.pop();
    }
    Ok(())
}
