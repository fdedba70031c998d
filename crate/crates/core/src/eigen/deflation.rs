use super::householder::{householder_toward_axis, Reflector};

/// Relative thresholds that decide which coordinates leave the secular problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeflationTolerances {
    /// |v_i| ≤ weight·‖v‖ counts as a zero weight.
    pub weight: f64,
    /// |λ_i − λ_j| ≤ eig_equal·max(1, max|λ|) counts as a repeated eigenvalue.
    pub eig_equal: f64,
}

impl Default for DeflationTolerances {
    fn default() -> Self {
        Self {
            weight: 64.0 * f64::EPSILON,
            eig_equal: 64.0 * f64::EPSILON,
        }
    }
}

/// A cluster of (numerically) repeated eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct DeflationGroup {
    pub members: Vec<usize>,
    /// ‖v_E‖ over the members.
    pub alpha: f64,
    /// Present when the group keeps an active coordinate. Its `sign` is the
    /// flip carried by the pivot weight.
    pub reflector: Option<Reflector>,
}

/// One coordinate of the reduced secular problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActiveCoordinate {
    /// Index into the pre-deflation coordinates (the group pivot for clusters).
    pub index: usize,
    pub pole: f64,
    /// Signed weight after reflection; for clusters this is −sign·α.
    pub weight: f64,
    /// Group this coordinate represents, if any.
    pub group: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct DeflationPlan {
    pub groups: Vec<DeflationGroup>,
    /// Sorted by pole, strictly increasing, all weights nonzero.
    pub active: Vec<ActiveCoordinate>,
    /// Coordinates whose eigenvalue passes through unchanged.
    pub preserved: Vec<usize>,
}

impl DeflationPlan {
    pub fn active_poles(&self) -> Vec<f64> {
        self.active.iter().map(|a| a.pole).collect()
    }

    pub fn active_weights(&self) -> Vec<f64> {
        self.active.iter().map(|a| a.weight).collect()
    }

    /// Per-group sign carried by the pivot weight (+1 for groups without a reflector).
    pub fn sign_flips(&self) -> Vec<f64> {
        self.groups
            .iter()
            .map(|g| g.reflector.as_ref().map_or(1.0, |r| r.sign))
            .collect()
    }
}

/// Split the diagonal-plus-rank-one problem diag(eigvals) + vvᵀ into a reduced
/// secular problem and pass-through coordinates.
pub fn deflate(eigvals: &[f64], v: &[f64], tol: DeflationTolerances) -> DeflationPlan {
    assert_eq!(
        eigvals.len(),
        v.len(),
        "eigvals and v must have equal length"
    );
    let vnorm = crate::linalg::norm(v);
    let wtol = tol.weight * vnorm;
    let scale = eigvals.iter().fold(1.0f64, |a, &x| a.max(x.abs()));
    let etol = tol.eig_equal * scale;

    let mut plan = DeflationPlan::default();
    let mut start = 0;
    while start < eigvals.len() {
        let mut end = start + 1;
        while end < eigvals.len() && eigvals[end] - eigvals[start] <= etol {
            end += 1;
        }
        if end - start == 1 {
            if v[start].abs() > wtol {
                plan.active.push(ActiveCoordinate {
                    index: start,
                    pole: eigvals[start],
                    weight: v[start],
                    group: None,
                });
            } else {
                plan.preserved.push(start);
            }
        } else {
            let members: Vec<usize> = (start..end).collect();
            let sub = &v[start..end];
            let alpha = crate::linalg::norm(sub);
            let gid = plan.groups.len();
            if alpha > wtol {
                let h = householder_toward_axis(sub).expect("nonzero group weight");
                let pivot = start + h.pivot;
                plan.active.push(ActiveCoordinate {
                    index: pivot,
                    pole: eigvals[pivot],
                    weight: -h.sign * alpha,
                    group: Some(gid),
                });
                plan.preserved
                    .extend(members.iter().copied().filter(|&i| i != pivot));
                plan.groups.push(DeflationGroup {
                    members,
                    alpha,
                    reflector: Some(h),
                });
            } else {
                plan.preserved.extend(members.iter().copied());
                plan.groups.push(DeflationGroup {
                    members,
                    alpha,
                    reflector: None,
                });
            }
        }
        start = end;
    }
    plan
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn repeated_pair_collapses() {
        let plan = deflate(
            &[1.0, 1.0, 2.0],
            &[3.0, 4.0, 0.0],
            DeflationTolerances::default(),
        );
        assert_eq!(plan.groups.len(), 1);
        assert_eq!(plan.groups[0].members, vec![0, 1]);
        assert!((plan.groups[0].alpha - 5.0).abs() < 1e-14);
        assert_eq!(plan.active_poles(), vec![1.0]);
        assert!((plan.active_weights()[0].abs() - 5.0).abs() < 1e-14);
        assert_eq!(plan.preserved, vec![0, 2]);
    }

    #[test]
    fn distinct_all_active() {
        let plan = deflate(
            &[1.0, 2.0, 3.0],
            &[1.0, 1.0, 1.0],
            DeflationTolerances::default(),
        );
        assert!(plan.groups.is_empty());
        assert_eq!(plan.active.len(), 3);
        assert!(plan.preserved.is_empty());
    }

    #[test]
    fn zero_weight_preserves_everything() {
        let plan = deflate(&[5.0, 5.0], &[0.0, 0.0], DeflationTolerances::default());
        assert!(plan.active.is_empty());
        assert_eq!(plan.preserved, vec![0, 1]);
    }

    #[test]
    fn tiny_weight_is_preserved() {
        let plan = deflate(&[1.0, 2.0], &[1.0, 1e-17], DeflationTolerances::default());
        assert_eq!(plan.active.len(), 1);
        assert_eq!(plan.preserved, vec![1]);
    }
}
