use super::deflation::{deflate, DeflationPlan, DeflationTolerances};
use super::loewner::loewner_weights_from_roots;
use super::secular::{solve_secular, SecularProblem, SecularRoot};
use crate::error::{Error, Result};
use crate::linalg::{compensated_sum, dot};

/// α above this fraction of max(‖u‖, √λ_max) makes an update rank-increasing.
pub const RANK_INCREASE_REL: f64 = 1e-8;
/// Downdated eigenvalues at or below this fraction of the scale are dropped.
pub const RANK_DROP_REL: f64 = 1e-10;
/// Downdated eigenvalues below minus this fraction of the scale are an error.
pub const PSD_REL: f64 = 1e-9;
/// Commits between scheduled Gram–Schmidt passes.
pub const REORTH_PERIOD: usize = 512;
/// Drift that triggers an early Gram–Schmidt pass.
pub const REORTH_DRIFT: f64 = 1e-8;
/// Drift treated as a numerical failure.
pub const FAIL_DRIFT: f64 = 1e-6;

/// Orthonormal factorization B = QΛQᵀ of a PSD matrix with Λ > 0, ascending.
#[derive(Debug, Clone)]
pub struct SpectralState {
    dim: usize,
    /// Column-major m×r.
    q: Vec<f64>,
    eigvals: Vec<f64>,
    commits: usize,
    trace_accum: f64,
    tol: DeflationTolerances,
}

/// The representation of a query vector in the current eigenbasis.
#[derive(Debug, Clone, PartialEq)]
pub struct RankOneQuery {
    pub rho: f64,
    /// Qᵀu.
    pub v: Vec<f64>,
    /// ‖u − QQᵀu‖.
    pub u_perp_norm: f64,
    pub u_norm: f64,
}

/// Caller-owned buffers so that concurrent queries do not allocate per call.
#[derive(Debug, Default, Clone)]
pub struct QueryScratch {
    v: Vec<f64>,
    perp: Vec<f64>,
}

impl QueryScratch {
    pub fn new() -> Self {
        Self::default()
    }
}

/// Eigenvalues after a rank-one change, with the parts that actually moved.
#[derive(Debug, Clone, PartialEq)]
pub struct UpdatedSpectrum {
    /// All new eigenvalues, ascending.
    pub eigvals: Vec<f64>,
    pub rank: usize,
    /// Old eigenvalues that entered the secular problem (0 for a new direction).
    pub moved_from: Vec<f64>,
    /// Their replacements; a value dropped on rank reduction is reported as-is.
    pub moved_to: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Basis {
    Column(usize),
    Perp,
}

struct Plan {
    sign: f64,
    work_eig: Vec<f64>,
    basis: Vec<Basis>,
    deflation: DeflationPlan,
    poles: Vec<f64>,
    roots: Vec<SecularRoot>,
    scale: f64,
    alpha: f64,
}

fn check_rho(rho: f64) -> Result<f64> {
    if rho == 1.0 || rho == -1.0 {
        Ok(rho)
    } else {
        Err(Error::invalid(format!("rho must be +1 or -1, got {rho}")))
    }
}

impl SpectralState {
    /// The empty factorization (r = 0) in dimension m.
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            q: Vec::new(),
            eigvals: Vec::new(),
            commits: 0,
            trace_accum: 0.0,
            tol: DeflationTolerances::default(),
        }
    }

    pub fn with_tolerances(mut self, tol: DeflationTolerances) -> Self {
        self.tol = tol;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.eigvals.len()
    }

    pub fn eigvals(&self) -> &[f64] {
        &self.eigvals
    }

    /// Column-major m×r eigenvector matrix.
    pub fn eigvecs(&self) -> &[f64] {
        &self.q
    }

    pub fn eigvec(&self, i: usize) -> &[f64] {
        &self.q[i * self.dim..(i + 1) * self.dim]
    }

    /// Commits since the last Gram–Schmidt pass.
    pub fn commits(&self) -> usize {
        self.commits
    }

    /// Σ ρ‖u‖² over all commits.
    pub fn trace_accum(&self) -> f64 {
        self.trace_accum
    }

    pub fn trace(&self) -> f64 {
        compensated_sum(self.eigvals.iter().copied())
    }

    pub fn lambda_max(&self) -> f64 {
        self.eigvals.last().copied().unwrap_or(0.0)
    }

    /// Dense QΛQᵀ, row-major.
    pub fn reconstruct(&self) -> Vec<f64> {
        let m = self.dim;
        let mut b = vec![0.0; m * m];
        for (k, &lam) in self.eigvals.iter().enumerate() {
            crate::linalg::add_outer(&mut b, self.eigvec(k), lam);
        }
        b
    }

    /// ‖QᵀQ − I‖_max.
    pub fn orthogonality_drift(&self) -> f64 {
        let r = self.rank();
        let mut worst = 0.0f64;
        for i in 0..r {
            for j in 0..=i {
                let g = dot(self.eigvec(i), self.eigvec(j)) - if i == j { 1.0 } else { 0.0 };
                worst = worst.max(g.abs());
            }
        }
        worst
    }

    /// Modified Gram–Schmidt over the columns of Q.
    pub fn reorthogonalize(&mut self) {
        let m = self.dim;
        for j in 0..self.rank() {
            let (done, rest) = self.q.split_at_mut(j * m);
            let col = &mut rest[..m];
            for i in 0..j {
                let qi = &done[i * m..(i + 1) * m];
                let c = dot(qi, col);
                for (x, y) in col.iter_mut().zip(qi) {
                    *x -= c * y;
                }
            }
            let n = crate::linalg::norm(col);
            for x in col.iter_mut() {
                *x /= n;
            }
        }
        self.commits = 0;
    }

    fn check_vector(&self, u: &[f64]) -> Result<()> {
        if u.len() != self.dim {
            return Err(Error::invalid(format!(
                "vector has length {}, state dimension is {}",
                u.len(),
                self.dim
            )));
        }
        if u.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("vector has non-finite entries"));
        }
        Ok(())
    }

    /// v = Qᵀu and u⊥ = u − Qv into the scratch buffers, returning ‖u⊥‖.
    fn project(&self, u: &[f64], scratch: &mut QueryScratch, passes: usize) -> f64 {
        let m = self.dim;
        let r = self.rank();
        scratch.v.clear();
        scratch.v.resize(r, 0.0);
        scratch.perp.clear();
        scratch.perp.extend_from_slice(u);
        for _ in 0..passes {
            for k in 0..r {
                let qk = &self.q[k * m..(k + 1) * m];
                let c = dot(qk, &scratch.perp);
                scratch.v[k] += c;
                for (x, y) in scratch.perp.iter_mut().zip(qk) {
                    *x -= c * y;
                }
            }
        }
        crate::linalg::norm(&scratch.perp)
    }

    pub fn query(&self, u: &[f64], rho: f64) -> Result<RankOneQuery> {
        self.check_vector(u)?;
        let rho = check_rho(rho)?;
        let mut s = QueryScratch::new();
        let alpha = self.project(u, &mut s, 1);
        Ok(RankOneQuery {
            rho,
            v: s.v,
            u_perp_norm: alpha,
            u_norm: crate::linalg::norm(u),
        })
    }

    fn plan(
        &self,
        u: &[f64],
        rho: f64,
        scratch: &mut QueryScratch,
        passes: usize,
    ) -> Result<Option<Plan>> {
        self.check_vector(u)?;
        let rho = check_rho(rho)?;
        let unorm2 = dot(u, u);
        if unorm2 == 0.0 {
            return Ok(None);
        }
        let alpha = self.project(u, scratch, passes);
        let lmax = self.lambda_max();
        let scale = lmax.max(unorm2);
        let threshold = RANK_INCREASE_REL * unorm2.sqrt().max(lmax.sqrt());
        let r = self.rank();

        let mut work_eig = Vec::with_capacity(r + 1);
        let mut weights = Vec::with_capacity(r + 1);
        let mut basis = Vec::with_capacity(r + 1);
        if rho > 0.0 {
            if alpha > threshold && r < self.dim {
                work_eig.push(0.0);
                weights.push(alpha);
                basis.push(Basis::Perp);
            }
            work_eig.extend_from_slice(&self.eigvals);
            weights.extend_from_slice(&scratch.v);
            basis.extend((0..r).map(Basis::Column));
        } else {
            if alpha > threshold && alpha * alpha > PSD_REL * scale {
                return Err(Error::PsdViolation {
                    eigenvalue: -alpha * alpha,
                    tolerance: PSD_REL * scale,
                });
            }
            for k in (0..r).rev() {
                work_eig.push(-self.eigvals[k]);
                weights.push(scratch.v[k]);
                basis.push(Basis::Column(k));
            }
        }

        let deflation = deflate(&work_eig, &weights, self.tol);
        let poles = deflation.active_poles();
        let roots = if poles.is_empty() {
            Vec::new()
        } else {
            let problem = SecularProblem::new(poles.clone(), deflation.active_weights(), 1.0)?;
            solve_secular(&problem)?
        };
        Ok(Some(Plan {
            sign: rho,
            work_eig,
            basis,
            deflation,
            poles,
            roots,
            scale,
            alpha,
        }))
    }

    /// Classify the moved eigenvalues of a plan: keep, drop or fail.
    fn moved(&self, plan: &Plan) -> Result<(Vec<f64>, Vec<f64>, Vec<bool>)> {
        let from: Vec<f64> = plan.poles.iter().map(|d| plan.sign * d).collect();
        let to: Vec<f64> = plan
            .roots
            .iter()
            .map(|root| plan.sign * root.value(&plan.poles))
            .collect();
        let mut keep = Vec::with_capacity(to.len());
        for &lam in &to {
            if lam < -PSD_REL * plan.scale {
                return Err(Error::PsdViolation {
                    eigenvalue: lam,
                    tolerance: PSD_REL * plan.scale,
                });
            }
            keep.push(plan.sign > 0.0 || lam > RANK_DROP_REL * plan.scale);
        }
        Ok((from, to, keep))
    }

    /// Spectrum of B + ρuuᵀ without changing the state.
    pub fn eigenvalues_after_rank_one(&self, u: &[f64], rho: f64) -> Result<(Vec<f64>, usize)> {
        let s = self.spectrum_after_rank_one(u, rho, &mut QueryScratch::new())?;
        Ok((s.eigvals, s.rank))
    }

    /// Full query result using caller-owned scratch space.
    pub fn spectrum_after_rank_one(
        &self,
        u: &[f64],
        rho: f64,
        scratch: &mut QueryScratch,
    ) -> Result<UpdatedSpectrum> {
        let Some(plan) = self.plan(u, rho, scratch, 1)? else {
            return Ok(UpdatedSpectrum {
                eigvals: self.eigvals.clone(),
                rank: self.rank(),
                moved_from: Vec::new(),
                moved_to: Vec::new(),
            });
        };
        let (from, to, keep) = self.moved(&plan)?;
        let mut eigvals: Vec<f64> = plan
            .deflation
            .preserved
            .iter()
            .map(|&i| plan.sign * plan.work_eig[i])
            .collect();
        eigvals.extend(to.iter().zip(&keep).filter(|(_, k)| **k).map(|(v, _)| *v));
        eigvals.sort_by(f64::total_cmp);
        debug_assert!(
            interlaces(&self.eigvals, &eigvals, plan.sign, dot(u, u), self.dim),
            "interlacing violated"
        );
        Ok(UpdatedSpectrum {
            rank: eigvals.len(),
            eigvals,
            moved_from: from,
            moved_to: to,
        })
    }

    /// Replace the state by the factorization of B + ρuuᵀ.
    pub fn commit_rank_one(&mut self, u: &[f64], rho: f64) -> Result<()> {
        let mut scratch = QueryScratch::new();
        let Some(plan) = self.plan(u, rho, &mut scratch, 2)? else {
            return Ok(());
        };
        let (_, to, keep) = self.moved(&plan)?;
        let m = self.dim;
        let p = plan.basis.len();

        // working basis, one column per working coordinate
        let mut cols = vec![0.0; m * p];
        for (c, b) in plan.basis.iter().enumerate() {
            let dst = &mut cols[c * m..(c + 1) * m];
            match *b {
                Basis::Column(k) => dst.copy_from_slice(self.eigvec(k)),
                Basis::Perp => {
                    for (d, x) in dst.iter_mut().zip(&scratch.perp) {
                        *d = x / plan.alpha;
                    }
                }
            }
        }
        // rotate each repeated-eigenvalue block by its reflector
        for g in &plan.deflation.groups {
            let Some(h) = &g.reflector else { continue };
            let mut y = vec![0.0; m];
            for (&idx, &w) in g.members.iter().zip(&h.w) {
                for (yy, x) in y.iter_mut().zip(&cols[idx * m..(idx + 1) * m]) {
                    *yy += w * x;
                }
            }
            for (&idx, &w) in g.members.iter().zip(&h.w) {
                for (x, yy) in cols[idx * m..(idx + 1) * m].iter_mut().zip(&y) {
                    *x -= 2.0 * w * yy;
                }
            }
        }

        let mut pairs: Vec<(f64, Vec<f64>)> = Vec::with_capacity(p);
        for &i in &plan.deflation.preserved {
            pairs.push((
                plan.sign * plan.work_eig[i],
                cols[i * m..(i + 1) * m].to_vec(),
            ));
        }
        let active = &plan.deflation.active;
        let vt = loewner_weights_from_roots(&plan.poles, &plan.roots);
        let mut coef = vec![0.0; active.len()];
        for (k, root) in plan.roots.iter().enumerate() {
            if !keep[k] {
                continue;
            }
            for (a, ac) in active.iter().enumerate() {
                coef[a] = vt[a] * ac.weight.signum() / root.gap(&plan.poles, a);
            }
            let n = crate::linalg::norm(&coef);
            let flip = -active[k].weight.signum() / n;
            let mut col = vec![0.0; m];
            for (a, ac) in active.iter().enumerate() {
                let c = coef[a] * flip;
                for (x, y) in col.iter_mut().zip(&cols[ac.index * m..(ac.index + 1) * m]) {
                    *x += c * y;
                }
            }
            pairs.push((to[k], col));
        }
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));

        let mut next = SpectralState {
            dim: m,
            q: Vec::with_capacity(m * pairs.len()),
            eigvals: Vec::with_capacity(pairs.len()),
            commits: self.commits + 1,
            trace_accum: self.trace_accum + rho * dot(u, u),
            tol: self.tol,
        };
        for (lam, col) in pairs {
            next.eigvals.push(lam);
            next.q.extend_from_slice(&col);
        }
        let drift = next.orthogonality_drift();
        if !(drift <= FAIL_DRIFT) {
            return Err(Error::numerical(
                "commit",
                format!("eigenvector orthogonality drift {drift:e} exceeds {FAIL_DRIFT:e}"),
            ));
        }
        if drift > REORTH_DRIFT || next.commits >= REORTH_PERIOD {
            next.reorthogonalize();
        }
        *self = next;
        Ok(())
    }
}

/// Interlacing chain for B + ρuuᵀ, both spectra padded with zeros to dimension m.
pub fn interlaces(old: &[f64], new: &[f64], rho: f64, unorm2: f64, m: usize) -> bool {
    let pad = |x: &[f64]| {
        let mut v = vec![0.0; m.saturating_sub(x.len())];
        v.extend_from_slice(x);
        v
    };
    let (a, b) = (pad(old), pad(new));
    if a.len() != b.len() {
        return false;
    }
    let scale = a
        .last()
        .copied()
        .unwrap_or(0.0)
        .max(unorm2)
        .max(f64::MIN_POSITIVE);
    let tol = 1e-9 * scale;
    let n = a.len();
    (0..n).all(|i| {
        if rho > 0.0 {
            let upper = if i + 1 < n { a[i + 1] } else { a[i] + unorm2 };
            b[i] >= a[i] - tol && b[i] <= upper + tol
        } else {
            let lower = if i > 0 { a[i - 1] } else { a[i] - unorm2 };
            b[i] <= a[i] + tol && b[i] >= lower - tol
        }
    })
}
