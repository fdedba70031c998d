use crate::error::{Error, Result};

const MAX_ITER: usize = 100;

/// Roots of f(μ) = 1 + ρ̄ Σ z_i² / (d_i − μ).
#[derive(Debug, Clone, PartialEq)]
pub struct SecularProblem {
    poles: Vec<f64>,
    weights: Vec<f64>,
    rho: f64,
}

impl SecularProblem {
    pub fn new(poles: Vec<f64>, weights: Vec<f64>, rho: f64) -> Result<Self> {
        if poles.len() != weights.len() {
            return Err(Error::invalid("poles and weights differ in length"));
        }
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(Error::invalid(format!("rho must be positive, got {rho}")));
        }
        if poles.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::invalid("poles must be strictly increasing"));
        }
        if weights.iter().any(|&z| z == 0.0 || !z.is_finite()) {
            return Err(Error::invalid("weights must be finite and nonzero"));
        }
        if poles.iter().any(|d| !d.is_finite()) {
            return Err(Error::invalid("poles must be finite"));
        }
        Ok(Self {
            poles,
            weights,
            rho,
        })
    }

    pub fn poles(&self) -> &[f64] {
        &self.poles
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn len(&self) -> usize {
        self.poles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poles.is_empty()
    }

    /// f evaluated at μ.
    pub fn evaluate(&self, mu: f64) -> f64 {
        1.0 + self.rho
            * self
                .poles
                .iter()
                .zip(&self.weights)
                .map(|(d, z)| z * z / (d - mu))
                .sum::<f64>()
    }
}

/// A root stored as an offset from one of the poles, so that d_i − μ can be
/// formed without cancellation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecularRoot {
    pub origin: usize,
    pub offset: f64,
}

impl SecularRoot {
    pub fn value(&self, poles: &[f64]) -> f64 {
        poles[self.origin] + self.offset
    }

    /// d_i − μ.
    pub fn gap(&self, poles: &[f64], i: usize) -> f64 {
        (poles[i] - poles[self.origin]) - self.offset
    }
}

/// Roots in ascending order, one per interval.
pub fn secular_roots(problem: &SecularProblem) -> Result<Vec<f64>> {
    Ok(solve_secular(problem)?
        .iter()
        .map(|r| r.value(&problem.poles))
        .collect())
}

/// Roots in origin/offset form.
pub fn solve_secular(problem: &SecularProblem) -> Result<Vec<SecularRoot>> {
    let p = problem.len();
    let mut out = Vec::with_capacity(p);
    let mut deltas = vec![0.0; p];
    for k in 0..p {
        out.push(solve_one(problem, k, &mut deltas)?);
    }
    Ok(out)
}

struct Eval {
    f: f64,
    df: f64,
    psi_d: f64,
    phi_d: f64,
    tol: f64,
}

/// f, f′ and the split derivatives at offset τ from the origin pole, with
/// terms up to `split` forming the left part.
fn eval_at(deltas: &[f64], z2: &[f64], rho: f64, split: usize, tau: f64) -> Eval {
    let (mut psi, mut psi_d, mut phi, mut phi_d) = (0.0, 0.0, 0.0, 0.0);
    for i in 0..deltas.len() {
        let t = 1.0 / (deltas[i] - tau);
        let a = rho * z2[i] * t;
        if i <= split {
            psi += a;
            psi_d += a * t;
        } else {
            phi += a;
            phi_d += a * t;
        }
    }
    let f = 1.0 + psi + phi;
    let df = psi_d + phi_d;
    let tol = 8.0 * f64::EPSILON * (1.0 + psi.abs() + phi.abs() + tau.abs() * df);
    Eval {
        f,
        df,
        psi_d,
        phi_d,
        tol,
    }
}

fn solve_one(problem: &SecularProblem, k: usize, deltas: &mut [f64]) -> Result<SecularRoot> {
    let d = &problem.poles;
    let p = d.len();
    let rho = problem.rho;
    let z2: Vec<f64> = problem.weights.iter().map(|z| z * z).collect();
    let last = k + 1 == p;

    if p == 1 {
        return Ok(SecularRoot {
            origin: 0,
            offset: rho * z2[0],
        });
    }

    let (origin, mut lo, mut hi, mut tau);
    if last {
        origin = k;
        lo = 0.0;
        hi = rho * z2.iter().sum::<f64>();
        tau = hi;
    } else {
        let gap = d[k + 1] - d[k];
        for (i, di) in deltas.iter_mut().enumerate() {
            *di = d[i] - d[k];
        }
        let mid = gap / 2.0;
        let e = eval_at(deltas, &z2, rho, k, mid);
        if e.f == 0.0 {
            return Ok(SecularRoot {
                origin: k,
                offset: mid,
            });
        }
        if e.f > 0.0 {
            origin = k;
            lo = 0.0;
            hi = mid;
            tau = mid;
        } else {
            origin = k + 1;
            lo = -(d[k + 1] - d[k]) / 2.0;
            hi = 0.0;
            tau = lo;
        }
    }
    for (i, di) in deltas.iter_mut().enumerate() {
        *di = d[i] - d[origin];
    }

    for _ in 0..MAX_ITER {
        let e = eval_at(deltas, &z2, rho, k, tau);
        if e.f.abs() <= e.tol {
            return Ok(SecularRoot {
                origin,
                offset: tau,
            });
        }
        if e.f < 0.0 {
            lo = lo.max(tau);
        } else {
            hi = hi.min(tau);
        }
        if hi - lo <= 4.0 * f64::EPSILON * lo.abs().max(hi.abs()) {
            return Ok(SecularRoot {
                origin,
                offset: if e.f < 0.0 { hi } else { lo },
            });
        }
        let step = if last {
            one_pole_step(deltas[k] - tau, &e)
        } else {
            two_pole_step(deltas[k] - tau, deltas[k + 1] - tau, &e)
        };
        let next = step.map(|eta| tau + eta);
        tau = match next {
            Some(t) if t > lo && t < hi && t != tau => t,
            _ => 0.5 * (lo + hi),
        };
        if !(tau > lo && tau < hi) {
            // the bracket can no longer be split
            return Ok(SecularRoot {
                origin,
                offset: tau,
            });
        }
    }
    Err(Error::numerical(
        "secular solver",
        format!(
            "no convergence for root {k} in ({:e}, {:e})",
            d[k],
            if last { f64::INFINITY } else { d[k + 1] }
        ),
    ))
}

/// Model c + s/(a−η) + S/(b−η) matched to f and its split derivatives; returns
/// its unique root in (a, b).
fn two_pole_step(a: f64, b: f64, e: &Eval) -> Option<f64> {
    let s = a * a * e.psi_d;
    let big_s = b * b * e.phi_d;
    let c = e.f - a * e.psi_d - b * e.phi_d;
    let aa = c * (a + b) + s + big_s;
    let bb = c * a * b + s * b + big_s * a;
    let roots = if c == 0.0 {
        if aa == 0.0 {
            return None;
        }
        [bb / aa, f64::NAN]
    } else {
        let disc = (aa * aa - 4.0 * c * bb).max(0.0).sqrt();
        let q = 0.5 * (aa + aa.signum() * disc);
        if q == 0.0 {
            return None;
        }
        [q / c, bb / q]
    };
    roots
        .into_iter()
        .filter(|eta| eta.is_finite() && *eta > a && *eta < b)
        .min_by(|x, y| x.abs().total_cmp(&y.abs()))
}

/// Model c + s/(a−η) for the outermost root.
fn one_pole_step(a: f64, e: &Eval) -> Option<f64> {
    let s = a * a * e.psi_d;
    let c = e.f - a * e.psi_d;
    if c <= 0.0 {
        // fall back to a Newton step
        return (e.df > 0.0).then(|| -e.f / e.df);
    }
    let eta = a + s / c;
    (eta.is_finite() && eta > a).then_some(eta)
}
