use std::sync::Arc;

use super::normalize::{density_normalize, Normalization};
use super::phi::PhiSpec;
use super::vendi::{unit_trace, vendi_score};
use crate::eigen::{QueryScratch, SpectralState};
use crate::error::{Error, Result};
use crate::linalg::{add_outer, compensated_sum, dense_eigen_oracle, CompensatedSum, DesignMatrix};
use crate::set_function::{check_element, SetObjective};

/// f(X) = Σ φ(λ_i(B_X)) over the eigenvalues of B_X = Σ_{i∈X} x_i x_iᵀ.
///
/// Reported values subtract the empty-set baseline m·φ(0), so f(∅) = 0.
/// Gains and commits go through the incremental eigensolver.
#[derive(Debug, Clone)]
pub struct SpectralObjective {
    phi: PhiSpec,
    normalization: Normalization,
    design: Arc<DesignMatrix>,
    state: SpectralState,
    selected: Vec<usize>,
    in_set: Vec<bool>,
}

impl SpectralObjective {
    /// Normalizes the design according to `normalization` and starts from ∅.
    pub fn new(design: &DesignMatrix, phi: PhiSpec, normalization: Normalization) -> Result<Self> {
        let design = Arc::new(density_normalize(design, normalization)?);
        Self::from_shared(design, phi, normalization)
    }

    /// Use an already-normalized design as is.
    pub fn from_shared(
        design: Arc<DesignMatrix>,
        phi: PhiSpec,
        normalization: Normalization,
    ) -> Result<Self> {
        let phi = phi.validated()?;
        if let PhiSpec::LogShift { t } = phi {
            if t == 0.0 {
                return Err(Error::UnsupportedPhi(
                    "log_shift with t = 0 is -inf on rank-deficient subsets".into(),
                ));
            }
        }
        let n = design.rows();
        Ok(Self {
            state: SpectralState::new(design.cols()),
            phi,
            normalization,
            design,
            selected: Vec::new(),
            in_set: vec![false; n],
        })
    }

    pub fn phi(&self) -> &PhiSpec {
        &self.phi
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn design(&self) -> &Arc<DesignMatrix> {
        &self.design
    }

    pub fn state(&self) -> &SpectralState {
        &self.state
    }

    /// Σ φ(λ_i) + (m − r)·φ(0), without the baseline shift.
    pub fn value_raw(&self) -> f64 {
        let m = self.state.dim();
        let r = self.state.rank();
        let mut acc = CompensatedSum::new();
        for &x in self.state.eigvals() {
            acc.add(self.phi.value(x));
        }
        acc.add((m - r) as f64 * self.phi.value(0.0));
        acc.value()
    }

    /// Renyi Vendi score of the selected subset, spectrum rescaled to unit trace.
    pub fn vendi(&self, q: f64) -> Result<f64> {
        vendi_score(&unit_trace(self.state.eigvals()), q)
    }

    fn delta(&self, element: usize, rho: f64) -> Result<f64> {
        let mut scratch = QueryScratch::new();
        let s = self
            .state
            .spectrum_after_rank_one(self.design.row(element), rho, &mut scratch)?;
        let mut acc = CompensatedSum::new();
        for &x in &s.moved_to {
            acc.add(self.phi.shifted_value(x));
        }
        for &x in &s.moved_from {
            acc.add(-self.phi.shifted_value(x));
        }
        Ok(acc.value())
    }

    /// f(S \ {e}) − f(S) for a committed element.
    pub fn remove_gain(&self, element: usize) -> Result<f64> {
        check_element(element, self.ground_size())?;
        if !self.in_set[element] {
            return Err(Error::invalid(format!("element {element} is not selected")));
        }
        self.delta(element, -1.0)
    }

    pub fn remove(&mut self, element: usize) -> Result<()> {
        check_element(element, self.ground_size())?;
        let pos = self
            .selected
            .iter()
            .position(|&e| e == element)
            .ok_or_else(|| Error::invalid(format!("element {element} is not selected")))?;
        self.state.commit_rank_one(self.design.row(element), -1.0)?;
        self.selected.remove(pos);
        self.in_set[element] = false;
        Ok(())
    }
}

impl SetObjective for SpectralObjective {
    fn ground_size(&self) -> usize {
        self.design.rows()
    }

    fn value(&self) -> f64 {
        compensated_sum(
            self.state
                .eigvals()
                .iter()
                .map(|&x| self.phi.shifted_value(x)),
        )
    }

    fn gain(&self, element: usize) -> Result<f64> {
        check_element(element, self.ground_size())?;
        if self.in_set[element] {
            return Err(Error::invalid(format!(
                "element {element} is already selected"
            )));
        }
        self.delta(element, 1.0)
    }

    fn commit(&mut self, element: usize) -> Result<()> {
        check_element(element, self.ground_size())?;
        if self.in_set[element] {
            return Err(Error::invalid(format!(
                "element {element} is already selected"
            )));
        }
        self.state.commit_rank_one(self.design.row(element), 1.0)?;
        self.in_set[element] = true;
        self.selected.push(element);
        Ok(())
    }

    fn selected(&self) -> &[usize] {
        &self.selected
    }

    fn name(&self) -> String {
        self.phi.name().to_string()
    }
}

/// Reference evaluator that keeps B_X dense and runs a full symmetric
/// eigensolve for every gain.
#[derive(Debug, Clone)]
pub struct DenseSpectralObjective {
    phi: PhiSpec,
    design: Arc<DesignMatrix>,
    gram: Vec<f64>,
    value: f64,
    selected: Vec<usize>,
    in_set: Vec<bool>,
}

impl DenseSpectralObjective {
    pub fn new(design: &DesignMatrix, phi: PhiSpec, normalization: Normalization) -> Result<Self> {
        let design = Arc::new(density_normalize(design, normalization)?);
        Self::from_shared(design, phi)
    }

    pub fn from_shared(design: Arc<DesignMatrix>, phi: PhiSpec) -> Result<Self> {
        let phi = phi.validated()?;
        let m = design.cols();
        let n = design.rows();
        Ok(Self {
            phi,
            design,
            gram: vec![0.0; m * m],
            value: 0.0,
            selected: Vec::new(),
            in_set: vec![false; n],
        })
    }

    pub fn gram(&self) -> &[f64] {
        &self.gram
    }

    fn spectrum_value(&self, b: &[f64]) -> f64 {
        let eig = dense_eigen_oracle(b, self.design.cols());
        compensated_sum(eig.iter().map(|&x| self.phi.shifted_value(x)))
    }
}

impl SetObjective for DenseSpectralObjective {
    fn ground_size(&self) -> usize {
        self.design.rows()
    }

    fn value(&self) -> f64 {
        self.value
    }

    fn gain(&self, element: usize) -> Result<f64> {
        check_element(element, self.ground_size())?;
        if self.in_set[element] {
            return Err(Error::invalid(format!(
                "element {element} is already selected"
            )));
        }
        let mut b = self.gram.clone();
        add_outer(&mut b, self.design.row(element), 1.0);
        Ok(self.spectrum_value(&b) - self.value)
    }

    fn commit(&mut self, element: usize) -> Result<()> {
        check_element(element, self.ground_size())?;
        if self.in_set[element] {
            return Err(Error::invalid(format!(
                "element {element} is already selected"
            )));
        }
        add_outer(&mut self.gram, self.design.row(element), 1.0);
        self.value = self.spectrum_value(&self.gram);
        self.in_set[element] = true;
        self.selected.push(element);
        Ok(())
    }

    fn selected(&self) -> &[usize] {
        &self.selected
    }

    fn name(&self) -> String {
        format!("{} (dense)", self.phi.name())
    }
}

/// f of an arbitrary subset, committed in the given order.
pub fn spectral_eval(
    design: &DesignMatrix,
    phi: PhiSpec,
    normalization: Normalization,
    subset: &[usize],
) -> Result<f64> {
    let mut obj = SpectralObjective::new(design, phi, normalization)?;
    for &i in subset {
        obj.commit(i)?;
    }
    Ok(obj.value())
}

/// Marginal gain f(S ∪ {e}) − f(S) (ρ = +1) or f(S \ {e}) − f(S) (ρ = −1).
pub fn spectral_gain(obj: &SpectralObjective, candidate: usize, rho: f64) -> Result<f64> {
    if rho > 0.0 {
        obj.gain(candidate)
    } else {
        obj.remove_gain(candidate)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn axes(m: usize) -> DesignMatrix {
        let rows: Vec<Vec<f64>> = (0..m)
            .map(|i| (0..m).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        DesignMatrix::from_rows(&rows).unwrap()
    }

    #[test]
    fn uniform_two_point_entropy() {
        let d = axes(2);
        let v = spectral_eval(&d, PhiSpec::vendi(), Normalization::Trace1, &[0, 1]).unwrap();
        assert!((v - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn log_shift_closed_form() {
        let d = DesignMatrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 2f64.sqrt()]]).unwrap();
        let mut obj =
            SpectralObjective::new(&d, PhiSpec::LogShift { t: 1.0 }, Normalization::None).unwrap();
        obj.commit(0).unwrap();
        obj.commit(1).unwrap();
        let expect = 2f64.ln() + 3f64.ln();
        assert!((obj.value_raw() - expect).abs() < 1e-14);
        assert!((obj.value() - expect).abs() < 1e-14);
    }

    #[test]
    fn empty_is_zero() {
        let obj = SpectralObjective::new(&axes(3), PhiSpec::Satexp, Normalization::None).unwrap();
        assert_eq!(obj.value(), 0.0);
    }

    #[test]
    fn singleton_gain() {
        let d = DesignMatrix::from_rows(&[vec![0.3, 0.4]]).unwrap();
        let phi = PhiSpec::Powerlaw {
            alpha: 1.0,
            beta: 1.0,
        };
        let obj = SpectralObjective::new(&d, phi, Normalization::None).unwrap();
        assert!((obj.gain(0).unwrap() - phi.shifted_value(0.25)).abs() < 1e-15);
    }

    #[test]
    fn remove_round_trip() {
        let d = DesignMatrix::from_rows(&[
            vec![1.0, 0.5, 0.0],
            vec![0.2, 1.0, 0.3],
            vec![0.0, 0.1, 1.0],
        ])
        .unwrap();
        let mut obj = SpectralObjective::new(&d, PhiSpec::vendi(), Normalization::Trace1).unwrap();
        obj.commit(0).unwrap();
        let v1 = obj.value();
        obj.commit(2).unwrap();
        let rg = obj.remove_gain(2).unwrap();
        assert!((obj.value() + rg - v1).abs() < 1e-12);
        obj.remove(2).unwrap();
        assert!((obj.value() - v1).abs() < 1e-12);
        assert_eq!(obj.selected(), &[0]);
    }
}
