use std::sync::Arc;

use super::similarity::SparseSimilarity;
use crate::error::{Error, Result};
use crate::linalg::compensated_sum;
use crate::set_function::{check_element, SetObjective};

/// Facility location f(A) = Σ_j max_{i∈A} s_ij over a sparse similarity.
#[derive(Debug, Clone)]
pub struct FacilityLocation {
    sim: Arc<SparseSimilarity>,
    /// For each candidate i, the columns j it covers with s_ij.
    covers: Arc<Vec<Vec<(u32, f64)>>>,
    best: Vec<f64>,
    selected: Vec<usize>,
    in_set: Vec<bool>,
}

impl FacilityLocation {
    pub fn new(sim: SparseSimilarity) -> Self {
        let covers = Arc::new(sim.by_candidate());
        let n = sim.n();
        Self {
            sim: Arc::new(sim),
            covers,
            best: vec![0.0; n],
            selected: Vec::new(),
            in_set: vec![false; n],
        }
    }

    pub fn similarity(&self) -> &SparseSimilarity {
        &self.sim
    }

    /// Current max_{i∈A} s_ij per column.
    pub fn best(&self) -> &[f64] {
        &self.best
    }

    /// f(A) of an arbitrary subset, straight from the definition.
    pub fn evaluate_subset(sim: &SparseSimilarity, subset: &[usize]) -> f64 {
        let mut member = vec![false; sim.n()];
        for &i in subset {
            member[i] = true;
        }
        compensated_sum((0..sim.n()).map(|j| {
            sim.column(j)
                .iter()
                .filter(|(i, _)| member[*i as usize])
                .map(|&(_, s)| s)
                .fold(0.0, f64::max)
        }))
    }
}

impl SetObjective for FacilityLocation {
    fn ground_size(&self) -> usize {
        self.sim.n()
    }

    fn value(&self) -> f64 {
        compensated_sum(self.best.iter().copied())
    }

    fn gain(&self, element: usize) -> Result<f64> {
        check_element(element, self.ground_size())?;
        Ok(compensated_sum(
            self.covers[element]
                .iter()
                .map(|&(j, s)| (s - self.best[j as usize]).max(0.0)),
        ))
    }

    fn commit(&mut self, element: usize) -> Result<()> {
        check_element(element, self.ground_size())?;
        if self.in_set[element] {
            return Err(Error::invalid(format!(
                "element {element} is already selected"
            )));
        }
        for &(j, s) in &self.covers[element] {
            let b = &mut self.best[j as usize];
            if s > *b {
                *b = s;
            }
        }
        self.in_set[element] = true;
        self.selected.push(element);
        Ok(())
    }

    fn selected(&self) -> &[usize] {
        &self.selected
    }

    fn name(&self) -> String {
        "facility_location".into()
    }
}

pub fn fl_gain(state: &FacilityLocation, s: usize) -> Result<f64> {
    state.gain(s)
}

pub fn fl_commit(state: &mut FacilityLocation, s: usize) -> Result<()> {
    state.commit(s)
}

pub fn fl_eval(state: &FacilityLocation) -> f64 {
    state.value()
}
