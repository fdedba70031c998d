use crate::error::Result;

/// A stateful set function over the ground set {0, …, n−1}.
///
/// Gains are read-only so they can be evaluated concurrently; commits need
/// exclusive access.
pub trait SetObjective: Sync {
    fn ground_size(&self) -> usize;

    /// f of the committed subset.
    fn value(&self) -> f64;

    /// f(S ∪ {e}) − f(S).
    fn gain(&self, element: usize) -> Result<f64>;

    fn commit(&mut self, element: usize) -> Result<()>;

    /// Committed elements in commit order.
    fn selected(&self) -> &[usize];

    fn name(&self) -> String;
}

/// f(S) = Σ_{i∈S} w_i.
#[derive(Debug, Clone)]
pub struct ModularObjective {
    weights: Vec<f64>,
    selected: Vec<usize>,
    in_set: Vec<bool>,
    value: f64,
}

impl ModularObjective {
    pub fn new(weights: Vec<f64>) -> Self {
        let n = weights.len();
        Self {
            weights,
            selected: Vec::new(),
            in_set: vec![false; n],
            value: 0.0,
        }
    }
}

impl SetObjective for ModularObjective {
    fn ground_size(&self) -> usize {
        self.weights.len()
    }

    fn value(&self) -> f64 {
        self.value
    }

    fn gain(&self, element: usize) -> Result<f64> {
        check_element(element, self.weights.len())?;
        Ok(if self.in_set[element] {
            0.0
        } else {
            self.weights[element]
        })
    }

    fn commit(&mut self, element: usize) -> Result<()> {
        let g = self.gain(element)?;
        if !self.in_set[element] {
            self.in_set[element] = true;
            self.selected.push(element);
            self.value += g;
        }
        Ok(())
    }

    fn selected(&self) -> &[usize] {
        &self.selected
    }

    fn name(&self) -> String {
        "modular".into()
    }
}

pub(crate) fn check_element(element: usize, n: usize) -> Result<()> {
    if element >= n {
        Err(crate::Error::invalid(format!(
            "element {element} is out of range for a ground set of size {n}"
        )))
    } else {
        Ok(())
    }
}
