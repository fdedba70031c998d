use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Constraint {
    /// At most k elements.
    Cardinality { k: usize },
    /// At most quotas[b] elements from block b; element i lies in block_of[i].
    PartitionMatroid {
        block_of: Vec<usize>,
        quotas: Vec<usize>,
    },
}

impl Constraint {
    pub fn cardinality(k: usize) -> Self {
        Constraint::Cardinality { k }
    }

    pub fn partition(block_of: Vec<usize>, quotas: Vec<usize>) -> Self {
        Constraint::PartitionMatroid { block_of, quotas }
    }

    /// Check the constraint against a ground set of size n.
    pub fn validate(&self, n: usize) -> Result<()> {
        match self {
            Constraint::Cardinality { k } => {
                if *k == 0 || *k > n {
                    return Err(Error::invalid(format!(
                        "cardinality {k} is infeasible for a ground set of size {n}"
                    )));
                }
            }
            Constraint::PartitionMatroid { block_of, quotas } => {
                if block_of.len() != n {
                    return Err(Error::invalid(format!(
                        "partition assigns {} elements, ground set has {n}",
                        block_of.len()
                    )));
                }
                let mut sizes = vec![0usize; quotas.len()];
                for (i, &b) in block_of.iter().enumerate() {
                    if b >= quotas.len() {
                        return Err(Error::invalid(format!(
                            "element {i} lies in block {b}, which has no quota"
                        )));
                    }
                    sizes[b] += 1;
                }
                if let Some(b) = (0..quotas.len()).find(|&b| quotas[b] > sizes[b]) {
                    return Err(Error::invalid(format!(
                        "quota {} for block {b} exceeds its {} elements",
                        quotas[b], sizes[b]
                    )));
                }
                if quotas.iter().all(|&q| q == 0) {
                    return Err(Error::invalid("all partition quotas are zero"));
                }
            }
        }
        Ok(())
    }

    /// Largest feasible set size.
    pub fn budget(&self) -> usize {
        match self {
            Constraint::Cardinality { k } => *k,
            Constraint::PartitionMatroid { quotas, .. } => quotas.iter().sum(),
        }
    }

    pub(crate) fn tracker(&self) -> Tracker<'_> {
        let counts = match self {
            Constraint::Cardinality { .. } => vec![0],
            Constraint::PartitionMatroid { quotas, .. } => vec![0; quotas.len()],
        };
        Tracker {
            constraint: self,
            counts,
            total: 0,
        }
    }
}

/// Running feasibility bookkeeping for one selection.
pub(crate) struct Tracker<'a> {
    constraint: &'a Constraint,
    counts: Vec<usize>,
    total: usize,
}

impl Tracker<'_> {
    fn block(&self, e: usize) -> usize {
        match self.constraint {
            Constraint::Cardinality { .. } => 0,
            Constraint::PartitionMatroid { block_of, .. } => block_of[e],
        }
    }

    fn quota(&self, b: usize) -> usize {
        match self.constraint {
            Constraint::Cardinality { k } => *k,
            Constraint::PartitionMatroid { quotas, .. } => quotas[b],
        }
    }

    pub(crate) fn can_add(&self, e: usize) -> bool {
        let b = self.block(e);
        self.counts[b] < self.quota(b)
    }

    pub(crate) fn add(&mut self, e: usize) {
        let b = self.block(e);
        self.counts[b] += 1;
        self.total += 1;
    }

    pub(crate) fn snapshot(&self) -> (Vec<usize>, usize) {
        (self.counts.clone(), self.total)
    }

    pub(crate) fn restore(&mut self, saved: (Vec<usize>, usize)) {
        self.counts = saved.0;
        self.total = saved.1;
    }

    pub(crate) fn full(&self) -> bool {
        self.total >= self.constraint.budget()
    }
}
