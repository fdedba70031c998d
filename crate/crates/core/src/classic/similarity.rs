use std::io::{Read, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{dot, DesignMatrix};

/// Default number of neighbours kept per column.
pub const DEFAULT_TOP_K: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Kernel {
    Dot,
    Cosine,
    /// exp(−‖x_i − x_j‖² / σ).
    Rbf {
        sigma: f64,
    },
}

impl Default for Kernel {
    fn default() -> Self {
        Kernel::Rbf { sigma: 1.0 }
    }
}

/// Column-oriented top-k similarities: for each covered element j, the pairs
/// (i, s_ij) with the largest s_ij, sorted descending (ties by lower i).
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSimilarity {
    n: usize,
    top_k: usize,
    columns: Vec<Vec<(u32, f64)>>,
}

impl SparseSimilarity {
    pub fn from_columns(n: usize, top_k: usize, columns: Vec<Vec<(u32, f64)>>) -> Result<Self> {
        if columns.len() != n {
            return Err(Error::invalid(format!(
                "expected {n} columns, got {}",
                columns.len()
            )));
        }
        for (j, col) in columns.iter().enumerate() {
            if col.len() > top_k {
                return Err(Error::invalid(format!(
                    "column {j} has more than {top_k} entries"
                )));
            }
            if let Some(&(i, s)) = col
                .iter()
                .find(|(i, s)| *i as usize >= n || !(*s >= 0.0) || !s.is_finite())
            {
                return Err(Error::invalid(format!(
                    "column {j} has invalid entry ({i}, {s})"
                )));
            }
        }
        Ok(Self { n, top_k, columns })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn top_k(&self) -> usize {
        self.top_k
    }

    pub fn column(&self, j: usize) -> &[(u32, f64)] {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[Vec<(u32, f64)>] {
        &self.columns
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    /// Per-candidate view: for each i, the pairs (j, s_ij).
    pub fn by_candidate(&self) -> Vec<Vec<(u32, f64)>> {
        let mut rows = vec![Vec::new(); self.n];
        for (j, col) in self.columns.iter().enumerate() {
            for &(i, s) in col {
                rows[i as usize].push((j as u32, s));
            }
        }
        rows
    }

    /// Write the SIM1 little-endian layout.
    pub fn write_sim1(&self, mut w: impl Write) -> Result<()> {
        let n = u32::try_from(self.n).map_err(|_| Error::invalid("n does not fit in u32"))?;
        let k =
            u32::try_from(self.top_k).map_err(|_| Error::invalid("top_k does not fit in u32"))?;
        w.write_all(b"SIM1")?;
        w.write_all(&n.to_le_bytes())?;
        w.write_all(&k.to_le_bytes())?;
        for col in &self.columns {
            w.write_all(&(col.len() as u32).to_le_bytes())?;
        }
        for col in &self.columns {
            for &(i, s) in col {
                w.write_all(&i.to_le_bytes())?;
                w.write_all(&s.to_le_bytes())?;
            }
        }
        Ok(())
    }

    pub fn read_sim1(mut r: impl Read) -> Result<Self> {
        let mut buf = Vec::new();
        r.read_to_end(&mut buf)?;
        let mut cur = crate::io::ByteCursor::new(&buf);
        if cur.take(4)? != b"SIM1" {
            return Err(Error::format("missing SIM1 magic"));
        }
        let n = cur.u32()? as usize;
        let top_k = cur.u32()? as usize;
        let counts = (0..n)
            .map(|_| cur.u32().map(|c| c as usize))
            .collect::<Result<Vec<_>>>()?;
        let mut columns = Vec::with_capacity(n);
        for c in counts {
            let mut col = Vec::with_capacity(c);
            for _ in 0..c {
                col.push((cur.u32()?, cur.f64()?));
            }
            columns.push(col);
        }
        if !cur.is_empty() {
            return Err(Error::format("trailing bytes after SIM1 payload"));
        }
        Self::from_columns(n, top_k, columns).map_err(|e| Error::format(e.to_string()))
    }
}

/// s_ij for one pair under the kernel, clamped at 0.
pub fn kernel_value(kernel: Kernel, a: &[f64], b: &[f64]) -> f64 {
    match kernel {
        Kernel::Dot => dot(a, b).max(0.0),
        Kernel::Cosine => (dot(a, b) / (dot(a, a).sqrt() * dot(b, b).sqrt())).clamp(0.0, 1.0),
        Kernel::Rbf { sigma } => {
            let d2: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
            (-d2 / sigma).exp()
        }
    }
}

/// Dense kernel evaluation followed by a top-k cut per column. Zero
/// similarities are not stored.
pub fn build_similarity(
    design: &DesignMatrix,
    kernel: Kernel,
    top_k: usize,
) -> Result<SparseSimilarity> {
    if top_k == 0 {
        return Err(Error::invalid("top_k must be at least 1"));
    }
    match kernel {
        Kernel::Rbf { sigma } if !(sigma > 0.0 && sigma.is_finite()) => {
            return Err(Error::invalid("rbf sigma must be positive"));
        }
        Kernel::Cosine => {
            if let Some(i) = (0..design.rows()).find(|&i| design.row(i).iter().all(|&x| x == 0.0)) {
                return Err(Error::invalid(format!(
                    "row {i} is zero; cosine similarity is undefined"
                )));
            }
        }
        _ => {}
    }
    let n = design.rows();
    let columns: Vec<Vec<(u32, f64)>> = (0..n)
        .into_par_iter()
        .map(|j| {
            let xj = design.row(j);
            let mut col: Vec<(u32, f64)> = (0..n)
                .map(|i| (i as u32, kernel_value(kernel, design.row(i), xj)))
                .filter(|&(_, s)| s > 0.0)
                .collect();
            col.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
            col.truncate(top_k);
            col
        })
        .collect();
    SparseSimilarity::from_columns(n, top_k, columns)
}
