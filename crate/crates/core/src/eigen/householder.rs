use crate::error::{Error, Result};

/// An elementary reflector H = I − 2wwᵀ that maps x onto a signed multiple of
/// one coordinate axis.
#[derive(Debug, Clone, PartialEq)]
pub struct Reflector {
    /// Unit vector w.
    pub w: Vec<f64>,
    /// Index of the axis x is mapped onto: argmax |x_i|, lowest index on ties.
    pub pivot: usize,
    /// sign(x_pivot), with sign(0) = +1. Hx = −sign·‖x‖·e_pivot.
    pub sign: f64,
}

impl Reflector {
    /// y ← Hy.
    pub fn apply(&self, y: &mut [f64]) {
        let s = 2.0 * crate::linalg::dot(&self.w, y);
        for (yi, wi) in y.iter_mut().zip(&self.w) {
            *yi -= s * wi;
        }
    }
}

/// Build the reflector taking x to −sign(x_j)‖x‖e_j with j the largest-magnitude
/// coordinate. Choosing the sign this way avoids cancellation in w = x + sign·‖x‖e_j.
pub fn householder_toward_axis(x: &[f64]) -> Result<Reflector> {
    let mut pivot = 0;
    for (i, xi) in x.iter().enumerate() {
        if xi.abs() > x[pivot].abs() {
            pivot = i;
        }
    }
    let scale = x.get(pivot).map_or(0.0, |v| v.abs());
    if scale == 0.0 || !scale.is_finite() {
        return Err(Error::invalid(
            "householder reflector of a zero or non-finite vector",
        ));
    }
    let sign = if x[pivot] < 0.0 { -1.0 } else { 1.0 };
    // scaled to avoid overflow in the norm
    let norm = scale * x.iter().map(|v| (v / scale).powi(2)).sum::<f64>().sqrt();
    let mut w = x.to_vec();
    w[pivot] += sign * norm;
    let wn = crate::linalg::norm(&w);
    for wi in &mut w {
        *wi /= wn;
    }
    Ok(Reflector { w, pivot, sign })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_four() {
        let h = householder_toward_axis(&[3.0, 4.0]).unwrap();
        assert_eq!(h.pivot, 1);
        assert_eq!(h.sign, 1.0);
        let mut y = vec![3.0, 4.0];
        h.apply(&mut y);
        assert!(y[0].abs() < 1e-15 && (y[1] + 5.0).abs() < 1e-14);
        // w ∝ (3, 9)
        assert!((h.w[1] / h.w[0] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn unit_axis_negates() {
        let h = householder_toward_axis(&[1.0, 0.0, 0.0]).unwrap();
        let mut y = vec![1.0, 0.0, 0.0];
        h.apply(&mut y);
        assert_eq!(h.pivot, 0);
        assert!((y[0] + 1.0).abs() < 1e-15 && y[1] == 0.0 && y[2] == 0.0);
    }

    #[test]
    fn ties_take_lowest_index() {
        let h = householder_toward_axis(&[1.0, 1.0]).unwrap();
        assert_eq!(h.pivot, 0);
        let mut y = vec![1.0, 1.0];
        h.apply(&mut y);
        assert!((crate::linalg::norm(&y) - 2f64.sqrt()).abs() < 1e-15);
        assert!(y[1].abs() < 1e-15);
    }

    #[test]
    fn negative_pivot_sign() {
        let h = householder_toward_axis(&[0.5, -2.0, 1.0]).unwrap();
        assert_eq!((h.pivot, h.sign), (1, -1.0));
        let mut y = vec![0.5, -2.0, 1.0];
        h.apply(&mut y);
        assert!((y[1] - 5.25f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn zero_vector_rejected() {
        assert!(householder_toward_axis(&[0.0, 0.0]).is_err());
        assert!(householder_toward_axis(&[]).is_err());
    }
}
