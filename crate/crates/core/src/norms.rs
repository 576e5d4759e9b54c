//! Weighted coefficient-space norms, supports and best s-term truncation.
//!
//! Indices are 0-based throughout the library; only serialized traces use
//! 1-based atom numbers.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::CoefVector;

/// Support tolerance for solver outputs.
pub const SOLVER_SUPPORT_TOL: f64 = 1e-10;

/// Sorted set of distinct coefficient indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    pub fn new(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        Self(indices)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    /// Indices of `0..len` not in the set.
    pub fn complement(&self, len: usize) -> IndexSet {
        IndexSet((0..len).filter(|i| !self.contains(*i)).collect())
    }

    /// `c` restricted to this set (zero elsewhere).
    pub fn restrict(&self, c: &CoefVector) -> CoefVector {
        let mut out = DVector::zeros(c.len());
        for &i in &self.0 {
            out[i] = c[i];
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }
}

impl From<Vec<usize>> for IndexSet {
    fn from(v: Vec<usize>) -> Self {
        Self::new(v)
    }
}

fn check_weights(c: &CoefVector, w: &DVector<f64>) -> Result<()> {
    if c.len() != w.len() {
        return Err(Error::DimensionMismatch {
            what: "weights",
            expected: c.len(),
            found: w.len(),
        });
    }
    Ok(())
}

/// `||c||_{p,w} = (sum |c_i|^p w_i^p)^{1/p}` for `p > 0`.
pub fn weighted_p_norm(c: &CoefVector, w: &DVector<f64>, p: f64) -> Result<f64> {
    check_weights(c, w)?;
    if !(p > 0.0) || !p.is_finite() {
        return Err(Error::InvalidExponent(p));
    }
    Ok(weighted_p_norm_unchecked(c, w, p))
}

pub(crate) fn weighted_p_norm_unchecked(c: &CoefVector, w: &DVector<f64>, p: f64) -> f64 {
    if p == 1.0 {
        return c.iter().zip(w.iter()).map(|(x, w)| (x * w).abs()).sum();
    }
    if p == 2.0 {
        return c.iter().zip(w.iter()).map(|(x, w)| (x * w).powi(2)).sum::<f64>().sqrt();
    }
    c.iter()
        .zip(w.iter())
        .map(|(x, w)| (x * w).abs().powf(p))
        .sum::<f64>()
        .powf(1.0 / p)
}

/// `||c||_{1,w}`.
pub fn weighted_l1(c: &CoefVector, w: &DVector<f64>) -> Result<f64> {
    weighted_p_norm(c, w, 1.0)
}

/// `||c||_{2,w}`.
pub fn weighted_l2(c: &CoefVector, w: &DVector<f64>) -> Result<f64> {
    weighted_p_norm(c, w, 2.0)
}

/// `<c, d>_w = sum c_i d_i w_i^2`.
pub fn weighted_inner(c: &CoefVector, d: &CoefVector, w: &DVector<f64>) -> Result<f64> {
    check_weights(c, w)?;
    check_weights(d, w)?;
    Ok(c.iter()
        .zip(d.iter())
        .zip(w.iter())
        .map(|((a, b), w)| a * b * w * w)
        .sum())
}

/// Indices with `|c_i| > tol`.
pub fn support(c: &CoefVector, tol: f64) -> IndexSet {
    IndexSet(
        c.iter()
            .enumerate()
            .filter(|(_, x)| x.abs() > tol)
            .map(|(i, _)| i)
            .collect(),
    )
}

/// `||c||_0` at tolerance `tol`.
pub fn l0(c: &CoefVector, tol: f64) -> usize {
    c.iter().filter(|x| x.abs() > tol).count()
}

/// Keeps the `s` entries of largest weighted magnitude `w_i |c_i|` (ties to
/// the lower index) and zeroes the rest. Returns `(c_s, T_0)`.
pub fn hard_truncate(c: &CoefVector, w: &DVector<f64>, s: usize) -> Result<(CoefVector, IndexSet)> {
    check_weights(c, w)?;
    if s > c.len() {
        return Err(Error::InvalidSparsity { s, len: c.len() });
    }
    let mut order: Vec<usize> = (0..c.len()).collect();
    // Stable sort keeps lower indices first among equal magnitudes.
    order.sort_by(|&a, &b| {
        let ma = (w[a] * c[a]).abs();
        let mb = (w[b] * c[b]).abs();
        mb.total_cmp(&ma)
    });
    let kept = IndexSet::new(order[..s].to_vec());
    Ok((kept.restrict(c), kept))
}

/// Compressibility tail `e_0 = ||c - c_s||_{1,w} / sqrt(s)`.
pub fn tail_e0(c: &CoefVector, w: &DVector<f64>, s: usize) -> Result<f64> {
    if s == 0 {
        return Err(Error::InvalidSparsity { s, len: c.len() });
    }
    let (cs, _) = hard_truncate(c, w, s)?;
    Ok(weighted_p_norm_unchecked(&(c - cs), w, 1.0) / (s as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn v(x: &[f64]) -> CoefVector {
        DVector::from_column_slice(x)
    }

    fn w() -> DVector<f64> {
        v(&[1.0, 1.0, 2.0])
    }

    #[test]
    fn p_norm_examples() {
        assert_eq!(weighted_p_norm(&v(&[0.0, 0.0, 0.0]), &w(), 1.0).unwrap(), 0.0);
        assert_relative_eq!(weighted_p_norm(&v(&[1.0, -2.0, 1.0]), &w(), 1.0).unwrap(), 5.0);
        assert_relative_eq!(weighted_p_norm(&v(&[1.0, -2.0, 1.0]), &w(), 2.0).unwrap(), 3.0);
        // generic exponent path agrees with the specialised ones
        assert_relative_eq!(
            weighted_p_norm(&v(&[1.0, -2.0, 1.0]), &w(), 2.0 + 1e-15).unwrap(),
            3.0,
            epsilon = 1e-12
        );
        assert_relative_eq!(
            weighted_p_norm(&v(&[1.0, -2.0, 1.0]), &w(), 0.5).unwrap(),
            (1.0 + 2f64.sqrt() + 2f64.sqrt()).powi(2)
        );
    }

    #[test]
    fn p_norm_errors() {
        assert!(matches!(
            weighted_p_norm(&v(&[1.0]), &w(), 1.0),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            weighted_p_norm(&v(&[1.0, 1.0, 1.0]), &w(), 0.0),
            Err(Error::InvalidExponent(_))
        ));
        assert!(matches!(
            weighted_p_norm(&v(&[1.0, 1.0, 1.0]), &w(), -1.0),
            Err(Error::InvalidExponent(_))
        ));
    }

    #[test]
    fn inner_examples() {
        assert_eq!(
            weighted_inner(&v(&[1.0, 0.0, 0.0]), &v(&[0.0, 1.0, 0.0]), &w()).unwrap(),
            0.0
        );
        assert_eq!(
            weighted_inner(&v(&[1.0, 1.0, 1.0]), &v(&[1.0, 1.0, 1.0]), &w()).unwrap(),
            6.0
        );
        assert_eq!(
            weighted_inner(&v(&[1.0, -2.0, 1.0]), &v(&[1.0, 1.0, 1.0]), &w()).unwrap(),
            3.0
        );
        let c = v(&[0.3, -1.2, 2.5]);
        assert_relative_eq!(
            weighted_inner(&c, &c, &w()).unwrap(),
            weighted_l2(&c, &w()).unwrap().powi(2),
            epsilon = 1e-14
        );
    }

    #[test]
    fn support_examples() {
        assert!(support(&v(&[0.0, 0.0, 0.0]), 0.0).is_empty());
        assert_eq!(l0(&v(&[0.0, 0.0, 0.0]), 0.0), 0);
        assert_eq!(support(&v(&[1.0, 0.0, -3.0]), 0.0).as_slice(), &[0, 2]);
        assert_eq!(l0(&v(&[1.0, 0.0, -3.0]), 0.0), 2);
        assert_eq!(support(&v(&[1e-12, 1.0, 0.0]), SOLVER_SUPPORT_TOL).as_slice(), &[1]);
        assert_eq!(l0(&v(&[1e-12, 1.0, 0.0]), SOLVER_SUPPORT_TOL), 1);
    }

    #[test]
    fn truncation_examples() {
        let (cs, t0) = hard_truncate(&v(&[3.0, -1.0, 1.0]), &w(), 1).unwrap();
        assert_eq!(cs.as_slice(), &[3.0, 0.0, 0.0]);
        assert_eq!(t0.as_slice(), &[0]);
        let (cs, _) = hard_truncate(&v(&[3.0, -1.0, 1.0]), &w(), 3).unwrap();
        assert_eq!(cs.as_slice(), &[3.0, -1.0, 1.0]);
        let (cs, t0) = hard_truncate(&v(&[1.0, 1.0, 1.0]), &w(), 1).unwrap();
        assert_eq!(cs.as_slice(), &[0.0, 0.0, 1.0]);
        assert_eq!(t0.as_slice(), &[2]);
        // ties go to the lowest index
        let (_, t0) = hard_truncate(&v(&[1.0, -1.0, 0.5]), &w(), 1).unwrap();
        assert_eq!(t0.as_slice(), &[0]);
        assert!(matches!(
            hard_truncate(&v(&[1.0, 1.0, 1.0]), &w(), 4),
            Err(Error::InvalidSparsity { .. })
        ));
        let (cs, t0) = hard_truncate(&v(&[1.0, 1.0, 1.0]), &w(), 0).unwrap();
        assert!(t0.is_empty() && cs.iter().all(|x| *x == 0.0));
    }

    #[test]
    fn tail_examples() {
        assert_eq!(tail_e0(&v(&[3.0, 0.0, 0.0]), &w(), 1).unwrap(), 0.0);
        assert_relative_eq!(tail_e0(&v(&[3.0, -1.0, 1.0]), &w(), 1).unwrap(), 3.0);
        assert_relative_eq!(
            tail_e0(&v(&[3.0, -1.0, 1.0]), &w(), 2).unwrap(),
            0.5f64.sqrt(),
            epsilon = 1e-15
        );
        assert!(matches!(
            tail_e0(&v(&[3.0, -1.0, 1.0]), &w(), 0),
            Err(Error::InvalidSparsity { .. })
        ));
    }

    #[test]
    fn index_set_helpers() {
        let s = IndexSet::new(vec![3, 1, 3]);
        assert_eq!(s.as_slice(), &[1, 3]);
        assert_eq!(s.complement(5).as_slice(), &[0, 2, 4]);
        assert_eq!(
            s.restrict(&v(&[1.0, 2.0, 3.0, 4.0, 5.0])).as_slice(),
            &[0.0, 2.0, 0.0, 4.0, 0.0]
        );
    }
}
