//! Orthogonal matching pursuit over dictionaries with arbitrary atom norms.
//!
//! Atoms are compared through their normalized correlation
//! `|<r, f_j>| / ||f_j||`, which makes every selection invariant under
//! per-atom rescaling. If `c` is `s`-sparse and `mu (2s - 1) < 1`, the first
//! selection on `y = Tc` lands in `supp c`, and by induction OMP recovers `c`
//! exactly in `s` steps.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::dictionary::Dictionary;
use crate::error::{Error, Result};
use crate::linalg::{least_squares_qr, select_columns};
use crate::{CoefVector, Signal};

/// Relative residual tolerance used when no stopping rule is given.
pub const DEFAULT_RELATIVE_RESIDUAL_TOL: f64 = 1e-10;

/// Index maximizing `|<r, f_j>| / ||f_j||`, ties to the lowest index.
pub fn select_index(dict: &Dictionary, r: &Signal) -> Result<usize> {
    select_excluding(dict, r, &[]).map(|(j, _)| j)
}

/// Normalized absolute correlations `|<r, f_j>| / ||f_j||` for every atom.
pub fn normalized_correlations(dict: &Dictionary, r: &Signal) -> Result<DVector<f64>> {
    let corr = dict.analyze(r)?;
    Ok(corr.zip_map(dict.weights(), |c, w| c.abs() / w))
}

fn select_excluding(dict: &Dictionary, r: &Signal, active: &[usize]) -> Result<(usize, f64)> {
    let scores = normalized_correlations(dict, r)?;
    if r.norm() == 0.0 {
        return Err(Error::ZeroResidual);
    }
    let mut best: Option<(usize, f64)> = None;
    for (j, &score) in scores.iter().enumerate() {
        if active.contains(&j) {
            continue;
        }
        if best.is_none_or(|(_, b)| score > b) {
            best = Some((j, score));
        }
    }
    best.ok_or(Error::ZeroResidual)
}

/// When OMP stops. Whichever limit is reached first ends the loop.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct StopRule {
    pub max_atoms: Option<usize>,
    /// Absolute Euclidean residual tolerance. Defaults to `1e-10 ||y||`.
    pub residual_tol: Option<f64>,
}

impl StopRule {
    pub fn atoms(s: usize) -> Self {
        Self {
            max_atoms: Some(s),
            residual_tol: None,
        }
    }

    pub fn tolerance(tol: f64) -> Self {
        Self {
            max_atoms: None,
            residual_tol: Some(tol),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OmpTrace {
    /// Selected atom indices (0-based) in selection order.
    pub selected: Vec<usize>,
    /// Residual norm after each iteration.
    pub residual_norms: Vec<f64>,
    pub coefficients: CoefVector,
    pub residual: Signal,
}

impl OmpTrace {
    pub fn to_record(&self) -> OmpRecord {
        OmpRecord {
            selected: self.selected.iter().map(|j| j + 1).collect(),
            residual_norms: self.residual_norms.clone(),
            coefficients: self.coefficients.iter().copied().collect(),
            recovered: None,
        }
    }
}

/// Serialized OMP trace; atom indices are 1-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OmpRecord {
    pub selected: Vec<usize>,
    pub residual_norms: Vec<f64>,
    pub coefficients: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub recovered: Option<bool>,
}

/// Runs orthogonal matching pursuit on `y`.
///
/// Each iteration selects the atom with the largest normalized correlation
/// to the residual among the inactive atoms, refits all active coefficients
/// by least squares (Householder QR of the active submatrix) and updates the
/// residual. The loop also ends when the active set reaches `min(n, N)` atoms
/// or the residual is orthogonal to every atom.
pub fn omp_recover(dict: &Dictionary, y: &Signal, stop: StopRule) -> Result<OmpTrace> {
    if y.len() != dict.dim() {
        return Err(Error::DimensionMismatch {
            what: "signal",
            expected: dict.dim(),
            found: y.len(),
        });
    }
    if let Some(tol) = stop.residual_tol {
        if !(tol >= 0.0) {
            return Err(Error::Config(format!("residual tolerance must be >= 0, got {tol}")));
        }
    }
    let tol = stop.residual_tol.unwrap_or(DEFAULT_RELATIVE_RESIDUAL_TOL * y.norm());
    let limit = stop.max_atoms.unwrap_or(usize::MAX).min(dict.dim()).min(dict.len());

    let mut selected = Vec::new();
    let mut residual_norms = Vec::new();
    let mut coefficients = DVector::zeros(dict.len());
    let mut residual = y.clone();
    let mut rnorm = residual.norm();

    while selected.len() < limit && rnorm > tol {
        let (j, score) = select_excluding(dict, &residual, &selected)?;
        if score <= f64::EPSILON * rnorm {
            break;
        }
        selected.push(j);
        let sub = select_columns(dict.matrix(), &selected);
        let fit = least_squares_qr(&sub, y)?;
        coefficients.fill(0.0);
        for (k, &idx) in selected.iter().enumerate() {
            coefficients[idx] = fit[k];
        }
        residual = y - &sub * &fit;
        rnorm = residual.norm();
        residual_norms.push(rnorm);
    }

    Ok(OmpTrace {
        selected,
        residual_norms,
        coefficients,
        residual,
    })
}
