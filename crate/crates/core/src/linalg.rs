//! Small dense linear-algebra helpers shared by the recovery modules.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

/// Relative pivot threshold below which a QR factor is treated as singular.
pub const RANK_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy)]
pub struct NormEstimate {
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Estimates the spectral norm `||A||_2` by power iteration on `A^T A`.
///
/// Stops once successive estimates agree to `rel_tol`. The start vector is a
/// fixed pseudo-random Gaussian so structured matrices cannot start
/// orthogonal to the top singular vector.
pub fn power_iteration_norm(a: &DMatrix<f64>, rel_tol: f64, max_iters: usize) -> NormEstimate {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut x = DVector::from_fn(a.ncols(), |_, _| StandardNormal.sample(&mut rng));
    let norm = x.norm();
    if norm == 0.0 || a.ncols() == 0 {
        return NormEstimate {
            value: 0.0,
            iterations: 0,
            converged: true,
        };
    }
    x /= norm;
    let mut estimate = 0.0;
    for it in 1..=max_iters {
        let ax = a * &x;
        let next = a.tr_mul(&ax);
        let lambda = next.norm();
        if lambda == 0.0 {
            return NormEstimate {
                value: 0.0,
                iterations: it,
                converged: true,
            };
        }
        let sigma = lambda.sqrt();
        x = next / lambda;
        if (sigma - estimate).abs() <= rel_tol * sigma {
            return NormEstimate {
                value: sigma,
                iterations: it,
                converged: true,
            };
        }
        estimate = sigma;
    }
    NormEstimate {
        value: estimate,
        iterations: max_iters,
        converged: false,
    }
}

/// Largest absolute eigenvalue of a symmetric matrix.
pub fn symmetric_spectral_norm(m: &DMatrix<f64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    SymmetricEigen::new(m.clone()).eigenvalues.amax()
}

/// Smallest singular value of `a` (0 for an empty matrix).
pub fn smallest_singular_value(a: &DMatrix<f64>) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.singular_values().min()
}

/// Columns `cols` of `a` as a new matrix.
pub fn select_columns(a: &DMatrix<f64>, cols: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(a.nrows(), cols.len(), |i, j| a[(i, cols[j])])
}

/// Least-squares solution of `min ||a x - y||` through a Householder QR of `a`.
///
/// Requires `a` to have at least as many rows as columns and full column
/// rank; otherwise returns `RankDeficientActiveSet`.
pub fn least_squares_qr(a: &DMatrix<f64>, y: &DVector<f64>) -> Result<DVector<f64>> {
    let k = a.ncols();
    if k == 0 {
        return Ok(DVector::zeros(0));
    }
    if a.nrows() < k {
        return Err(Error::RankDeficientActiveSet { size: k });
    }
    let qr = a.clone().qr();
    let r = qr.r();
    let diag_max = r.diagonal().amax();
    if diag_max == 0.0 || r.diagonal().iter().any(|d| d.abs() <= RANK_TOL * diag_max) {
        return Err(Error::RankDeficientActiveSet { size: k });
    }
    let qty = qr.q().tr_mul(y);
    r.solve_upper_triangular(&qty)
        .ok_or(Error::RankDeficientActiveSet { size: k })
}

/// `C(n, k)` in `u128`, saturating.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// Lexicographic `k`-subsets of `0..n`.
pub struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        let current = if k <= n { Some((0..k).collect()) } else { None };
        Self { n, current }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let k = out.len();
        let mut next = out.clone();
        let mut i = k;
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            if next[i] < self.n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(out)
    }
}
