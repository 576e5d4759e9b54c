//! Dictionaries (finite frames) with atoms of arbitrary nonzero norm.
//!
//! A [`Dictionary`] stores its atoms unnormalized as the columns of an
//! `n x N` matrix and caches the atom norms `w_i = ||f_i||`. Everything
//! weighted in this crate (norms, coherence, selection rules) is expressed
//! through those cached weights.

use std::path::Path;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::{CoefVector, Signal};

/// Atoms with Euclidean norm below this are rejected.
pub const ZERO_ATOM_FLOOR: f64 = 1e-12;

/// Default range for the random per-atom scales of the generators.
pub const DEFAULT_SCALE_RANGE: (f64, f64) = (0.5, 2.0);

#[derive(Debug, Clone, PartialEq)]
pub struct Dictionary {
    atoms: DMatrix<f64>,
    weights: DVector<f64>,
}

impl Dictionary {
    /// Builds a dictionary from a list of atoms. Atoms are stored as given.
    pub fn new(atoms: &[Vec<f64>]) -> Result<Self> {
        if atoms.len() < 2 {
            return Err(Error::InvalidDimension(format!(
                "a dictionary needs at least 2 atoms, got {}",
                atoms.len()
            )));
        }
        let n = atoms[0].len();
        if n == 0 {
            return Err(Error::InvalidDimension("atoms must have length >= 1".into()));
        }
        for atom in atoms {
            if atom.len() != n {
                return Err(Error::DimensionMismatch {
                    what: "atom length",
                    expected: n,
                    found: atom.len(),
                });
            }
        }
        let matrix = DMatrix::from_fn(n, atoms.len(), |i, j| atoms[j][i]);
        Self::from_matrix(matrix)
    }

    /// Builds a dictionary whose atoms are the columns of `atoms`.
    pub fn from_matrix(atoms: DMatrix<f64>) -> Result<Self> {
        if atoms.nrows() == 0 {
            return Err(Error::InvalidDimension("atoms must have length >= 1".into()));
        }
        if atoms.ncols() < 2 {
            return Err(Error::InvalidDimension(format!(
                "a dictionary needs at least 2 atoms, got {}",
                atoms.ncols()
            )));
        }
        if atoms.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("dictionary atoms"));
        }
        let weights = DVector::from_iterator(atoms.ncols(), atoms.column_iter().map(|c| c.norm()));
        if let Some((index, &norm)) = weights.iter().enumerate().find(|(_, w)| **w < ZERO_ATOM_FLOOR) {
            return Err(Error::ZeroNormAtom { index, norm });
        }
        Ok(Self { atoms, weights })
    }

    /// Ambient dimension `n`.
    pub fn dim(&self) -> usize {
        self.atoms.nrows()
    }

    /// Number of atoms `N`.
    pub fn len(&self) -> usize {
        self.atoms.ncols()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The `n x N` synthesis matrix (atoms as columns).
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.atoms
    }

    pub fn atom(&self, j: usize) -> DVector<f64> {
        self.atoms.column(j).into_owned()
    }

    /// Cached atom norms `w_i = ||f_i||`.
    pub fn weights(&self) -> &DVector<f64> {
        &self.weights
    }

    /// Atoms rescaled to unit norm, `f_j / ||f_j||`.
    pub fn normalized_matrix(&self) -> DMatrix<f64> {
        let mut m = self.atoms.clone();
        for (j, mut col) in m.column_iter_mut().enumerate() {
            col /= self.weights[j];
        }
        m
    }

    /// Returns a new dictionary with atom `j` multiplied by `scales[j]`.
    pub fn rescaled(&self, scales: &[f64]) -> Result<Self> {
        check_len("scales", self.len(), scales.len())?;
        let mut m = self.atoms.clone();
        for (j, mut col) in m.column_iter_mut().enumerate() {
            col *= scales[j];
        }
        Self::from_matrix(m)
    }

    /// Synthesis operator `T c = sum_j c_j f_j`.
    pub fn synthesize(&self, c: &CoefVector) -> Result<Signal> {
        check_len("coefficient vector", self.len(), c.len())?;
        Ok(&self.atoms * c)
    }

    /// Analysis operator `Theta x = (<x, f_1>, ..., <x, f_N>)`, the adjoint of `T`.
    pub fn analyze(&self, x: &Signal) -> Result<CoefVector> {
        check_len("signal", self.dim(), x.len())?;
        Ok(self.atoms.tr_mul(x))
    }

    /// Gram matrix of the unit-normalized atoms, `<f_i, f_j> / (w_i w_j)`.
    pub fn normalized_gram(&self) -> DMatrix<f64> {
        let u = self.normalized_matrix();
        u.tr_mul(&u)
    }

    /// Mutual coherence `max_{i != j} |<f_i, f_j>| / (||f_i|| ||f_j||)`.
    pub fn coherence(&self) -> f64 {
        let g = self.normalized_gram();
        let mut mu = 0.0f64;
        for j in 0..g.ncols() {
            for i in 0..j {
                mu = mu.max(g[(i, j)].abs());
            }
        }
        mu
    }

    /// Smallest and largest atom norm.
    pub fn weight_range(&self) -> (f64, f64) {
        (self.weights.min(), self.weights.max())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&DictionaryFile::from(self))?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: DictionaryFile = serde_json::from_str(text)?;
        file.into_dictionary()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }
}

fn check_len(what: &'static str, expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { what, expected, found });
    }
    Ok(())
}

/// On-disk dictionary layout. Weights are never stored; they are recomputed on load.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DictionaryFile {
    pub n: usize,
    #[serde(rename = "N")]
    pub num_atoms: usize,
    pub atoms: Vec<Vec<f64>>,
}

impl From<&Dictionary> for DictionaryFile {
    fn from(d: &Dictionary) -> Self {
        Self {
            n: d.dim(),
            num_atoms: d.len(),
            atoms: d.atoms.column_iter().map(|c| c.iter().copied().collect()).collect(),
        }
    }
}

impl DictionaryFile {
    pub fn into_dictionary(self) -> Result<Dictionary> {
        check_len("atom count", self.num_atoms, self.atoms.len())?;
        for atom in &self.atoms {
            check_len("atom length", self.n, atom.len())?;
            if atom.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFinite("dictionary file"));
            }
        }
        Dictionary::new(&self.atoms)
    }
}

/// Welch lower bound `sqrt((N - n) / (n (N - 1)))` on the coherence of any
/// `N` atoms in dimension `n`. Returns 0 when `N <= n`.
pub fn welch_lower_bound(n: usize, num_atoms: usize) -> f64 {
    if num_atoms <= n || n == 0 {
        return 0.0;
    }
    let (n, big) = (n as f64, num_atoms as f64);
    ((big - n) / (n * (big - 1.0))).sqrt()
}

/// Sylvester Hadamard matrix scaled to be orthogonal; `n` must be a power of 2.
pub fn normalized_hadamard(n: usize) -> Result<DMatrix<f64>> {
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::InvalidDimension(format!("{n} is not a power of 2")));
    }
    let mut h = DMatrix::from_element(1, 1, 1.0);
    while h.nrows() < n {
        let k = h.nrows();
        let mut next = DMatrix::zeros(2 * k, 2 * k);
        next.view_mut((0, 0), (k, k)).copy_from(&h);
        next.view_mut((0, k), (k, k)).copy_from(&h);
        next.view_mut((k, 0), (k, k)).copy_from(&h);
        next.view_mut((k, k), (k, k)).copy_from(&(-&h));
        h = next;
    }
    Ok(h / (n as f64).sqrt())
}

fn random_scales(rng: &mut ChaCha8Rng, count: usize, (lo, hi): (f64, f64)) -> Vec<f64> {
    (0..count)
        .map(|_| if lo == hi { lo } else { rng.random_range(lo..=hi) })
        .collect()
}

/// The standard basis of `R^n` (`n >= 2`).
pub fn orthonormal_basis(n: usize) -> Result<Dictionary> {
    Dictionary::from_matrix(DMatrix::identity(n, n))
}

/// Union of the identity and the normalized Hadamard basis in `R^n`, coherence `1/sqrt(n)`.
///
/// With a seed, every atom is multiplied by an independent scale drawn
/// uniformly from [`DEFAULT_SCALE_RANGE`]; coherence is unaffected.
pub fn two_ortho_dictionary(n: usize, weight_seed: Option<u64>) -> Result<Dictionary> {
    let h = normalized_hadamard(n)?;
    let mut m = DMatrix::zeros(n, 2 * n);
    m.view_mut((0, 0), (n, n)).fill_with_identity();
    m.view_mut((0, n), (n, n)).copy_from(&h);
    let d = Dictionary::from_matrix(m)?;
    match weight_seed {
        None => Ok(d),
        Some(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            d.rescaled(&random_scales(&mut rng, 2 * n, DEFAULT_SCALE_RANGE))
        }
    }
}

/// The `n + 1` vertices of a regular simplex centred at the origin of `R^n`.
/// Every pair has normalized inner product `-1/n`, so the coherence is `1/n`
/// (which meets the Welch bound). Optional seeded rescaling as in
/// [`two_ortho_dictionary`].
pub fn simplex_dictionary(n: usize, weight_seed: Option<u64>) -> Result<Dictionary> {
    if n == 0 {
        return Err(Error::InvalidDimension("simplex needs n >= 1".into()));
    }
    // Centred standard basis of R^{n+1}, expressed in an orthonormal basis of
    // the sum-zero hyperplane (Helmert rows).
    let m = n + 1;
    let mut helmert = DMatrix::zeros(n, m);
    for k in 1..m {
        let kf = k as f64;
        let scale = 1.0 / (kf * (kf + 1.0)).sqrt();
        for j in 0..k {
            helmert[(k - 1, j)] = scale;
        }
        helmert[(k - 1, k)] = -kf * scale;
    }
    let mut centred = DMatrix::<f64>::identity(m, m);
    centred.add_scalar_mut(-1.0 / m as f64);
    let d = Dictionary::from_matrix(helmert * centred)?;
    match weight_seed {
        None => Ok(d),
        Some(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            d.rescaled(&random_scales(&mut rng, m, DEFAULT_SCALE_RANGE))
        }
    }
}

/// Independent standard Gaussian atoms, each rescaled to a norm drawn
/// uniformly from `[lo, hi]`. Deterministic in `seed`.
pub fn random_dictionary(n: usize, num_atoms: usize, weight_range: (f64, f64), seed: u64) -> Result<Dictionary> {
    let (lo, hi) = weight_range;
    if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
        return Err(Error::InvalidRange { lo, hi });
    }
    if n == 0 || num_atoms < 2 {
        return Err(Error::InvalidDimension(format!(
            "random dictionary needs n >= 1 and N >= 2, got n = {n}, N = {num_atoms}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = DMatrix::zeros(n, num_atoms);
    for mut col in m.column_iter_mut() {
        // Redraw the (measure-zero) degenerate case of a vanishing Gaussian vector.
        loop {
            for x in col.iter_mut() {
                *x = rng.sample(StandardNormal);
            }
            if col.norm() > 1e-6 {
                break;
            }
        }
        let target = if lo == hi { lo } else { rng.random_range(lo..=hi) };
        let norm = col.norm();
        col *= target / norm;
    }
    Dictionary::from_matrix(m)
}
