#![allow(dead_code)]

use nalgebra::DVector;
use rand::Rng;
use weighted_cs::dictionary::{random_dictionary, simplex_dictionary, two_ortho_dictionary, Dictionary};
use weighted_cs::CoefVector;

/// The three-atom dictionary `(1,0), (0,1), (sqrt2, sqrt2)` in `R^2`.
pub fn d0() -> Dictionary {
    let r = 2f64.sqrt();
    Dictionary::new(&[vec![1.0, 0.0], vec![0.0, 1.0], vec![r, r]]).unwrap()
}

/// Small dictionaries (n <= 6, N <= 12) with unit and non-unit weights.
pub fn small_fixtures() -> Vec<(String, Dictionary)> {
    let mut out = vec![("d0".to_string(), d0())];
    for n in [2, 4] {
        out.push((format!("two_ortho n={n}"), two_ortho_dictionary(n, None).unwrap()));
        for seed in [7, 19] {
            out.push((
                format!("two_ortho n={n} seed={seed}"),
                two_ortho_dictionary(n, Some(seed)).unwrap(),
            ));
        }
    }
    for n in 2..=6 {
        out.push((format!("simplex n={n}"), simplex_dictionary(n, None).unwrap()));
        out.push((format!("simplex n={n} seed=3"), simplex_dictionary(n, Some(3)).unwrap()));
    }
    for (k, (n, big)) in [(3, 6), (4, 8), (5, 10), (6, 12), (6, 9), (4, 12)]
        .into_iter()
        .enumerate()
    {
        let seed = 100 + k as u64;
        out.push((
            format!("gauss {n}x{big} unit"),
            random_dictionary(n, big, (1.0, 1.0), seed).unwrap(),
        ));
        out.push((
            format!("gauss {n}x{big} weighted"),
            random_dictionary(n, big, (0.5, 2.0), seed).unwrap(),
        ));
    }
    out
}

/// Gaussian vector of length `len` supported on `s` random indices.
pub fn random_sparse(len: usize, s: usize, rng: &mut impl Rng) -> CoefVector {
    let mut c = DVector::zeros(len);
    for i in rand::seq::index::sample(rng, len, s).into_iter() {
        c[i] = rng.sample::<f64, _>(rand_distr::StandardNormal);
    }
    c
}

/// Brute-force coherence straight from the definition.
pub fn coherence_by_pairs(dict: &Dictionary) -> f64 {
    let m = dict.matrix();
    let mut mu = 0.0f64;
    for i in 0..m.ncols() {
        for j in 0..m.ncols() {
            if i != j {
                let num: f64 = (0..m.nrows()).map(|k| m[(k, i)] * m[(k, j)]).sum();
                let ni: f64 = (0..m.nrows()).map(|k| m[(k, i)].powi(2)).sum::<f64>().sqrt();
                let nj: f64 = (0..m.nrows()).map(|k| m[(k, j)].powi(2)).sum::<f64>().sqrt();
                mu = mu.max(num.abs() / (ni * nj));
            }
        }
    }
    mu
}
