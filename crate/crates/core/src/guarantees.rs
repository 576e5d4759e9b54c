//! Coherence-based recovery guarantees for weighted dictionaries.
//!
//! Every inequality is evaluated numerically so it can be checked against
//! concrete dictionaries and vectors:
//!
//! * the basic lemma bounding `<Tc, Td>` and `||Tc||^2` by weighted norms,
//! * the sparsity levels below which sparse representations are unique and
//!   atom subsets are linearly independent,
//! * the restricted-isometry-type constant `delta_s`, both its coherence
//!   bound `mu (s - 1)` and its exact value by support enumeration,
//! * the error constants `C1`, `C2` for weighted basis pursuit denoising and
//!   the older constant `sqrt(3 (1 + mu)) / (1 - (2s - 1) mu)` they improve on.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dictionary::Dictionary;
use crate::error::{Error, Result};
use crate::linalg::{binomial, select_columns, smallest_singular_value, symmetric_spectral_norm, Combinations};
use crate::norms::{l0, support, weighted_p_norm_unchecked};
use crate::CoefVector;

/// Relative slack allowed when checking an inequality in floating point.
pub const INEQUALITY_SLACK: f64 = 1e-9;

/// Default cap on the number of supports enumerated by [`delta_s_exact`].
pub const DEFAULT_ENUMERATION_CAP: u128 = 1_000_000;

/// Smallest singular value under which a set of unit-normalized atoms is
/// considered linearly dependent.
pub const INDEPENDENCE_SV_TOL: f64 = 1e-8;

/// One evaluated inequality `lhs <= rhs`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Inequality {
    pub lhs: f64,
    pub rhs: f64,
}

impl Inequality {
    pub fn new(lhs: f64, rhs: f64) -> Self {
        Self { lhs, rhs }
    }

    pub fn slack(&self) -> f64 {
        self.rhs - self.lhs
    }

    /// Slack relative to the larger side.
    pub fn relative_slack(&self) -> f64 {
        let scale = self.lhs.abs().max(self.rhs.abs());
        if scale == 0.0 {
            0.0
        } else {
            self.slack() / scale
        }
    }

    pub fn holds(&self) -> bool {
        self.relative_slack() >= -INEQUALITY_SLACK
    }
}

/// The three parts of the basic lemma evaluated on a pair `(c, d)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LemmaCheck {
    pub mu: f64,
    /// Sparsity used for part (iii), `l0(c)`.
    pub sparsity: usize,
    /// Part (i), `|<Tc, Td>| <= mu ||c||_{1,w} ||d||_{1,w}`; `None` (vacuous)
    /// unless the supports of `c` and `d` are disjoint.
    pub disjoint: Option<Inequality>,
    /// Part (ii) lower: `(1+mu)||c||_{2,w}^2 - mu||c||_{1,w}^2 <= ||Tc||^2`.
    pub lower: Inequality,
    /// Part (ii) upper: `||Tc||^2 <= (1-mu)||c||_{2,w}^2 + mu||c||_{1,w}^2`.
    pub upper: Inequality,
    /// Part (iii) lower: `[1 - mu(s-1)] ||c||_{2,w}^2 <= ||Tc||^2`.
    pub sparse_lower: Inequality,
    /// Part (iii) upper: `||Tc||^2 <= [1 + mu(s-1)] ||c||_{2,w}^2`.
    pub sparse_upper: Inequality,
}

impl LemmaCheck {
    pub fn all_hold(&self) -> bool {
        self.disjoint.is_none_or(|i| i.holds())
            && self.lower.holds()
            && self.upper.holds()
            && self.sparse_lower.holds()
            && self.sparse_upper.holds()
    }

    /// Most negative relative slack over the evaluated parts.
    pub fn worst_relative_slack(&self) -> f64 {
        [self.lower, self.upper, self.sparse_lower, self.sparse_upper]
            .into_iter()
            .chain(self.disjoint)
            .map(|i| i.relative_slack())
            .fold(f64::INFINITY, f64::min)
    }
}

/// Evaluates the basic lemma on `(c, d)` for dictionary `dict`.
pub fn basic_lemma_check(dict: &Dictionary, c: &CoefVector, d: &CoefVector) -> Result<LemmaCheck> {
    basic_lemma_check_with_coherence(dict, dict.coherence(), c, d)
}

/// As [`basic_lemma_check`] with a precomputed coherence.
pub fn basic_lemma_check_with_coherence(
    dict: &Dictionary,
    mu: f64,
    c: &CoefVector,
    d: &CoefVector,
) -> Result<LemmaCheck> {
    let tc = dict.synthesize(c)?;
    let td = dict.synthesize(d)?;
    let w = dict.weights();

    let c1 = weighted_p_norm_unchecked(c, w, 1.0);
    let c2sq = weighted_p_norm_unchecked(c, w, 2.0).powi(2);
    let tc_sq = tc.norm_squared();

    let sc = support(c, 0.0);
    let sd = support(d, 0.0);
    let disjoint = if sc.iter().any(|i| sd.contains(i)) {
        None
    } else {
        let d1 = weighted_p_norm_unchecked(d, w, 1.0);
        Some(Inequality::new(tc.dot(&td).abs(), mu * c1 * d1))
    };

    let s = l0(c, 0.0);
    let spread = mu * (s.max(1) - 1) as f64;
    Ok(LemmaCheck {
        mu,
        sparsity: s,
        disjoint,
        lower: Inequality::new((1.0 + mu) * c2sq - mu * c1 * c1, tc_sq),
        upper: Inequality::new(tc_sq, (1.0 - mu) * c2sq + mu * c1 * c1),
        sparse_lower: Inequality::new((1.0 - spread) * c2sq, tc_sq),
        sparse_upper: Inequality::new(tc_sq, (1.0 + spread) * c2sq),
    })
}

fn check_mu(mu: f64) -> Result<()> {
    if !(mu > 0.0 && mu <= 1.0 + 1e-10) {
        return Err(Error::InvalidCoherence(mu));
    }
    Ok(())
}

/// Largest integer strictly below `x`, treating values within `1e-9` of an
/// integer as that integer so that e.g. `mu = 1/3` is not pushed over the
/// boundary by rounding.
fn largest_int_below(x: f64) -> usize {
    let r = x.round();
    let k = if (x - r).abs() <= 1e-9 * x.abs().max(1.0) {
        r - 1.0
    } else {
        x.floor()
    };
    k.max(0.0) as usize
}

/// Largest `s` with `s < (1/mu + 1) / 2`; below it, `s`-sparse representations are unique.
pub fn uniqueness_max_sparsity(mu: f64) -> Result<usize> {
    check_mu(mu)?;
    Ok(largest_int_below((1.0 / mu.min(1.0) + 1.0) / 2.0))
}

/// Largest `s` with `s < 1 + 1/mu`; any `s` atoms are then linearly independent.
pub fn independence_max_size(mu: f64) -> Result<usize> {
    check_mu(mu)?;
    Ok(largest_int_below(1.0 + 1.0 / mu.min(1.0)))
}

/// Coherence bound `delta_s <= mu (s - 1)`.
pub fn delta_s_bound(mu: f64, s: usize) -> Result<f64> {
    if s == 0 {
        return Err(Error::InvalidSparsity { s, len: 0 });
    }
    Ok(mu * (s - 1) as f64)
}

/// Exact `delta_s = sup_{||c||_0 <= s} | ||Tc||^2 - ||c||_{2,w}^2 | / ||c||_{2,w}^2`.
///
/// With `u_i = w_i c_i` the ratio becomes a Rayleigh quotient of the
/// normalized Gram matrix, so `delta_s` is the largest spectral norm of
/// `G_S - I` over supports `|S| = s`. Enumerates all `C(N, s)` supports.
pub fn delta_s_exact(dict: &Dictionary, s: usize) -> Result<f64> {
    delta_s_exact_with_cap(dict, s, DEFAULT_ENUMERATION_CAP).map(|(v, _)| v)
}

/// As [`delta_s_exact`], with an explicit enumeration cap; also returns a
/// maximizing support.
pub fn delta_s_exact_with_cap(dict: &Dictionary, s: usize, cap: u128) -> Result<(f64, Vec<usize>)> {
    let n_atoms = dict.len();
    if s == 0 || s > n_atoms {
        return Err(Error::InvalidSparsity { s, len: n_atoms });
    }
    let count = binomial(n_atoms, s);
    if count > cap {
        return Err(Error::TooLarge { count, cap });
    }
    let gram = dict.normalized_gram();
    let best = Combinations::new(n_atoms, s)
        .par_bridge()
        .map(|support| {
            let mut sub = DMatrix::from_fn(s, s, |i, j| gram[(support[i], support[j])]);
            for i in 0..s {
                sub[(i, i)] -= 1.0;
            }
            (symmetric_spectral_norm(&sub), support)
        })
        .reduce(
            || (f64::NEG_INFINITY, Vec::new()),
            |a, b| {
                // deterministic tie-break on the lexicographically smaller support
                if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
                    b
                } else {
                    a
                }
            },
        );
    Ok(best)
}

/// True when every `k` atoms of `dict` are linearly independent, judged by
/// the smallest singular value of the unit-normalized submatrix.
pub fn all_subsets_independent(dict: &Dictionary, k: usize, cap: u128) -> Result<bool> {
    if k == 0 {
        return Ok(true);
    }
    if k > dict.len() {
        return Err(Error::InvalidSparsity { s: k, len: dict.len() });
    }
    if k > dict.dim() {
        return Ok(false);
    }
    let count = binomial(dict.len(), k);
    if count > cap {
        return Err(Error::TooLarge { count, cap });
    }
    let unit = dict.normalized_matrix();
    Ok(Combinations::new(dict.len(), k)
        .par_bridge()
        .all(|cols| smallest_singular_value(&select_columns(&unit, &cols)) > INDEPENDENCE_SV_TOL))
}

/// True when `mu (2s - 1) < 1`, the hypothesis of the error bounds.
pub fn is_applicable(mu: f64, s: usize) -> bool {
    s >= 1 && mu * ((2 * s - 1) as f64) < 1.0
}

fn applicability(mu: f64, s: usize) -> Result<f64> {
    if s == 0 {
        return Err(Error::InvalidSparsity { s, len: 0 });
    }
    if !(mu >= 0.0) {
        return Err(Error::InvalidCoherence(mu));
    }
    let product = mu * (2 * s - 1) as f64;
    if product >= 1.0 {
        return Err(Error::NotApplicable { mu, s, product });
    }
    Ok(1.0 - product)
}

/// Error constants of the weighted recovery bound
/// `||v||_{2,w} <= C1 ||Tv|| + C2 e_0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RecoveryConstants {
    pub c1: f64,
    pub c2: f64,
}

/// `C1 = sqrt(3 - 1/(2s-1)) / (1 - mu(2s-1))`, `C2 = 2 sqrt(mu s (1+mu)) / (1 - mu(2s-1))`.
pub fn recovery_constants(mu: f64, s: usize) -> Result<RecoveryConstants> {
    let denom = applicability(mu, s)?;
    let k = (2 * s - 1) as f64;
    Ok(RecoveryConstants {
        c1: (3.0 - 1.0 / k).sqrt() / denom,
        c2: 2.0 * (mu * s as f64 * (1.0 + mu)).sqrt() / denom,
    })
}

/// The earlier unit-norm constant `sqrt(3(1+mu)) / (1 - (2s-1) mu)`.
pub fn cai_constant(mu: f64, s: usize) -> Result<f64> {
    let denom = applicability(mu, s)?;
    Ok((3.0 * (1.0 + mu)).sqrt() / denom)
}

/// `F(mu) = ((8s^2 - 8s + 1) mu^2 + 2 mu + 1) / (1 + mu)`.
///
/// `sqrt(F(mu)) / (1 - mu(2s-1))` is the sharp signal constant before it is
/// relaxed to `C1` via `F(mu) <= F(1/(2s-1)) = (6s-4)/(2s-1)`.
pub fn f_mu(mu: f64, s: usize) -> f64 {
    let s = s as f64;
    let k = 8.0 * s * s - 8.0 * s + 1.0;
    (k * mu * mu + 2.0 * mu + 1.0) / (1.0 + mu)
}

/// Evaluated error bound, optionally compared against an observed error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GuaranteeReport {
    pub mu: f64,
    pub s: usize,
    pub eta: f64,
    pub eps: f64,
    pub e0: f64,
    pub applicable: bool,
    #[serde(rename = "C1", skip_serializing_if = "Option::is_none", default)]
    pub c1: Option<f64>,
    #[serde(rename = "C2", skip_serializing_if = "Option::is_none", default)]
    pub c2: Option<f64>,
    #[serde(rename = "cai_C", skip_serializing_if = "Option::is_none", default)]
    pub cai_c: Option<f64>,
    /// `C1 (eta + eps) + C2 e0`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub bound_value: Option<f64>,
    /// `cai_C (eta + eps) + C2 e0`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub cai_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub observed: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub satisfied: Option<bool>,
    /// `||c_true||_{1,w} >= ||c*||_{1,w}`, the norm ordering the bound needs.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub l1_ordering: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub solver_converged: Option<bool>,
}

impl GuaranteeReport {
    /// Ratio of the signal constants, `C1 / cai_C`.
    pub fn improvement_ratio(&self) -> Option<f64> {
        Some(self.c1? / self.cai_c?)
    }
}

/// Evaluates `C1 (eta + eps) + C2 e0`; inapplicable `(mu, s)` yields a
/// report with `applicable = false` and no constants.
pub fn error_bound(mu: f64, s: usize, eta: f64, eps: f64, e0: f64) -> GuaranteeReport {
    let mut report = GuaranteeReport {
        mu,
        s,
        eta,
        eps,
        e0,
        applicable: false,
        c1: None,
        c2: None,
        cai_c: None,
        bound_value: None,
        cai_bound: None,
        observed: None,
        satisfied: None,
        l1_ordering: None,
        solver_converged: None,
    };
    if let (Ok(k), Ok(cai)) = (recovery_constants(mu, s), cai_constant(mu, s)) {
        report.applicable = true;
        report.c1 = Some(k.c1);
        report.c2 = Some(k.c2);
        report.cai_c = Some(cai);
        report.bound_value = Some(k.c1 * (eta + eps) + k.c2 * e0);
        report.cai_bound = Some(cai * (eta + eps) + k.c2 * e0);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dictionary::{orthonormal_basis, two_ortho_dictionary};
    use approx::assert_relative_eq;
    use nalgebra::DVector;

    fn d0() -> Dictionary {
        let r = 2f64.sqrt();
        Dictionary::new(&[vec![1.0, 0.0], vec![0.0, 1.0], vec![r, r]]).unwrap()
    }

    #[test]
    fn lemma_parseval_case() {
        let d = orthonormal_basis(4).unwrap();
        let c = DVector::from_vec(vec![1.5, 0.0, -2.0, 0.0]);
        let check = basic_lemma_check(&d, &c, &c).unwrap();
        assert_eq!(check.sparsity, 2);
        assert_eq!(check.sparse_lower.lhs, check.sparse_lower.rhs);
        assert_eq!(check.sparse_upper.lhs, check.sparse_upper.rhs);
        assert!(check.disjoint.is_none());
        assert!(check.all_hold());
    }

    #[test]
    fn lemma_disjoint_part_is_tight_on_d0() {
        let c = DVector::from_vec(vec![1.0, 0.0, 0.0]);
        let d = DVector::from_vec(vec![0.0, 0.0, 1.0]);
        let check = basic_lemma_check(&d0(), &c, &d).unwrap();
        let part = check.disjoint.unwrap();
        assert_relative_eq!(part.lhs, 2f64.sqrt(), epsilon = 1e-14);
        assert_relative_eq!(part.rhs, 2f64.sqrt(), epsilon = 1e-14);
        assert!(check.all_hold());
    }

    #[test]
    fn lemma_sparse_interval_on_two_ortho() {
        let d = two_ortho_dictionary(4, None).unwrap();
        let mut c = DVector::zeros(8);
        c[1] = 0.7;
        c[6] = -1.3;
        let check = basic_lemma_check(&d, &c, &c).unwrap();
        let c2sq = 0.7f64.powi(2) + 1.3f64.powi(2);
        assert_relative_eq!(check.sparse_lower.lhs, 0.5 * c2sq, epsilon = 1e-14);
        assert_relative_eq!(check.sparse_upper.rhs, 1.5 * c2sq, epsilon = 1e-14);
        assert!(check.all_hold());
    }

    #[test]
    fn lemma_rejects_bad_lengths() {
        let c = DVector::zeros(2);
        assert!(matches!(
            basic_lemma_check(&d0(), &c, &c),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn uniqueness_levels() {
        assert_eq!(uniqueness_max_sparsity(1.0).unwrap(), 0);
        assert_eq!(uniqueness_max_sparsity(1.0 / 3.0).unwrap(), 1);
        assert_eq!(uniqueness_max_sparsity(0.25).unwrap(), 2);
        assert!(matches!(uniqueness_max_sparsity(0.0), Err(Error::InvalidCoherence(_))));
        assert!(matches!(uniqueness_max_sparsity(1.5), Err(Error::InvalidCoherence(_))));
    }

    #[test]
    fn independence_levels() {
        assert_eq!(independence_max_size(1.0).unwrap(), 1);
        assert_eq!(independence_max_size(0.5).unwrap(), 2);
        assert_eq!(independence_max_size(0.25).unwrap(), 4);
        assert_eq!(independence_max_size(0.3).unwrap(), 4);
        assert!(matches!(independence_max_size(-0.1), Err(Error::InvalidCoherence(_))));
    }

    #[test]
    fn delta_bound_values() {
        assert_eq!(delta_s_bound(0.8, 1).unwrap(), 0.0);
        assert_eq!(delta_s_bound(0.5, 2).unwrap(), 0.5);
        assert_eq!(delta_s_bound(0.25, 3).unwrap(), 0.5);
        assert!(delta_s_bound(0.25, 0).is_err());
    }

    #[test]
    fn delta_exact_values() {
        assert!(delta_s_exact(&d0(), 1).unwrap().abs() < 1e-15);
        let d = two_ortho_dictionary(4, None).unwrap();
        assert_relative_eq!(delta_s_exact(&d, 2).unwrap(), 0.5, epsilon = 1e-14);
        let d2 = delta_s_exact(&d0(), 2).unwrap();
        assert!(d2 <= 0.5f64.sqrt() + 1e-12);
        assert_relative_eq!(d2, 0.5f64.sqrt(), epsilon = 1e-12);
        assert!(matches!(
            delta_s_exact_with_cap(&d, 4, 10),
            Err(Error::TooLarge { count: 70, cap: 10 })
        ));
        assert!(matches!(delta_s_exact(&d, 0), Err(Error::InvalidSparsity { .. })));
    }

    #[test]
    fn constants_examples() {
        let k = recovery_constants(0.0, 1).unwrap();
        assert_relative_eq!(k.c1, 2f64.sqrt());
        assert_eq!(k.c2, 0.0);
        let k = recovery_constants(0.25, 1).unwrap();
        assert_relative_eq!(k.c1, 1.8856181, epsilon = 5e-8);
        assert_relative_eq!(k.c2, 1.4907120, epsilon = 5e-8);
        let k = recovery_constants(0.2, 2).unwrap();
        assert_relative_eq!(k.c1, 4.0824829, epsilon = 5e-8);
        assert_relative_eq!(k.c2, 3.4641016, epsilon = 5e-8);
        assert!(matches!(recovery_constants(0.5, 2), Err(Error::NotApplicable { .. })));
        assert!(matches!(
            recovery_constants(1.0 / 3.0 + 1e-12, 2),
            Err(Error::NotApplicable { .. })
        ));
    }

    #[test]
    fn cai_examples() {
        assert_relative_eq!(cai_constant(0.0, 1).unwrap(), 1.7320508, epsilon = 5e-8);
        assert_relative_eq!(cai_constant(0.25, 1).unwrap(), 2.5819889, epsilon = 5e-8);
        assert_relative_eq!(cai_constant(0.2, 2).unwrap(), 4.7434165, epsilon = 5e-8);
        assert!(matches!(cai_constant(0.5, 2), Err(Error::NotApplicable { .. })));
    }

    #[test]
    fn f_mu_examples() {
        assert_eq!(f_mu(0.0, 5), 1.0);
        assert_relative_eq!(f_mu(1.0, 1), 2.0);
        assert_relative_eq!(f_mu(1.0 / 3.0, 2), 8.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn error_bound_examples() {
        let r = error_bound(0.25, 1, 0.1, 0.1, 0.0);
        assert!(r.applicable);
        assert_relative_eq!(r.bound_value.unwrap(), 0.3771236, epsilon = 5e-8);
        assert_relative_eq!(r.cai_bound.unwrap(), 0.5163978, epsilon = 5e-8);
        assert_relative_eq!(r.improvement_ratio().unwrap(), 0.7302967, epsilon = 5e-8);

        let r = error_bound(0.0, 1, 0.0, 0.0, 0.0);
        assert_eq!(r.bound_value, Some(0.0));

        let r = error_bound(0.5, 2, 0.1, 0.1, 0.0);
        assert!(!r.applicable);
        assert!(r.c1.is_none() && r.c2.is_none() && r.bound_value.is_none());
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["applicable"], false);
        assert!(json.get("C1").is_none() && json.get("bound_value").is_none());
    }

    #[test]
    fn independence_enumeration() {
        let d = two_ortho_dictionary(4, Some(2)).unwrap();
        assert!(all_subsets_independent(&d, 2, DEFAULT_ENUMERATION_CAP).unwrap());
        // 5 atoms in R^4 can never be independent
        assert!(!all_subsets_independent(&d, 5, DEFAULT_ENUMERATION_CAP).unwrap());
        let r = 2f64.sqrt();
        let parallel = Dictionary::new(&[vec![1.0, 0.0], vec![-r, 0.0], vec![0.0, 1.0]]).unwrap();
        assert!(!all_subsets_independent(&parallel, 2, DEFAULT_ENUMERATION_CAP).unwrap());
    }
}
