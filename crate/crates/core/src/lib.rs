//! Sparse recovery for dictionaries whose atoms are not normalized.
//!
//! The weights `w_i = ||f_i||` of a [`Dictionary`] enter every quantity:
//! weighted norms `||c||_{p,w}`, the coherence `mu`, the greedy selection
//! rule and the weighted basis pursuit denoising problem
//!
//! ```text
//! minimize ||c||_{1,w}  subject to  ||y - T c||_2 <= eta.
//! ```
//!
//! Modules:
//!
//! - [`dictionary`]: frames, analysis/synthesis operators, coherence, Welch bound, generators, JSON IO
//! - [`norms`]: weighted norms, supports, best s-term truncation, tail `e_0`
//! - [`guarantees`]: basic lemma, `delta_s`, uniqueness/independence levels, error constants
//! - [`greedy`]: normalized-correlation selection and orthogonal matching pursuit
//! - [`l1solver`]: primal-dual solver, brute-force oracle, bound verification
//! - [`harness`]: experiment configuration, trial runner, CSV/JSON reports
//!
//! ```
//! use weighted_cs::{dictionary::two_ortho_dictionary, guarantees::recovery_constants};
//!
//! let dict = two_ortho_dictionary(16, Some(7)).unwrap();
//! let mu = dict.coherence();
//! assert!((mu - 0.25).abs() < 1e-12);
//! let k = recovery_constants(mu, 2).unwrap();
//! assert!(k.c1 > 0.0);
//! ```

// `!(x >= 0.0)` style guards are used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dictionary;
pub mod error;
pub mod greedy;
pub mod guarantees;
pub mod harness;
pub mod l1solver;
pub mod linalg;
pub mod norms;

/// Coefficient vector of length `N`.
pub type CoefVector = nalgebra::DVector<f64>;

/// Vector of the ambient space `R^n` (measurement, noise or residual).
pub type Signal = nalgebra::DVector<f64>;

pub use dictionary::Dictionary;
pub use error::{Error, Result};
