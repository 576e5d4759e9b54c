//! Weighted basis pursuit denoising,
//!
//! ```text
//! minimize ||c||_{1,w}  subject to  ||y - T c||_2 <= eta,
//! ```
//!
//! solved with a first-order primal-dual iteration: the weighted l1 term is
//! handled by componentwise shrinkage with thresholds `tau * w_i`, the data
//! constraint by projecting onto the ball of radius `eta` around `y`.
//!
//! Every few iterations the current support is polished into an exactly
//! feasible candidate and a dual-feasible point is formed, giving a
//! certified duality gap. The loop stops when that gap is below
//! `gap_tol`, or when the iterate has stalled while meeting the
//! constraint to `feas_tol`.
//!
//! With `eta = 0` the program is a linear one whose optimum is often a
//! degenerate vertex the first-order iteration approaches very slowly. On a
//! doubling schedule of checks, a revised simplex started from a basis
//! ordered by the current iterate finishes it exactly, and its multipliers
//! certify the result.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::dictionary::Dictionary;
use crate::error::{Error, Result};
use crate::guarantees::{error_bound, GuaranteeReport, INDEPENDENCE_SV_TOL};
use crate::linalg::{least_squares_qr, power_iteration_norm, select_columns, smallest_singular_value, Combinations};
use crate::norms::{tail_e0, weighted_p_norm_unchecked};
use crate::{CoefVector, Signal};

/// Largest atom count accepted by [`oracle_p1w`].
pub const ORACLE_MAX_ATOMS: usize = 12;

/// Absolute residual below which an oracle fit counts as exact.
pub const ORACLE_FIT_TOL: f64 = 1e-10;

/// Slack added to a bound before an observed error counts as a violation.
pub const BOUND_TOLERANCE: f64 = 1e-6;

/// Entries below this fraction of the largest weighted magnitude are dropped
/// when proposing supports for polishing.
const PRUNE_RATIO: f64 = 1e-6;

/// Pivot budget of the exact finisher used for noiseless problems.
const SIMPLEX_MAX_PIVOTS: usize = 2000;

/// Primal and dual step sizes `tau = safety / (L sqrt(ratio))` and
/// `sigma = safety sqrt(ratio) / L`, where `L` estimates `||T||`, so that
/// `tau sigma L^2 = safety^2 <= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct StepPolicy {
    pub ratio: f64,
    pub safety: f64,
}

impl Default for StepPolicy {
    fn default() -> Self {
        Self {
            ratio: 1.0,
            safety: 0.99,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    pub max_iters: usize,
    /// Relative iterate-change threshold.
    pub rel_tol: f64,
    /// Allowed constraint violation `||y - Tc|| - eta`.
    pub feas_tol: f64,
    /// Relative duality gap that certifies optimality.
    pub gap_tol: f64,
    /// Iterations between convergence checks.
    pub check_every: usize,
    /// Relative accuracy of the power-iteration estimate of `||T||`.
    pub norm_tol: f64,
    pub step_policy: StepPolicy,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            max_iters: 50_000,
            rel_tol: 1e-9,
            feas_tol: 1e-8,
            gap_tol: 1e-9,
            check_every: 10,
            norm_tol: 1e-10,
            step_policy: StepPolicy::default(),
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("rel_tol", self.rel_tol),
            ("feas_tol", self.feas_tol),
            ("gap_tol", self.gap_tol),
            ("norm_tol", self.norm_tol),
            ("step_policy.ratio", self.step_policy.ratio),
        ];
        for (name, value) in positive {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::Config(format!("{name} must be positive, got {value}")));
            }
        }
        if self.max_iters == 0 || self.check_every == 0 {
            return Err(Error::Config("max_iters and check_every must be >= 1".into()));
        }
        if !(self.step_policy.safety > 0.0 && self.step_policy.safety <= 1.0) {
            return Err(Error::Config(format!(
                "step_policy.safety must lie in (0, 1], got {}",
                self.step_policy.safety
            )));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct P1wSolution {
    pub coefficients: CoefVector,
    /// `||c||_{1,w}` of the returned coefficients.
    pub objective: f64,
    /// Best certified lower bound on the optimal value.
    pub lower_bound: f64,
    /// `||y - Tc||_2` of the returned coefficients.
    pub residual_norm: f64,
    pub iterations: usize,
    /// False when the iteration cap was hit; the best iterate is returned.
    pub converged: bool,
}

impl P1wSolution {
    pub fn gap(&self) -> f64 {
        (self.objective - self.lower_bound).max(0.0)
    }
}

fn soft_threshold(v: f64, t: f64) -> f64 {
    if v > t {
        v - t
    } else if v < -t {
        v + t
    } else {
        0.0
    }
}

struct Problem<'a> {
    t: &'a DMatrix<f64>,
    w: &'a DVector<f64>,
    y: &'a DVector<f64>,
    eta: f64,
}

impl Problem<'_> {
    fn objective(&self, c: &CoefVector) -> f64 {
        weighted_p_norm_unchecked(c, self.w, 1.0)
    }

    /// Dual value of `lambda` after scaling it into the dual-feasible set
    /// `|(T^T lambda)_i| <= w_i`; a lower bound on the optimum.
    fn dual_value(&self, lambda: &DVector<f64>) -> f64 {
        let tl = self.t.tr_mul(lambda);
        let excess = tl
            .iter()
            .zip(self.w.iter())
            .map(|(v, w)| v.abs() / w)
            .fold(0.0f64, f64::max);
        let lambda = lambda / excess.max(1.0);
        -lambda.dot(self.y) - self.eta * lambda.norm()
    }

    fn residual_norm(&self, c: &CoefVector) -> f64 {
        (self.y - self.t * c).norm()
    }

    /// Feasible candidates supported on `supp(c)` together with dual points
    /// built from their optimality conditions.
    fn polish(
        &self,
        c: &CoefVector,
        signs: &DVector<f64>,
        support: &[usize],
        feas_tol: f64,
    ) -> Vec<(CoefVector, Option<DVector<f64>>)> {
        let mut out = Vec::new();
        if support.is_empty() || support.len() > self.t.nrows() {
            return out;
        }
        let a = select_columns(self.t, support);
        let Ok(u_ls) = least_squares_qr(&a, self.y) else {
            return out;
        };
        let r_perp = self.y - &a * &u_ls;
        let rho_sq = self.eta * self.eta - r_perp.norm_squared();
        if r_perp.norm() > self.eta + feas_tol {
            return out;
        }
        let rho = rho_sq.max(0.0).sqrt();
        let embed = |u: &DVector<f64>| {
            let mut full = DVector::zeros(c.len());
            for (k, &i) in support.iter().enumerate() {
                full[i] = u[k];
            }
            full
        };

        // Optimum of the weighted l1 norm on the sign pattern of `c`: a
        // linear objective over the ellipsoid `||A (u - u_ls)|| <= rho`.
        let g = DVector::from_iterator(support.len(), support.iter().map(|&i| self.w[i] * signs[i]));
        let a = &a;
        let gram = a.tr_mul(a);
        if let Some(chol) = gram.clone().cholesky() {
            let hg = chol.solve(&g);
            let q = g.dot(&hg);
            if q > 0.0 {
                let u = &u_ls - &hg * (rho / q.sqrt());
                let consistent = u.iter().zip(g.iter()).all(|(ui, gi)| ui * gi > 0.0);
                if consistent {
                    // KKT dual: T_S^T lambda = -W_S sign on the support.
                    let lambda = if rho > 0.0 {
                        let r = self.y - a * &u;
                        let tr = a.tr_mul(&r);
                        let nu = g.norm_squared() / g.dot(&tr);
                        Some(-r * nu)
                    } else {
                        Some(-(a * &hg))
                    };
                    out.push((embed(&u), lambda));
                }
            }
        }

        // Smallest move from `c` toward the least-squares fit that restores feasibility.
        let u_c = DVector::from_iterator(support.len(), support.iter().map(|&i| c[i]));
        let delta = &u_ls - &u_c;
        let ad = (a * &delta).norm();
        let step = if ad == 0.0 {
            0.0
        } else {
            (1.0 - rho / ad).clamp(0.0, 1.0)
        };
        out.push((embed(&(u_c + delta * step)), None));
        out
    }
}

/// Supports worth polishing, with the sign pattern to polish on.
///
/// Besides the support of `c` and its non-negligible part, the support is
/// grown by the atoms whose dual correlation `|(T^T lambda)_i| / w_i` is
/// largest, since an optimal support only uses atoms where it equals one.
fn candidate_supports(
    c: &CoefVector,
    tl: &DVector<f64>,
    w: &DVector<f64>,
    n: usize,
) -> (DVector<f64>, Vec<Vec<usize>>) {
    let len = c.len();
    let signs = DVector::from_fn(len, |i, _| if c[i] != 0.0 { c[i].signum() } else { -tl[i].signum() });
    let mags: Vec<f64> = c.iter().zip(w.iter()).map(|(v, wi)| v.abs() * wi).collect();
    let top = mags.iter().copied().fold(0.0f64, f64::max);
    let exact: Vec<usize> = (0..len).filter(|&i| c[i] != 0.0).collect();
    let pruned: Vec<usize> = (0..len).filter(|&i| mags[i] > PRUNE_RATIO * top).collect();
    let mut by_mag = exact.clone();
    by_mag.sort_by(|&a, &b| mags[b].total_cmp(&mags[a]));
    by_mag.truncate(n);

    let ratio: Vec<f64> = (0..len).map(|i| tl[i].abs() / w[i]).collect();
    let mut by_dual: Vec<usize> = (0..len).collect();
    by_dual.sort_by(|&a, &b| ratio[b].total_cmp(&ratio[a]));
    let grow = |base: &[usize]| {
        let mut s = base.to_vec();
        for &i in &by_dual {
            if s.len() >= n {
                break;
            }
            if !s.contains(&i) {
                s.push(i);
            }
        }
        s
    };
    let sets = [grow(&pruned), grow(&by_mag)];

    let mut out: Vec<Vec<usize>> = Vec::new();
    for mut supp in [exact, pruned, by_mag].into_iter().chain(sets) {
        supp.sort_unstable();
        if !supp.is_empty() && !out.contains(&supp) {
            out.push(supp);
        }
    }
    (signs, out)
}

/// Exact finisher for the noiseless program `min ||c||_{1,w}` s.t. `Tc = y`.
///
/// Revised simplex on the split form `c = u - v`, `u, v >= 0`. The start basis
/// takes atoms in `priority` order while they stay linearly independent; any
/// `n` independent atoms give a feasible vertex once each is signed like its
/// coefficient in the exact fit. Returns the optimal vertex and the simplex
/// multipliers, or `None` when `T` lacks full row rank or the pivot budget
/// runs out.
fn simplex_finish(
    t: &DMatrix<f64>,
    w: &DVector<f64>,
    y: &DVector<f64>,
    priority: &[usize],
    max_pivots: usize,
) -> Option<(CoefVector, DVector<f64>)> {
    let (n, len) = t.shape();
    let scale = w.amax().max(1.0);
    let tol = 1e-11 * scale;
    let column = |(j, sigma): (usize, f64)| t.column(j) * sigma;

    let mut chosen: Vec<usize> = Vec::with_capacity(n);
    let mut q: Vec<DVector<f64>> = Vec::with_capacity(n);
    for &j in priority {
        if chosen.len() == n {
            break;
        }
        let mut v = t.column(j).into_owned();
        for qk in &q {
            let proj = qk.dot(&v);
            v.axpy(-proj, qk, 1.0);
        }
        let norm = v.norm();
        if norm > 1e-8 * w[j] {
            q.push(v / norm);
            chosen.push(j);
        }
    }
    if chosen.len() < n {
        return None;
    }
    let fit = select_columns(t, &chosen).lu().solve(y)?;
    let mut basis: Vec<(usize, f64)> = chosen
        .iter()
        .zip(fit.iter())
        .map(|(&j, &x)| (j, if x < 0.0 { -1.0 } else { 1.0 }))
        .collect();

    let mut degenerate_run = 0usize;
    for _ in 0..max_pivots {
        let b = DMatrix::from_columns(&basis.iter().map(|&e| column(e)).collect::<Vec<_>>());
        let lu = b.clone().lu();
        let x_b = lu.solve(y)?;
        let cost_b = DVector::from_iterator(n, basis.iter().map(|&(j, _)| w[j]));
        let lambda = b.transpose().lu().solve(&cost_b)?;
        let tl = t.tr_mul(&lambda);

        // most negative reduced cost, or the first negative one once pivots stall
        let bland = degenerate_run > 2 * n;
        let mut entering: Option<((usize, f64), f64)> = None;
        for j in 0..len {
            for sigma in [1.0, -1.0] {
                if basis.contains(&(j, sigma)) {
                    continue;
                }
                let reduced = w[j] - sigma * tl[j];
                if reduced < -tol && entering.is_none_or(|(_, r)| !bland && reduced < r) {
                    entering = Some(((j, sigma), reduced));
                }
            }
        }
        let Some((enter, _)) = entering else {
            let mut c = DVector::zeros(len);
            for (k, &(j, sigma)) in basis.iter().enumerate() {
                c[j] += sigma * x_b[k].max(0.0);
            }
            return Some((c, lambda));
        };

        let d = lu.solve(&column(enter))?;
        let mut leave: Option<(usize, f64)> = None;
        for k in 0..n {
            if d[k] > 1e-12 {
                let ratio = x_b[k].max(0.0) / d[k];
                if leave.is_none_or(|(l, r)| ratio < r || (ratio == r && basis[k].0 < basis[l].0)) {
                    leave = Some((k, ratio));
                }
            }
        }
        let (k, step) = leave?;
        degenerate_run = if step <= 1e-14 { degenerate_run + 1 } else { 0 };
        basis[k] = enter;
    }
    None
}

/// Solves `min ||c||_{1,w}` subject to `||y - Tc||_2 <= eta`.
///
/// Returns the best feasible iterate found. When the iteration cap is hit
/// before either stopping test passes, `converged` is false.
pub fn solve_p1w(dict: &Dictionary, y: &Signal, eta: f64, cfg: &SolverConfig) -> Result<P1wSolution> {
    cfg.validate()?;
    if y.len() != dict.dim() {
        return Err(Error::DimensionMismatch {
            what: "signal",
            expected: dict.dim(),
            found: y.len(),
        });
    }
    if !(eta >= 0.0 && eta.is_finite()) {
        return Err(Error::Config(format!("eta must be finite and >= 0, got {eta}")));
    }
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("signal"));
    }
    let n_atoms = dict.len();
    let zero = DVector::zeros(n_atoms);
    let y_norm = y.norm();
    if y_norm <= eta {
        return Ok(P1wSolution {
            coefficients: zero,
            objective: 0.0,
            lower_bound: 0.0,
            residual_norm: y_norm,
            iterations: 0,
            converged: true,
        });
    }

    let problem = Problem {
        t: dict.matrix(),
        w: dict.weights(),
        y,
        eta,
    };
    let op_norm = power_iteration_norm(dict.matrix(), cfg.norm_tol, 100_000).value;
    let root = cfg.step_policy.ratio.sqrt();
    let tau = cfg.step_policy.safety / (op_norm * root);
    let sigma = cfg.step_policy.safety * root / op_norm;

    let mut c = zero.clone();
    let mut c_bar = zero;
    let mut lambda = DVector::zeros(dict.dim());
    let mut best: Option<(CoefVector, f64)> = None;
    let mut lower_bound = 0.0f64;
    let mut converged = false;
    let mut iterations = 0;
    let mut next_finish = 1usize;

    for it in 1..=cfg.max_iters {
        iterations = it;
        // dual step: prox of sigma * h^*, with h the indicator of B(y, eta)
        let v = &lambda + (problem.t * &c_bar) * sigma;
        let center = &v / sigma - y;
        let cn = center.norm();
        let proj = if cn <= eta { center } else { center * (eta / cn) } + y;
        lambda = v - proj * sigma;

        // primal step: weighted shrinkage
        let grad = problem.t.tr_mul(&lambda);
        let mut c_next = &c - grad * tau;
        for (ci, wi) in c_next.iter_mut().zip(problem.w.iter()) {
            *ci = soft_threshold(*ci, tau * wi);
        }
        c_bar = &c_next * 2.0 - &c;
        let change = (&c_next - &c).norm();
        c = c_next;

        if it % cfg.check_every != 0 && it != cfg.max_iters {
            continue;
        }

        lower_bound = lower_bound.max(problem.dual_value(&lambda));
        let (signs, supports) = candidate_supports(&c, &problem.t.tr_mul(&lambda), problem.w, dict.dim());
        let candidates = supports
            .iter()
            .flat_map(|supp| problem.polish(&c, &signs, supp, cfg.feas_tol));
        for (candidate, dual) in candidates {
            if let Some(d) = dual {
                lower_bound = lower_bound.max(problem.dual_value(&d));
            }
            if problem.residual_norm(&candidate) > eta + cfg.feas_tol {
                continue;
            }
            let obj = problem.objective(&candidate);
            if best.as_ref().is_none_or(|(_, b)| obj < *b) {
                best = Some((candidate, obj));
            }
        }
        let iterate_feasible = problem.residual_norm(&c) <= eta + cfg.feas_tol;
        if iterate_feasible {
            let obj = problem.objective(&c);
            if best.as_ref().is_none_or(|(_, b)| obj < *b) {
                best = Some((c.clone(), obj));
            }
        }

        // The noiseless program is a linear one; on a doubling schedule, finish
        // it exactly from the best vertex so degenerate optima still certify.
        if eta == 0.0 && it / cfg.check_every >= next_finish {
            next_finish *= 2;
            let unfinished = best
                .as_ref()
                .is_none_or(|(_, obj)| obj - lower_bound > cfg.gap_tol * obj.max(1e-300));
            if unfinished {
                let tl = problem.t.tr_mul(&lambda);
                let mut priority: Vec<usize> = (0..n_atoms).collect();
                let key = |i: usize| (c[i].abs() * problem.w[i], tl[i].abs() / problem.w[i]);
                priority.sort_by(|&a, &b| key(b).partial_cmp(&key(a)).unwrap_or(std::cmp::Ordering::Equal));
                if let Some((exact, multipliers)) =
                    simplex_finish(problem.t, problem.w, y, &priority, SIMPLEX_MAX_PIVOTS)
                {
                    lower_bound = lower_bound.max(problem.dual_value(&-multipliers));
                    if problem.residual_norm(&exact) <= cfg.feas_tol {
                        let exact_obj = problem.objective(&exact);
                        if best.as_ref().is_none_or(|(_, obj)| exact_obj < *obj) {
                            best = Some((exact, exact_obj));
                        }
                    }
                }
            }
        }

        if let Some((_, obj)) = &best {
            if obj - lower_bound <= cfg.gap_tol * obj.max(1e-300) {
                converged = true;
                break;
            }
        }
        let stalled = change <= cfg.rel_tol * c.norm().max(f64::MIN_POSITIVE);
        if stalled && iterate_feasible {
            converged = true;
            break;
        }
    }

    let found_feasible = best.is_some();
    let (coefficients, objective) = best.unwrap_or_else(|| {
        let obj = problem.objective(&c);
        (c, obj)
    });
    let residual_norm = problem.residual_norm(&coefficients);
    Ok(P1wSolution {
        coefficients,
        objective,
        // an infeasible iterate can undercut the optimum, so only clamp a certified value
        lower_bound: if found_feasible {
            lower_bound.min(objective)
        } else {
            lower_bound
        },
        residual_norm,
        iterations,
        converged,
    })
}

/// Exact minimizer of `||c||_{1,w}` subject to `Tc = y` by enumerating every
/// support of at most `n` linearly independent atoms.
///
/// The program is piecewise linear, so some optimum sits on a vertex of the
/// feasible polyhedron, whose support is a set of independent atoms; on each
/// such support the exact fit is unique. Limited to `N <= 12`.
pub fn oracle_p1w(dict: &Dictionary, y: &Signal) -> Result<CoefVector> {
    let n_atoms = dict.len();
    if n_atoms > ORACLE_MAX_ATOMS {
        return Err(Error::TooLarge {
            count: n_atoms as u128,
            cap: ORACLE_MAX_ATOMS as u128,
        });
    }
    if y.len() != dict.dim() {
        return Err(Error::DimensionMismatch {
            what: "signal",
            expected: dict.dim(),
            found: y.len(),
        });
    }
    let w = dict.weights();
    let unit = dict.normalized_matrix();
    let mut best: Option<(CoefVector, f64)> = None;
    for k in 0..=dict.dim().min(n_atoms) {
        for cols in Combinations::new(n_atoms, k) {
            let mut c = DVector::zeros(n_atoms);
            if k > 0 {
                if smallest_singular_value(&select_columns(&unit, &cols)) <= INDEPENDENCE_SV_TOL {
                    continue;
                }
                let a = select_columns(dict.matrix(), &cols);
                let Ok(u) = least_squares_qr(&a, y) else {
                    continue;
                };
                for (j, &i) in cols.iter().enumerate() {
                    c[i] = u[j];
                }
            }
            if (y - dict.matrix() * &c).norm() >= ORACLE_FIT_TOL {
                continue;
            }
            let obj = weighted_p_norm_unchecked(&c, w, 1.0);
            if best.as_ref().is_none_or(|(_, b)| obj < *b) {
                best = Some((c, obj));
            }
        }
    }
    best.map(|(c, _)| c)
        .ok_or_else(|| Error::Infeasible("the atoms do not span the signal".into()))
}

/// Noise `z` with `||z||_2 = eps` in a uniformly random direction.
pub fn boundary_noise(dim: usize, eps: f64, seed: u64) -> Signal {
    if eps == 0.0 {
        return DVector::zeros(dim);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let z = DVector::<f64>::from_fn(dim, |_, _| StandardNormal.sample(&mut rng));
        let norm = z.norm();
        if norm > 1e-12 {
            return z * (eps / norm);
        }
    }
}

/// Draws noise of norm `eps`, solves the denoising problem at radius `eta`
/// for `y = T c_true + z`, and compares `||c* - c_true||_{2,w}` with the
/// bound `C1 (eta + eps) + C2 e_0`.
pub fn verify_recovery(
    dict: &Dictionary,
    c_true: &CoefVector,
    s: usize,
    eps: f64,
    eta: f64,
    cfg: &SolverConfig,
    noise_seed: u64,
) -> Result<GuaranteeReport> {
    if !(eps >= 0.0 && eta >= eps) {
        return Err(Error::Config(format!(
            "need eta >= eps >= 0, got eta = {eta}, eps = {eps}"
        )));
    }
    let w = dict.weights();
    let e0 = tail_e0(c_true, w, s)?;
    let mu = dict.coherence();
    let mut report = error_bound(mu, s, eta, eps, e0);

    let y = dict.synthesize(c_true)? + boundary_noise(dict.dim(), eps, noise_seed);
    let solution = solve_p1w(dict, &y, eta, cfg)?;
    let observed = weighted_p_norm_unchecked(&(&solution.coefficients - c_true), w, 2.0);
    let true_l1 = weighted_p_norm_unchecked(c_true, w, 1.0);

    report.observed = Some(observed);
    report.solver_converged = Some(solution.converged);
    report.l1_ordering = Some(true_l1 >= solution.objective - BOUND_TOLERANCE * (1.0 + true_l1));
    report.satisfied = report.bound_value.map(|b| observed <= b + BOUND_TOLERANCE);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dictionary::{orthonormal_basis, two_ortho_dictionary};
    use approx::assert_relative_eq;

    fn d0() -> Dictionary {
        let r = 2f64.sqrt();
        Dictionary::new(&[vec![1.0, 0.0], vec![0.0, 1.0], vec![r, r]]).unwrap()
    }

    #[test]
    fn exact_representation_on_basis() {
        let d = orthonormal_basis(3).unwrap();
        let y = DVector::from_vec(vec![1.0, 0.0, 0.0]);
        let sol = solve_p1w(&d, &y, 0.0, &SolverConfig::default()).unwrap();
        assert!(sol.converged);
        assert!((sol.coefficients - DVector::from_vec(vec![1.0, 0.0, 0.0])).amax() < 1e-8);
    }

    #[test]
    fn one_sparse_on_two_ortho() {
        let d = two_ortho_dictionary(16, None).unwrap();
        let mut c = DVector::zeros(32);
        c[5] = 1.0;
        let y = d.synthesize(&c).unwrap();
        let sol = solve_p1w(&d, &y, 0.0, &SolverConfig::default()).unwrap();
        assert!(sol.converged);
        let err = weighted_p_norm_unchecked(&(sol.coefficients - c), d.weights(), 2.0);
        assert!(err <= 1e-6, "error {err}");
    }

    #[test]
    fn large_radius_gives_zero() {
        let d = d0();
        let y = DVector::from_vec(vec![0.3, -0.4]);
        let sol = solve_p1w(&d, &y, 0.5, &SolverConfig::default()).unwrap();
        assert_eq!(sol.coefficients, DVector::zeros(3));
        assert_eq!(sol.iterations, 0);
    }

    #[test]
    fn noisy_solution_is_feasible_and_certified() {
        let d = two_ortho_dictionary(8, Some(4)).unwrap();
        let mut c = DVector::zeros(16);
        c[2] = 1.5;
        c[11] = -0.8;
        let y = d.synthesize(&c).unwrap() + boundary_noise(8, 0.05, 9);
        let cfg = SolverConfig::default();
        let sol = solve_p1w(&d, &y, 0.05, &cfg).unwrap();
        assert!(sol.converged);
        assert!(sol.residual_norm <= 0.05 + cfg.feas_tol);
        assert!(sol.gap() <= 1e-6 * sol.objective);
        assert!(sol.objective <= weighted_p_norm_unchecked(&c, d.weights(), 1.0) + 1e-9);
    }

    #[test]
    fn solver_input_errors() {
        let d = d0();
        let cfg = SolverConfig::default();
        assert!(matches!(
            solve_p1w(&d, &DVector::zeros(3), 0.0, &cfg),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            solve_p1w(&d, &DVector::zeros(2), -1.0, &cfg),
            Err(Error::Config(_))
        ));
        let bad = SolverConfig { max_iters: 0, ..cfg };
        assert!(matches!(
            solve_p1w(&d, &DVector::zeros(2), 0.0, &bad),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn iteration_cap_reports_not_converged() {
        let d = two_ortho_dictionary(8, Some(1)).unwrap();
        let y = DVector::from_fn(8, |i, _| (i as f64 * 0.7).sin());
        let cfg = SolverConfig {
            max_iters: 3,
            check_every: 1,
            ..SolverConfig::default()
        };
        let sol = solve_p1w(&d, &y, 0.1, &cfg).unwrap();
        assert!(!sol.converged);
        assert_eq!(sol.iterations, 3);
    }

    #[test]
    fn config_json() {
        let cfg = SolverConfig::from_json(r#"{"max_iters": 10, "step_policy": {"ratio": 2.0}}"#).unwrap();
        assert_eq!(cfg.max_iters, 10);
        assert_eq!(cfg.step_policy.ratio, 2.0);
        assert_eq!(cfg.step_policy.safety, 0.99);
        assert_eq!(cfg.feas_tol, 1e-8);
        assert!(SolverConfig::from_json(r#"{"rel_tol": -1}"#).is_err());
    }

    #[test]
    fn oracle_examples() {
        let d = orthonormal_basis(2).unwrap();
        let c = oracle_p1w(&d, &DVector::from_vec(vec![1.0, 0.0])).unwrap();
        assert_eq!(c.as_slice(), &[1.0, 0.0]);

        let r = 2f64.sqrt();
        let c = oracle_p1w(&d0(), &DVector::from_vec(vec![r, r])).unwrap();
        assert!((c - DVector::from_vec(vec![0.0, 0.0, 1.0])).amax() < 1e-12);

        let c = oracle_p1w(&d0(), &DVector::from_vec(vec![1.0, 0.0])).unwrap();
        assert!((c - DVector::from_vec(vec![1.0, 0.0, 0.0])).amax() < 1e-12);

        let big = two_ortho_dictionary(8, None).unwrap();
        assert!(matches!(
            oracle_p1w(&big, &DVector::zeros(8)),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn boundary_noise_has_exact_norm() {
        assert_relative_eq!(boundary_noise(16, 0.01, 3).norm(), 0.01, epsilon = 1e-15);
        assert_eq!(boundary_noise(4, 0.0, 3), DVector::zeros(4));
        assert_eq!(boundary_noise(4, 0.5, 3), boundary_noise(4, 0.5, 3));
    }

    #[test]
    fn verify_examples() {
        let d = orthonormal_basis(4).unwrap();
        let c = DVector::from_vec(vec![0.0, 2.0, 0.0, 0.0]);
        let r = verify_recovery(&d, &c, 1, 0.0, 0.0, &SolverConfig::default(), 1).unwrap();
        assert!(r.applicable);
        assert_eq!(r.bound_value, Some(0.0));
        assert!(r.observed.unwrap() <= 1e-9);
        assert_eq!(r.satisfied, Some(true));

        let d = two_ortho_dictionary(16, None).unwrap();
        let mut c = DVector::zeros(32);
        c[0] = 1.0;
        c[17] = -1.0;
        let r = verify_recovery(&d, &c, 2, 0.01, 0.01, &SolverConfig::default(), 2).unwrap();
        assert_relative_eq!(r.c1.unwrap(), 6.5319726, epsilon = 1e-6);
        assert_relative_eq!(r.bound_value.unwrap(), 0.1306395, epsilon = 1e-6);
        assert_eq!(r.satisfied, Some(true));
        assert_eq!(r.l1_ordering, Some(true));

        let d = two_ortho_dictionary(4, None).unwrap();
        let mut c = DVector::zeros(8);
        c[0] = 1.0;
        c[5] = 1.0;
        let r = verify_recovery(&d, &c, 2, 0.0, 0.0, &SolverConfig::default(), 2).unwrap();
        assert!(!r.applicable);
        assert!(r.satisfied.is_none());

        assert!(matches!(
            verify_recovery(&d, &c, 2, 0.1, 0.05, &SolverConfig::default(), 2),
            Err(Error::Config(_))
        ));
    }
}
