//! Weighted basis pursuit denoising: solve with a noisy signal, inspect the
//! duality gap, and compare against the exhaustive oracle on a small noiseless
//! instance.
//!
//! Run with `cargo run --release --example weighted_bpdn`.

use nalgebra::DVector;
use weighted_cs::dictionary::{random_dictionary, two_ortho_dictionary};
use weighted_cs::l1solver::{boundary_noise, oracle_p1w, solve_p1w, SolverConfig};
use weighted_cs::norms::{support, weighted_l1, weighted_l2, SOLVER_SUPPORT_TOL};

fn main() -> weighted_cs::Result<()> {
    let cfg = SolverConfig::default();

    let d = two_ortho_dictionary(16, Some(3))?;
    let mut c = DVector::zeros(d.len());
    c[2] = 1.5;
    c[21] = -0.8;
    let eps = 0.05;
    let y = d.synthesize(&c)? + boundary_noise(d.dim(), eps, 9);
    let sol = solve_p1w(&d, &y, eps, &cfg)?;
    println!("noisy recovery on two_ortho n=16 (eta = eps = {eps})");
    println!(
        "  objective {:.8}, lower bound {:.8}, gap {:.2e}",
        sol.objective,
        sol.lower_bound,
        sol.gap()
    );
    println!(
        "  residual {:.6} (<= {eps}), iterations {}",
        sol.residual_norm, sol.iterations
    );
    println!("  support {:?}", support(&sol.coefficients, 1e-3).as_slice());
    println!(
        "  weighted l2 error {:.5}",
        weighted_l2(&(&sol.coefficients - &c), d.weights())?
    );

    let small = random_dictionary(4, 9, (0.5, 2.0), 4)?;
    let y = DVector::from_vec(vec![0.4, -1.1, 0.3, 0.9]);
    let exact = oracle_p1w(&small, &y)?;
    let sol = solve_p1w(&small, &y, 0.0, &cfg)?;
    println!("\nnoiseless 4x9 instance");
    println!(
        "  solver {:.10}, oracle {:.10}",
        sol.objective,
        weighted_l1(&exact, small.weights())?
    );
    println!(
        "  solver support {:?}",
        support(&sol.coefficients, SOLVER_SUPPORT_TOL).as_slice()
    );
    println!("  oracle support {:?}", support(&exact, SOLVER_SUPPORT_TOL).as_slice());
    Ok(())
}
