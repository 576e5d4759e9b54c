//! Orthogonal matching pursuit on a two-orthobasis dictionary with non-unit
//! atoms: one traced run, then a success-rate sweep over sparsity levels.
//!
//! Run with `cargo run --release --example omp_recovery`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use weighted_cs::dictionary::two_ortho_dictionary;
use weighted_cs::greedy::{omp_recover, StopRule};
use weighted_cs::harness::random_sparse_vector;
use weighted_cs::norms::support;

fn main() -> weighted_cs::Result<()> {
    let d = two_ortho_dictionary(32, Some(7))?;
    let mu = d.coherence();
    println!(
        "two_ortho n=32 with random weights, mu = {mu:.4}, guaranteed for s < {:.2}",
        (1.0 / mu + 1.0) / 2.0
    );

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let c = random_sparse_vector(d.len(), 3, (0.5, 2.0), 0.0, &mut rng);
    let y = d.synthesize(&c)?;
    let trace = omp_recover(&d, &y, StopRule::tolerance(1e-10 * y.norm()))?;
    println!("\ntrue support {:?}", support(&c, 0.0).as_slice());
    for (k, (j, r)) in trace.selected.iter().zip(&trace.residual_norms).enumerate() {
        println!("  step {}: atom {j:>2}, residual {r:.3e}", k + 1);
    }

    println!("\n  s  exact support recovered (of 500)");
    for s in 1..=8 {
        let mut hits = 0;
        for _ in 0..500 {
            let c = random_sparse_vector(d.len(), s, (0.5, 2.0), 0.0, &mut rng);
            let trace = omp_recover(&d, &d.synthesize(&c)?, StopRule::atoms(s))?;
            let mut found = trace.selected.clone();
            found.sort_unstable();
            hits += (found == support(&c, 0.0).as_slice()) as usize;
        }
        println!("  {s}  {hits}");
    }
    Ok(())
}
