//! Recovery constants across the applicable coherence range, against the
//! older `sqrt(3(1 + mu)) / (1 - (2s - 1) mu)` constant, and a full
//! verification of the bound on one compressible signal.
//!
//! Run with `cargo run --release --example bound_comparison`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use weighted_cs::dictionary::two_ortho_dictionary;
use weighted_cs::guarantees::{cai_constant, f_mu, recovery_constants};
use weighted_cs::harness::random_sparse_vector;
use weighted_cs::l1solver::{verify_recovery, SolverConfig};

fn main() -> weighted_cs::Result<()> {
    for s in [1usize, 2, 4] {
        let edge = 1.0 / (2 * s - 1) as f64;
        println!("s = {s}, applicable for mu < {edge:.4}");
        println!("  mu/edge      C1      C2   older   C1/older   F(mu)");
        for frac in [0.1, 0.3, 0.5, 0.7, 0.9] {
            let mu = frac * edge;
            let k = recovery_constants(mu, s)?;
            let old = cai_constant(mu, s)?;
            println!(
                "  {frac:>7.1} {:>7.3} {:>7.3} {old:>7.3} {:>10.4} {:>7.4}",
                k.c1,
                k.c2,
                k.c1 / old,
                f_mu(mu, s)
            );
        }
        println!();
    }

    let d = two_ortho_dictionary(64, Some(8))?;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let c = random_sparse_vector(d.len(), 3, (1.0, 2.0), 0.005, &mut rng);
    let report = verify_recovery(&d, &c, 3, 0.02, 0.02, &SolverConfig::default(), 8)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}
