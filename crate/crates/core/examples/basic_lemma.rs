//! Checks the weighted-norm lemma on random coefficient pairs and prints the
//! two sides of each inequality for a few draws.
//!
//! Run with `cargo run --example basic_lemma`.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use weighted_cs::dictionary::random_dictionary;
use weighted_cs::guarantees::basic_lemma_check;

fn sparse(len: usize, s: usize, rng: &mut ChaCha8Rng) -> DVector<f64> {
    let mut c = DVector::zeros(len);
    for i in rand::seq::index::sample(rng, len, s) {
        c[i] = rng.random_range(-2.0..2.0);
    }
    c
}

fn main() -> weighted_cs::Result<()> {
    let d = random_dictionary(8, 16, (0.3, 3.0), 11)?;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    println!("dictionary 8x16, mu = {:.4}", d.coherence());

    let mut worst = f64::INFINITY;
    for draw in 0..2000 {
        let c = sparse(16, rng.random_range(1..=6), &mut rng);
        let e = sparse(16, rng.random_range(1..=6), &mut rng);
        let check = basic_lemma_check(&d, &c, &e)?;
        assert!(check.all_hold());
        worst = worst.min(check.worst_relative_slack());
        if draw < 3 {
            println!("\ndraw {draw}, s = {}", check.sparsity);
            println!("  lower  {:>10.5} <= {:>10.5}", check.lower.lhs, check.lower.rhs);
            println!("  upper  {:>10.5} <= {:>10.5}", check.upper.lhs, check.upper.rhs);
            if let Some(dis) = &check.disjoint {
                println!("  cross  {:>10.5} <= {:>10.5}", dis.lhs, dis.rhs);
            }
        }
    }
    println!("\n2000 draws, every inequality holds; smallest relative slack {worst:.3e}");
    Ok(())
}
