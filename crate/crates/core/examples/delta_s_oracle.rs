//! Exact restricted isometry constants by support enumeration, compared with
//! the coherence bound `mu (s - 1)`.
//!
//! Run with `cargo run --release --example delta_s_oracle`.

use weighted_cs::dictionary::{simplex_dictionary, two_ortho_dictionary};
use weighted_cs::guarantees::{delta_s_bound, delta_s_exact_with_cap, DEFAULT_ENUMERATION_CAP};
use weighted_cs::Dictionary;

fn table(name: &str, d: &Dictionary, max_s: usize) -> weighted_cs::Result<()> {
    let mu = d.coherence();
    println!("{name} (mu = {mu:.4})");
    println!("  s  exact delta_s  mu(s-1)   witness support");
    for s in 1..=max_s {
        let (exact, support) = delta_s_exact_with_cap(d, s, DEFAULT_ENUMERATION_CAP)?;
        println!("  {s}  {exact:>13.6}  {:>7.4}   {support:?}", delta_s_bound(mu, s)?);
    }
    println!();
    Ok(())
}

fn main() -> weighted_cs::Result<()> {
    table("two_ortho n=4", &two_ortho_dictionary(4, None)?, 4)?;
    table("two_ortho n=8, weighted", &two_ortho_dictionary(8, Some(5))?, 4)?;
    table("simplex n=6", &simplex_dictionary(6, None)?, 4)?;
    Ok(())
}
