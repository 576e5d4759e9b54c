//! Coherence, Welch bound and weight range for the built-in dictionary families,
//! and a demonstration that rescaling atoms leaves the coherence unchanged.
//!
//! Run with `cargo run --example coherence_analysis`.

use weighted_cs::dictionary::{random_dictionary, simplex_dictionary, two_ortho_dictionary, welch_lower_bound};
use weighted_cs::guarantees::{independence_max_size, uniqueness_max_sparsity};
use weighted_cs::Dictionary;

fn describe(name: &str, d: &Dictionary) {
    let mu = d.coherence();
    let (wmin, wmax) = d.weight_range();
    println!(
        "{name:<28} n={:<3} N={:<3} mu={mu:.6} welch={:.6} weights=[{wmin:.3}, {wmax:.3}] unique s<= {} independent k<= {}",
        d.dim(),
        d.len(),
        welch_lower_bound(d.dim(), d.len()),
        uniqueness_max_sparsity(mu).unwrap(),
        independence_max_size(mu).unwrap(),
    );
}

fn main() -> weighted_cs::Result<()> {
    describe("two_ortho n=16", &two_ortho_dictionary(16, None)?);
    describe("two_ortho n=16 (weighted)", &two_ortho_dictionary(16, Some(1))?);
    describe("simplex n=8 (weighted)", &simplex_dictionary(8, Some(2))?);
    describe("gaussian 20x40", &random_dictionary(20, 40, (0.5, 2.0), 3)?);

    let d = random_dictionary(6, 12, (1.0, 1.0), 4)?;
    let scales: Vec<f64> = (0..d.len()).map(|j| if j % 2 == 0 { 3.0 } else { -0.2 }).collect();
    let scaled = d.rescaled(&scales)?;
    println!(
        "\nrescaling atoms: mu {:.15} -> {:.15}, weights now span {:?}",
        d.coherence(),
        scaled.coherence(),
        scaled.weight_range()
    );
    Ok(())
}
