//! Saving and loading dictionaries as JSON, and the `gen:` source syntax that
//! the command-line tool accepts.
//!
//! Run with `cargo run --example dictionary_io`.

use weighted_cs::dictionary::simplex_dictionary;
use weighted_cs::harness::{load_dictionary, CoherenceReport};
use weighted_cs::Dictionary;

fn main() -> weighted_cs::Result<()> {
    let dir = std::env::temp_dir().join("weighted_cs_dictionary_io");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("simplex4.json");

    let d = simplex_dictionary(4, Some(1))?;
    d.save(&path)?;
    let back = Dictionary::load(&path)?;
    println!("saved and reloaded {}: identical = {}", path.display(), back == d);
    println!(
        "{}",
        std::fs::read_to_string(&path)?
            .lines()
            .take(4)
            .collect::<Vec<_>>()
            .join("\n")
    );

    for source in [
        "gen:identity:n=4",
        "gen:two_ortho:n=8",
        "gen:simplex:n=5,seed=2",
        "gen:random:n=6,N=12,lo=0.5,hi=3,seed=7",
        path.to_str().unwrap(),
    ] {
        let report = CoherenceReport::new(&load_dictionary(source)?);
        println!("{source:<42} {}", serde_json::to_string(&report)?);
    }

    match load_dictionary("gen:two_ortho:n=6") {
        Err(e) => println!("rejected as expected: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
