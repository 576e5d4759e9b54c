//! A randomized verification sweep driven by `ExperimentConfig`, written as
//! CSV to stdout with a summary on stderr.
//!
//! Run with `cargo run --release --example experiment_sweep > sweep.csv`.

use weighted_cs::harness::{render, run_experiment, ExperimentConfig, OutputFormat};

const CONFIG: &str = r#"{
    "dictionary": "gen:two_ortho:n=32,seed=4",
    "trials": 50,
    "s": [1, 2, 3],
    "eps": [0.0, 0.01, 0.05],
    "eta": [0.0, 0.02, 0.05],
    "seed": 2024,
    "tail": 0.002
}"#;

fn main() -> weighted_cs::Result<()> {
    let cfg = ExperimentConfig::from_json(CONFIG)?;
    let report = run_experiment(&cfg)?;
    let csv = render(&report, OutputFormat::Csv)?;
    print!("{}", String::from_utf8_lossy(&csv));

    let s = &report.summary;
    eprintln!(
        "{} trials, {} applicable, {} satisfied, solver converged in {:.1}% of trials",
        s.trials,
        s.applicable,
        s.satisfied,
        100.0 * s.converged_rate
    );
    let tightest = report
        .rows
        .iter()
        .filter_map(|r| Some(r.observed / r.bound.filter(|b| *b > 0.0)?))
        .fold(0.0f64, f64::max);
    eprintln!("largest observed / bound ratio: {tightest:.3}");
    Ok(())
}
