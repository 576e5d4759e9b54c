//! `wcs`: command-line front end for the weighted sparse recovery toolkit.
//!
//! Exit codes: 0 success, 2 input error, 3 numerical failure.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use weighted_cs::greedy::{omp_recover, StopRule};
use weighted_cs::guarantees::error_bound;
use weighted_cs::harness::{
    load_dictionary, random_sparse_vector, render, run_experiment, CoherenceReport, ExperimentConfig, OutputFormat,
};
use weighted_cs::l1solver::{solve_p1w, SolverConfig};
use weighted_cs::norms::support;
use weighted_cs::{Error, Signal};

#[derive(Parser)]
#[command(name = "wcs", version, about = "Sparse recovery with non-unit-norm dictionaries")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Coherence, Welch bound and weight range of a dictionary
    Coherence {
        #[arg(long)]
        dict: String,
        #[arg(long)]
        format: Option<OutputFormat>,
    },
    /// Error-bound constants for a coherence and sparsity level
    Bounds {
        #[arg(long)]
        mu: f64,
        #[arg(long)]
        s: usize,
        #[arg(long, default_value_t = 0.0)]
        eta: f64,
        #[arg(long, default_value_t = 0.0)]
        eps: f64,
        #[arg(long, default_value_t = 0.0)]
        e0: f64,
        #[arg(long)]
        format: Option<OutputFormat>,
    },
    /// Orthogonal matching pursuit on a signal file or a synthetic sparse signal
    Omp(OmpArgs),
    /// Weighted basis pursuit denoising
    Solve {
        #[arg(long)]
        dict: String,
        /// JSON array holding the signal
        #[arg(long)]
        y: PathBuf,
        #[arg(long, default_value_t = 0.0)]
        eta: f64,
        /// Solver configuration JSON
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Randomized verification of the recovery bound
    Experiment(ExperimentArgs),
}

#[derive(Args)]
struct OmpArgs {
    #[arg(long)]
    dict: String,
    /// JSON array holding the signal
    #[arg(long, conflicts_with = "s")]
    y: Option<PathBuf>,
    /// Sparsity of a synthetic signal `y = Tc`
    #[arg(long, required_unless_present = "y")]
    s: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    max_atoms: Option<usize>,
    /// Absolute residual tolerance
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Experiment configuration JSON; other flags override its fields
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    dict: Option<String>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    s: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    eps: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    eta: Option<Vec<f64>>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    tail: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    format: OutputFormat,
}

fn read_signal(path: &PathBuf) -> Result<Signal, Error> {
    let values: Vec<f64> = serde_json::from_str(&fs::read_to_string(path)?)?;
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("signal file"));
    }
    Ok(DVector::from_vec(values))
}

fn emit(out: Option<&PathBuf>, bytes: &[u8]) -> Result<(), Error> {
    match out {
        Some(path) => fs::write(path, bytes)?,
        None => std::io::stdout().write_all(bytes)?,
    }
    Ok(())
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.10}")).unwrap_or_else(|| "-".into())
}

fn coherence(dict: &str, format: Option<OutputFormat>) -> Result<ExitCode, Error> {
    let report = CoherenceReport::new(&load_dictionary(dict)?);
    if format == Some(OutputFormat::Json) {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        println!("n = {}", report.n);
        println!("N = {}", report.num_atoms);
        println!("mu = {:.10}", report.mu);
        println!("welch = {:.10}", report.welch);
        println!("weights = [{:.10}, {:.10}]", report.weight_min, report.weight_max);
    }
    Ok(ExitCode::SUCCESS)
}

fn bounds(mu: f64, s: usize, eta: f64, eps: f64, e0: f64, format: Option<OutputFormat>) -> Result<ExitCode, Error> {
    if !(mu >= 0.0 && eta >= 0.0 && eps >= 0.0 && e0 >= 0.0) || s == 0 {
        return Err(Error::Config("need mu, eta, eps, e0 >= 0 and s >= 1".into()));
    }
    let report = error_bound(mu, s, eta, eps, e0);
    if format == Some(OutputFormat::Json) {
        println!("{}", serde_json::to_string_pretty(&report)?);
        return Ok(ExitCode::SUCCESS);
    }
    if !report.applicable {
        println!("not applicable: mu*(2s-1) = {:.10} >= 1", mu * (2 * s - 1) as f64);
        return Ok(ExitCode::SUCCESS);
    }
    println!("applicable = true");
    println!("C1 = {}", fmt_opt(report.c1));
    println!("C2 = {}", fmt_opt(report.c2));
    println!("bound = {}", fmt_opt(report.bound_value));
    println!("cai_C = {}", fmt_opt(report.cai_c));
    println!("cai_bound = {}", fmt_opt(report.cai_bound));
    println!("ratio = {}", fmt_opt(report.improvement_ratio()));
    Ok(ExitCode::SUCCESS)
}

fn omp(args: OmpArgs) -> Result<ExitCode, Error> {
    let dict = load_dictionary(&args.dict)?;
    let (y, truth) = match (&args.y, args.s) {
        (Some(path), _) => (read_signal(path)?, None),
        (None, Some(s)) => {
            if s == 0 || s > dict.len() {
                return Err(Error::InvalidSparsity { s, len: dict.len() });
            }
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            let c = random_sparse_vector(dict.len(), s, (1.0, 2.0), 0.0, &mut rng);
            (dict.synthesize(&c)?, Some(c))
        }
        (None, None) => unreachable!("clap requires --y or --s"),
    };
    let stop = StopRule {
        max_atoms: args.max_atoms.or(args.s),
        residual_tol: args.tol,
    };
    let trace = omp_recover(&dict, &y, stop)?;
    let mut record = trace.to_record();
    if let Some(c) = truth {
        let mut found = trace.selected.clone();
        found.sort_unstable();
        record.recovered = Some(found == support(&c, 0.0).as_slice());
    }
    let mut text = serde_json::to_string_pretty(&record)?;
    text.push('\n');
    emit(args.out.as_ref(), text.as_bytes())?;
    Ok(ExitCode::SUCCESS)
}

fn solve(
    dict: &str,
    y: &PathBuf,
    eta: f64,
    config: Option<&PathBuf>,
    out: Option<&PathBuf>,
) -> Result<ExitCode, Error> {
    let dict = load_dictionary(dict)?;
    let y = read_signal(y)?;
    let cfg = match config {
        Some(path) => SolverConfig::from_json(&fs::read_to_string(path)?)?,
        None => SolverConfig::default(),
    };
    let solution = solve_p1w(&dict, &y, eta, &cfg)?;
    let coefficients: Vec<f64> = solution.coefficients.iter().copied().collect();
    let mut text = serde_json::to_string(&coefficients)?;
    text.push('\n');
    emit(out, text.as_bytes())?;
    eprintln!(
        "objective = {:.12e}, gap = {:.3e}, residual = {:.3e}, iterations = {}",
        solution.objective,
        solution.gap(),
        solution.residual_norm,
        solution.iterations
    );
    if !solution.converged {
        eprintln!("error: iteration cap reached before convergence; best iterate written");
        return Ok(ExitCode::from(3));
    }
    Ok(ExitCode::SUCCESS)
}

fn experiment(args: ExperimentArgs) -> Result<ExitCode, Error> {
    let mut cfg = match &args.config {
        Some(path) => ExperimentConfig::from_json(&fs::read_to_string(path)?)?,
        None => ExperimentConfig {
            dictionary: args
                .dict
                .clone()
                .ok_or_else(|| Error::Config("--dict or --config is required".into()))?,
            trials: 0,
            s: Vec::new(),
            eps: Vec::new(),
            eta: Vec::new(),
            seed: 0,
            coef_range: (1.0, 2.0),
            tail: 0.0,
            solver: SolverConfig::default(),
        },
    };
    if let Some(d) = args.dict {
        cfg.dictionary = d;
    }
    if let Some(t) = args.trials {
        cfg.trials = t;
    }
    if let Some(s) = args.s {
        cfg.s = s;
    }
    if let Some(eps) = args.eps {
        cfg.eps = eps;
    }
    if let Some(eta) = args.eta {
        cfg.eta = eta;
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(tail) = args.tail {
        cfg.tail = tail;
    }

    let report = run_experiment(&cfg)?;
    emit(args.out.as_ref(), &render(&report, args.format)?)?;
    let s = &report.summary;
    eprintln!(
        "trials = {}, applicable = {}, satisfied = {}, satisfied_rate = {:.4}, converged_rate = {:.4}",
        s.trials, s.applicable, s.satisfied, s.satisfied_rate, s.converged_rate
    );
    if s.satisfied < s.applicable {
        eprintln!(
            "error: observed error exceeded the bound in {} trial(s)",
            s.applicable - s.satisfied
        );
        return Ok(ExitCode::from(3));
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Coherence { dict, format } => coherence(&dict, format),
        Command::Bounds {
            mu,
            s,
            eta,
            eps,
            e0,
            format,
        } => bounds(mu, s, eta, eps, e0, format),
        Command::Omp(args) => omp(args),
        Command::Solve {
            dict,
            y,
            eta,
            config,
            out,
        } => solve(&dict, &y, eta, config.as_ref(), out.as_ref()),
        Command::Experiment(args) => experiment(args),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(if err.is_numerical() { 3 } else { 2 })
        }
    }
}
