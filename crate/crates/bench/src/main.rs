use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use optibatch::libsvm::{parse_libsvm, to_problem};
use optibatch::ProjectionDomain;
use optibatch_bench::output::{fmt17, write_results};
use optibatch_bench::runner::thread_count;
use optibatch_bench::{
    build_problem, compute_reference_optimum, exit_code, results_exit_code, run_experiment, verify,
    ExperimentConfig, ProblemSource, ReferenceMode, EXIT_NUMERIC, EXIT_OK,
};

#[derive(Parser)]
#[command(name = "optibatch", version, about = "Run and check first-order optimization experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every algorithm and seed in a TOML config and write CSV results.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides `output_dir` from the config.
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
    /// Run the built-in numerical self-checks.
    Verify,
    /// Compute the reference optimum of a problem.
    Reference {
        /// A LIBSVM file or `synthetic:n=..,d=..,...`.
        #[arg(long)]
        problem: String,
        /// `closed-form` or `long-run:<m>`.
        #[arg(long, default_value = "closed-form")]
        mode: ReferenceMode,
        /// Horizon the long-run multiplier applies to.
        #[arg(long, default_value_t = 500)]
        iterations: usize,
        /// Regularization for LIBSVM problems.
        #[arg(long, default_value_t = 0.005)]
        mu: f64,
        /// Ball radius for LIBSVM problems.
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        /// Drop the ball constraint of a LIBSVM problem.
        #[arg(long)]
        unconstrained: bool,
    },
    /// Parse a LIBSVM file and report its shape and labels.
    Parse {
        #[arg(long)]
        libsvm: PathBuf,
        #[arg(long)]
        dim: Option<usize>,
    },
}

fn cmd_run(config: PathBuf, output_dir: Option<PathBuf>) -> Result<i32> {
    let mut config = ExperimentConfig::load(&config)?;
    if let Some(dir) = output_dir {
        config.output_dir = dir;
    }
    let threads = thread_count()?;
    let results = run_experiment(&config, threads)?;
    for w in &results.reference.warnings {
        eprintln!("warning: {w}");
    }
    println!("f_star = {} (tolerance {})", fmt17(results.reference.f_star), fmt17(results.reference.tolerance));
    for o in &results.outcomes {
        match &o.result {
            Ok(trace) => {
                let last = trace.final_suboptimality().unwrap_or(f64::NAN);
                println!("{} seed {}: final gap {last:.3e}, {} oracle calls", o.algorithm, o.seed, trace.total_calls());
                for note in &trace.notes {
                    eprintln!("note: {} seed {}: {note}", o.algorithm, o.seed);
                }
            }
            Err(e) => eprintln!("error: {} seed {}: {e}", o.algorithm, o.seed),
        }
    }
    let names: Vec<String> = config.algorithms.iter().map(|a| a.name.clone()).collect();
    let files = write_results(&config.output_dir, &names, config.iterations, &results)?;
    println!("wrote {} files to {}", files.len(), config.output_dir.display());
    Ok(results_exit_code(&results))
}

fn cmd_verify() -> Result<i32> {
    let checks = verify::run_all();
    for c in &checks {
        println!("{c}");
    }
    Ok(if checks.iter().all(|c| c.pass) { EXIT_OK } else { EXIT_NUMERIC })
}

fn cmd_reference(
    problem: String,
    mode: ReferenceMode,
    iterations: usize,
    mu: f64,
    radius: f64,
    unconstrained: bool,
) -> Result<i32> {
    let spec = if problem.starts_with("synthetic:") {
        build_problem(&ProblemSource::from_spec_string(&problem)?)?
    } else {
        let file = File::open(&problem).with_context(|| format!("cannot open {problem}"))?;
        let data = parse_libsvm(BufReader::new(file)).with_context(|| format!("cannot parse {problem}"))?;
        let p = to_problem(&data, mu, radius)?;
        if unconstrained {
            p.with_domain(ProjectionDomain::Unconstrained)?
        } else {
            p
        }
    };
    let found = compute_reference_optimum(&spec, mode, iterations)?;
    for w in &found.warnings {
        eprintln!("warning: {w}");
    }
    println!("f_star = {}", fmt17(found.f_star));
    println!("tolerance = {}", fmt17(found.tolerance));
    println!("mode = {:?}", found.mode);
    Ok(EXIT_OK)
}

fn cmd_parse(path: PathBuf, dim: Option<usize>) -> Result<i32> {
    let file = File::open(&path).with_context(|| format!("cannot open {}", path.display()))?;
    let mut data = parse_libsvm(BufReader::new(file)).with_context(|| format!("cannot parse {}", path.display()))?;
    if let Some(d) = dim {
        data = data.with_dim(d)?;
    }
    let positives = data.rows.iter().filter(|r| r.label > 0.0).count();
    let nonzeros: usize = data.rows.iter().map(|r| r.features.len()).sum();
    println!("rows = {}", data.len());
    println!("dim = {}", data.dim);
    println!("nonzeros = {nonzeros}");
    println!("labels = {:?} -> +1: {positives}, -1: {}", data.raw_labels, data.len() - positives);
    Ok(EXIT_OK)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run { config, output_dir } => cmd_run(config, output_dir),
        Command::Verify => cmd_verify(),
        Command::Reference { problem, mode, iterations, mu, radius, unconstrained } => {
            cmd_reference(problem, mode, iterations, mu, radius, unconstrained)
        }
        Command::Parse { libsvm, dim } => cmd_parse(libsvm, dim),
    };
    let code = match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            exit_code(&e)
        }
    };
    ExitCode::from(code as u8)
}
