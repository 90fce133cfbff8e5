//! Builds problems and optimizers from a config and runs every (algorithm, seed) pair.

use std::fs::File;
use std::io::BufReader;

use anyhow::{Context, Result};
use nalgebra::DVector;
use optibatch::libsvm::{parse_libsvm, to_problem};
use optibatch::optim::{
    run, BaselineStep, GradientDescent, HeavyBall, MomentumSign, Nag, OptimisticO2B, Optimism, Optimizer,
    RunTrace, StabilizedOptimistic, StepSizePolicy, StronglyConvexO2B, SurrogateForm,
};
use optibatch::synthetic::{generate_synthetic_ls, uniform_in_ball};
use optibatch::{Error, ExactOracle, ProblemSpec, ProjectionDomain, WeightSchedule};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::config::{AlgorithmSpec, ExperimentConfig, FormChoice, Method, ProblemSource, ScheduleChoice, StepChoice};
use crate::reference::{compute_reference_optimum, ReferenceOptimum};

/// Environment variable holding the worker count; unset or 0 runs sequentially.
pub const THREADS_VAR: &str = "OPTIBATCH_THREADS";

#[derive(Debug)]
pub struct RunOutcome {
    pub algorithm: String,
    pub seed: u64,
    pub result: std::result::Result<RunTrace, Error>,
}

#[derive(Debug)]
pub struct ExperimentResults {
    pub reference: ReferenceOptimum,
    pub outcomes: Vec<RunOutcome>,
}

impl ExperimentResults {
    pub fn failures(&self) -> impl Iterator<Item = &RunOutcome> {
        self.outcomes.iter().filter(|o| o.result.is_err())
    }
}

pub fn build_problem(source: &ProblemSource) -> Result<ProblemSpec> {
    let problem = match source {
        ProblemSource::SyntheticLs { n, d, sigma_a, noise_var, radius, seed, .. } => {
            generate_synthetic_ls(*n, *d, *sigma_a, *noise_var, *radius, *seed)?.problem
        }
        ProblemSource::Libsvm { path, mu, radius, dim, .. } => {
            let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
            let mut data = parse_libsvm(BufReader::new(file))
                .with_context(|| format!("cannot parse {}", path.display()))?;
            if let Some(d) = dim {
                data = data.with_dim(*d)?;
            }
            to_problem(&data, *mu, *radius)?
        }
    };
    if source.constrained() {
        Ok(problem)
    } else {
        Ok(problem.with_domain(ProjectionDomain::Unconstrained)?)
    }
}

/// Uniform in the ball when constrained, otherwise a random direction at half the radius.
pub fn start_point(d: usize, radius: f64, constrained: bool, seed: u64) -> DVector<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if constrained {
        return uniform_in_ball(d, radius, &mut rng);
    }
    let v = DVector::from_fn(d, |_, _| {
        let z: f64 = StandardNormal.sample(&mut rng);
        z
    });
    let n = v.norm();
    if n > 0.0 {
        v * (radius / 2.0 / n)
    } else {
        v
    }
}

fn reject(spec: &AlgorithmSpec, field: &str) -> Error {
    Error::Config(format!("option `{field}` does not apply to {:?} ({})", spec.method, spec.name))
}

fn allow(spec: &AlgorithmSpec, allowed: &[&str]) -> optibatch::Result<()> {
    let present = [
        ("step", spec.step.is_some()),
        ("schedule", spec.schedule.is_some()),
        ("eta", spec.eta.is_some()),
        ("momentum", spec.momentum.is_some()),
        ("form", spec.form.is_some()),
        ("diameter", spec.diameter.is_some()),
    ];
    for (field, set) in present {
        if set && !allowed.contains(&field) {
            return Err(reject(spec, field));
        }
    }
    Ok(())
}

/// Instantiates one configured method; unsupported combinations give `Error::Config`.
pub fn build_optimizer(
    spec: &AlgorithmSpec,
    problem: &ProblemSpec,
    x0: DVector<f64>,
    iterations: usize,
) -> optibatch::Result<Box<dyn Optimizer + Send>> {
    let smoothness = |who: &str| problem.require_smoothness(who);
    Ok(match spec.method {
        Method::OptimisticO2b => {
            allow(spec, &["step", "schedule", "eta", "diameter"])?;
            let step = spec.step.unwrap_or(StepChoice::Constant);
            if spec.eta.is_some() && step != StepChoice::Constant {
                return Err(reject(spec, "eta"));
            }
            if spec.diameter.is_some() && !matches!(step, StepChoice::AdagradOneGrad | StepChoice::AdagradTwoGrad) {
                return Err(reject(spec, "diameter"));
            }
            let diameter = spec.diameter.unwrap_or_else(|| problem.domain().diameter());
            let policy = match step {
                StepChoice::Constant => match spec.eta {
                    Some(eta) => StepSizePolicy::constant(eta),
                    None => StepSizePolicy::constant(1.0 / (4.0 * smoothness("a constant step")?)),
                },
                StepChoice::NagEquivalent => StepSizePolicy::nag_equivalent(smoothness("the NAG-equivalent step")?),
                StepChoice::AdagradTwoGrad => StepSizePolicy::adagrad_two_grad(diameter),
                StepChoice::AdagradOneGrad => StepSizePolicy::adagrad_one_grad(diameter),
                StepChoice::Adaptive => {
                    return Err(Error::Config("step `adaptive` applies to the stabilized methods".into()))
                }
            };
            let default_schedule = if step == StepChoice::AdagradOneGrad {
                ScheduleChoice::LinearZeroLast
            } else {
                ScheduleChoice::Linear
            };
            let schedule = match spec.schedule.unwrap_or(default_schedule) {
                ScheduleChoice::Linear => WeightSchedule::linear(),
                ScheduleChoice::LinearZeroLast => WeightSchedule::linear_zero_last(iterations),
                ScheduleChoice::Unit => WeightSchedule::unit(),
            };
            Box::new(OptimisticO2B::new(problem, schedule, policy, x0, Some(iterations))?)
        }
        Method::StronglyConvexO2b => {
            allow(spec, &["form"])?;
            let form = match spec.form.unwrap_or(FormChoice::Proof) {
                FormChoice::Proof => SurrogateForm::ProofConsistent,
                FormChoice::Literal => SurrogateForm::Literal,
            };
            Box::new(StronglyConvexO2B::new(problem, x0, form)?)
        }
        Method::Nag => {
            allow(spec, &["eta"])?;
            match spec.eta {
                Some(theta) => Box::new(Nag::with_step(problem, x0, theta)?),
                None => Box::new(Nag::new(problem, x0)?),
            }
        }
        Method::Gd => {
            allow(spec, &["eta"])?;
            match spec.eta {
                Some(eta) => Box::new(GradientDescent::with_step(problem, x0, eta)?),
                None => Box::new(GradientDescent::new(problem, x0)?),
            }
        }
        Method::HeavyBall => {
            allow(spec, &["eta", "momentum"])?;
            let eta = match spec.eta {
                Some(eta) => eta,
                None => 1.0 / smoothness("heavy ball")?,
            };
            let momentum = spec.momentum.unwrap_or(HeavyBall::DEFAULT_MOMENTUM);
            Box::new(HeavyBall::with_params(problem, x0, momentum, eta, MomentumSign::Polyak)?)
        }
        Method::StabilizedUnixgrad | Method::StabilizedJrgs => {
            allow(spec, &["step", "eta", "diameter"])?;
            let kind = if spec.method == Method::StabilizedUnixgrad { Optimism::UniXGrad } else { Optimism::Jrgs };
            let step = match spec.step.unwrap_or(StepChoice::Constant) {
                StepChoice::Constant => {
                    if spec.diameter.is_some() {
                        return Err(reject(spec, "diameter"));
                    }
                    match spec.eta {
                        Some(eta) => BaselineStep::Constant(eta),
                        None => BaselineStep::Constant(1.0 / (4.0 * smoothness("the stabilized methods")?)),
                    }
                }
                StepChoice::Adaptive => {
                    if spec.eta.is_some() {
                        return Err(reject(spec, "eta"));
                    }
                    let diameter = spec.diameter.ok_or_else(|| {
                        Error::Config(format!("{}: the adaptive stabilized step needs `diameter`", spec.name))
                    })?;
                    BaselineStep::Adaptive { diameter }
                }
                other => {
                    return Err(Error::Config(format!(
                        "{}: step {other:?} is not available for the stabilized methods",
                        spec.name
                    )))
                }
            };
            Box::new(StabilizedOptimistic::new(problem, kind, step, x0)?)
        }
    })
}

fn run_one(
    spec: &AlgorithmSpec,
    problem: &ProblemSpec,
    x0: DVector<f64>,
    iterations: usize,
    f_star: f64,
) -> optibatch::Result<RunTrace> {
    let mut optimizer = build_optimizer(spec, problem, x0, iterations)?;
    let mut oracle = ExactOracle::new(problem);
    let (_, trace) = run(optimizer.as_mut(), &mut oracle, iterations, f_star)?;
    if let Some(bad) = trace.records.iter().find(|r| !r.suboptimality.is_finite()) {
        return Err(Error::Numeric(format!("non-finite suboptimality at t = {}", bad.t)));
    }
    Ok(trace)
}

/// Reads the worker count from `OPTIBATCH_THREADS`.
pub fn thread_count() -> Result<usize> {
    match std::env::var(THREADS_VAR) {
        Ok(v) if v.trim().is_empty() => Ok(0),
        Ok(v) => v.trim().parse().with_context(|| format!("{THREADS_VAR} must be a non-negative integer, got {v:?}")),
        Err(_) => Ok(0),
    }
}

/// Runs every configured pair; per-run failures are kept in the outcomes.
pub fn run_experiment(config: &ExperimentConfig, threads: usize) -> Result<ExperimentResults> {
    config.validate()?;
    let problem = build_problem(&config.problem)?;
    let reference = compute_reference_optimum(&problem, config.reference, config.iterations)
        .context("cannot compute the reference optimum")?;
    let tasks: Vec<(&AlgorithmSpec, u64)> = config
        .algorithms
        .iter()
        .flat_map(|a| config.seeds.iter().map(move |&s| (a, s)))
        .collect();
    let d = problem.dim();
    let radius = config.problem.radius();
    let constrained = config.problem.constrained();
    let f_star = reference.f_star;
    let work = |&(spec, seed): &(&AlgorithmSpec, u64)| RunOutcome {
        algorithm: spec.name.clone(),
        seed,
        result: run_one(spec, &problem, start_point(d, radius, constrained, seed), config.iterations, f_star),
    };
    let outcomes = if threads == 0 {
        tasks.iter().map(work).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .context("cannot start the worker pool")?;
        pool.install(|| tasks.par_iter().map(work).collect())
    };
    Ok(ExperimentResults { reference, outcomes })
}
