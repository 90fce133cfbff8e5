//! Iterative methods sharing a common stepping interface.

mod classic;
mod equivalence;
mod o2b;
mod stabilized;
mod step;
mod strongly_convex;
mod trace;

pub use classic::{GradientDescent, HeavyBall, MomentumSign, Nag};
pub use equivalence::check_nag_equivalence;
pub use o2b::{run_optimistic_o2b, run_stochastic_o2b, OptimisticO2B, OutputKind};
pub use stabilized::{one_step_recurrence_residual, BaselineStep, Optimism, StabilizedOptimistic};
pub use step::{StepSizeKind, StepSizePolicy};
pub use strongly_convex::{StronglyConvexO2B, SurrogateForm};
pub use trace::{RunTrace, TraceRecord};

use std::time::{Duration, Instant};

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::oracle::GradientOracle;

/// A first-order method advanced one iteration at a time.
pub trait Optimizer {
    fn name(&self) -> &'static str;

    /// Performs the next iteration, querying the oracle as the method requires.
    fn step(&mut self, oracle: &mut dyn GradientOracle) -> Result<()>;

    /// The method's designated output after the iterations performed so far.
    fn output(&self) -> DVector<f64>;

    /// Number of completed iterations.
    fn iterations(&self) -> usize;

    /// Caveats attached to the run, copied into its trace.
    fn notes(&self) -> Vec<String> {
        Vec::new()
    }
}

/// Runs `iterations` steps and records f(output) − f_star after each.
///
/// Only time spent inside `step` is counted as elapsed.
pub fn run(
    optimizer: &mut dyn Optimizer,
    oracle: &mut dyn GradientOracle,
    iterations: usize,
    f_star: f64,
) -> Result<(DVector<f64>, RunTrace)> {
    let mut trace = RunTrace::new(optimizer.notes());
    let mut elapsed = Duration::ZERO;
    for _ in 0..iterations {
        let start = Instant::now();
        optimizer.step(oracle)?;
        elapsed += start.elapsed();
        let x = optimizer.output();
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numeric(format!("iterate diverged at t = {}", optimizer.iterations())));
        }
        let value = oracle.problem().value(&x)?;
        trace.push(TraceRecord {
            t: optimizer.iterations(),
            suboptimality: value - f_star,
            elapsed_s: elapsed.as_secs_f64(),
            oracle_calls: oracle.calls(),
        });
    }
    Ok((optimizer.output(), trace))
}
