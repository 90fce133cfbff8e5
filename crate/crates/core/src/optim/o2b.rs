//! Optimistic online-to-batch conversion driven by optimistic OGD.

use nalgebra::DVector;

use super::step::{StepSizeKind, StepSizePolicy};
use super::{run, Optimizer, RunTrace};
use crate::averages::AveragedIterates;
use crate::domain::ProjectionDomain;
use crate::error::{Error, Result};
use crate::oracle::{ExactOracle, GradientOracle, StochasticOracle};
use crate::problem::ProblemSpec;
use crate::weights::{WeightKind, WeightSchedule};

/// Which weighted average a run reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputKind {
    Bar,
    Tilde,
}

/// Loop t: query ∇f(x̃_{t+1}) and set x_{t+1} = Π[x_t − η_t α_{t+1} ∇f(x̃_{t+1})].
#[derive(Debug, Clone)]
pub struct OptimisticO2B {
    schedule: WeightSchedule,
    policy: StepSizePolicy,
    domain: ProjectionDomain,
    averages: AveragedIterates,
    output_kind: OutputKind,
    horizon: Option<usize>,
    next_loop: usize,
    last_tilde: DVector<f64>,
    last_tilde_grad: Option<DVector<f64>>,
    step_sizes: Vec<f64>,
}

fn check_start(domain: &ProjectionDomain, x0: &DVector<f64>) -> Result<()> {
    let gap = domain.distance(x0)?;
    if gap > 1e-12 {
        return Err(Error::Input(format!("start point lies {gap:e} outside the domain")));
    }
    Ok(())
}

impl OptimisticO2B {
    /// Validates the schedule/policy pairing. `horizon` is the planned number
    /// of iterations when known.
    pub fn new(
        problem: &ProblemSpec,
        schedule: WeightSchedule,
        policy: StepSizePolicy,
        x0: DVector<f64>,
        horizon: Option<usize>,
    ) -> Result<Self> {
        let domain = problem.domain().clone();
        if x0.len() != problem.dim() {
            return Err(Error::Shape { expected: problem.dim(), got: x0.len() });
        }
        check_start(&domain, &x0)?;
        if policy.is_adaptive() && !domain.is_bounded() {
            return Err(Error::Config("adaptive step sizes need a bounded domain".into()));
        }
        let output_kind = match (policy.kind(), schedule.kind()) {
            (StepSizeKind::AdaGradOneGrad(_), WeightKind::LinearZeroLast { total_rounds }) => {
                if horizon.is_some_and(|h| h != total_rounds) {
                    return Err(Error::Config(format!(
                        "zero-last schedule ends at {total_rounds} but the run has {} iterations",
                        horizon.unwrap_or_default()
                    )));
                }
                OutputKind::Tilde
            }
            (StepSizeKind::AdaGradOneGrad(_), _) => {
                return Err(Error::Config(
                    "the one-gradient step size needs a zero-last linear schedule".into(),
                ))
            }
            (StepSizeKind::NagEquivalent(_), WeightKind::Linear) => OutputKind::Bar,
            (StepSizeKind::NagEquivalent(_), _) => {
                return Err(Error::Config("the NAG-equivalent step size needs linear weights".into()))
            }
            _ => OutputKind::Bar,
        };
        Ok(Self {
            schedule,
            policy,
            domain,
            averages: AveragedIterates::new(x0.clone()),
            output_kind,
            horizon,
            next_loop: 0,
            last_tilde: x0,
            last_tilde_grad: None,
            step_sizes: Vec::new(),
        })
    }

    pub fn averages(&self) -> &AveragedIterates {
        &self.averages
    }

    pub fn schedule(&self) -> &WeightSchedule {
        &self.schedule
    }

    pub fn output_kind(&self) -> OutputKind {
        self.output_kind
    }

    /// Step sizes η_0, η_1, … used so far.
    pub fn step_sizes(&self) -> &[f64] {
        &self.step_sizes
    }

    /// x̃ at the most recent query (x_0 before the first step).
    pub fn last_tilde(&self) -> &DVector<f64> {
        &self.last_tilde
    }
}

impl Optimizer for OptimisticO2B {
    fn name(&self) -> &'static str {
        "optimistic-o2b"
    }

    fn step(&mut self, oracle: &mut dyn GradientOracle) -> Result<()> {
        let t = self.next_loop;
        if let WeightKind::LinearZeroLast { total_rounds } = self.schedule.kind() {
            if t >= total_rounds {
                return Err(Error::Usage(format!("schedule ends after {total_rounds} rounds")));
            }
        }
        let alpha_next = self.schedule.alpha(t + 1);
        let tilde = self.averages.tilde_next(&self.schedule);
        let g = oracle.gradient(&tilde)?;

        if let (StepSizeKind::AdaGradOneGrad(_), Some(prev)) = (self.policy.kind(), &self.last_tilde_grad) {
            let alpha_t = self.schedule.alpha(t);
            self.policy.accumulate(alpha_t * alpha_t * (&g - prev).norm_squared());
        }
        let eta = self.policy.step_size(t, alpha_next * g.norm());
        let x_next = self.domain.project(&(self.averages.last() - &g * (eta * alpha_next)))?;
        self.averages.advance(&self.schedule, x_next, t + 1)?;

        if let StepSizeKind::AdaGradTwoGrad(_) = self.policy.kind() {
            let bar = self.averages.bar().expect("A_{t+1} > 0 after the first round");
            let g_bar = oracle.gradient(&bar)?;
            self.policy.accumulate(alpha_next * alpha_next * (&g_bar - &g).norm_squared());
        }

        self.last_tilde = tilde;
        self.last_tilde_grad = Some(g);
        self.step_sizes.push(eta);
        self.next_loop += 1;
        Ok(())
    }

    fn output(&self) -> DVector<f64> {
        match self.output_kind {
            OutputKind::Bar => self.averages.bar().unwrap_or_else(|| self.averages.last().clone()),
            OutputKind::Tilde => self.last_tilde.clone(),
        }
    }

    fn iterations(&self) -> usize {
        self.next_loop
    }

    fn notes(&self) -> Vec<String> {
        let mut notes = Vec::new();
        if self.domain.is_bounded() && !self.policy.is_adaptive() {
            notes.push("no guarantee: fixed step on a constrained domain".to_string());
        }
        if let Some(h) = self.horizon {
            notes.push(format!("horizon {h}"));
        }
        notes
    }
}

/// Runs T iterations with exact gradients and returns the scheduled output.
pub fn run_optimistic_o2b(
    problem: &ProblemSpec,
    schedule: WeightSchedule,
    policy: StepSizePolicy,
    iterations: usize,
    x0: DVector<f64>,
    f_star: f64,
) -> Result<(DVector<f64>, RunTrace)> {
    let mut opt = OptimisticO2B::new(problem, schedule, policy, x0, Some(iterations))?;
    let mut oracle = ExactOracle::new(problem);
    run(&mut opt, &mut oracle, iterations, f_star)
}

/// The one-gradient universal method fed by a stochastic oracle.
pub fn run_stochastic_o2b(
    oracle: &mut StochasticOracle<'_>,
    iterations: usize,
    x0: DVector<f64>,
    f_star: f64,
) -> Result<(DVector<f64>, RunTrace)> {
    let problem = oracle.problem();
    let diameter = problem.domain().diameter();
    if !diameter.is_finite() {
        return Err(Error::Config("the stochastic method needs a bounded domain".into()));
    }
    let mut opt = OptimisticO2B::new(
        problem,
        WeightSchedule::linear_zero_last(iterations),
        StepSizePolicy::adagrad_one_grad(diameter),
        x0,
        Some(iterations),
    )?;
    run(&mut opt, oracle, iterations, f_star)
}
