//! One-step forms of the optimistic methods built on the stabilized conversion.

use nalgebra::DVector;

use super::step::StepSizePolicy;
use super::Optimizer;
use crate::averages::AveragedIterates;
use crate::error::{Error, Result};
use crate::oracle::GradientOracle;
use crate::problem::ProblemSpec;
use crate::weights::WeightSchedule;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Optimism {
    /// g_t = −α_t∇f(x̃_t) + α_t∇f(x̄_t) + α_{t+1}∇f(x̃_{t+1})
    UniXGrad,
    /// g_t = −α_t∇f(x̄_{t−1}) + α_t∇f(x̄_t) + α_{t+1}∇f(x̄_t)
    Jrgs,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BaselineStep {
    Constant(f64),
    /// AdaGrad on the method's own gradient differences with scale D.
    Adaptive { diameter: f64 },
}

/// x_{t+1} = x_t − η_t g_t with linear weights and x_1 = x_0.
#[derive(Debug, Clone)]
pub struct StabilizedOptimistic {
    kind: Optimism,
    schedule: WeightSchedule,
    step: BaselineStep,
    policy: StepSizePolicy,
    averages: AveragedIterates,
    /// ∇f(x̃_t) for UniXGrad, ∇f(x̄_{t−1}) for JRGS.
    cached: Option<DVector<f64>>,
    last_gradient: Option<DVector<f64>>,
    last_step: Option<f64>,
    t: usize,
}

impl StabilizedOptimistic {
    pub fn new(problem: &ProblemSpec, kind: Optimism, step: BaselineStep, x0: DVector<f64>) -> Result<Self> {
        if problem.domain().is_bounded() {
            return Err(Error::Unsupported("the one-step stabilized forms are unconstrained".into()));
        }
        if x0.len() != problem.dim() {
            return Err(Error::Shape { expected: problem.dim(), got: x0.len() });
        }
        let schedule = WeightSchedule::linear();
        let mut averages = AveragedIterates::new(x0.clone());
        averages.advance(&schedule, x0, 1)?;
        let policy = match step {
            BaselineStep::Constant(eta) => StepSizePolicy::constant(eta),
            BaselineStep::Adaptive { diameter } => StepSizePolicy::adagrad_two_grad(diameter),
        };
        Ok(Self {
            kind,
            schedule,
            step,
            policy,
            averages,
            cached: None,
            last_gradient: None,
            last_step: None,
            t: 1,
        })
    }

    /// Constant step 1/(4L).
    pub fn with_default_step(problem: &ProblemSpec, kind: Optimism, x0: DVector<f64>) -> Result<Self> {
        let l = problem.require_smoothness("the stabilized baselines")?;
        Self::new(problem, kind, BaselineStep::Constant(1.0 / (4.0 * l)), x0)
    }

    pub fn schedule(&self) -> &WeightSchedule {
        &self.schedule
    }

    pub fn averages(&self) -> &AveragedIterates {
        &self.averages
    }

    /// g_t from the most recent iteration.
    pub fn last_gradient(&self) -> Option<&DVector<f64>> {
        self.last_gradient.as_ref()
    }

    /// η_t from the most recent iteration.
    pub fn last_step(&self) -> Option<f64> {
        self.last_step
    }
}

impl Optimizer for StabilizedOptimistic {
    fn name(&self) -> &'static str {
        match self.kind {
            Optimism::UniXGrad => "stabilized-unixgrad",
            Optimism::Jrgs => "stabilized-jrgs",
        }
    }

    fn step(&mut self, oracle: &mut dyn GradientOracle) -> Result<()> {
        let t = self.t;
        let alpha = self.schedule.alpha(t);
        let alpha_next = self.schedule.alpha(t + 1);
        let bar = self.averages.bar().expect("round 1 is absorbed at construction");

        let (g, delta) = match self.kind {
            Optimism::UniXGrad => {
                // x̃_1 = x̄_1 = x_0 share one query.
                let g_tilde = match self.cached.take() {
                    Some(g) => g,
                    None => oracle.gradient(&bar)?,
                };
                let g_bar = if t == 1 { g_tilde.clone() } else { oracle.gradient(&bar)? };
                let g_next = oracle.gradient(&self.averages.tilde_next(&self.schedule))?;
                let g = (&g_bar - &g_tilde) * alpha + &g_next * alpha_next;
                self.cached = Some(g_next);
                (g, g_bar - g_tilde)
            }
            Optimism::Jrgs => {
                // ∇f(x̄_0) := ∇f(x_0) is a separate bootstrap query.
                let g_prev = match self.cached.take() {
                    Some(g) => g,
                    None => oracle.gradient(self.averages.previous())?,
                };
                let g_bar = oracle.gradient(&bar)?;
                let g = (&g_bar - &g_prev) * alpha + &g_bar * alpha_next;
                let delta = &g_bar - g_prev;
                self.cached = Some(g_bar);
                (g, delta)
            }
        };

        if let BaselineStep::Adaptive { .. } = self.step {
            self.policy.accumulate(alpha * alpha * delta.norm_squared());
        }
        let eta = self.policy.step_size(t, g.norm());
        let x_next = self.averages.last() - &g * eta;
        self.averages.advance(&self.schedule, x_next, t + 1)?;
        self.last_gradient = Some(g);
        self.last_step = Some(eta);
        self.t += 1;
        Ok(())
    }

    fn output(&self) -> DVector<f64> {
        self.averages.bar().expect("round 1 is absorbed at construction")
    }

    fn iterations(&self) -> usize {
        self.t - 1
    }
}

/// Residual of x̄_t = x̄_{t−1} + β_{t−1}(x̄_{t−1} − x̄_{t−2}) − η_{t−1}(α_t/A_t)g_{t−1}
/// with β_{t−1} = α_t A_{t−2} / (A_t α_{t−1}), for t ≥ 2.
pub fn one_step_recurrence_residual(
    schedule: &WeightSchedule,
    t: usize,
    bars: [&DVector<f64>; 3],
    gradient: &DVector<f64>,
    step: f64,
) -> Result<f64> {
    if t < 2 {
        return Err(Error::Usage(format!("the recurrence starts at t = 2, got {t}")));
    }
    let [bar_t, bar_1, bar_2] = bars;
    let (a_t, a_1) = (schedule.alpha(t), schedule.alpha(t - 1));
    let big_t = schedule.partial_sum(t);
    let beta = a_t * schedule.partial_sum(t - 2) / (big_t * a_1);
    let predicted = bar_1 + (bar_1 - bar_2) * beta - gradient * (step * a_t / big_t);
    Ok((bar_t - predicted).norm())
}
