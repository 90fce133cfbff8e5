//! Optimistic conversion for strongly convex objectives.

use nalgebra::DVector;

use super::Optimizer;
use crate::averages::AveragedIterates;
use crate::error::{Error, Result};
use crate::oracle::GradientOracle;
use crate::problem::ProblemSpec;
use crate::weights::WeightSchedule;

/// How the optimism vector and surrogate gradient are scaled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurrogateForm {
    /// M_t = α_t∇f̂(x̃_t) + λα_t x_{t−1}, surrogate gradient α_t∇f̂(x̃_t) + λα_t x_t.
    ProofConsistent,
    /// M_t = α_t∇f̂(x̃_t) + α_t x_{t−1}, surrogate gradient ∇f̂(x̃_t) + λx_t.
    Literal,
}

/// x_{t+1} = x_t − (∇h_t(x_t) − M_t + M_{t+1}) / (λA_t) with f̂ = f − (λ/2)‖·‖².
///
/// Iteration 1 sets x_1 = x_0; iteration k ≥ 2 queries ∇f(x̃_k) and forms x_k.
#[derive(Debug, Clone)]
pub struct StronglyConvexO2B {
    schedule: WeightSchedule,
    lambda: f64,
    form: SurrogateForm,
    averages: AveragedIterates,
    optimism: DVector<f64>,
    surrogate_grad: DVector<f64>,
}

impl StronglyConvexO2B {
    /// Uses the problem's λ and the geometric schedule for κ = L/λ.
    pub fn new(problem: &ProblemSpec, x0: DVector<f64>, form: SurrogateForm) -> Result<Self> {
        let l = problem.require_smoothness("the strongly convex method")?;
        let lambda = problem.strong_convexity();
        if !(lambda > 0.0) {
            return Err(Error::Config("the strongly convex method needs λ > 0".into()));
        }
        Self::with_schedule(problem, WeightSchedule::geometric_sc(l / lambda), x0, form)
    }

    pub fn with_schedule(
        problem: &ProblemSpec,
        schedule: WeightSchedule,
        x0: DVector<f64>,
        form: SurrogateForm,
    ) -> Result<Self> {
        let lambda = problem.strong_convexity();
        if !(lambda > 0.0) {
            return Err(Error::Config("the strongly convex method needs λ > 0".into()));
        }
        if problem.domain().is_bounded() {
            return Err(Error::Unsupported(
                "the strongly convex method is only analyzed without constraints".into(),
            ));
        }
        if x0.len() != problem.dim() {
            return Err(Error::Shape { expected: problem.dim(), got: x0.len() });
        }
        let d = x0.len();
        Ok(Self {
            schedule,
            lambda,
            form,
            averages: AveragedIterates::new(x0),
            optimism: DVector::zeros(d),
            surrogate_grad: DVector::zeros(d),
        })
    }

    pub fn averages(&self) -> &AveragedIterates {
        &self.averages
    }

    fn optimism_scale(&self) -> f64 {
        match self.form {
            SurrogateForm::ProofConsistent => self.lambda,
            SurrogateForm::Literal => 1.0,
        }
    }
}

impl Optimizer for StronglyConvexO2B {
    fn name(&self) -> &'static str {
        "strongly-convex-o2b"
    }

    fn step(&mut self, oracle: &mut dyn GradientOracle) -> Result<()> {
        let t = self.averages.round();
        let alpha_next = self.schedule.alpha(t + 1);
        let tilde = self.averages.tilde_next(&self.schedule);
        let grad_hat = oracle.gradient(&tilde)? - &tilde * self.lambda;
        // x_t, which equals x_0 for the first round.
        let x_t = self.averages.last().clone();
        let optimism_next = &grad_hat * alpha_next + &x_t * (self.optimism_scale() * alpha_next);

        let x_next = if t == 0 {
            x_t
        } else {
            let alpha = self.schedule.alpha(t);
            let surrogate = match self.form {
                SurrogateForm::ProofConsistent => {
                    &self.surrogate_grad * alpha + &x_t * (self.lambda * alpha)
                }
                SurrogateForm::Literal => &self.surrogate_grad + &x_t * self.lambda,
            };
            let scale = 1.0 / (self.lambda * self.schedule.partial_sum(t));
            &x_t - (surrogate - &self.optimism + &optimism_next) * scale
        };
        self.averages.advance(&self.schedule, x_next, t + 1)?;
        self.optimism = optimism_next;
        self.surrogate_grad = grad_hat;
        Ok(())
    }

    fn output(&self) -> DVector<f64> {
        self.averages.bar().unwrap_or_else(|| self.averages.last().clone())
    }

    fn iterations(&self) -> usize {
        self.averages.round()
    }
}
