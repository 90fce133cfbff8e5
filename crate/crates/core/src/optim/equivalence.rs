use nalgebra::DVector;

use super::classic::Nag;
use super::o2b::OptimisticO2B;
use super::step::StepSizePolicy;
use super::Optimizer;
use crate::error::{Error, Result};
use crate::oracle::ExactOracle;
use crate::problem::ProblemSpec;
use crate::weights::WeightSchedule;

/// Runs NAG and the optimistic conversion with the matching step schedule side
/// by side and returns (max ‖y_t − x̄_t‖/(1+‖y_t‖), max ‖z_t − x̃_{t+1}‖/(1+‖z_t‖)).
pub fn check_nag_equivalence(problem: &ProblemSpec, iterations: usize, x0: DVector<f64>) -> Result<(f64, f64)> {
    if problem.domain().is_bounded() {
        return Err(Error::Unsupported("the NAG correspondence is for unconstrained problems".into()));
    }
    let l = problem.require_smoothness("the NAG correspondence")?;
    let mut nag = Nag::new(problem, x0.clone())?;
    let mut o2b = OptimisticO2B::new(
        problem,
        WeightSchedule::linear(),
        StepSizePolicy::nag_equivalent(l),
        x0,
        Some(iterations),
    )?;
    let mut nag_oracle = ExactOracle::new(problem);
    let mut o2b_oracle = ExactOracle::new(problem);
    let (mut dev_bar, mut dev_tilde) = (0.0f64, 0.0f64);
    for _ in 0..iterations {
        nag.step(&mut nag_oracle)?;
        o2b.step(&mut o2b_oracle)?;
        let bar = o2b.output();
        let tilde_next = o2b.averages().tilde_next(o2b.schedule());
        dev_bar = dev_bar.max((nag.y() - bar).norm() / (1.0 + nag.y().norm()));
        dev_tilde = dev_tilde.max((nag.z() - tilde_next).norm() / (1.0 + nag.z().norm()));
    }
    Ok((dev_bar, dev_tilde))
}
