//! Incrementally maintained weighted averages x̃_t and x̄_t.

use nalgebra::DVector;

use crate::error::{check_dim, Error, Result};
use crate::weights::WeightSchedule;

/// Running state for the two weighted averages
/// x̃_t = (S_{t−1} + α_t x_{t−1}) / A_t and x̄_t = S_t / A_t.
#[derive(Debug, Clone)]
pub struct AveragedIterates {
    sum: DVector<f64>,
    total: f64,
    last: DVector<f64>,
    previous: DVector<f64>,
    round: usize,
}

impl AveragedIterates {
    /// State at round 0 holding x_0.
    pub fn new(x0: DVector<f64>) -> Self {
        Self {
            sum: DVector::zeros(x0.len()),
            total: 0.0,
            previous: x0.clone(),
            last: x0,
            round: 0,
        }
    }

    pub fn dim(&self) -> usize {
        self.last.len()
    }

    /// Index of the last absorbed iterate.
    pub fn round(&self) -> usize {
        self.round
    }

    /// A_t for the current round.
    pub fn total_weight(&self) -> f64 {
        self.total
    }

    pub fn last(&self) -> &DVector<f64> {
        &self.last
    }

    pub fn previous(&self) -> &DVector<f64> {
        &self.previous
    }

    /// x̃_{t+1} for the current round t.
    pub fn tilde_next(&self, schedule: &WeightSchedule) -> DVector<f64> {
        let alpha = schedule.alpha(self.round + 1);
        let total = self.total + alpha;
        (&self.sum + &self.last * alpha) / total
    }

    /// x̄_t for the current round t, or `None` at round 0.
    pub fn bar(&self) -> Option<DVector<f64>> {
        (self.total > 0.0).then(|| &self.sum / self.total)
    }

    /// Absorbs x_t as round t.
    pub fn advance(&mut self, schedule: &WeightSchedule, point: DVector<f64>, t: usize) -> Result<()> {
        if t != self.round + 1 {
            return Err(Error::Sequencing { expected: self.round + 1, got: t });
        }
        check_dim(self.dim(), point.len())?;
        let alpha = schedule.alpha(t);
        self.sum.axpy(alpha, &point, 1.0);
        self.total += alpha;
        self.previous = std::mem::replace(&mut self.last, point);
        self.round = t;
        Ok(())
    }
}
