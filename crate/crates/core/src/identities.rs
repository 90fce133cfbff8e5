//! Reference recomputation of the weighted decisions and the algebraic
//! identities relating them.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::weights::WeightSchedule;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Identity {
    A1,
    A2,
    A3,
    A4,
}

impl Identity {
    pub const ALL: [Identity; 4] = [Identity::A1, Identity::A2, Identity::A3, Identity::A4];

    fn first_round(self) -> usize {
        match self {
            Identity::A4 => 2,
            _ => 1,
        }
    }
}

/// (x̃_t, x̄_t) recomputed from the full history x_0..x_t.
///
/// At t = 0 both are reported as x_0; every identity multiplies them by A_0 = 0 there.
pub fn weighted_decisions(
    history: &[DVector<f64>],
    schedule: &WeightSchedule,
    t: usize,
) -> (DVector<f64>, DVector<f64>) {
    if t == 0 {
        return (history[0].clone(), history[0].clone());
    }
    let mut prefix = DVector::zeros(history[0].len());
    for s in 1..t {
        prefix += &history[s] * schedule.alpha(s);
    }
    let alpha = schedule.alpha(t);
    let total = schedule.partial_sum(t);
    let tilde = (&prefix + &history[t - 1] * alpha) / total;
    let bar = (prefix + &history[t] * alpha) / total;
    (tilde, bar)
}

/// Residual norm ‖LHS − RHS‖ of the chosen identity at round t.
pub fn check_identity(
    which: Identity,
    history: &[DVector<f64>],
    schedule: &WeightSchedule,
    t: usize,
) -> Result<f64> {
    if t < which.first_round() {
        return Err(Error::Usage(format!(
            "{which:?} needs t >= {}, got {t}",
            which.first_round()
        )));
    }
    if history.len() <= t {
        return Err(Error::Usage(format!(
            "history holds x_0..x_{} but t = {t}",
            history.len().saturating_sub(1)
        )));
    }
    let a = |s: usize| schedule.alpha(s);
    let big_a = |s: usize| schedule.partial_sum(s);
    let x = |s: usize| &history[s];
    let (tilde_t, bar_t) = weighted_decisions(history, schedule, t);
    let (tilde_p, bar_p) = weighted_decisions(history, schedule, t - 1);

    let diff = match which {
        Identity::A1 => (&bar_p - &bar_t) * big_a(t - 1) - (&bar_t - x(t)) * a(t),
        Identity::A2 => (&tilde_t - &bar_t) * big_a(t) - (x(t - 1) - x(t)) * a(t),
        Identity::A3 => (&bar_p - &tilde_t) * big_a(t - 1) - (&tilde_t - x(t - 1)) * a(t),
        Identity::A4 => {
            (&tilde_t - &tilde_p) * big_a(t - 1)
                - (x(t - 1) - &tilde_t) * a(t)
                - (x(t - 1) - x(t - 2)) * a(t - 1)
        }
    };
    Ok(diff.norm())
}
