//! Weight sequences α_t and their partial sums A_t.

/// The family a [`WeightSchedule`] belongs to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightKind {
    /// α_t = t.
    Linear,
    /// α_t = t for t < T and α_T = 0.
    LinearZeroLast { total_rounds: usize },
    /// α_t = 1.
    Unit,
    /// α_1 = 1, α_t = ratio · A_{t−1}.
    GeometricSc { kappa: f64, ratio: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightSchedule {
    kind: WeightKind,
}

impl WeightSchedule {
    pub fn linear() -> Self {
        Self { kind: WeightKind::Linear }
    }

    pub fn linear_zero_last(total_rounds: usize) -> Self {
        assert!(total_rounds >= 1, "LinearZeroLast needs at least one round");
        Self { kind: WeightKind::LinearZeroLast { total_rounds } }
    }

    pub fn unit() -> Self {
        Self { kind: WeightKind::Unit }
    }

    /// Geometric weights for condition number κ with ratio 1/(4√κ).
    pub fn geometric_sc(kappa: f64) -> Self {
        assert!(kappa > 0.0 && kappa.is_finite(), "kappa must be positive");
        Self::geometric_sc_with_ratio(kappa, 1.0 / (4.0 * kappa.sqrt()))
    }

    pub fn geometric_sc_with_ratio(kappa: f64, ratio: f64) -> Self {
        assert!(ratio > 0.0 && ratio.is_finite(), "ratio must be positive");
        Self { kind: WeightKind::GeometricSc { kappa, ratio } }
    }

    pub fn kind(&self) -> WeightKind {
        self.kind
    }

    /// α_t for t ≥ 1; α_0 is taken as 0.
    pub fn alpha(&self, t: usize) -> f64 {
        if t == 0 {
            return 0.0;
        }
        match self.kind {
            WeightKind::Linear => t as f64,
            WeightKind::LinearZeroLast { total_rounds } => {
                if t == total_rounds {
                    0.0
                } else {
                    t as f64
                }
            }
            WeightKind::Unit => 1.0,
            WeightKind::GeometricSc { ratio, .. } => {
                if t == 1 {
                    1.0
                } else {
                    ratio * self.partial_sum(t - 1)
                }
            }
        }
    }

    /// A_t = Σ_{s≤t} α_s, with A_0 = 0.
    pub fn partial_sum(&self, t: usize) -> f64 {
        if t == 0 {
            return 0.0;
        }
        let tf = t as f64;
        match self.kind {
            WeightKind::Linear => tf * (tf + 1.0) / 2.0,
            WeightKind::LinearZeroLast { total_rounds } => {
                let full = tf * (tf + 1.0) / 2.0;
                if t < total_rounds {
                    full
                } else {
                    full - total_rounds as f64
                }
            }
            WeightKind::Unit => tf,
            WeightKind::GeometricSc { ratio, .. } => (1.0 + ratio).powi((t - 1) as i32),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all() -> Vec<WeightSchedule> {
        vec![
            WeightSchedule::linear(),
            WeightSchedule::linear_zero_last(7),
            WeightSchedule::unit(),
            WeightSchedule::geometric_sc(100.0),
            WeightSchedule::geometric_sc_with_ratio(4.0, 0.3),
        ]
    }

    #[test]
    fn partial_sums_accumulate_alphas() {
        for w in all() {
            assert_eq!(w.partial_sum(0), 0.0);
            assert!(w.alpha(1) > 0.0);
            for t in 1..40 {
                let lhs = w.partial_sum(t);
                let rhs = w.partial_sum(t - 1) + w.alpha(t);
                assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs(), "{w:?} t={t}");
                assert!(lhs > 0.0);
                assert!(w.alpha(t) >= 0.0);
            }
        }
    }

    #[test]
    fn linear_closed_forms() {
        let w = WeightSchedule::linear();
        assert_eq!(w.alpha(5), 5.0);
        assert_eq!(w.partial_sum(4), 10.0);
        let u = WeightSchedule::unit();
        assert_eq!(u.partial_sum(9), 9.0);
    }

    #[test]
    fn zero_last_drops_final_weight() {
        let w = WeightSchedule::linear_zero_last(5);
        assert_eq!(w.alpha(4), 4.0);
        assert_eq!(w.alpha(5), 0.0);
        assert_eq!(w.partial_sum(5), w.partial_sum(4));
    }

    #[test]
    fn geometric_ratio() {
        let w = WeightSchedule::geometric_sc(100.0);
        assert_eq!(w.alpha(1), 1.0);
        assert!((w.alpha(2) - 1.0 / 40.0).abs() < 1e-15);
        let r = w.partial_sum(11) / w.partial_sum(10);
        assert!((r - 1.025).abs() < 1e-14);
    }
}
