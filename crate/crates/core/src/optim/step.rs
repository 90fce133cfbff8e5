#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepSizeKind {
    Constant(f64),
    /// Step (s+2)/((s+1)·8L) at loop index s.
    NagEquivalent(f64),
    /// Diameter-scaled AdaGrad on x̄/x̃ gradient differences.
    AdaGradTwoGrad(f64),
    /// Diameter-scaled AdaGrad on consecutive x̃ gradient differences.
    AdaGradOneGrad(f64),
}

/// Step-size rule together with its accumulator V_t = Σ α_s²‖Δ_s‖².
#[derive(Debug, Clone, PartialEq)]
pub struct StepSizePolicy {
    kind: StepSizeKind,
    accumulator: f64,
    current: Option<f64>,
}

impl StepSizePolicy {
    pub fn new(kind: StepSizeKind) -> Self {
        Self { kind, accumulator: 0.0, current: None }
    }

    pub fn constant(eta: f64) -> Self {
        Self::new(StepSizeKind::Constant(eta))
    }

    pub fn nag_equivalent(smoothness: f64) -> Self {
        Self::new(StepSizeKind::NagEquivalent(smoothness))
    }

    pub fn adagrad_two_grad(diameter: f64) -> Self {
        Self::new(StepSizeKind::AdaGradTwoGrad(diameter))
    }

    pub fn adagrad_one_grad(diameter: f64) -> Self {
        Self::new(StepSizeKind::AdaGradOneGrad(diameter))
    }

    pub fn kind(&self) -> StepSizeKind {
        self.kind
    }

    pub fn is_adaptive(&self) -> bool {
        matches!(self.kind, StepSizeKind::AdaGradTwoGrad(_) | StepSizeKind::AdaGradOneGrad(_))
    }

    pub fn accumulator(&self) -> f64 {
        self.accumulator
    }

    /// Most recently issued step size.
    pub fn current(&self) -> Option<f64> {
        self.current
    }

    /// Adds α²‖Δ‖² to the accumulator.
    pub fn accumulate(&mut self, weighted_sq_norm: f64) {
        self.accumulator += weighted_sq_norm;
    }

    /// Step size for loop index `s`.
    ///
    /// `first_scale` is only used by adaptive rules while the accumulator is
    /// still empty: the step is then D / first_scale, so the first
    /// displacement has norm at most D.
    pub fn step_size(&mut self, s: usize, first_scale: f64) -> f64 {
        let eta = match self.kind {
            StepSizeKind::Constant(eta) => eta,
            StepSizeKind::NagEquivalent(l) => (s as f64 + 2.0) / ((s as f64 + 1.0) * 8.0 * l),
            StepSizeKind::AdaGradTwoGrad(d) | StepSizeKind::AdaGradOneGrad(d) => {
                self.adaptive(d, first_scale)
            }
        };
        self.current = Some(eta);
        eta
    }

    fn adaptive(&self, diameter: f64, first_scale: f64) -> f64 {
        match (self.accumulator > 0.0, self.current) {
            (false, Some(prev)) if prev > 0.0 => prev,
            (false, _) => {
                if first_scale > 0.0 {
                    diameter / first_scale
                } else {
                    0.0
                }
            }
            (true, prev) => {
                let fresh = diameter / self.accumulator.sqrt();
                match prev {
                    Some(p) if p > 0.0 => fresh.min(p),
                    _ => fresh,
                }
            }
        }
    }
}
