//! Nesterov's method, gradient descent and heavy-ball momentum.

use nalgebra::DVector;

use super::Optimizer;
use crate::domain::ProjectionDomain;
use crate::error::{Error, Result};
use crate::oracle::GradientOracle;
use crate::problem::ProblemSpec;

fn start(problem: &ProblemSpec, x0: &DVector<f64>) -> Result<()> {
    if x0.len() != problem.dim() {
        return Err(Error::Shape { expected: problem.dim(), got: x0.len() });
    }
    Ok(())
}

/// y_t = Π[z_{t−1} − θ∇f(z_{t−1})], z_t = y_t + β_t(y_t − y_{t−1}), β_t = (t−1)/(t+2).
#[derive(Debug, Clone)]
pub struct Nag {
    theta: f64,
    domain: ProjectionDomain,
    y: DVector<f64>,
    z: DVector<f64>,
    t: usize,
}

impl Nag {
    /// θ = 1/(4L).
    pub fn new(problem: &ProblemSpec, x0: DVector<f64>) -> Result<Self> {
        let l = problem.require_smoothness("NAG")?;
        Self::with_step(problem, x0, 1.0 / (4.0 * l))
    }

    pub fn with_step(problem: &ProblemSpec, x0: DVector<f64>, theta: f64) -> Result<Self> {
        start(problem, &x0)?;
        Ok(Self { theta, domain: problem.domain().clone(), y: x0.clone(), z: x0, t: 0 })
    }

    pub fn y(&self) -> &DVector<f64> {
        &self.y
    }

    pub fn z(&self) -> &DVector<f64> {
        &self.z
    }
}

impl Optimizer for Nag {
    fn name(&self) -> &'static str {
        "nag"
    }

    fn step(&mut self, oracle: &mut dyn GradientOracle) -> Result<()> {
        let t = self.t + 1;
        let g = oracle.gradient(&self.z)?;
        let y = self.domain.project(&(&self.z - g * self.theta))?;
        let beta = (t as f64 - 1.0) / (t as f64 + 2.0);
        self.z = &y + (&y - &self.y) * beta;
        self.y = y;
        self.t = t;
        Ok(())
    }

    fn output(&self) -> DVector<f64> {
        self.y.clone()
    }

    fn iterations(&self) -> usize {
        self.t
    }
}

/// x_{t+1} = Π[x_t − η∇f(x_t)], default η = 1/L.
#[derive(Debug, Clone)]
pub struct GradientDescent {
    eta: f64,
    domain: ProjectionDomain,
    x: DVector<f64>,
    t: usize,
}

impl GradientDescent {
    pub fn new(problem: &ProblemSpec, x0: DVector<f64>) -> Result<Self> {
        let l = problem.require_smoothness("gradient descent")?;
        Self::with_step(problem, x0, 1.0 / l)
    }

    pub fn with_step(problem: &ProblemSpec, x0: DVector<f64>, eta: f64) -> Result<Self> {
        start(problem, &x0)?;
        Ok(Self { eta, domain: problem.domain().clone(), x: x0, t: 0 })
    }
}

impl Optimizer for GradientDescent {
    fn name(&self) -> &'static str {
        "gd"
    }

    fn step(&mut self, oracle: &mut dyn GradientOracle) -> Result<()> {
        let g = oracle.gradient(&self.x)?;
        self.x = self.domain.project(&(&self.x - g * self.eta))?;
        self.t += 1;
        Ok(())
    }

    fn output(&self) -> DVector<f64> {
        self.x.clone()
    }

    fn iterations(&self) -> usize {
        self.t
    }
}

/// Direction in which the previous displacement enters the heavy-ball update.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentumSign {
    /// z_t = z_{t−1} + β′(z_{t−1} − z_{t−2}) − η′∇f(z_{t−1}).
    Polyak,
    /// z_t = z_{t−1} − β′(z_{t−1} − z_{t−2}) − η′∇f(z_{t−1}).
    Subtracted,
}

/// Projected heavy-ball iteration with z_{−1} = z_0.
#[derive(Debug, Clone)]
pub struct HeavyBall {
    momentum: f64,
    sign: MomentumSign,
    eta: f64,
    domain: ProjectionDomain,
    z: DVector<f64>,
    z_prev: DVector<f64>,
    t: usize,
}

impl HeavyBall {
    pub const DEFAULT_MOMENTUM: f64 = 0.9;

    /// β′ = 0.9, η′ = 1/L, Polyak sign.
    pub fn new(problem: &ProblemSpec, x0: DVector<f64>) -> Result<Self> {
        let l = problem.require_smoothness("heavy ball")?;
        Self::with_params(problem, x0, Self::DEFAULT_MOMENTUM, 1.0 / l, MomentumSign::Polyak)
    }

    pub fn with_params(
        problem: &ProblemSpec,
        x0: DVector<f64>,
        momentum: f64,
        eta: f64,
        sign: MomentumSign,
    ) -> Result<Self> {
        start(problem, &x0)?;
        Ok(Self { momentum, sign, eta, domain: problem.domain().clone(), z_prev: x0.clone(), z: x0, t: 0 })
    }
}

impl Optimizer for HeavyBall {
    fn name(&self) -> &'static str {
        "heavy-ball"
    }

    fn step(&mut self, oracle: &mut dyn GradientOracle) -> Result<()> {
        let g = oracle.gradient(&self.z)?;
        let beta = match self.sign {
            MomentumSign::Polyak => self.momentum,
            MomentumSign::Subtracted => -self.momentum,
        };
        let next = &self.z + (&self.z - &self.z_prev) * beta - g * self.eta;
        let next = self.domain.project(&next)?;
        self.z_prev = std::mem::replace(&mut self.z, next);
        self.t += 1;
        Ok(())
    }

    fn output(&self) -> DVector<f64> {
        self.z.clone()
    }

    fn iterations(&self) -> usize {
        self.t
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::ExactOracle;
    use crate::optim::run;
    use crate::synthetic::generate_synthetic_ls;
    use nalgebra::DMatrix;

    fn half_square() -> ProblemSpec {
        ProblemSpec::least_squares(DMatrix::identity(1, 1), DVector::zeros(1), ProjectionDomain::Unconstrained).unwrap()
    }

    fn one() -> DVector<f64> {
        DVector::from_element(1, 1.0)
    }

    #[test]
    fn nag_hand_simulation() {
        let p = half_square();
        let mut nag = Nag::new(&p, one()).unwrap();
        let mut oracle = ExactOracle::new(&p);
        nag.step(&mut oracle).unwrap();
        assert_eq!(nag.y()[0], 0.75);
        assert_eq!(nag.z()[0], 0.75);
        nag.step(&mut oracle).unwrap();
        assert!((nag.y()[0] - 0.5625).abs() < 1e-15);
    }

    #[test]
    fn nag_stationary_start() {
        let p = half_square();
        let mut nag = Nag::new(&p, DVector::zeros(1)).unwrap();
        let mut oracle = ExactOracle::new(&p);
        for _ in 0..10 {
            nag.step(&mut oracle).unwrap();
            assert_eq!(nag.y()[0], 0.0);
            assert_eq!(nag.z()[0], 0.0);
        }
    }

    #[test]
    fn gd_exact_on_scalar_quadratic() {
        let p = half_square();
        let mut gd = GradientDescent::new(&p, one()).unwrap();
        gd.step(&mut ExactOracle::new(&p)).unwrap();
        assert_eq!(gd.output()[0], 0.0);
    }

    #[test]
    fn heavy_ball_hand_simulation() {
        let p = half_square();
        let mut hb = HeavyBall::with_params(&p, one(), 0.5, 1.0, MomentumSign::Subtracted).unwrap();
        let mut oracle = ExactOracle::new(&p);
        hb.step(&mut oracle).unwrap();
        assert_eq!(hb.output()[0], 0.0);
        hb.step(&mut oracle).unwrap();
        assert_eq!(hb.output()[0], 0.5);

        let mut hb = HeavyBall::with_params(&p, one(), 0.5, 1.0, MomentumSign::Polyak).unwrap();
        hb.step(&mut oracle).unwrap();
        hb.step(&mut oracle).unwrap();
        assert_eq!(hb.output()[0], -0.5);
    }

    #[test]
    fn default_heavy_ball_converges_on_quadratic() {
        let pp = generate_synthetic_ls(40, 6, 1.0, 0.0, 100.0, 2).unwrap();
        let p = &pp.problem;
        let mut hb = HeavyBall::new(p, DVector::zeros(6)).unwrap();
        let (x, _) = run(&mut hb, &mut ExactOracle::new(p), 400, 0.0).unwrap();
        assert!((x - &pp.planted).norm() < 1e-6);
    }

    #[test]
    fn heavy_ball_without_momentum_is_gd() {
        let pp = generate_synthetic_ls(20, 4, 1.0, 1e-3, 2.0, 1).unwrap();
        let p = &pp.problem;
        let l = p.smoothness().unwrap();
        let x0 = DVector::from_element(4, 0.2);
        let mut hb = HeavyBall::with_params(p, x0.clone(), 0.0, 1.0 / l, MomentumSign::Polyak).unwrap();
        let mut gd = GradientDescent::new(p, x0).unwrap();
        let (a, _) = run(&mut hb, &mut ExactOracle::new(p), 50, 0.0).unwrap();
        let (b, _) = run(&mut gd, &mut ExactOracle::new(p), 50, 0.0).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn missing_smoothness_is_configuration_error() {
        let p = ProblemSpec::l1_residual(DMatrix::identity(1, 1), DVector::zeros(1), ProjectionDomain::Unconstrained)
            .unwrap();
        assert!(matches!(Nag::new(&p, one()), Err(Error::Config(_))));
        assert!(matches!(GradientDescent::new(&p, one()), Err(Error::Config(_))));
        assert!(matches!(HeavyBall::new(&p, one()), Err(Error::Config(_))));
    }

    #[test]
    fn one_query_per_iteration() {
        let pp = generate_synthetic_ls(20, 4, 1.0, 1e-3, 2.0, 1).unwrap();
        let p = &pp.problem;
        let x0 = DVector::zeros(4);
        let mut methods: Vec<Box<dyn Optimizer>> = vec![
            Box::new(Nag::new(p, x0.clone()).unwrap()),
            Box::new(GradientDescent::new(p, x0.clone()).unwrap()),
            Box::new(HeavyBall::new(p, x0).unwrap()),
        ];
        for m in methods.iter_mut() {
            let (_, trace) = run(m.as_mut(), &mut ExactOracle::new(p), 37, 0.0).unwrap();
            assert_eq!(trace.total_calls(), 37);
        }
    }
}
