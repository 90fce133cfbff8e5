//! Counted gradient oracles.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::problem::ProblemSpec;

/// Source of (possibly noisy) gradients that counts its queries.
pub trait GradientOracle {
    fn problem(&self) -> &ProblemSpec;

    fn gradient(&mut self, x: &DVector<f64>) -> Result<DVector<f64>>;

    fn calls(&self) -> u64;
}

#[derive(Debug)]
pub struct ExactOracle<'a> {
    problem: &'a ProblemSpec,
    calls: u64,
}

impl<'a> ExactOracle<'a> {
    pub fn new(problem: &'a ProblemSpec) -> Self {
        Self { problem, calls: 0 }
    }
}

/// A non-finite query means the method itself diverged.
fn finite_query(x: &DVector<f64>) -> Result<()> {
    if x.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::Numeric("query point has non-finite coordinates".into()))
    }
}

fn checked(g: DVector<f64>, x: &DVector<f64>) -> Result<DVector<f64>> {
    if g.iter().all(|v| v.is_finite()) {
        Ok(g)
    } else {
        Err(Error::Numeric(format!(
            "non-finite gradient at a point of norm {:e}",
            x.norm()
        )))
    }
}

impl GradientOracle for ExactOracle<'_> {
    fn problem(&self) -> &ProblemSpec {
        self.problem
    }

    fn gradient(&mut self, x: &DVector<f64>) -> Result<DVector<f64>> {
        finite_query(x)?;
        self.calls += 1;
        checked(self.problem.gradient(x)?, x)
    }

    fn calls(&self) -> u64 {
        self.calls
    }
}

/// Exact gradient plus bounded, zero-mean noise of norm at most σ.
///
/// The perturbation is σ·s·u·ε with u uniform on the unit sphere,
/// s uniform on [0, 1] and ε a fair random sign.
#[derive(Debug)]
pub struct StochasticOracle<'a> {
    base: &'a ProblemSpec,
    sigma: f64,
    rng: ChaCha8Rng,
    calls: u64,
}

impl<'a> StochasticOracle<'a> {
    pub fn new(base: &'a ProblemSpec, sigma: f64, seed: u64) -> Result<Self> {
        if !(sigma >= 0.0 && sigma.is_finite()) {
            return Err(Error::Input(format!("noise level must be nonnegative, got {sigma}")));
        }
        Ok(Self { base, sigma, rng: ChaCha8Rng::seed_from_u64(seed), calls: 0 })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    fn perturbation(&mut self, d: usize) -> DVector<f64> {
        loop {
            let u: DVector<f64> = DVector::from_fn(d, |_, _| StandardNormal.sample(&mut self.rng));
            let norm = u.norm();
            if norm > 0.0 {
                let s: f64 = self.rng.random();
                let sign = if self.rng.random::<bool>() { 1.0 } else { -1.0 };
                return u * (self.sigma * s * sign / norm);
            }
        }
    }
}

impl GradientOracle for StochasticOracle<'_> {
    fn problem(&self) -> &ProblemSpec {
        self.base
    }

    fn gradient(&mut self, x: &DVector<f64>) -> Result<DVector<f64>> {
        finite_query(x)?;
        self.calls += 1;
        let g = self.base.gradient(x)?;
        if self.sigma == 0.0 {
            return checked(g, x);
        }
        let noise = self.perturbation(g.len());
        checked(g + noise, x)
    }

    fn calls(&self) -> u64 {
        self.calls
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::ProjectionDomain;
    use nalgebra::DMatrix;

    fn quadratic() -> ProblemSpec {
        let a = DMatrix::from_row_slice(3, 2, &[1.0, 0.5, -0.3, 2.0, 0.7, 0.1]);
        let b = DVector::from_column_slice(&[1.0, -1.0, 0.5]);
        ProblemSpec::least_squares(a, b, ProjectionDomain::Unconstrained).unwrap()
    }

    #[test]
    fn zero_noise_is_exact() {
        let p = quadratic();
        let mut o = StochasticOracle::new(&p, 0.0, 1).unwrap();
        let x = DVector::from_column_slice(&[0.3, -0.2]);
        assert_eq!(o.gradient(&x).unwrap(), p.gradient(&x).unwrap());
        assert_eq!(o.calls(), 1);
    }

    #[test]
    fn noise_is_bounded_on_every_call() {
        let p = quadratic();
        let mut o = StochasticOracle::new(&p, 0.1, 2).unwrap();
        let x = DVector::from_column_slice(&[0.3, -0.2]);
        let exact = p.gradient(&x).unwrap();
        for _ in 0..10_000 {
            assert!((o.gradient(&x).unwrap() - &exact).norm() <= 0.1 + 1e-15);
        }
        assert_eq!(o.calls(), 10_000);
    }

    #[test]
    fn noise_is_unbiased() {
        let p = quadratic();
        let mut o = StochasticOracle::new(&p, 0.1, 3).unwrap();
        let x = DVector::from_column_slice(&[0.3, -0.2]);
        let exact = p.gradient(&x).unwrap();
        let n = 100_000;
        let mut mean = DVector::zeros(2);
        for _ in 0..n {
            mean += o.gradient(&x).unwrap();
        }
        mean /= n as f64;
        let bound = 3.0 * 0.1 / (n as f64).sqrt();
        for i in 0..2 {
            assert!((mean[i] - exact[i]).abs() <= bound, "{} vs {}", mean[i], exact[i]);
        }
    }

    #[test]
    fn equal_seeds_replay() {
        let p = quadratic();
        let mut a = StochasticOracle::new(&p, 0.5, 9).unwrap();
        let mut b = StochasticOracle::new(&p, 0.5, 9).unwrap();
        let x = DVector::from_column_slice(&[1.0, 1.0]);
        for _ in 0..50 {
            assert_eq!(a.gradient(&x).unwrap(), b.gradient(&x).unwrap());
        }
    }

    #[test]
    fn exact_oracle_counts() {
        let p = quadratic();
        let mut o = ExactOracle::new(&p);
        let x = DVector::zeros(2);
        o.gradient(&x).unwrap();
        o.gradient(&x).unwrap();
        assert_eq!(o.calls(), 2);
    }
}
