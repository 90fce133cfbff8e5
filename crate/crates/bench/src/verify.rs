//! Self-checks exposed through `optibatch verify`.

use nalgebra::{DVector, SymmetricEigen};
use optibatch::optim::{
    check_nag_equivalence, one_step_recurrence_residual, Optimism, Optimizer, StabilizedOptimistic,
};
use optibatch::synthetic::{generate_logistic, generate_synthetic_ls, uniform_in_ball};
use optibatch::{
    check_identity, estimate_smoothness, finite_difference_check, ExactOracle, Identity, Objective, ProjectionDomain,
    Result, WeightSchedule,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl std::fmt::Display for Check {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} {}: {}", if self.pass { "PASS" } else { "FAIL" }, self.name, self.detail)
    }
}

fn identities() -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for k in 0..1000 {
        let schedule = match k % 3 {
            0 => WeightSchedule::linear(),
            1 => WeightSchedule::unit(),
            _ => WeightSchedule::geometric_sc(rng.random_range(1.0..1e4)),
        };
        let dim = rng.random_range(1..=6);
        let len = rng.random_range(3..12);
        let history: Vec<DVector<f64>> =
            (0..len).map(|_| DVector::from_fn(dim, |_, _| rng.random_range(-1.0..1.0))).collect();
        for t in 2..len {
            for which in Identity::ALL {
                worst = worst.max(check_identity(which, &history, &schedule, t)?);
            }
        }
    }
    Ok(Check { name: "averaging identities", pass: worst <= 1e-10, detail: format!("max residual {worst:.2e}") })
}

fn nag_equivalence() -> Result<Check> {
    let p = generate_synthetic_ls(100, 50, 1.0, 1e-3, 2.0, 3)?.problem.with_domain(ProjectionDomain::Unconstrained)?;
    let x0 = uniform_in_ball(50, 1.0, &mut ChaCha8Rng::seed_from_u64(33));
    let (bar, tilde) = check_nag_equivalence(&p, 500, x0)?;
    Ok(Check {
        name: "NAG equivalence",
        pass: bar <= 1e-8 && tilde <= 1e-8,
        detail: format!("deviations {bar:.2e}, {tilde:.2e}"),
    })
}

fn recurrence() -> Result<Check> {
    let p = generate_synthetic_ls(40, 20, 1.0, 1e-3, 2.0, 12)?.problem.with_domain(ProjectionDomain::Unconstrained)?;
    let mut worst = 0.0f64;
    for kind in [Optimism::UniXGrad, Optimism::Jrgs] {
        let x0 = DVector::from_element(20, 0.2);
        let mut opt = StabilizedOptimistic::with_default_step(&p, kind, x0.clone())?;
        let mut oracle = ExactOracle::new(&p);
        let mut bars = vec![x0, opt.output()];
        let mut grads = vec![DVector::zeros(20)];
        let mut steps = vec![0.0];
        for _ in 0..200 {
            opt.step(&mut oracle)?;
            bars.push(opt.output());
            grads.push(opt.last_gradient().cloned().unwrap_or_default());
            steps.push(opt.last_step().unwrap_or(0.0));
        }
        for t in 2..bars.len() {
            let r = one_step_recurrence_residual(
                opt.schedule(),
                t,
                [&bars[t], &bars[t - 1], &bars[t - 2]],
                &grads[t - 1],
                steps[t - 1],
            )?;
            worst = worst.max(r);
        }
    }
    Ok(Check { name: "stabilized recurrence", pass: worst <= 1e-10, detail: format!("max residual {worst:.2e}") })
}

fn gradients() -> Result<Check> {
    let ls = generate_synthetic_ls(40, 10, 1.0, 1e-3, 2.0, 11)?.problem;
    let lg = generate_logistic(40, 10, 0.005, 2.0, 11)?;
    let mut rng = ChaCha8Rng::seed_from_u64(111);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let x = DVector::from_fn(10, |_, _| rng.random_range(-2.0..2.0));
        worst = worst.max(finite_difference_check(&ls, &x, 1e-6)?);
        worst = worst.max(finite_difference_check(&lg, &x, 1e-6)?);
    }
    Ok(Check { name: "finite differences", pass: worst <= 1e-6, detail: format!("max relative error {worst:.2e}") })
}

fn smoothness() -> Result<Check> {
    let p = generate_synthetic_ls(60, 15, 1.0, 1e-3, 1.0, 21)?.problem;
    let Objective::LeastSquares { a, .. } = p.objective() else { unreachable!() };
    let exact = SymmetricEigen::new(a.tr_mul(a)).eigenvalues.max() / a.nrows() as f64;
    let estimate = estimate_smoothness(&p, 1e-10)?;
    let rel = (estimate - exact).abs() / exact;
    Ok(Check { name: "smoothness estimate", pass: rel <= 1e-8, detail: format!("relative error {rel:.2e}") })
}

fn zero_last_terminal() -> Result<Check> {
    let t = 50;
    let s = WeightSchedule::linear_zero_last(t);
    let ok = s.alpha(t) == 0.0 && s.partial_sum(t) == s.partial_sum(t - 1);
    Ok(Check { name: "zero-last terminal weight", pass: ok, detail: format!("A_T = {}", s.partial_sum(t)) })
}

/// Runs every check; a check that errors is reported as a failure.
pub fn run_all() -> Vec<Check> {
    let suites: [(&'static str, fn() -> Result<Check>); 6] = [
        ("averaging identities", identities),
        ("NAG equivalence", nag_equivalence),
        ("stabilized recurrence", recurrence),
        ("finite differences", gradients),
        ("smoothness estimate", smoothness),
        ("zero-last terminal weight", zero_last_terminal),
    ];
    suites
        .into_iter()
        .map(|(name, f)| f().unwrap_or_else(|e| Check { name, pass: false, detail: format!("error: {e}") }))
        .collect()
}
