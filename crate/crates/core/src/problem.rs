//! Objectives with gradient oracles and their regularity constants.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::domain::ProjectionDomain;
use crate::error::{check_dim, check_finite, Error, Result};

const POWER_SEED: u64 = 0x0b2b_5eed;
const POWER_MAX_ITERS: usize = 10_000;
pub const DEFAULT_POWER_TOLERANCE: f64 = 1e-10;

/// Row-compressed sparse matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseRows {
    ncols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<f64>,
}

impl SparseRows {
    /// Builds from rows of (0-based column, value) pairs.
    pub fn from_rows<I>(ncols: usize, rows: I) -> Result<Self>
    where
        I: IntoIterator,
        I::Item: IntoIterator<Item = (usize, f64)>,
    {
        let mut indptr = vec![0];
        let mut indices = Vec::new();
        let mut values = Vec::new();
        for row in rows {
            for (j, v) in row {
                if j >= ncols {
                    return Err(Error::Input(format!("column {j} out of range for {ncols} columns")));
                }
                indices.push(j);
                values.push(v);
            }
            indptr.push(indices.len());
        }
        Ok(Self { ncols, indptr, indices, values })
    }

    pub fn nrows(&self) -> usize {
        self.indptr.len() - 1
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.indptr[i]..self.indptr[i + 1];
        self.indices[r.clone()].iter().copied().zip(self.values[r].iter().copied())
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.nrows(), self.ncols);
        for i in 0..self.nrows() {
            for (j, v) in self.row(i) {
                m[(i, j)] = v;
            }
        }
        m
    }
}

/// Design matrix for the logistic objective.
#[derive(Debug, Clone, PartialEq)]
pub enum Features {
    Dense(DMatrix<f64>),
    Sparse(SparseRows),
}

impl Features {
    pub fn nrows(&self) -> usize {
        match self {
            Features::Dense(m) => m.nrows(),
            Features::Sparse(s) => s.nrows(),
        }
    }

    pub fn ncols(&self) -> usize {
        match self {
            Features::Dense(m) => m.ncols(),
            Features::Sparse(s) => s.ncols(),
        }
    }

    /// A·x
    pub fn mul_vec(&self, x: &DVector<f64>) -> DVector<f64> {
        match self {
            Features::Dense(m) => m * x,
            Features::Sparse(s) => DVector::from_fn(s.nrows(), |i, _| s.row(i).map(|(j, v)| v * x[j]).sum()),
        }
    }

    /// Aᵀ·w
    pub fn tr_mul_vec(&self, w: &DVector<f64>) -> DVector<f64> {
        match self {
            Features::Dense(m) => m.tr_mul(w),
            Features::Sparse(s) => {
                let mut out = DVector::zeros(s.ncols());
                for i in 0..s.nrows() {
                    for (j, v) in s.row(i) {
                        out[j] += v * w[i];
                    }
                }
                out
            }
        }
    }

    fn is_zero(&self) -> bool {
        match self {
            Features::Dense(m) => m.iter().all(|v| *v == 0.0),
            Features::Sparse(s) => s.values.iter().all(|v| *v == 0.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Objective {
    /// (1/2N)‖Ax − b‖²
    LeastSquares { a: DMatrix<f64>, b: DVector<f64> },
    /// (1/N)Σ log(1 + exp(−bᵢ aᵢᵀx)) + μ‖x‖²
    Logistic { features: Features, labels: DVector<f64>, mu: f64 },
    /// (1/N)‖Ax − b‖₁
    L1Residual { a: DMatrix<f64>, b: DVector<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    objective: Objective,
    smoothness: Option<f64>,
    strong_convexity: f64,
    lipschitz: Option<f64>,
    domain: ProjectionDomain,
}

fn check_domain(domain: &ProjectionDomain, d: usize) -> Result<()> {
    match domain.dim() {
        Some(k) => check_dim(d, k),
        None => Ok(()),
    }
}

impl ProblemSpec {
    pub fn least_squares(a: DMatrix<f64>, b: DVector<f64>, domain: ProjectionDomain) -> Result<Self> {
        check_dim(a.nrows(), b.len())?;
        check_domain(&domain, a.ncols())?;
        let n = a.nrows() as f64;
        let smoothness = dense_power_iteration(&a, DEFAULT_POWER_TOLERANCE)? / n;
        let lambda_min = SymmetricEigen::new(a.tr_mul(&a)).eigenvalues.min().max(0.0);
        Ok(Self {
            objective: Objective::LeastSquares { a, b },
            smoothness: Some(smoothness),
            strong_convexity: lambda_min / n,
            lipschitz: None,
            domain,
        })
    }

    pub fn logistic(features: Features, labels: DVector<f64>, mu: f64, domain: ProjectionDomain) -> Result<Self> {
        check_dim(features.nrows(), labels.len())?;
        check_domain(&domain, features.ncols())?;
        if features.ncols() == 0 {
            return Err(Error::Degenerate("logistic problem with zero features".into()));
        }
        if !(mu >= 0.0 && mu.is_finite()) {
            return Err(Error::Input(format!("mu must be nonnegative, got {mu}")));
        }
        if labels.iter().any(|b| *b != 1.0 && *b != -1.0) {
            return Err(Error::Input("logistic labels must be -1 or +1".into()));
        }
        let n = features.nrows() as f64;
        let smoothness = power_iteration(&features, DEFAULT_POWER_TOLERANCE)? / (4.0 * n) + 2.0 * mu;
        Ok(Self {
            objective: Objective::Logistic { features, labels, mu },
            smoothness: Some(smoothness),
            strong_convexity: 2.0 * mu,
            lipschitz: None,
            domain,
        })
    }

    pub fn l1_residual(a: DMatrix<f64>, b: DVector<f64>, domain: ProjectionDomain) -> Result<Self> {
        check_dim(a.nrows(), b.len())?;
        check_domain(&domain, a.ncols())?;
        let n = a.nrows() as f64;
        let g = a.row_iter().map(|r| r.norm()).sum::<f64>() / n;
        Ok(Self {
            objective: Objective::L1Residual { a, b },
            smoothness: None,
            strong_convexity: 0.0,
            lipschitz: Some(g),
            domain,
        })
    }

    /// Replaces the regularity constants, e.g. with exactly known values.
    pub fn with_constants(mut self, smoothness: Option<f64>, strong_convexity: f64) -> Self {
        self.smoothness = smoothness;
        self.strong_convexity = strong_convexity;
        self
    }

    pub fn with_domain(mut self, domain: ProjectionDomain) -> Result<Self> {
        check_domain(&domain, self.dim())?;
        self.domain = domain;
        Ok(self)
    }

    pub fn objective(&self) -> &Objective {
        &self.objective
    }

    pub fn smoothness(&self) -> Option<f64> {
        self.smoothness
    }

    pub fn strong_convexity(&self) -> f64 {
        self.strong_convexity
    }

    pub fn lipschitz(&self) -> Option<f64> {
        self.lipschitz
    }

    pub fn domain(&self) -> &ProjectionDomain {
        &self.domain
    }

    pub fn dim(&self) -> usize {
        match &self.objective {
            Objective::LeastSquares { a, .. } | Objective::L1Residual { a, .. } => a.ncols(),
            Objective::Logistic { features, .. } => features.ncols(),
        }
    }

    pub fn samples(&self) -> usize {
        match &self.objective {
            Objective::LeastSquares { a, .. } | Objective::L1Residual { a, .. } => a.nrows(),
            Objective::Logistic { features, .. } => features.nrows(),
        }
    }

    /// Smoothness constant or a configuration error naming the caller.
    pub fn require_smoothness(&self, who: &str) -> Result<f64> {
        self.smoothness
            .ok_or_else(|| Error::Config(format!("{who} needs a smoothness constant")))
    }

    fn check_point(&self, x: &DVector<f64>) -> Result<()> {
        check_dim(self.dim(), x.len())?;
        check_finite(x, "x")
    }

    /// Value and gradient (a subgradient for the L1 residual).
    pub fn evaluate(&self, x: &DVector<f64>) -> Result<(f64, DVector<f64>)> {
        self.check_point(x)?;
        let n = self.samples() as f64;
        Ok(match &self.objective {
            Objective::LeastSquares { a, b } => {
                let r = a * x - b;
                (r.norm_squared() / (2.0 * n), a.tr_mul(&r) / n)
            }
            Objective::Logistic { features, labels, mu } => {
                let z = features.mul_vec(x).component_mul(labels);
                let value = z.iter().map(|zi| softplus(-zi)).sum::<f64>() / n + mu * x.norm_squared();
                let w = DVector::from_fn(z.len(), |i, _| -labels[i] * sigmoid(-z[i]) / n);
                (value, features.tr_mul_vec(&w) + x * (2.0 * mu))
            }
            Objective::L1Residual { a, b } => {
                let r = a * x - b;
                let s = r.map(sign);
                (r.lp_norm(1) / n, a.tr_mul(&s) / n)
            }
        })
    }

    pub fn value(&self, x: &DVector<f64>) -> Result<f64> {
        self.check_point(x)?;
        let n = self.samples() as f64;
        Ok(match &self.objective {
            Objective::LeastSquares { a, b } => (a * x - b).norm_squared() / (2.0 * n),
            Objective::Logistic { features, labels, mu } => {
                let z = features.mul_vec(x).component_mul(labels);
                z.iter().map(|zi| softplus(-zi)).sum::<f64>() / n + mu * x.norm_squared()
            }
            Objective::L1Residual { a, b } => (a * x - b).lp_norm(1) / n,
        })
    }

    pub fn gradient(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        self.evaluate(x).map(|(_, g)| g)
    }
}

/// log(1 + exp(z)) without overflow.
pub fn softplus(z: f64) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p()
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

fn sign(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

fn power_iteration(features: &Features, tolerance: f64) -> Result<f64> {
    if features.nrows() == 0 || features.is_zero() {
        return Err(Error::Degenerate("zero data matrix".into()));
    }
    power_iteration_with(features.ncols(), tolerance, |v| features.tr_mul_vec(&features.mul_vec(v)))
}

fn dense_power_iteration(a: &DMatrix<f64>, tolerance: f64) -> Result<f64> {
    if a.nrows() == 0 || a.iter().all(|v| *v == 0.0) {
        return Err(Error::Degenerate("zero data matrix".into()));
    }
    power_iteration_with(a.ncols(), tolerance, |v| a.tr_mul(&(a * v)))
}

/// Largest eigenvalue of the PSD operator `gram` by power iteration from a
/// fixed-seed start.
fn power_iteration_with(
    d: usize,
    tolerance: f64,
    gram: impl Fn(&DVector<f64>) -> DVector<f64>,
) -> Result<f64> {
    if d == 0 {
        return Err(Error::Degenerate("zero-dimensional problem".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(POWER_SEED);
    let mut v = DVector::from_fn(d, |_, _| StandardNormal.sample(&mut rng));
    v /= v.norm();
    let mut rayleigh = 0.0;
    for _ in 0..POWER_MAX_ITERS {
        let w = gram(&v);
        let next = v.dot(&w);
        let norm = w.norm();
        if norm == 0.0 {
            return Err(Error::Degenerate("power iteration collapsed to zero".into()));
        }
        v = w / norm;
        if (next - rayleigh).abs() <= tolerance * next.abs() {
            return Ok(next);
        }
        rayleigh = next;
    }
    Ok(rayleigh)
}

/// Smoothness constant of the smooth objective kinds via power iteration.
pub fn estimate_smoothness(problem: &ProblemSpec, tolerance: f64) -> Result<f64> {
    let n = problem.samples() as f64;
    match problem.objective() {
        Objective::LeastSquares { a, .. } => Ok(dense_power_iteration(a, tolerance)? / n),
        Objective::Logistic { features, mu, .. } => {
            Ok(power_iteration(features, tolerance)? / (4.0 * n) + 2.0 * mu)
        }
        Objective::L1Residual { .. } => Err(Error::Precondition(
            "the L1 residual objective is not smooth".into(),
        )),
    }
}

/// f(x) − f(y) − ⟨∇f(y), x − y⟩
pub fn bregman_divergence(problem: &ProblemSpec, x: &DVector<f64>, y: &DVector<f64>) -> Result<f64> {
    let fx = problem.value(x)?;
    let (fy, gy) = problem.evaluate(y)?;
    Ok(fx - fy - gy.dot(&(x - y)))
}

/// Max over coordinates of |central difference − ∂ᵢf| / (1 + |∂ᵢf|).
pub fn finite_difference_check(problem: &ProblemSpec, x: &DVector<f64>, h: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::Input(format!("step h must be positive, got {h}")));
    }
    if let Objective::L1Residual { a, b } = problem.objective() {
        problem.check_point(x)?;
        let r = a * x - b;
        if let Some(i) = r.iter().position(|ri| ri.abs() < 10.0 * h) {
            return Err(Error::Precondition(format!("residual {i} is within 10h of a kink")));
        }
    }
    let g = problem.gradient(x)?;
    let mut worst: f64 = 0.0;
    let mut probe = x.clone();
    for i in 0..x.len() {
        probe[i] = x[i] + h;
        let up = problem.value(&probe)?;
        probe[i] = x[i] - h;
        let down = problem.value(&probe)?;
        probe[i] = x[i];
        let fd = (up - down) / (2.0 * h);
        worst = worst.max((fd - g[i]).abs() / (1.0 + g[i].abs()));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn v(x: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(x)
    }

    fn logistic_fixture(n: usize, d: usize, mu: f64, seed: u64) -> ProblemSpec {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = DMatrix::from_fn(n, d, |_, _| StandardNormal.sample(&mut rng));
        let labels = DVector::from_fn(n, |_, _| if rng.random::<bool>() { 1.0 } else { -1.0 });
        ProblemSpec::logistic(Features::Dense(a), labels, mu, ProjectionDomain::Unconstrained).unwrap()
    }

    fn random_point(d: usize, scale: f64, rng: &mut ChaCha8Rng) -> DVector<f64> {
        DVector::from_fn(d, |_, _| scale * rng.random_range(-1.0..1.0))
    }

    #[test]
    fn least_squares_identity_example() {
        let p = ProblemSpec::least_squares(DMatrix::identity(2, 2), DVector::zeros(2), ProjectionDomain::Unconstrained)
            .unwrap();
        let (f, g) = p.evaluate(&v(&[1.0, 0.0])).unwrap();
        assert!((f - 0.25).abs() < 1e-15);
        assert!((g - v(&[0.5, 0.0])).norm() < 1e-15);
        assert!((p.strong_convexity() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn logistic_single_sample_at_origin() {
        let a = DMatrix::from_row_slice(1, 2, &[1.0, 0.0]);
        let p = ProblemSpec::logistic(Features::Dense(a), v(&[1.0]), 0.0, ProjectionDomain::Unconstrained).unwrap();
        let (f, g) = p.evaluate(&DVector::zeros(2)).unwrap();
        assert!((f - 2f64.ln()).abs() < 1e-15);
        // d/dx log(1 + exp(-x₁)) at 0 is -1/2.
        assert!((g - v(&[-0.5, 0.0])).norm() < 1e-15);
        assert!(finite_difference_check(&p, &DVector::zeros(2), 1e-6).unwrap() < 1e-9);
    }

    #[test]
    fn logistic_is_finite_far_out() {
        let p = logistic_fixture(5, 3, 0.0, 1);
        let (f, g) = p.evaluate(&v(&[1e4, -1e4, 3e3])).unwrap();
        assert!(f.is_finite() && g.iter().all(|x| x.is_finite()));
    }

    #[test]
    fn l1_subgradient_uses_zero_sign() {
        let a = DMatrix::from_row_slice(2, 1, &[1.0, 2.0]);
        let p = ProblemSpec::l1_residual(a, v(&[0.0, 1.0]), ProjectionDomain::Unconstrained).unwrap();
        let (f, g) = p.evaluate(&v(&[0.0])).unwrap();
        assert!((f - 0.5).abs() < 1e-15);
        assert!((g[0] - (-1.0)).abs() < 1e-15);
        assert!((p.lipschitz().unwrap() - 1.5).abs() < 1e-15);
    }

    #[test]
    fn non_finite_input_rejected() {
        let p = logistic_fixture(5, 3, 0.0, 1);
        assert!(matches!(p.evaluate(&v(&[f64::INFINITY, 0.0, 0.0])), Err(Error::Input(_))));
        assert!(matches!(p.evaluate(&v(&[0.0, 0.0])), Err(Error::Shape { .. })));
    }

    #[test]
    fn smoothness_examples() {
        let a = DMatrix::from_diagonal(&v(&[3.0, 1.0]));
        let p = ProblemSpec::least_squares(a, DVector::zeros(2), ProjectionDomain::Unconstrained).unwrap();
        assert!((estimate_smoothness(&p, 1e-12).unwrap() - 4.5).abs() < 1e-9);
        let a = DMatrix::from_row_slice(1, 2, &[2.0, 0.0]);
        let p = ProblemSpec::logistic(Features::Dense(a), v(&[1.0]), 0.0, ProjectionDomain::Unconstrained).unwrap();
        assert!((estimate_smoothness(&p, 1e-12).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_matrix_is_degenerate() {
        let err = ProblemSpec::least_squares(DMatrix::zeros(3, 2), DVector::zeros(3), ProjectionDomain::Unconstrained)
            .unwrap_err();
        assert!(matches!(err, Error::Degenerate(_)));
    }

    #[test]
    fn power_iteration_matches_dense_eigen() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let a = DMatrix::from_fn(50, 10, |_, _| StandardNormal.sample(&mut rng));
        let oracle = SymmetricEigen::new(a.tr_mul(&a)).eigenvalues.max() / 50.0;
        let p = ProblemSpec::least_squares(a, DVector::zeros(50), ProjectionDomain::Unconstrained).unwrap();
        let est = estimate_smoothness(&p, DEFAULT_POWER_TOLERANCE).unwrap();
        assert!(((est - oracle) / oracle).abs() <= 1e-8, "{est} vs {oracle}");
    }

    #[test]
    fn l1_has_no_smoothness_estimate() {
        let p = ProblemSpec::l1_residual(DMatrix::identity(2, 2), DVector::zeros(2), ProjectionDomain::Unconstrained)
            .unwrap();
        assert!(matches!(estimate_smoothness(&p, 1e-10), Err(Error::Precondition(_))));
    }

    #[test]
    fn logistic_gradient_matches_finite_differences() {
        let p = logistic_fixture(5, 3, 0.01, 7);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..100 {
            let x = random_point(3, 2.0, &mut rng);
            assert!(finite_difference_check(&p, &x, 1e-6).unwrap() <= 1e-6);
        }
    }

    #[test]
    fn least_squares_finite_difference_is_tight() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = DMatrix::from_fn(8, 4, |_, _| StandardNormal.sample(&mut rng));
        let b = DVector::from_fn(8, |_, _| StandardNormal.sample(&mut rng));
        let p = ProblemSpec::least_squares(a, b, ProjectionDomain::Unconstrained).unwrap();
        for _ in 0..20 {
            let x = random_point(4, 1.0, &mut rng);
            assert!(finite_difference_check(&p, &x, 1e-6).unwrap() <= 1e-7);
        }
    }

    #[test]
    fn finite_difference_error_is_second_order() {
        let p = logistic_fixture(5, 3, 0.0, 3);
        let x = v(&[0.7, -1.3, 0.4]);
        let coarse = finite_difference_check(&p, &x, 1e-2).unwrap();
        let fine = finite_difference_check(&p, &x, 5e-3).unwrap();
        let ratio = coarse / fine;
        assert!((3.0..=5.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn l1_finite_difference_refuses_kinks() {
        let p = ProblemSpec::l1_residual(DMatrix::identity(2, 2), DVector::zeros(2), ProjectionDomain::Unconstrained)
            .unwrap();
        let err = finite_difference_check(&p, &v(&[1e-7, 1.0]), 1e-6).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
        assert!(finite_difference_check(&p, &v(&[0.5, -1.0]), 1e-6).unwrap() < 1e-9);
    }

    #[test]
    fn bregman_examples() {
        let p = ProblemSpec::least_squares(DMatrix::identity(1, 1), DVector::zeros(1), ProjectionDomain::Unconstrained)
            .unwrap();
        // With N = 1 this is f = x²/2.
        assert!((bregman_divergence(&p, &v(&[1.0]), &v(&[0.0])).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(bregman_divergence(&p, &v(&[0.3]), &v(&[0.3])).unwrap(), 0.0);
    }

    #[test]
    fn bregman_matches_direct_logistic_formula() {
        let p = logistic_fixture(3, 2, 0.0, 4);
        let Objective::Logistic { features: Features::Dense(a), labels, .. } = p.objective() else {
            unreachable!()
        };
        let f = |x: &DVector<f64>| -> f64 {
            (0..3).map(|i| (1.0 + (-labels[i] * a.row(i).dot(&x.transpose())).exp()).ln()).sum::<f64>() / 3.0
        };
        let df = |x: &DVector<f64>| -> DVector<f64> {
            let mut g = DVector::zeros(2);
            for i in 0..3 {
                let z = labels[i] * a.row(i).dot(&x.transpose());
                g -= a.row(i).transpose() * (labels[i] / (1.0 + z.exp()) / 3.0);
            }
            g
        };
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let x = random_point(2, 1.0, &mut rng);
            let y = random_point(2, 1.0, &mut rng);
            let direct = f(&x) - f(&y) - df(&y).dot(&(&x - &y));
            let got = bregman_divergence(&p, &x, &y).unwrap();
            assert!((got - direct).abs() <= 1e-12, "{got} vs {direct}");
            assert!(got >= -1e-15);
        }
    }

    #[test]
    fn sparse_and_dense_features_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let rows: Vec<Vec<(usize, f64)>> = (0..30)
            .map(|_| {
                let mut row = Vec::new();
                for j in 0..20 {
                    if rng.random::<f64>() < 0.3 {
                        row.push((j, rng.random_range(-1.0..1.0)));
                    }
                }
                row
            })
            .collect();
        let sparse = SparseRows::from_rows(20, rows).unwrap();
        let dense = sparse.to_dense();
        let labels = DVector::from_fn(30, |i, _| if i % 3 == 0 { 1.0 } else { -1.0 });
        let ps = ProblemSpec::logistic(Features::Sparse(sparse), labels.clone(), 0.005, ProjectionDomain::Unconstrained)
            .unwrap();
        let pd = ProblemSpec::logistic(Features::Dense(dense), labels, 0.005, ProjectionDomain::Unconstrained).unwrap();
        for _ in 0..10 {
            let x = random_point(20, 1.0, &mut rng);
            let (fs, gs) = ps.evaluate(&x).unwrap();
            let (fd, gd) = pd.evaluate(&x).unwrap();
            assert!((fs - fd).abs() <= 1e-12);
            assert!((gs - gd).norm() <= 1e-12);
        }
        assert!((ps.smoothness().unwrap() - pd.smoothness().unwrap()).abs() <= 1e-9);
    }

    fn witness_problems() -> Vec<ProblemSpec> {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let a = DMatrix::from_fn(12, 4, |_, _| StandardNormal.sample(&mut rng));
        let b = DVector::from_fn(12, |_, _| StandardNormal.sample(&mut rng));
        vec![
            ProblemSpec::least_squares(a.clone(), b.clone(), ProjectionDomain::Unconstrained).unwrap(),
            ProblemSpec::l1_residual(a, b, ProjectionDomain::Unconstrained).unwrap(),
            logistic_fixture(12, 4, 0.05, 13),
        ]
    }

    #[test]
    fn convexity_witness() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for p in witness_problems() {
            for _ in 0..1000 {
                let x = random_point(4, 3.0, &mut rng);
                let y = random_point(4, 3.0, &mut rng);
                let th: f64 = rng.random();
                let mid = &x * th + &y * (1.0 - th);
                let lhs = p.value(&mid).unwrap();
                let rhs = th * p.value(&x).unwrap() + (1.0 - th) * p.value(&y).unwrap();
                assert!(lhs <= rhs + 1e-10);
            }
        }
    }

    #[test]
    fn smoothness_witness() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for p in witness_problems() {
            let Some(l) = p.smoothness() else { continue };
            for _ in 0..1000 {
                let x = random_point(4, 3.0, &mut rng);
                let y = random_point(4, 3.0, &mut rng);
                let lhs = (p.gradient(&x).unwrap() - p.gradient(&y).unwrap()).norm();
                assert!(lhs <= l * (&x - &y).norm() * (1.0 + 1e-8));
            }
        }
    }

    #[test]
    fn logistic_strong_convexity_witness() {
        let p = logistic_fixture(12, 4, 0.05, 16);
        let mu = 0.05;
        assert_eq!(p.strong_convexity(), 2.0 * mu);
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..1000 {
            let x = random_point(4, 3.0, &mut rng);
            let y = random_point(4, 3.0, &mut rng);
            let (fx, gx) = p.evaluate(&x).unwrap();
            let fy = p.value(&y).unwrap();
            let d = &x - &y;
            assert!(fx - fy <= gx.dot(&d) - mu * d.norm_squared() + 1e-12);
        }
    }
}
