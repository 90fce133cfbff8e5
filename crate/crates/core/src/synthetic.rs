//! Seeded synthetic problem generators.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::domain::ProjectionDomain;
use crate::error::{Error, Result};
use crate::problem::ProblemSpec;

/// A generated problem together with the point used to build it.
#[derive(Debug, Clone)]
pub struct PlantedProblem {
    pub problem: ProblemSpec,
    pub planted: DVector<f64>,
}

/// Least squares whose Hessian has a prescribed geometric spectrum.
#[derive(Debug, Clone)]
pub struct SpectralProblem {
    pub problem: ProblemSpec,
    pub planted: DVector<f64>,
    /// Orthonormal eigenvectors of the Hessian, one per column.
    pub basis: DMatrix<f64>,
    pub eigenvalues: DVector<f64>,
}

fn gaussian_matrix(n: usize, d: usize, scale: f64, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let mut a = DMatrix::zeros(n, d);
    for i in 0..n {
        for j in 0..d {
            let z: f64 = StandardNormal.sample(rng);
            a[(i, j)] = scale * z;
        }
    }
    a
}

fn sphere_point(d: usize, radius: f64, rng: &mut ChaCha8Rng) -> DVector<f64> {
    loop {
        let u: DVector<f64> = DVector::from_fn(d, |_, _| StandardNormal.sample(rng));
        let norm = u.norm();
        if norm > 0.0 {
            return u * (radius / norm);
        }
    }
}

/// Uniform draw from the ball of the given radius around the origin.
pub fn uniform_in_ball(d: usize, radius: f64, rng: &mut ChaCha8Rng) -> DVector<f64> {
    let r = radius * rng.random::<f64>().powf(1.0 / d as f64);
    sphere_point(d, r, rng)
}

fn check_dims(n: usize, d: usize) -> Result<()> {
    if n == 0 || d == 0 {
        return Err(Error::Input(format!("dimensions must be positive, got n={n}, d={d}")));
    }
    Ok(())
}

/// b = Ax* + ε with Gaussian A and ε, x* on the sphere of radius R/2,
/// over the ball of radius R.
pub fn generate_synthetic_ls(
    n: usize,
    d: usize,
    sigma_a: f64,
    noise_var: f64,
    radius: f64,
    seed: u64,
) -> Result<PlantedProblem> {
    check_dims(n, d)?;
    if !(sigma_a > 0.0) || !(noise_var >= 0.0) || !(radius > 0.0) {
        return Err(Error::Input("sigma_a and radius must be positive, noise_var nonnegative".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = gaussian_matrix(n, d, sigma_a, &mut rng);
    let planted = sphere_point(d, radius / 2.0, &mut rng);
    let noise = DVector::from_fn(n, |_, _| {
        let z: f64 = StandardNormal.sample(&mut rng);
        noise_var.sqrt() * z
    });
    let b = &a * &planted + noise;
    let problem = ProblemSpec::least_squares(a, b, ProjectionDomain::origin_ball(d, radius)?)?;
    Ok(PlantedProblem { problem, planted })
}

/// Consistent least-absolute-deviation problem: b = Ax* exactly.
pub fn generate_l1_residual(n: usize, d: usize, radius: f64, seed: u64) -> Result<PlantedProblem> {
    check_dims(n, d)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = gaussian_matrix(n, d, 1.0, &mut rng);
    let planted = sphere_point(d, radius / 2.0, &mut rng);
    let b = &a * &planted;
    let problem = ProblemSpec::l1_residual(a, b, ProjectionDomain::origin_ball(d, radius)?)?;
    Ok(PlantedProblem { problem, planted })
}

/// Square least squares with Hessian eigenvalues geometrically spaced from
/// `l_max` down to `l_max / condition`, and b = Ax* for a planted x* of norm
/// `planted_norm`. The regularity constants are set to the exact extremes.
pub fn generate_spectral_ls(
    d: usize,
    l_max: f64,
    condition: f64,
    planted_norm: f64,
    domain: ProjectionDomain,
    seed: u64,
) -> Result<SpectralProblem> {
    check_dims(d, d)?;
    if !(l_max > 0.0) || !(condition >= 1.0) {
        return Err(Error::Input("need l_max > 0 and condition >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let basis = gaussian_matrix(d, d, 1.0, &mut rng).qr().q();
    let eigenvalues = DVector::from_fn(d, |i, _| {
        let frac = if d == 1 { 0.0 } else { i as f64 / (d - 1) as f64 };
        l_max * condition.powf(-frac)
    });
    // AᵀA / N = Q diag(eig) Qᵀ with N = d.
    let scale = DMatrix::from_diagonal(&eigenvalues.map(|e| (e * d as f64).sqrt()));
    let a = scale * basis.transpose();
    let planted = sphere_point(d, planted_norm, &mut rng);
    let b = &a * &planted;
    let lambda = eigenvalues[d - 1];
    let problem = ProblemSpec::least_squares(a, b, domain)?.with_constants(Some(l_max), lambda);
    Ok(SpectralProblem { problem, planted, basis, eigenvalues })
}

impl SpectralProblem {
    /// x* plus a displacement of the given norm with equal magnitude along
    /// every eigenvector and seeded random signs.
    pub fn spread_start(&self, distance: f64, seed: u64) -> DVector<f64> {
        let d = self.planted.len();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coeffs = DVector::from_fn(d, |_, _| if rng.random::<bool>() { 1.0 } else { -1.0 });
        &self.planted + &self.basis * coeffs * (distance / (d as f64).sqrt())
    }
}

/// Gaussian features with labels from a noisy planted separator.
pub fn generate_logistic(n: usize, d: usize, mu: f64, radius: f64, seed: u64) -> Result<ProblemSpec> {
    check_dims(n, d)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = gaussian_matrix(n, d, 1.0, &mut rng);
    let w = sphere_point(d, 1.0, &mut rng);
    let labels = DVector::from_fn(n, |i, _| {
        let z: f64 = StandardNormal.sample(&mut rng);
        if a.row(i).dot(&w.transpose()) + 0.5 * z >= 0.0 {
            1.0
        } else {
            -1.0
        }
    });
    ProblemSpec::logistic(
        crate::problem::Features::Dense(a),
        labels,
        mu,
        ProjectionDomain::origin_ball(d, radius)?,
    )
}
