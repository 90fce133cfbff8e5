//! Convex sets with Euclidean projection.

use nalgebra::DVector;

use crate::error::{check_dim, check_finite, Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum ProjectionDomain {
    Unconstrained,
    L2Ball { center: DVector<f64>, radius: f64 },
    Box { lower: DVector<f64>, upper: DVector<f64> },
}

impl ProjectionDomain {
    pub fn ball(center: DVector<f64>, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Input(format!("ball radius must be positive, got {radius}")));
        }
        check_finite(&center, "ball center")?;
        Ok(Self::L2Ball { center, radius })
    }

    /// Ball of the given radius around the origin of R^d.
    pub fn origin_ball(d: usize, radius: f64) -> Result<Self> {
        Self::ball(DVector::zeros(d), radius)
    }

    pub fn boxed(lower: DVector<f64>, upper: DVector<f64>) -> Result<Self> {
        check_dim(lower.len(), upper.len())?;
        if lower.iter().zip(upper.iter()).any(|(l, u)| !(l <= u)) {
            return Err(Error::Input("box needs lower <= upper in every coordinate".into()));
        }
        Ok(Self::Box { lower, upper })
    }

    /// Dimension the domain is tied to, if any.
    pub fn dim(&self) -> Option<usize> {
        match self {
            Self::Unconstrained => None,
            Self::L2Ball { center, .. } => Some(center.len()),
            Self::Box { lower, .. } => Some(lower.len()),
        }
    }

    pub fn diameter(&self) -> f64 {
        match self {
            Self::Unconstrained => f64::INFINITY,
            Self::L2Ball { radius, .. } => 2.0 * radius,
            Self::Box { lower, upper } => (upper - lower).norm(),
        }
    }

    pub fn is_bounded(&self) -> bool {
        !matches!(self, Self::Unconstrained)
    }

    pub fn project(&self, point: &DVector<f64>) -> Result<DVector<f64>> {
        if let Some(d) = self.dim() {
            check_dim(d, point.len())?;
        }
        if point.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numeric("cannot project a non-finite point".into()));
        }
        Ok(match self {
            Self::Unconstrained => point.clone(),
            Self::L2Ball { center, radius } => {
                let offset = point - center;
                let norm = offset.norm();
                if norm <= *radius {
                    point.clone()
                } else {
                    center + offset * (*radius / norm)
                }
            }
            Self::Box { lower, upper } => {
                DVector::from_fn(point.len(), |i, _| point[i].clamp(lower[i], upper[i]))
            }
        })
    }

    /// Euclidean distance from the point to the domain.
    pub fn distance(&self, point: &DVector<f64>) -> Result<f64> {
        Ok((self.project(point)? - point).norm())
    }
}
