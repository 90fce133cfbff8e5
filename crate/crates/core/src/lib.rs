//! Optimistic online-to-batch conversions for convex optimization.
//!
//! The crate covers the conversion primitives (weights, weighted averages,
//! projections), objectives with counted gradient oracles, the optimizers built
//! on them together with classical baselines, and a LIBSVM reader.

pub mod averages;
pub mod domain;
pub mod error;
pub mod identities;
pub mod libsvm;
pub mod optim;
pub mod oracle;
pub mod problem;
pub mod synthetic;
pub mod weights;

pub use averages::AveragedIterates;
pub use domain::ProjectionDomain;
pub use error::{Error, Result};
pub use identities::{check_identity, weighted_decisions, Identity};
pub use oracle::{ExactOracle, GradientOracle, StochasticOracle};
pub use problem::{
    bregman_divergence, estimate_smoothness, finite_difference_check, Features, Objective, ProblemSpec, SparseRows,
};
pub use weights::{WeightKind, WeightSchedule};
