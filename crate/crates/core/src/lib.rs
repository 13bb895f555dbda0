//! Structured symmetric random matrices with exponential-type entry tails:
//! entry-law analytics and Orlicz norms, profile ensembles, spectral-norm
//! computation, an executable sphere-chaining construction with its
//! contraction inequality, closed-form tail-bound evaluators with empirical
//! constant calibration, order-statistics verification tools, and a
//! deterministic Monte Carlo tail-experiment engine.
//!
//! The numeric core is generic over the scalar type (`f32` or `f64`) through
//! [`Scalar`]; the `*64` aliases below fix the working precision used by the
//! CLI and the experiment engine.

pub mod bounds;
pub mod chaining;
pub mod dist;
pub mod ensemble;
pub mod error;
pub mod experiment;
pub mod math;
pub mod matrix;
pub mod order_stats;
pub mod rng;
pub mod scalar;
pub mod specnorm;

pub use error::{Error, Result};
pub use rng::Stream;
pub use scalar::{cast, Scalar};

/// Working precision of the CLI and the experiment engine.
pub type Real = f64;

pub type DistributionSpec64 = dist::DistributionSpec<Real>;
pub type Profile64 = ensemble::Profile<Real>;
pub type ProfileKind64 = ensemble::ProfileKind<Real>;
pub type StructParams64 = ensemble::StructParams<Real>;
pub type SymMatrix64 = matrix::SymMatrix<Real>;
pub type SymMatrixSample64 = matrix::SymMatrixSample<Real>;
pub type NormResult64 = specnorm::NormResult<Real>;
pub type Approximant64 = chaining::Approximant<Real>;
pub type BoundConstants64 = bounds::BoundConstants<Real>;
pub type ExperimentConfig64 = experiment::ExperimentConfig<Real>;
pub type TailCurve64 = experiment::TailCurve<Real>;
