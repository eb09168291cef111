//! Determinantal point processes on spheres.
//!
//! The crate covers the harmonic ensembles on `S^d`, the spherical ensemble on
//! `S^2` and the circular unitary ensemble on `S^1`:
//!
//! * [`specfun`]: Bessel, Jacobi, ultraspherical, Gegenbauer and associated
//!   Legendre functions.
//! * [`geom`]: polar coordinates, measures, uniform sampling and the
//!   exponential map at the north pole.
//! * [`kernels`]: correlation kernels of the finite ensembles and of their
//!   scaling limits, together with gauge and scaling transformations.
//! * [`sampler`]: exact chain-rule sampling of projection DPPs and the
//!   restrict / pull back / rescale pipeline.
//! * [`limits`]: convergence tables for the scaling limits and Monte Carlo
//!   estimators checked against determinantal predictions.

// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod geom;
pub mod kernels;
pub mod limits;
pub mod quadrature;
pub mod sampler;
pub mod specfun;

pub use error::{Error, Result};
pub use geom::{SpherePoint, TangentPoint};
pub use kernels::{Background, CorrelationKernel, KernelFamily, KernelSpec};
pub use limits::{ConvergenceRow, ConvergenceTable, EstimatorReport};
pub use num_complex::Complex64;
pub use sampler::{Configuration, Space};
