//! Multi-view spectral clustering through low-rank recovery of the stacked
//! per-view similarity tensor.
//!
//! The pipeline: per-view affinities ([`graph`]) are stacked into an
//! `n × n × v` [`Tensor3`], cleaned by the IALM [`solver`] under a norm that
//! penalizes the rank of every frontal slice (kept symmetric) and of every
//! horizontal slice plus the column-wise ℓ2,1 norm of the horizontal slices,
//! fused into one affinity matrix and clustered by [`spectral`]. [`metrics`]
//! scores the result and [`synth`] generates corrupted multi-view data with
//! known labels.

pub mod error;
pub mod graph;
pub mod io;
pub mod linalg;
pub mod metrics;
pub mod prox;
pub mod solver;
pub mod spectral;
pub mod synth;
pub mod tensor3;

pub use error::{Error, Result};
pub use tensor3::Tensor3;

/// Dense column-major real matrix.
pub type Matrix = nalgebra::DMatrix<f64>;
