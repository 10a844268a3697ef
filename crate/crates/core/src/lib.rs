//! Fractional spectral analysis for graph signals whose vertex values live in
//! a (discretized) Hilbert space.
//!
//! The joint transform pairs a fractional power of a Hilbert-side unitary
//! transform (by default the DFT on a uniform grid) with a fractional power of
//! a graph Fourier transform, acting on two-variable signals `x[i, j]`
//! (Hilbert sample `i`, vertex `j`). On top of the transform the crate
//! provides fractional-domain convolution and bandpass filtering, bandlimited
//! sampling with greedy sensor selection and perfect reconstruction, a
//! fractional-order grid search, and generators for chirp fields and
//! heat/wave diffusion experiments.
//!
//! Modules mirror the layering: [`linalg`] is the dense complex kernel,
//! [`graph`] builds shift operators, [`transform`] owns the fractional
//! operators and the joint transform, [`filtering`] and [`sampling`] build on
//! it, and [`signals`] generates experiment data.

pub mod error;
pub mod filtering;
pub mod graph;
pub mod io;
pub mod linalg;
pub mod sampling;
pub mod signals;
pub mod transform;

use std::sync::OnceLock;

pub use error::{Error, Result};
pub use filtering::{FrequencyRegion, LinearFilter};
pub use graph::{Graph, ShiftKind};
pub use linalg::{CMatrix, CVector, SpectralDecomposition};
pub use sampling::SamplingPlan;
pub use transform::{FractionalOperator, JointSignal, JointSpectrum, OperatorFactory};

/// Default cap on any joint dimension (`m * n`) and on Kronecker products.
pub const DEFAULT_MAX_DIM: usize = 16384;

/// Joint-dimension cap, read once from `HGFRFT_MAX_DIM` (default 16384).
pub fn max_joint_dim() -> usize {
    static CAP: OnceLock<usize> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var("HGFRFT_MAX_DIM")
            .ok()
            .and_then(|s| s.parse().ok())
            .unwrap_or(DEFAULT_MAX_DIM)
    })
}
