//! Spectral neural-operator building blocks.
//!
//! Everything here acts on angular spectra (or, for the front end, on spatial
//! polar tensors) and is diagonal or near-diagonal in frequency. Each
//! differentiable operator exposes an analytic gradient; [`gradcheck`] holds
//! the finite-difference probe used to verify them.
//!
//! Gradients follow the split real/imaginary convention: a complex gradient
//! `g` means `dL/dRe = g.re` and `dL/dIm = g.im`. For `y = W x` with upstream
//! `g = dL/dy` the weight gradient is `g * conj(x)`.

mod dense;
mod gate;
pub mod gradcheck;
mod mask;
mod mixing;
mod normalize;
mod pooling;
mod resample;

pub use dense::{polar_dense_forward, polar_dense_gradient, SpectralDense};
pub use gate::{
    build_gate_kernel, energy_ratio, gate_apply, gate_target_response, tukey_weight, GateGradient,
    PeriodicGate, DEFAULT_TUKEY_ALPHA,
};
pub use mask::{signed_frequency, FrequencyMask};
pub use mixing::{symmetric_channel_mix, SymmetricMixer};
pub use normalize::{
    jacobian_weight, radial_equalize, radial_equalize_with, spectral_rms_norm,
    spectral_rms_norm_gradient, EqualizeMode, NormScope, VARIANCE_FLOOR,
};
pub use pooling::{pool_low_quadrants, pool_low_quadrants_raw, FEATURE_NORM_FLOOR};
pub use resample::{cartesian_to_polar, Image, PolarGridSpec};

use crate::error::Result;
use crate::spectral::Spectrum;

/// An operator that maps a spectrum to a spectrum of the same layout.
pub trait SpectralOperator {
    fn apply(&self, s: &Spectrum) -> Result<Spectrum>;
}
