//! Linear algebra on polar grids.
//!
//! A polar tensor is indexed by a radius and one or more cyclic angles. The
//! polar product convolves circularly along the angles, independently per
//! radius; the angular DFT diagonalizes it, which gives O(N log N) products,
//! an exact invertibility criterion and a regularized pseudo-inverse.
//!
//! - [`tensor`]: the value type and its pointwise / convolutional algebra.
//! - [`spectral`]: angular FFTs, inversion, rotors, circulant realization.
//! - [`operators`]: spectral neural-operator building blocks with gradients.
//! - [`parallel`]: sharded execution with communication accounting.
//! - [`format`]: the JSON container shared by tensors, layers and masks.

pub mod error;
pub mod exec;
pub mod format;
pub mod operators;
pub mod parallel;
pub mod spectral;
pub mod tensor;

pub use error::{PolarError, Result};
pub use spectral::{Rotor, Spectrum};
pub use tensor::{Domain, PolarTensor, C64};
