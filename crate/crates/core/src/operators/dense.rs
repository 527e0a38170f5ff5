use crate::error::{PolarError, Result};
use crate::spectral::Spectrum;
use crate::tensor::C64;

use super::SpectralOperator;

/// Per-(radius, frequency) multiplier: a polar operator that is diagonal in
/// the angular Fourier basis, hence commutes with every rotor.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDense {
    weights: Spectrum,
    real_constrained: bool,
}

impl SpectralDense {
    pub fn new(weights: Spectrum) -> Self {
        Self {
            weights,
            real_constrained: false,
        }
    }

    /// Projects the weights onto the real axis and keeps them there.
    pub fn real_constrained(weights: Spectrum) -> Self {
        Self {
            weights: weights.map(|w| C64::new(w.re, 0.0)),
            real_constrained: true,
        }
    }

    pub fn identity(shape: Vec<usize>, angular_axes: Vec<usize>) -> Result<Self> {
        Ok(Self::new(Spectrum::ones(shape, angular_axes)?))
    }

    pub fn weights(&self) -> &Spectrum {
        &self.weights
    }

    pub fn is_real_constrained(&self) -> bool {
        self.real_constrained
    }

    pub fn forward(&self, s: &Spectrum) -> Result<Spectrum> {
        self.weights.hadamard(s).map_err(shape_error)
    }

    /// `dL/dW = g * conj(x)` per entry; imaginary parts dropped when constrained.
    pub fn weight_gradient(&self, s: &Spectrum, upstream: &Spectrum) -> Result<Spectrum> {
        self.weights.check_conformable(s).map_err(shape_error)?;
        let g = upstream.hadamard(&s.map(|x| x.conj())).map_err(shape_error)?;
        Ok(if self.real_constrained {
            g.map(|v| C64::new(v.re, 0.0))
        } else {
            g
        })
    }

    /// `dL/dx = conj(W) * g`.
    pub fn input_gradient(&self, upstream: &Spectrum) -> Result<Spectrum> {
        self.weights.map(|w| w.conj()).hadamard(upstream).map_err(shape_error)
    }

    /// A single layer equivalent to applying `self` then `next`.
    pub fn then(&self, next: &SpectralDense) -> Result<SpectralDense> {
        Ok(Self {
            weights: self.weights.hadamard(&next.weights).map_err(shape_error)?,
            real_constrained: self.real_constrained && next.real_constrained,
        })
    }
}

impl SpectralOperator for SpectralDense {
    fn apply(&self, s: &Spectrum) -> Result<Spectrum> {
        self.forward(s)
    }
}

fn shape_error(e: PolarError) -> PolarError {
    match e {
        PolarError::Conformability { axis, detail } => PolarError::Conformability {
            axis,
            detail: format!("layer weights vs input: {detail}"),
        },
        other => other,
    }
}

pub fn polar_dense_forward(layer: &SpectralDense, s: &Spectrum) -> Result<Spectrum> {
    layer.forward(s)
}

pub fn polar_dense_gradient(layer: &SpectralDense, s: &Spectrum, upstream: &Spectrum) -> Result<Spectrum> {
    layer.weight_gradient(s, upstream)
}
