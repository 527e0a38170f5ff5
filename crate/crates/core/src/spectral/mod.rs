//! Angular Fourier machinery.
//!
//! Transforms run along every angular axis independently and leave the radial
//! axis alone. The forward transform is unnormalized; the inverse carries
//! `1/N` per axis, so `ifft(fft(a)) == a` and `||fft(a)||^2 == N_theta ||a||^2`.

mod circulant;
mod equivariant;
mod rotor;

pub use circulant::{
    chiara_reality_check, chiara_report, circulant_from_kernel, diagonalize_circulant,
    ChiaraReport, CirculantMatrix, Diagonalization,
};
pub use equivariant::{recover_rotor_expansion, recover_rotor_expansion_with, DEFAULT_PROBES};
pub use rotor::{apply_rotor, rotor_as_kernel, rotor_spectrum, Rotor};

use std::cell::RefCell;
use std::ops::Deref;
use std::sync::Arc;

use rustfft::{Fft, FftDirection, FftPlanner};

use crate::error::{PolarError, Result};
use crate::exec;
use crate::tensor::{Domain, Layout, PolarTensor, C64};

/// Spectral floor below which a coefficient counts as zero for inversion.
pub const DEFAULT_INVERTIBILITY_EPS: f64 = 1e-12;
/// Tikhonov regularizer of the spectral pseudo-inverse.
pub const DEFAULT_PSEUDO_EPS: f64 = 1e-6;

/// A [`PolarTensor`] known to hold angular Fourier coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum(PolarTensor);

impl Spectrum {
    pub fn new(tensor: PolarTensor) -> Result<Self> {
        tensor.require_domain(Domain::Spectral)?;
        Ok(Self(tensor))
    }

    pub fn from_values(shape: Vec<usize>, angular_axes: Vec<usize>, values: Vec<C64>) -> Result<Self> {
        PolarTensor::new(shape, angular_axes, values, Domain::Spectral).map(Self)
    }

    /// The flat unit spectrum, i.e. the transform of the identity kernel.
    pub fn ones(shape: Vec<usize>, angular_axes: Vec<usize>) -> Result<Self> {
        PolarTensor::filled(shape, angular_axes, C64::new(1.0, 0.0), Domain::Spectral).map(Self)
    }

    pub fn zeros(shape: Vec<usize>, angular_axes: Vec<usize>) -> Result<Self> {
        PolarTensor::zeros(shape, angular_axes, Domain::Spectral).map(Self)
    }

    pub fn as_tensor(&self) -> &PolarTensor {
        &self.0
    }

    pub fn into_tensor(self) -> PolarTensor {
        self.0
    }

    pub fn with_values(&self, values: Vec<C64>) -> Result<Self> {
        self.0.with_values(values).map(Self)
    }

    pub fn hadamard(&self, other: &Spectrum) -> Result<Spectrum> {
        self.0.hadamard(&other.0).map(Self)
    }

    pub fn add(&self, other: &Spectrum) -> Result<Spectrum> {
        self.0.add(&other.0).map(Self)
    }

    pub fn scale(&self, lambda: C64) -> Spectrum {
        Self(self.0.scale(lambda))
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Spectrum {
        Self(self.0.map(f))
    }
}

impl Deref for Spectrum {
    type Target = PolarTensor;

    fn deref(&self) -> &PolarTensor {
        &self.0
    }
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(n: usize, direction: FftDirection) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft(n, direction))
}

/// Unnormalized forward DFT of a single vector, `X[k] = sum_n x[n] e^{-i 2 pi nk/N}`.
pub fn dft(x: &[C64]) -> Vec<C64> {
    let mut buf = x.to_vec();
    if !buf.is_empty() {
        plan(buf.len(), FftDirection::Forward).process(&mut buf);
    }
    buf
}

/// Inverse DFT of a single vector, including the `1/N` factor.
pub fn idft(x: &[C64]) -> Vec<C64> {
    let mut buf = x.to_vec();
    if !buf.is_empty() {
        plan(buf.len(), FftDirection::Inverse).process(&mut buf);
        let s = 1.0 / buf.len() as f64;
        buf.iter_mut().for_each(|v| *v *= s);
    }
    buf
}

/// Transforms every angular line of `tensor` in the given direction.
fn transform(tensor: &PolarTensor, direction: FftDirection) -> Vec<C64> {
    let layout = tensor.layout();
    let per = layout.per_radius;
    let mut out = tensor.values().to_vec();
    exec::for_each_chunk_mut(&mut out, per, |_, chunk| transform_chunk(&layout, chunk, direction));
    out
}

fn transform_chunk(layout: &Layout, chunk: &mut [C64], direction: FftDirection) {
    for (axis, (&n, &stride)) in layout
        .angular_sizes
        .iter()
        .zip(&layout.axis_strides)
        .enumerate()
    {
        if n == 1 {
            continue;
        }
        let fft = plan(n, direction);
        let mut line = vec![C64::new(0.0, 0.0); n];
        let mut scratch = vec![C64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
        let scale = 1.0 / n as f64;
        // Line starts: every angular position whose digit on `axis` is zero.
        let starts = (0..layout.angular_len()).filter(|&j| layout.digit(j, axis) == 0);
        for j in starts {
            for &f in &layout.fibers {
                let base = f + layout.angular[j];
                for (t, slot) in line.iter_mut().enumerate() {
                    *slot = chunk[base + t * stride];
                }
                fft.process_with_scratch(&mut line, &mut scratch);
                for (t, v) in line.iter().enumerate() {
                    chunk[base + t * stride] = match direction {
                        FftDirection::Forward => *v,
                        FftDirection::Inverse => *v * scale,
                    };
                }
            }
        }
    }
}

/// Forward DFT along all angular axes.
pub fn fft_angular(a: &PolarTensor) -> Result<Spectrum> {
    a.require_domain(Domain::Spatial)?;
    let values = transform(a, FftDirection::Forward);
    Ok(Spectrum(a.with_values(values)?.with_domain(Domain::Spectral)))
}

/// Inverse DFT along all angular axes (with `1/N_theta` normalization).
pub fn ifft_angular(s: &Spectrum) -> PolarTensor {
    let values = transform(&s.0, FftDirection::Inverse);
    s.0.with_values(values)
        .expect("layout unchanged")
        .with_domain(Domain::Spatial)
}

/// The polar product evaluated as a pointwise product of angular spectra.
pub fn polar_product_fft(a: &PolarTensor, b: &PolarTensor) -> Result<PolarTensor> {
    a.check_conformable(b)?;
    let fa = fft_angular(a)?;
    let fb = fft_angular(b)?;
    Ok(ifft_angular(&fa.hadamard(&fb)?))
}

/// Smallest spectral magnitude and the `[r, m..]` index where it first occurs.
pub fn min_spectral_magnitude(a: &PolarTensor) -> Result<(f64, Vec<usize>)> {
    let s = fft_angular(a)?;
    let (pos, mag) = s
        .values()
        .iter()
        .map(|v| v.norm())
        .enumerate()
        .fold((0, f64::INFINITY), |best, (i, m)| if m < best.1 { (i, m) } else { best });
    Ok((mag, s.unravel(pos)))
}

/// True iff every angular Fourier coefficient has magnitude above `eps`.
pub fn is_invertible(a: &PolarTensor, eps: f64) -> Result<bool> {
    let s = fft_angular(a)?;
    Ok(s.values().iter().all(|v| v.norm() > eps))
}

/// Exact polar-product inverse at the default spectral floor.
pub fn inverse(a: &PolarTensor) -> Result<PolarTensor> {
    inverse_with_eps(a, DEFAULT_INVERTIBILITY_EPS)
}

/// Exact inverse: the inverse transform of the reciprocal spectrum.
pub fn inverse_with_eps(a: &PolarTensor, eps: f64) -> Result<PolarTensor> {
    let s = fft_angular(a)?;
    if let Some(pos) = s.values().iter().position(|v| v.norm() <= eps) {
        return Err(PolarError::SingularSpectrum {
            index: s.unravel(pos),
            magnitude: s.values()[pos].norm(),
            eps,
        });
    }
    let inv = s.map(|v| v.inv());
    Ok(ifft_angular(&inv))
}

/// Regularized reciprocal spectrum `conj(A) / (|A|^2 + eps)`.
pub fn pseudo_inverse_spectrum(a: &PolarTensor, eps: f64) -> Result<Spectrum> {
    if !(eps > 0.0) {
        return Err(PolarError::InvalidParameter(format!("eps must be > 0, got {eps}")));
    }
    Ok(fft_angular(a)?.map(|v| v.conj() / (v.norm_sqr() + eps)))
}

pub fn pseudo_inverse(a: &PolarTensor, eps: f64) -> Result<PolarTensor> {
    Ok(ifft_angular(&pseudo_inverse_spectrum(a, eps)?))
}
