use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::error::{PolarError, Result};
use crate::tensor::{PolarTensor, C64};

use super::{dft, fft_angular};

/// Dense circulant matrix `C[i][j] = a[(i - j) mod n]`.
///
/// Multiplying a vector by it is the single-radius polar product with `a`.
#[derive(Debug, Clone, PartialEq)]
pub struct CirculantMatrix {
    n: usize,
    entries: Vec<C64>,
}

impl CirculantMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.entries[i * self.n + j]
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    /// The generating kernel, i.e. the first column.
    pub fn kernel(&self) -> Vec<C64> {
        (0..self.n).map(|i| self.get(i, 0)).collect()
    }

    pub fn mul_vec(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.n, "vector length must match matrix size");
        self.entries
            .chunks(self.n)
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn to_matrix(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.n, self.n, &self.entries)
    }
}

pub fn circulant_from_kernel(a: &[C64]) -> CirculantMatrix {
    let n = a.len();
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            entries.push(a[(i + n - j) % n]);
        }
    }
    CirculantMatrix { n, entries }
}

/// Eigen-decomposition of a circulant matrix in the Fourier basis.
#[derive(Debug, Clone)]
pub struct Diagonalization {
    kernel: Vec<C64>,
    pub eigenvalues: Vec<C64>,
}

impl Diagonalization {
    /// Fourier mode `v_m[t] = exp(+i 2 pi m t / n)`, an eigenvector for eigenvalue `m`.
    pub fn mode(&self, m: usize) -> Vec<C64> {
        let n = self.kernel.len();
        (0..n)
            .map(|t| C64::from_polar(1.0, 2.0 * PI * ((m * t) % n) as f64 / n as f64))
            .collect()
    }

    /// `max |F^{-1} diag(eigenvalues) F - C_a|` over all entries.
    pub fn reconstruction_error(&self) -> f64 {
        let n = self.kernel.len();
        let omega = |p: usize| C64::from_polar(1.0, -2.0 * PI * (p % n) as f64 / n as f64);
        let f = DMatrix::from_fn(n, n, |k, l| omega(k * l));
        let f_inv = DMatrix::from_fn(n, n, |k, l| omega(k * l).conj() / n as f64);
        let lambda = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(self.eigenvalues.clone()));
        let rebuilt = f_inv * lambda * f;
        let c = circulant_from_kernel(&self.kernel).to_matrix();
        (rebuilt - c).iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `max_m ||C v_m - lambda_m v_m||_inf`.
    pub fn eigenpair_residual(&self) -> f64 {
        let c = circulant_from_kernel(&self.kernel);
        (0..self.kernel.len())
            .map(|m| {
                let v = self.mode(m);
                c.mul_vec(&v)
                    .iter()
                    .zip(&v)
                    .map(|(cv, vi)| (cv - self.eigenvalues[m] * vi).norm())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }
}

/// Eigenvalues of `C_a` are the DFT of `a`.
pub fn diagonalize_circulant(a: &[C64]) -> Diagonalization {
    Diagonalization {
        kernel: a.to_vec(),
        eigenvalues: dft(a),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiaraReport {
    pub max_asymmetry: f64,
    pub max_imag: f64,
    pub spectrum_max: f64,
    pub real_spectrum: bool,
}

/// Checks that a self-adjoint tensor has a real angular spectrum.
///
/// The imaginary-part bound is `tol * ||A||_inf`. Fails with
/// [`PolarError::NotSelfAdjoint`] when the input is not self-adjoint within `tol`.
pub fn chiara_report(a: &PolarTensor, tol: f64) -> Result<ChiaraReport> {
    let max_asymmetry = a.max_asymmetry()?;
    if max_asymmetry > tol {
        return Err(PolarError::NotSelfAdjoint { max_asymmetry, tol });
    }
    let s = fft_angular(a)?;
    let max_imag = s.values().iter().map(|v| v.im.abs()).fold(0.0, f64::max);
    let spectrum_max = s.max_abs();
    Ok(ChiaraReport {
        max_asymmetry,
        max_imag,
        spectrum_max,
        real_spectrum: max_imag <= tol * spectrum_max,
    })
}

pub fn chiara_reality_check(a: &PolarTensor, tol: f64) -> Result<bool> {
    chiara_report(a, tol).map(|r| r.real_spectrum)
}
