//! The polar tensor value type and its pointwise / convolutional algebra.
//!
//! A [`PolarTensor`] is a dense complex array whose axis 0 is radial and whose
//! `angular_axes` are cyclic. Any further axes (neither radial nor angular) are
//! carried along untouched, like batch dimensions. Values are stored row-major,
//! so every radius occupies one contiguous chunk.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{PolarError, Result};
use crate::exec;

pub type C64 = Complex64;

/// Which basis the values of a tensor are expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Spatial,
    Spectral,
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Spatial => f.write_str("spatial"),
            Domain::Spectral => f.write_str("spectral"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolarTensor {
    shape: Vec<usize>,
    angular_axes: Vec<usize>,
    values: Vec<C64>,
    domain: Domain,
}

impl PolarTensor {
    pub fn new(
        shape: Vec<usize>,
        angular_axes: Vec<usize>,
        values: Vec<C64>,
        domain: Domain,
    ) -> Result<Self> {
        validate_shape(&shape, &angular_axes)?;
        let expected: usize = shape.iter().product();
        if values.len() != expected {
            return Err(PolarError::InvalidShape(format!(
                "shape {shape:?} needs {expected} values, got {}",
                values.len()
            )));
        }
        Ok(Self {
            shape,
            angular_axes,
            values,
            domain,
        })
    }

    /// Promotes real values to complex with zero imaginary part.
    pub fn from_real(shape: Vec<usize>, angular_axes: Vec<usize>, values: &[f64]) -> Result<Self> {
        let values = values.iter().map(|&v| C64::new(v, 0.0)).collect();
        Self::new(shape, angular_axes, values, Domain::Spatial)
    }

    /// Builds an `N_r x N_theta` spatial tensor from real rows (inner radius first).
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n_r = rows.len();
        let n_t = rows.first().map_or(0, |r| r.as_ref().len());
        if rows.iter().any(|r| r.as_ref().len() != n_t) {
            return Err(PolarError::InvalidShape("ragged rows".into()));
        }
        let flat: Vec<f64> = rows.iter().flat_map(|r| r.as_ref().iter().copied()).collect();
        Self::from_real(vec![n_r, n_t], vec![1], &flat)
    }

    /// Single-radius tensor holding one angular vector.
    pub fn from_angular(values: &[C64]) -> Result<Self> {
        Self::new(vec![1, values.len()], vec![1], values.to_vec(), Domain::Spatial)
    }

    pub fn zeros(shape: Vec<usize>, angular_axes: Vec<usize>, domain: Domain) -> Result<Self> {
        let n = shape.iter().product();
        Self::new(shape, angular_axes, vec![C64::new(0.0, 0.0); n], domain)
    }

    pub fn filled(
        shape: Vec<usize>,
        angular_axes: Vec<usize>,
        value: C64,
        domain: Domain,
    ) -> Result<Self> {
        let n = shape.iter().product();
        Self::new(shape, angular_axes, vec![value; n], domain)
    }

    /// The polar identity kernel: 1 at angular index 0 on every radius, 0 elsewhere.
    pub fn identity_kernel(shape: Vec<usize>, angular_axes: Vec<usize>) -> Result<Self> {
        let mut e = Self::zeros(shape, angular_axes, Domain::Spatial)?;
        let layout = e.layout();
        let per = layout.per_radius;
        for r in 0..layout.radial {
            for &f in &layout.fibers {
                e.values[r * per + f] = C64::new(1.0, 0.0);
            }
        }
        Ok(e)
    }

    /// A tensor with the same shape, axes and domain but new values.
    pub fn with_values(&self, values: Vec<C64>) -> Result<Self> {
        Self::new(self.shape.clone(), self.angular_axes.clone(), values, self.domain)
    }

    pub(crate) fn with_domain(mut self, domain: Domain) -> Self {
        self.domain = domain;
        self
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn angular_axes(&self) -> &[usize] {
        &self.angular_axes
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<C64> {
        self.values
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Number of radii, `N_r`.
    pub fn radial_len(&self) -> usize {
        self.shape[0]
    }

    /// Sizes of the angular axes, in `angular_axes` order.
    pub fn angular_sizes(&self) -> Vec<usize> {
        self.angular_axes.iter().map(|&a| self.shape[a]).collect()
    }

    /// Number of elements belonging to one radius.
    pub fn per_radius(&self) -> usize {
        self.shape[1..].iter().product()
    }

    /// The contiguous block of values at radius `r`.
    pub fn radius(&self, r: usize) -> &[C64] {
        let per = self.per_radius();
        &self.values[r * per..(r + 1) * per]
    }

    pub fn get(&self, index: &[usize]) -> Option<C64> {
        if index.len() != self.shape.len() || index.iter().zip(&self.shape).any(|(i, n)| i >= n) {
            return None;
        }
        let mut off = 0;
        for (i, n) in index.iter().zip(&self.shape) {
            off = off * n + i;
        }
        Some(self.values[off])
    }

    /// Row-major multi-index of a flat offset.
    pub fn unravel(&self, mut offset: usize) -> Vec<usize> {
        let mut idx = vec![0; self.shape.len()];
        for (slot, &n) in idx.iter_mut().zip(&self.shape).rev() {
            *slot = offset % n;
            offset /= n;
        }
        idx
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.values.iter().all(|v| v.im.abs() <= tol)
    }

    pub fn real_parts(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `max_i |self[i] - other[i]|`, requiring identical shape and axes.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_layout(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        Self {
            values: self.values.iter().map(|&v| f(v)).collect(),
            ..self.clone()
        }
    }

    pub(crate) fn layout(&self) -> Layout {
        Layout::new(&self.shape, &self.angular_axes)
    }

    fn check_layout(&self, other: &Self) -> Result<()> {
        if self.shape.len() != other.shape.len() {
            return Err(PolarError::Conformability {
                axis: self.shape.len().min(other.shape.len()),
                detail: format!("rank {} vs {}", self.shape.len(), other.shape.len()),
            });
        }
        if let Some(axis) = (0..self.shape.len()).find(|&i| self.shape[i] != other.shape[i]) {
            return Err(PolarError::Conformability {
                axis,
                detail: format!("size {} vs {}", self.shape[axis], other.shape[axis]),
            });
        }
        if self.angular_axes != other.angular_axes {
            let axis = self
                .angular_axes
                .iter()
                .zip(&other.angular_axes)
                .find(|(a, b)| a != b)
                .map_or_else(
                    || *self.angular_axes.iter().chain(&other.angular_axes).max().unwrap_or(&0),
                    |(a, b)| *a.min(b),
                );
            return Err(PolarError::Conformability {
                axis,
                detail: format!(
                    "angular axes {:?} vs {:?}",
                    self.angular_axes, other.angular_axes
                ),
            });
        }
        Ok(())
    }

    /// Same shape, angular axes and domain.
    pub fn check_conformable(&self, other: &Self) -> Result<()> {
        self.check_layout(other)?;
        if self.domain != other.domain {
            return Err(PolarError::Domain {
                expected: self.domain,
                found: other.domain,
            });
        }
        Ok(())
    }

    pub(crate) fn require_domain(&self, expected: Domain) -> Result<()> {
        if self.domain != expected {
            return Err(PolarError::Domain {
                expected,
                found: self.domain,
            });
        }
        Ok(())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(C64, C64) -> C64) -> Result<Self> {
        self.check_conformable(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(Self {
            values,
            ..self.clone()
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, lambda: C64) -> Self {
        self.map(|v| lambda * v)
    }

    pub fn hadamard(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    /// Circular convolution along every angular axis, per radius, by direct summation.
    ///
    /// This is the O(N_r N_theta^2) reference path.
    pub fn polar_product_naive(&self, other: &Self) -> Result<Self> {
        self.polar_product_naive_counted(other).map(|(t, _)| t)
    }

    /// [`Self::polar_product_naive`] plus the number of complex multiplies performed.
    pub fn polar_product_naive_counted(&self, other: &Self) -> Result<(Self, u64)> {
        self.check_conformable(other)?;
        self.require_domain(Domain::Spatial)?;
        let layout = self.layout();
        let per = layout.per_radius;
        let muls = AtomicU64::new(0);
        let mut out = vec![C64::new(0.0, 0.0); self.values.len()];
        exec::for_each_chunk_mut(&mut out, per, |r, dst| {
            let a = &self.values[r * per..(r + 1) * per];
            let b = &other.values[r * per..(r + 1) * per];
            let n = layout.convolve_naive(a, b, dst);
            muls.fetch_add(n, Ordering::Relaxed);
        });
        Ok((
            Self {
                values: out,
                ..self.clone()
            },
            muls.into_inner(),
        ))
    }

    /// Reflects every angular index, `theta -> -theta mod N_theta`.
    pub fn polar_transpose(&self) -> Result<Self> {
        self.require_domain(Domain::Spatial)?;
        let perm = self.layout().angular_permutation(|d, n| (n - d) % n);
        Ok(self.permute_angular(&perm, false))
    }

    /// Angular reflection composed with complex conjugation.
    pub fn polar_adjoint(&self) -> Result<Self> {
        self.require_domain(Domain::Spatial)?;
        let perm = self.layout().angular_permutation(|d, n| (n - d) % n);
        Ok(self.permute_angular(&perm, true))
    }

    /// `out[.., theta] = self[.., perm[theta]]` within every fiber.
    pub(crate) fn permute_angular(&self, perm: &[usize], conjugate: bool) -> Self {
        let layout = self.layout();
        let per = layout.per_radius;
        let mut out = vec![C64::new(0.0, 0.0); self.values.len()];
        exec::for_each_chunk_mut(&mut out, per, |r, dst| {
            let src = &self.values[r * per..(r + 1) * per];
            for &f in &layout.fibers {
                for (j, &p) in perm.iter().enumerate() {
                    let v = src[f + layout.angular[p]];
                    dst[f + layout.angular[j]] = if conjugate { v.conj() } else { v };
                }
            }
        });
        Self {
            values: out,
            ..self.clone()
        }
    }

    /// `max |a - a^adjoint|`.
    pub fn max_asymmetry(&self) -> Result<f64> {
        let adj = self.polar_adjoint()?;
        self.max_abs_diff(&adj)
    }

    pub fn is_self_adjoint(&self, tol: f64) -> Result<bool> {
        Ok(self.max_asymmetry()? <= tol)
    }

    /// `a + a^T`, which is self-adjoint for real `a`.
    pub fn symmetric_sum(&self) -> Result<Self> {
        self.add(&self.polar_transpose()?)
    }

    /// Frobenius inner product, conjugate-linear in `self`.
    pub fn inner_product(&self, other: &Self) -> Result<C64> {
        self.check_conformable(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }
}

fn validate_shape(shape: &[usize], angular_axes: &[usize]) -> Result<()> {
    if shape.len() < 2 {
        return Err(PolarError::InvalidShape(format!(
            "need a radial axis and at least one angular axis, got shape {shape:?}"
        )));
    }
    if let Some(axis) = shape.iter().position(|&n| n == 0) {
        return Err(PolarError::InvalidShape(format!("axis {axis} has size 0")));
    }
    if angular_axes.is_empty() {
        return Err(PolarError::InvalidShape("no angular axes".into()));
    }
    for (i, &ax) in angular_axes.iter().enumerate() {
        if ax == 0 {
            return Err(PolarError::InvalidShape("axis 0 is radial, not angular".into()));
        }
        if ax >= shape.len() {
            return Err(PolarError::InvalidShape(format!(
                "angular axis {ax} out of range for rank {}",
                shape.len()
            )));
        }
        if i > 0 && angular_axes[i - 1] >= ax {
            return Err(PolarError::InvalidShape(format!(
                "angular axes must be strictly increasing, got {angular_axes:?}"
            )));
        }
    }
    Ok(())
}

/// Offsets within one radius chunk.
///
/// An element is addressed as `fibers[f] + angular[j]`, where `f` enumerates the
/// non-angular axes and `j` is the row-major flat index over the angular axes.
#[derive(Debug, Clone)]
pub(crate) struct Layout {
    pub radial: usize,
    pub per_radius: usize,
    pub fibers: Vec<usize>,
    pub angular: Vec<usize>,
    pub angular_sizes: Vec<usize>,
    /// Per angular axis, the in-chunk memory stride.
    pub axis_strides: Vec<usize>,
}

impl Layout {
    pub fn new(shape: &[usize], angular_axes: &[usize]) -> Self {
        let rank = shape.len();
        let mut strides = vec![1usize; rank];
        for i in (0..rank.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * shape[i + 1];
        }
        let other: Vec<usize> = (1..rank).filter(|a| !angular_axes.contains(a)).collect();
        let offsets = |axes: &[usize]| -> Vec<usize> {
            let mut offs = vec![0usize];
            for &ax in axes {
                let mut next = Vec::with_capacity(offs.len() * shape[ax]);
                for &o in &offs {
                    for i in 0..shape[ax] {
                        next.push(o + i * strides[ax]);
                    }
                }
                offs = next;
            }
            offs
        };
        Self {
            radial: shape[0],
            per_radius: shape[1..].iter().product(),
            fibers: offsets(&other),
            angular: offsets(angular_axes),
            angular_sizes: angular_axes.iter().map(|&a| shape[a]).collect(),
            axis_strides: angular_axes.iter().map(|&a| strides[a]).collect(),
        }
    }

    pub fn angular_len(&self) -> usize {
        self.angular.len()
    }

    pub fn digits(&self, mut flat: usize) -> Vec<usize> {
        let mut d = vec![0; self.angular_sizes.len()];
        for (slot, &n) in d.iter_mut().zip(&self.angular_sizes).rev() {
            *slot = flat % n;
            flat /= n;
        }
        d
    }

    /// The `axis`-th digit of a flat angular index, without allocating.
    pub fn digit(&self, flat: usize, axis: usize) -> usize {
        let inner: usize = self.angular_sizes[axis + 1..].iter().product();
        (flat / inner) % self.angular_sizes[axis]
    }

    pub fn flat(&self, digits: &[usize]) -> usize {
        digits
            .iter()
            .zip(&self.angular_sizes)
            .fold(0, |acc, (&d, &n)| acc * n + d)
    }

    /// Permutation of flat angular indices obtained by mapping each digit.
    pub fn angular_permutation(&self, f: impl Fn(usize, usize) -> usize) -> Vec<usize> {
        self.angular_permutation_by_axis(|_, d, n| f(d, n))
    }

    /// Like [`Self::angular_permutation`] but the digit map also sees the axis position.
    pub fn angular_permutation_by_axis(&self, f: impl Fn(usize, usize, usize) -> usize) -> Vec<usize> {
        (0..self.angular_len())
            .map(|j| {
                let d: Vec<usize> = self
                    .digits(j)
                    .iter()
                    .zip(&self.angular_sizes)
                    .enumerate()
                    .map(|(axis, (&d, &n))| f(axis, d, n))
                    .collect();
                self.flat(&d)
            })
            .collect()
    }

    /// Direct circular convolution of one radius chunk; returns the multiply count.
    fn convolve_naive(&self, a: &[C64], b: &[C64], dst: &mut [C64]) -> u64 {
        let n = self.angular_len();
        let mut muls = 0u64;
        if self.angular_sizes.len() == 1 {
            let s = self.axis_strides[0];
            for &f in &self.fibers {
                let at = |k: usize| a[f + k * s];
                let bt = |k: usize| b[f + k * s];
                for theta in 0..n {
                    let mut acc = C64::new(0.0, 0.0);
                    for k in 0..=theta {
                        acc += at(k) * bt(theta - k);
                    }
                    for k in theta + 1..n {
                        acc += at(k) * bt(theta + n - k);
                    }
                    dst[f + theta * s] = acc;
                    muls += n as u64;
                }
            }
            return muls;
        }
        // Nested sums over the torus: per-axis tables of (theta_j - k_j) mod n_j.
        let diff: Vec<Vec<usize>> = self
            .angular_sizes
            .iter()
            .zip(&self.axis_strides)
            .map(|(&nj, &sj)| {
                (0..nj * nj)
                    .map(|t| ((t / nj + nj - t % nj) % nj) * sj)
                    .collect()
            })
            .collect();
        let all_digits: Vec<Vec<usize>> = (0..n).map(|j| self.digits(j)).collect();
        for &f in &self.fibers {
            for (theta, td) in all_digits.iter().enumerate() {
                let mut acc = C64::new(0.0, 0.0);
                for (k, kd) in all_digits.iter().enumerate() {
                    let off: usize = td
                        .iter()
                        .zip(kd)
                        .zip(self.angular_sizes.iter().zip(&diff))
                        .map(|((&t, &kk), (&nj, tab))| tab[t * nj + kk])
                        .sum();
                    acc += a[f + self.angular[k]] * b[f + off];
                }
                dst[f + self.angular[theta]] = acc;
                muls += n as u64;
            }
        }
        muls
    }
}
