use crate::error::{PolarError, Result};
use crate::tensor::PolarTensor;

/// Signed representative of frequency index `m` on an axis of size `n`.
///
/// Indices above `n/2` map to negative frequencies; the Nyquist bin of an
/// even axis stays positive.
pub fn signed_frequency(m: usize, n: usize) -> i64 {
    if 2 * m > n {
        m as i64 - n as i64
    } else {
        m as i64
    }
}

/// A set of angular frequency positions, shared by every radius.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencyMask {
    sizes: Vec<usize>,
    keep: Vec<bool>,
}

impl FrequencyMask {
    /// Keeps `m` with `|signed m| <= band` on every angular axis.
    pub fn low_band(sizes: &[usize], band: usize) -> Self {
        let mut mask = Self::empty(sizes);
        for j in 0..mask.keep.len() {
            mask.keep[j] = mask
                .digits(j)
                .iter()
                .zip(sizes)
                .all(|(&m, &n)| signed_frequency(m, n).unsigned_abs() as usize <= band);
        }
        mask
    }

    pub fn full(sizes: &[usize]) -> Self {
        Self {
            sizes: sizes.to_vec(),
            keep: vec![true; sizes.iter().product()],
        }
    }

    pub fn empty(sizes: &[usize]) -> Self {
        Self {
            sizes: sizes.to_vec(),
            keep: vec![false; sizes.iter().product()],
        }
    }

    /// Builds a mask from angular multi-indices (one digit per angular axis).
    pub fn from_indices(sizes: &[usize], indices: &[Vec<usize>]) -> Result<Self> {
        let mut mask = Self::empty(sizes);
        for idx in indices {
            if idx.len() != sizes.len() || idx.iter().zip(sizes).any(|(&m, &n)| m >= n) {
                return Err(PolarError::InvalidParameter(format!(
                    "mask index {idx:?} out of range for angular sizes {sizes:?}"
                )));
            }
            let flat = mask.flat(idx);
            mask.keep[flat] = true;
        }
        Ok(mask)
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Number of selected positions.
    pub fn count(&self) -> usize {
        self.keep.iter().filter(|&&k| k).count()
    }

    pub fn is_empty(&self) -> bool {
        self.count() == 0
    }

    /// Membership by flat (row-major) angular index.
    pub fn contains(&self, flat: usize) -> bool {
        self.keep[flat]
    }

    /// Selected positions as sorted multi-indices.
    pub fn indices(&self) -> Vec<Vec<usize>> {
        (0..self.keep.len())
            .filter(|&j| self.keep[j])
            .map(|j| self.digits(j))
            .collect()
    }

    pub fn complement(&self) -> Self {
        Self {
            sizes: self.sizes.clone(),
            keep: self.keep.iter().map(|k| !k).collect(),
        }
    }

    pub(crate) fn check(&self, t: &PolarTensor) -> Result<()> {
        let sizes = t.angular_sizes();
        if sizes != self.sizes {
            let pos = sizes
                .iter()
                .zip(&self.sizes)
                .position(|(a, b)| a != b)
                .unwrap_or(sizes.len().min(self.sizes.len()));
            let axis = t.angular_axes().get(pos).copied().unwrap_or(0);
            return Err(PolarError::Conformability {
                axis,
                detail: format!("mask over {:?}, tensor angular sizes {sizes:?}", self.sizes),
            });
        }
        Ok(())
    }

    fn digits(&self, mut flat: usize) -> Vec<usize> {
        let mut d = vec![0; self.sizes.len()];
        for (slot, &n) in d.iter_mut().zip(&self.sizes).rev() {
            *slot = flat % n;
            flat /= n;
        }
        d
    }

    fn flat(&self, digits: &[usize]) -> usize {
        digits.iter().zip(&self.sizes).fold(0, |acc, (&d, &n)| acc * n + d)
    }
}
