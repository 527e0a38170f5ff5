use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{PolarError, Result};
use crate::spectral::Spectrum;
use crate::tensor::C64;

/// Real symmetric channel-mixing matrix, stored as its upper triangle.
///
/// Applied identically at every `(r, m)`, so it has real eigenvalues in
/// channel space and never couples different frequencies.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMixer {
    channels: usize,
    /// Row-major upper triangle: `(0,0), (0,1), .., (0,n-1), (1,1), ..`.
    upper: Vec<f64>,
}

fn upper_len(n: usize) -> usize {
    n * (n + 1) / 2
}

impl SymmetricMixer {
    pub fn from_upper(channels: usize, upper: Vec<f64>) -> Result<Self> {
        if channels == 0 || upper.len() != upper_len(channels) {
            return Err(PolarError::InvalidParameter(format!(
                "{channels} channels need {} upper-triangle entries, got {}",
                upper_len(channels),
                upper.len()
            )));
        }
        Ok(Self { channels, upper })
    }

    /// Rejects any matrix with `W[i][j] != W[j][i]`.
    pub fn from_matrix(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(PolarError::InvalidParameter("channel-mixing matrix must be square".into()));
        }
        let mut upper = Vec::with_capacity(upper_len(n));
        for i in 0..n {
            for j in i..n {
                if rows[i][j] != rows[j][i] {
                    return Err(PolarError::Asymmetric {
                        row: i,
                        col: j,
                        gap: (rows[i][j] - rows[j][i]).abs(),
                    });
                }
                upper.push(rows[i][j]);
            }
        }
        Self::from_upper(n, upper)
    }

    pub fn identity(channels: usize) -> Self {
        let rows: Vec<Vec<f64>> = (0..channels)
            .map(|i| (0..channels).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        Self::from_matrix(&rows).expect("identity is symmetric")
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    fn slot(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        i * self.channels - i * (i + 1) / 2 + j
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.upper[self.slot(i, j)]
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.channels, self.channels, |i, j| self.get(i, j))
    }

    /// Real eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.matrix()).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    fn check_channels(&self, xs: &[Spectrum]) -> Result<()> {
        if xs.len() != self.channels {
            return Err(PolarError::InvalidParameter(format!(
                "mixer has {} channels, input has {}",
                self.channels,
                xs.len()
            )));
        }
        for x in &xs[1..] {
            xs[0].check_conformable(x)?;
        }
        Ok(())
    }

    fn mix(&self, xs: &[Spectrum]) -> Result<Vec<Spectrum>> {
        self.check_channels(xs)?;
        let len = xs[0].len();
        (0..self.channels)
            .map(|c| {
                let values = (0..len)
                    .map(|i| (0..self.channels).map(|d| self.get(c, d) * xs[d].values()[i]).sum::<C64>())
                    .collect();
                xs[0].with_values(values)
            })
            .collect()
    }

    /// Per `(r, m)`: `out_c = sum_d W[c][d] in_d`.
    pub fn apply(&self, channels: &[Spectrum]) -> Result<Vec<Spectrum>> {
        self.mix(channels)
    }

    /// Gradient w.r.t. the upper-triangle parameters; an off-diagonal
    /// parameter collects both `W[i][j]` and `W[j][i]` contributions.
    pub fn weight_gradient(&self, inputs: &[Spectrum], upstream: &[Spectrum]) -> Result<Vec<f64>> {
        self.check_channels(inputs)?;
        self.check_channels(upstream)?;
        inputs[0].check_conformable(&upstream[0])?;
        let dot = |c: usize, d: usize| -> f64 {
            upstream[c]
                .values()
                .iter()
                .zip(inputs[d].values())
                .map(|(g, x)| (g.conj() * x).re)
                .sum()
        };
        let mut grad = Vec::with_capacity(self.upper.len());
        for i in 0..self.channels {
            for j in i..self.channels {
                grad.push(if i == j { dot(i, i) } else { dot(i, j) + dot(j, i) });
            }
        }
        Ok(grad)
    }

    /// `dL/d in = W^T g = W g`.
    pub fn input_gradient(&self, upstream: &[Spectrum]) -> Result<Vec<Spectrum>> {
        self.mix(upstream)
    }
}

pub fn symmetric_channel_mix(w: &SymmetricMixer, channels: &[Spectrum]) -> Result<Vec<Spectrum>> {
    w.apply(channels)
}
