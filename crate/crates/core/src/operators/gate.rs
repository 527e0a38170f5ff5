use crate::error::{PolarError, Result};
use crate::spectral::{dft, idft, Spectrum};
use crate::tensor::{Layout, C64};

use super::mask::{signed_frequency, FrequencyMask};

pub const DEFAULT_TUKEY_ALPHA: f64 = 0.5;
const DEFAULT_STRENGTH: f64 = 1.0;
/// The target response is evaluated at `TARGET_SPAN * cos(theta)`.
const TARGET_SPAN: f64 = 3.0;

/// One-sided Tukey taper on `x = |m| / M` in `[0, 1]`.
///
/// Flat up to `1 - alpha`, then a raised-cosine roll-off reaching zero at
/// `x = 1`. `alpha = 0` is the rectangular window.
pub fn tukey_weight(x: f64, alpha: f64) -> f64 {
    if alpha <= 0.0 || x <= 1.0 - alpha {
        return 1.0;
    }
    if x >= 1.0 {
        return 0.0;
    }
    0.5 * (1.0 + (std::f64::consts::PI * (x - 1.0 + alpha) / alpha).cos())
}

/// Periodic SiLU-like profile `u / (1 + e^{-u})` with `u = 3 cos(theta)`.
pub fn gate_target_response(theta: f64) -> f64 {
    let u = TARGET_SPAN * theta.cos();
    u / (1.0 + (-u).exp())
}

/// Band-limited circular convolution along angular frequency, blended
/// residually: `z_out = (1 - s) z + s G(z)` on the masked bins.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicGate {
    n_theta: usize,
    band: usize,
    alpha_w: f64,
    strength: f64,
    real_constrained: bool,
    /// Coefficients `W_m` indexed by `m mod n_theta`; zero outside `|m| <= band`.
    kernel: Vec<C64>,
}

impl PeriodicGate {
    /// Gate with caller-supplied coefficients (indexed by `m mod n_theta`).
    pub fn from_coefficients(kernel: Vec<C64>, band: usize, strength: f64, real_constrained: bool) -> Result<Self> {
        let n_theta = kernel.len();
        check_band(band, n_theta)?;
        check_strength(strength)?;
        if let Some(m) = (0..n_theta).find(|&m| !in_band(m, n_theta, band) && kernel[m] != C64::new(0.0, 0.0)) {
            return Err(PolarError::InvalidParameter(format!(
                "coefficient at m = {} lies outside the band |m| <= {band}",
                signed_frequency(m, n_theta)
            )));
        }
        let kernel = if real_constrained {
            kernel.into_iter().map(|w| C64::new(w.re, 0.0)).collect()
        } else {
            kernel
        };
        Ok(Self {
            n_theta,
            band,
            alpha_w: 0.0,
            strength,
            real_constrained,
            kernel,
        })
    }

    /// Records the taper parameter the coefficients were built with.
    pub(crate) fn with_alpha_w(mut self, alpha_w: f64) -> Self {
        self.alpha_w = alpha_w;
        self
    }

    pub fn with_strength(mut self, strength: f64) -> Result<Self> {
        check_strength(strength)?;
        self.strength = strength;
        Ok(self)
    }

    /// Same band and flags, new coefficients.
    pub fn with_kernel(&self, kernel: Vec<C64>) -> Result<Self> {
        if kernel.len() != self.n_theta {
            return Err(PolarError::InvalidParameter(format!(
                "expected {} coefficients, got {}",
                self.n_theta,
                kernel.len()
            )));
        }
        let mut g = Self::from_coefficients(kernel, self.band, self.strength, self.real_constrained)?;
        g.alpha_w = self.alpha_w;
        Ok(g)
    }

    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    pub fn band(&self) -> usize {
        self.band
    }

    pub fn alpha_w(&self) -> f64 {
        self.alpha_w
    }

    pub fn strength(&self) -> f64 {
        self.strength
    }

    pub fn is_real_constrained(&self) -> bool {
        self.real_constrained
    }

    pub fn kernel(&self) -> &[C64] {
        &self.kernel
    }

    /// `W(theta)`: inverse transform of the zero-padded coefficients.
    pub fn spatial_kernel(&self) -> Vec<C64> {
        idft(&self.kernel)
    }

    /// `sum_m |W_m|`.
    pub fn kernel_l1(&self) -> f64 {
        self.kernel.iter().map(|w| w.norm()).sum()
    }

    fn band_indices(&self) -> Vec<usize> {
        (0..self.n_theta)
            .filter(|&m| in_band(m, self.n_theta, self.band))
            .collect()
    }

    fn check_input(&self, s: &Spectrum, mask: &FrequencyMask) -> Result<()> {
        mask.check(s)?;
        let axis = s.angular_axes()[0];
        if s.shape()[axis] != self.n_theta {
            return Err(PolarError::Conformability {
                axis,
                detail: format!("gate built for N_theta = {}, input has {}", self.n_theta, s.shape()[axis]),
            });
        }
        Ok(())
    }

    /// `Y_k = (1/N) sum_m W_m X_{k-m}` along one line.
    fn convolve_line(&self, band: &[usize], x: &[C64]) -> Vec<C64> {
        let n = self.n_theta;
        let inv_n = 1.0 / n as f64;
        (0..n)
            .map(|k| band.iter().map(|&m| self.kernel[m] * x[(k + n - m) % n]).sum::<C64>() * inv_n)
            .collect()
    }

    pub fn apply(&self, s: &Spectrum, mask: &FrequencyMask) -> Result<Spectrum> {
        self.check_input(s, mask)?;
        let band = self.band_indices();
        let sv = self.strength;
        let mut out = s.values().to_vec();
        let layout = s.layout();
        for (base, line) in gate_lines(&layout) {
            let x: Vec<C64> = line.iter().map(|&(o, _)| s.values()[base + o]).collect();
            let y = self.convolve_line(&band, &x);
            for (k, &(o, flat)) in line.iter().enumerate() {
                if mask.contains(flat) {
                    out[base + o] = (1.0 - sv) * x[k] + sv * y[k];
                }
            }
        }
        s.with_values(out)
    }

    /// Gradients of a real loss w.r.t. the coefficients and the strength.
    pub fn gradient(&self, s: &Spectrum, mask: &FrequencyMask, upstream: &Spectrum) -> Result<GateGradient> {
        self.check_input(s, mask)?;
        s.check_conformable(upstream)?;
        let band = self.band_indices();
        let n = self.n_theta;
        let scale = self.strength / n as f64;
        let mut kernel = vec![C64::new(0.0, 0.0); n];
        let mut strength = 0.0;
        let layout = s.layout();
        for (base, line) in gate_lines(&layout) {
            let x: Vec<C64> = line.iter().map(|&(o, _)| s.values()[base + o]).collect();
            let y = self.convolve_line(&band, &x);
            for (k, &(o, flat)) in line.iter().enumerate() {
                if !mask.contains(flat) {
                    continue;
                }
                let g = upstream.values()[base + o];
                strength += (g.conj() * (y[k] - x[k])).re;
                for &m in &band {
                    kernel[m] += g * (scale * x[(k + n - m) % n]).conj();
                }
            }
        }
        if self.real_constrained {
            kernel.iter_mut().for_each(|v| v.im = 0.0);
        }
        Ok(GateGradient { kernel, strength })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GateGradient {
    /// Indexed like [`PeriodicGate::kernel`]; zero outside the band.
    pub kernel: Vec<C64>,
    pub strength: f64,
}

/// `(absolute base, [(offset within line, flat angular index)])` for every
/// line along the first angular axis.
fn gate_lines(layout: &Layout) -> Vec<(usize, Vec<(usize, usize)>)> {
    let n = layout.angular_sizes[0];
    let stride = layout.axis_strides[0];
    let inner: usize = layout.angular_sizes[1..].iter().product();
    let mut lines = Vec::new();
    for r in 0..layout.radial {
        for &f in &layout.fibers {
            for j in 0..inner {
                let base = r * layout.per_radius + f + layout.angular[j];
                lines.push((base, (0..n).map(|t| (t * stride, j + t * inner)).collect()));
            }
        }
    }
    lines
}

fn in_band(m: usize, n: usize, band: usize) -> bool {
    signed_frequency(m, n).unsigned_abs() as usize <= band
}

fn check_band(band: usize, n_theta: usize) -> Result<()> {
    if n_theta == 0 || 2 * band > n_theta {
        return Err(PolarError::InvalidParameter(format!(
            "band limit {band} out of range for N_theta = {n_theta} (need 0 <= M <= N_theta/2)"
        )));
    }
    Ok(())
}

fn check_strength(s: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&s) {
        return Err(PolarError::InvalidParameter(format!("gate strength {s} not in [0, 1]")));
    }
    Ok(())
}

/// Builds the fixed gate: the SiLU-like periodic target, truncated to
/// `|m| <= band` and tapered by a Tukey window on `|m| / band`.
pub fn build_gate_kernel(band: usize, alpha_w: f64, n_theta: usize, real_constrained: bool) -> Result<PeriodicGate> {
    check_band(band, n_theta)?;
    if !(0.0..=1.0).contains(&alpha_w) {
        return Err(PolarError::InvalidParameter(format!("Tukey alpha {alpha_w} not in [0, 1]")));
    }
    let samples: Vec<C64> = (0..n_theta)
        .map(|j| {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / n_theta as f64;
            C64::new(gate_target_response(theta), 0.0)
        })
        .collect();
    let full = dft(&samples);
    let kernel = full
        .iter()
        .enumerate()
        .map(|(m, &w)| {
            let sm = signed_frequency(m, n_theta).unsigned_abs() as usize;
            if sm > band {
                C64::new(0.0, 0.0)
            } else if band == 0 {
                w
            } else {
                w * tukey_weight(sm as f64 / band as f64, alpha_w)
            }
        })
        .collect();
    let mut gate = PeriodicGate::from_coefficients(kernel, band, DEFAULT_STRENGTH, real_constrained)?;
    gate.alpha_w = alpha_w;
    Ok(gate)
}

pub fn gate_apply(gate: &PeriodicGate, s: &Spectrum, low_mask: &FrequencyMask) -> Result<Spectrum> {
    gate.apply(s, low_mask)
}

/// `||post restricted to mask|| / ||pre restricted to mask||`.
///
/// Returns `+inf` when the masked pre-energy is zero but post is not, and
/// `1.0` when both are zero.
pub fn energy_ratio(pre: &Spectrum, post: &Spectrum, low_mask: &FrequencyMask) -> Result<f64> {
    pre.check_conformable(post)?;
    low_mask.check(pre)?;
    let layout = pre.layout();
    let masked_norm = |s: &Spectrum| -> f64 {
        let mut acc = 0.0;
        for r in 0..layout.radial {
            for &f in &layout.fibers {
                for (j, &a) in layout.angular.iter().enumerate() {
                    if low_mask.contains(j) {
                        acc += s.values()[r * layout.per_radius + f + a].norm_sqr();
                    }
                }
            }
        }
        acc.sqrt()
    };
    let (num, den) = (masked_norm(post), masked_norm(pre));
    Ok(match (num == 0.0, den == 0.0) {
        (true, true) => 1.0,
        (false, true) => f64::INFINITY,
        _ => num / den,
    })
}
