use crate::error::{PolarError, Result};
use crate::spectral::Spectrum;
use crate::tensor::{Domain, Layout, PolarTensor, C64};

use super::mask::signed_frequency;

/// Lower bound on ring variance before standardization.
pub const VARIANCE_FLOOR: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EqualizeMode {
    /// Per-ring standardization to zero mean, unit variance.
    Statistics,
    /// Per-ring radius-dependent weighting.
    Jacobian,
    /// Statistics, then Jacobian.
    Both,
}

/// `sqrt((r + 1/2) / R)`: follows the sector area, which grows with `r`,
/// normalized so the outermost ring weight stays below one.
pub fn jacobian_weight(r: usize, n_r: usize) -> f64 {
    ((r as f64 + 0.5) / n_r as f64).sqrt()
}

pub fn radial_equalize(a: &PolarTensor, mode: EqualizeMode) -> Result<PolarTensor> {
    radial_equalize_with(a, mode, jacobian_weight)
}

/// Radial equalization with a caller-chosen ring weight `weight(r, N_r)`.
pub fn radial_equalize_with(
    a: &PolarTensor,
    mode: EqualizeMode,
    weight: impl Fn(usize, usize) -> f64,
) -> Result<PolarTensor> {
    if a.domain() != Domain::Spatial {
        return Err(PolarError::Domain {
            expected: Domain::Spatial,
            found: a.domain(),
        });
    }
    let n_r = a.radial_len();
    let per = a.per_radius();
    let mut out = a.values().to_vec();
    for (r, ring) in out.chunks_mut(per).enumerate() {
        if matches!(mode, EqualizeMode::Statistics | EqualizeMode::Both) {
            let mean = ring.iter().sum::<C64>() / per as f64;
            let var = ring.iter().map(|v| (v - mean).norm_sqr()).sum::<f64>() / per as f64;
            let std = var.max(VARIANCE_FLOOR).sqrt();
            ring.iter_mut().for_each(|v| *v = (*v - mean) / std);
        }
        if matches!(mode, EqualizeMode::Jacobian | EqualizeMode::Both) {
            let w = weight(r, n_r);
            ring.iter_mut().for_each(|v| *v *= w);
        }
    }
    a.with_values(out)
}

/// Which coefficients share one RMS statistic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NormScope {
    /// All angular frequencies of one radius (per non-angular fiber).
    #[default]
    PerRadius,
    /// Every coefficient of the tensor.
    Global,
    /// Per radius, split by the sign of the first angular frequency. The DC
    /// and Nyquist bins count as positive.
    FrequencySign,
}

fn groups(layout: &Layout, scope: NormScope) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for r in 0..layout.radial {
        for &f in &layout.fibers {
            let base = r * layout.per_radius + f;
            match scope {
                NormScope::PerRadius | NormScope::Global => {
                    out.push(layout.angular.iter().map(|&a| base + a).collect());
                }
                NormScope::FrequencySign => {
                    let n0 = layout.angular_sizes[0];
                    let (pos, neg): (Vec<_>, Vec<_>) = layout
                        .angular
                        .iter()
                        .enumerate()
                        .partition(|(j, _)| signed_frequency(layout.digit(*j, 0), n0) >= 0);
                    for g in [pos, neg] {
                        if !g.is_empty() {
                            out.push(g.into_iter().map(|(_, &a)| base + a).collect());
                        }
                    }
                }
            }
        }
    }
    if scope == NormScope::Global {
        return vec![out.concat()];
    }
    out
}

fn rms_denominator(values: &[C64], group: &[usize], eps: f64) -> f64 {
    let mean_sq = group.iter().map(|&i| values[i].norm_sqr()).sum::<f64>() / group.len() as f64;
    (mean_sq + eps).sqrt()
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps >= 0.0) {
        return Err(PolarError::InvalidParameter(format!("eps must be >= 0, got {eps}")));
    }
    Ok(())
}

/// Divides each group by `sqrt(mean |z|^2 + eps)`. A group whose denominator
/// is zero (all-zero with `eps = 0`) is left at zero.
pub fn spectral_rms_norm(s: &Spectrum, scope: NormScope, eps: f64) -> Result<Spectrum> {
    check_eps(eps)?;
    let mut out = s.values().to_vec();
    for g in groups(&s.layout(), scope) {
        let d = rms_denominator(s.values(), &g, eps);
        for &i in &g {
            out[i] = if d > 0.0 { s.values()[i] / d } else { C64::new(0.0, 0.0) };
        }
    }
    s.with_values(out)
}

/// Input gradient of [`spectral_rms_norm`]: per group,
/// `g / d - z * sum_j Re(conj(g_j) z_j) / (n d^3)`.
pub fn spectral_rms_norm_gradient(s: &Spectrum, scope: NormScope, eps: f64, upstream: &Spectrum) -> Result<Spectrum> {
    check_eps(eps)?;
    s.check_conformable(upstream)?;
    let (z, g) = (s.values(), upstream.values());
    let mut out = vec![C64::new(0.0, 0.0); z.len()];
    for grp in groups(&s.layout(), scope) {
        let d = rms_denominator(z, &grp, eps);
        if d == 0.0 {
            continue;
        }
        let n = grp.len() as f64;
        let c: f64 = grp.iter().map(|&i| (g[i].conj() * z[i]).re).sum();
        for &i in &grp {
            out[i] = g[i] / d - z[i] * (c / (n * d * d * d));
        }
    }
    s.with_values(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn constant_rings_vanish() {
        let a = PolarTensor::from_rows(&[[3.0; 4], [7.0; 4]]).unwrap();
        let out = radial_equalize(&a, EqualizeMode::Statistics).unwrap();
        assert!(out.max_abs() == 0.0);
    }

    #[test]
    fn rings_standardize_by_population_std() {
        let a = PolarTensor::from_rows(&[[1.0, 3.0], [10.0, 30.0]]).unwrap();
        let out = radial_equalize(&a, EqualizeMode::Statistics).unwrap();
        let want = PolarTensor::from_rows(&[[-1.0, 1.0], [-1.0, 1.0]]).unwrap();
        assert!(out.max_abs_diff(&want).unwrap() < 1e-15);
    }

    #[test]
    fn jacobian_weights() {
        let a = PolarTensor::from_rows(&[[1.0, 2.0], [1.0, 2.0]]).unwrap();
        let out = radial_equalize(&a, EqualizeMode::Jacobian).unwrap();
        let (w0, w1) = (0.25f64.sqrt(), 0.75f64.sqrt());
        let want = PolarTensor::from_rows(&[[w0, 2.0 * w0], [w1, 2.0 * w1]]).unwrap();
        assert!(out.max_abs_diff(&want).unwrap() < 1e-15);
        let both = radial_equalize(&PolarTensor::from_rows(&[[1.0, 3.0], [10.0, 30.0]]).unwrap(), EqualizeMode::Both).unwrap();
        assert!((both.values()[3].re - w1).abs() < 1e-15);
        let custom = radial_equalize_with(&a, EqualizeMode::Jacobian, |_, _| 2.0).unwrap();
        assert_eq!(custom, a.scale(c(2.0, 0.0)));
    }

    #[test]
    fn rms_hand_example() {
        let s = Spectrum::from_values(vec![1, 4], vec![1], vec![c(3.0, 4.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        let out = spectral_rms_norm(&s, NormScope::PerRadius, 0.0).unwrap();
        assert!((out.values()[0] - c(1.2, 1.6)).norm() < 1e-15);
    }

    #[test]
    fn rms_unit_input_unchanged_and_scale_invariant() {
        let s = Spectrum::from_values(vec![2, 2], vec![1], vec![c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.6, 0.8)]).unwrap();
        let out = spectral_rms_norm(&s, NormScope::PerRadius, 0.0).unwrap();
        assert!(out.max_abs_diff(&s).unwrap() < 1e-15);
        let eps = 1e-10;
        let a = spectral_rms_norm(&s, NormScope::PerRadius, eps).unwrap();
        let b = spectral_rms_norm(&s.scale(c(2.0, 0.0)), NormScope::PerRadius, eps).unwrap();
        assert!(a.max_abs_diff(&b).unwrap() < eps);
    }

    #[test]
    fn zero_group_stays_zero() {
        let s = Spectrum::zeros(vec![1, 4], vec![1]).unwrap();
        let out = spectral_rms_norm(&s, NormScope::Global, 0.0).unwrap();
        assert_eq!(out, s);
        assert!(spectral_rms_norm(&s, NormScope::Global, -1.0).is_err());
    }

    #[test]
    fn sign_groups_split_frequencies() {
        let layout = Spectrum::zeros(vec![1, 4], vec![1]).unwrap().layout();
        let g = groups(&layout, NormScope::FrequencySign);
        assert_eq!(g, vec![vec![0, 1, 2], vec![3]]);
        let g = groups(&Spectrum::zeros(vec![2, 3], vec![1]).unwrap().layout(), NormScope::Global);
        assert_eq!(g, vec![vec![0, 1, 2, 3, 4, 5]]);
    }
}
