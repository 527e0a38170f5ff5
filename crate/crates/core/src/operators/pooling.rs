use crate::error::{PolarError, Result};
use crate::spectral::Spectrum;

use super::mask::FrequencyMask;

/// Floor added to the feature norm before normalization.
pub const FEATURE_NORM_FLOOR: f64 = 1e-6;

/// Masked means per `(channel, radius group)`, as `[re, im]` pairs.
///
/// Radii are split into `radius_groups` contiguous, nearly equal groups.
/// Feature `2 (c G + g)` is the real part for channel `c`, group `g`.
pub fn pool_low_quadrants_raw(channels: &[Spectrum], mask: &FrequencyMask, radius_groups: usize) -> Result<Vec<f64>> {
    if mask.is_empty() {
        return Err(PolarError::EmptyMask);
    }
    let first = channels
        .first()
        .ok_or_else(|| PolarError::InvalidParameter("no channels to pool".into()))?;
    let n_r = first.radial_len();
    if radius_groups == 0 || radius_groups > n_r {
        return Err(PolarError::InvalidParameter(format!(
            "radius_groups must be in 1..={n_r}, got {radius_groups}"
        )));
    }
    mask.check(first)?;
    let layout = first.layout();
    let mut features = Vec::with_capacity(2 * channels.len() * radius_groups);
    for ch in channels {
        first.check_conformable(ch)?;
        for g in 0..radius_groups {
            let (lo, hi) = (g * n_r / radius_groups, (g + 1) * n_r / radius_groups);
            let mut sum = num_complex::Complex64::new(0.0, 0.0);
            let mut count = 0usize;
            for r in lo..hi {
                for &f in &layout.fibers {
                    for (j, &a) in layout.angular.iter().enumerate() {
                        if mask.contains(j) {
                            sum += ch.values()[r * layout.per_radius + f + a];
                            count += 1;
                        }
                    }
                }
            }
            let mean = sum / count as f64;
            features.push(mean.re);
            features.push(mean.im);
        }
    }
    Ok(features)
}

/// [`pool_low_quadrants_raw`] followed by `f / (||f||_2 + 1e-6)`.
pub fn pool_low_quadrants(channels: &[Spectrum], mask: &FrequencyMask, radius_groups: usize) -> Result<Vec<f64>> {
    let mut f = pool_low_quadrants_raw(channels, mask, radius_groups)?;
    let norm = f.iter().map(|v| v * v).sum::<f64>().sqrt();
    f.iter_mut().for_each(|v| *v /= norm + FEATURE_NORM_FLOOR);
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::C64;

    #[test]
    fn zero_spectrum_pools_to_zero() {
        let s = Spectrum::zeros(vec![2, 8], vec![1]).unwrap();
        let f = pool_low_quadrants(&[s], &FrequencyMask::low_band(&[8], 1), 2).unwrap();
        assert_eq!(f, vec![0.0; 4]);
    }

    #[test]
    fn single_entry_mean() {
        let mut v = vec![C64::new(0.0, 0.0); 8];
        v[1] = C64::new(1.0, 0.0);
        let s = Spectrum::from_values(vec![1, 8], vec![1], v).unwrap();
        let mask = FrequencyMask::from_indices(&[8], &[vec![0], vec![1], vec![2], vec![7]]).unwrap();
        let raw = pool_low_quadrants_raw(std::slice::from_ref(&s), &mask, 1).unwrap();
        assert_eq!(raw, vec![0.25, 0.0]);
        let f = pool_low_quadrants(&[s], &mask, 1).unwrap();
        assert!((f[0] - 0.25 / (0.25 + 1e-6)).abs() < 1e-15);
    }

    #[test]
    fn errors() {
        let s = Spectrum::zeros(vec![2, 8], vec![1]).unwrap();
        assert_eq!(pool_low_quadrants(std::slice::from_ref(&s), &FrequencyMask::empty(&[8]), 1), Err(PolarError::EmptyMask));
        assert!(pool_low_quadrants(&[s], &FrequencyMask::full(&[8]), 3).is_err());
    }
}
