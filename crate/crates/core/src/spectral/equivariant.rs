use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::error::{PolarError, Result};
use crate::tensor::C64;

/// Random probe vectors used to confirm shift-equivariance.
pub const DEFAULT_PROBES: usize = 8;
const PROBE_SEED: u64 = 0x5eed_f070;
const RELATIVE_TOL: f64 = 1e-9;

/// Recovers `c` with `T = sum_k c_k R_k` for a shift-equivariant linear map `T`.
///
/// `c` is read off as `T(e_0)`; the expansion is then checked on random probes.
pub fn recover_rotor_expansion<F>(op: F, n: usize) -> Result<Vec<C64>>
where
    F: Fn(&[C64]) -> Vec<C64>,
{
    let mut rng = StdRng::seed_from_u64(PROBE_SEED);
    recover_rotor_expansion_with(op, n, DEFAULT_PROBES, &mut rng)
}

pub fn recover_rotor_expansion_with<F, R>(op: F, n: usize, probes: usize, rng: &mut R) -> Result<Vec<C64>>
where
    F: Fn(&[C64]) -> Vec<C64>,
    R: Rng + ?Sized,
{
    if n == 0 {
        return Err(PolarError::InvalidParameter("operator size must be >= 1".into()));
    }
    let mut delta = vec![C64::new(0.0, 0.0); n];
    delta[0] = C64::new(1.0, 0.0);
    let coeffs = op(&delta);
    if coeffs.len() != n {
        return Err(PolarError::InvalidParameter(format!(
            "operator returned {} values for input of length {n}",
            coeffs.len()
        )));
    }

    let mut worst = 0.0f64;
    for _ in 0..probes {
        let x: Vec<C64> = (0..n)
            .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let tx = op(&x);
        // sum_k c_k (R_k x)[t] = sum_k c_k x[t - k]
        let expanded: Vec<C64> = (0..n)
            .map(|t| (0..n).map(|k| coeffs[k] * x[(t + n - k) % n]).sum())
            .collect();
        let scale = tx.iter().map(|v| v.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
        let residual = tx
            .iter()
            .zip(&expanded)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
            / scale;
        worst = worst.max(residual);
    }
    if worst > RELATIVE_TOL {
        return Err(PolarError::EquivarianceViolation { residual: worst });
    }
    Ok(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::circulant_from_kernel;

    fn cv(v: &[f64]) -> Vec<C64> {
        v.iter().map(|&x| C64::new(x, 0.0)).collect()
    }

    #[test]
    fn circulant_kernel_recovered() {
        let c = circulant_from_kernel(&cv(&[2.0, 1.0, 1.0, 1.0]));
        let got = recover_rotor_expansion(|x| c.mul_vec(x), 4).unwrap();
        assert_eq!(got, cv(&[2.0, 1.0, 1.0, 1.0]));
    }

    #[test]
    fn identity_gives_delta() {
        let got = recover_rotor_expansion(|x| x.to_vec(), 5).unwrap();
        assert_eq!(got, cv(&[1.0, 0.0, 0.0, 0.0, 0.0]));
    }

    #[test]
    fn reflection_rejected() {
        let reflect = |x: &[C64]| -> Vec<C64> {
            let n = x.len();
            (0..n).map(|t| x[(n - t) % n]).collect()
        };
        for n in 3..10 {
            assert!(matches!(
                recover_rotor_expansion(reflect, n),
                Err(PolarError::EquivarianceViolation { .. })
            ));
        }
    }
}
