use std::f64::consts::PI;

use crate::error::{PolarError, Result};
use crate::tensor::{Domain, PolarTensor, C64};

use super::Spectrum;

/// A cyclic angular shift `(R_k A)[r, theta] = A[r, (theta - k) mod N_theta]`.
///
/// Shifts are stored already reduced modulo the angular sizes they were built
/// for; rotors built for different sizes do not compose.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rotor {
    shifts: Vec<usize>,
    sizes: Vec<usize>,
}

impl Rotor {
    pub fn new(shifts: &[i64], sizes: &[usize]) -> Result<Self> {
        if shifts.len() != sizes.len() {
            return Err(PolarError::RotorAxes {
                rotor: shifts.len(),
                tensor: sizes.len(),
            });
        }
        if sizes.contains(&0) {
            return Err(PolarError::InvalidParameter("angular size 0".into()));
        }
        let shifts = shifts
            .iter()
            .zip(sizes)
            .map(|(&k, &n)| k.rem_euclid(n as i64) as usize)
            .collect();
        Ok(Self {
            shifts,
            sizes: sizes.to_vec(),
        })
    }

    /// `R_0`.
    pub fn identity(sizes: &[usize]) -> Self {
        Self {
            shifts: vec![0; sizes.len()],
            sizes: sizes.to_vec(),
        }
    }

    pub fn shifts(&self) -> &[usize] {
        &self.shifts
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn is_identity(&self) -> bool {
        self.shifts.iter().all(|&k| k == 0)
    }

    /// `R_k R_j = R_{k+j}`.
    pub fn compose(&self, other: &Rotor) -> Result<Rotor> {
        self.check_sizes(&other.sizes)?;
        let shifts = self
            .shifts
            .iter()
            .zip(&other.shifts)
            .zip(&self.sizes)
            .map(|((&a, &b), &n)| (a + b) % n)
            .collect();
        Ok(Self {
            shifts,
            sizes: self.sizes.clone(),
        })
    }

    /// `R_k^{-1} = R_{-k}`.
    pub fn inverse(&self) -> Rotor {
        let shifts = self
            .shifts
            .iter()
            .zip(&self.sizes)
            .map(|(&k, &n)| (n - k) % n)
            .collect();
        Self {
            shifts,
            sizes: self.sizes.clone(),
        }
    }

    fn check_sizes(&self, sizes: &[usize]) -> Result<()> {
        if sizes.len() != self.sizes.len() {
            return Err(PolarError::RotorAxes {
                rotor: self.sizes.len(),
                tensor: sizes.len(),
            });
        }
        if let Some(i) = (0..sizes.len()).find(|&i| sizes[i] != self.sizes[i]) {
            return Err(PolarError::InvalidParameter(format!(
                "rotor built for angular size {} on axis {i}, tensor has {}",
                self.sizes[i], sizes[i]
            )));
        }
        Ok(())
    }

    pub fn apply(&self, a: &PolarTensor) -> Result<PolarTensor> {
        a.require_domain(Domain::Spatial)?;
        self.check_sizes(&a.angular_sizes())?;
        let perm = a.layout().angular_permutation_by_axis(|axis, d, n| (d + n - self.shifts[axis]) % n);
        Ok(a.permute_angular(&perm, false))
    }

    /// Diagonal phases `exp(-i 2 pi sum_j m_j k_j / N_j)` broadcast over `shape`.
    pub fn spectrum(&self, shape: &[usize], angular_axes: &[usize]) -> Result<Spectrum> {
        let mut s = Spectrum::zeros(shape.to_vec(), angular_axes.to_vec())?;
        self.check_sizes(&s.angular_sizes())?;
        let layout = s.layout();
        let phases: Vec<C64> = (0..layout.angular_len())
            .map(|j| {
                let turns: f64 = layout
                    .digits(j)
                    .iter()
                    .zip(&self.shifts)
                    .zip(&self.sizes)
                    .map(|((&m, &k), &n)| ((m * k) % n) as f64 / n as f64)
                    .sum();
                C64::from_polar(1.0, -2.0 * PI * turns)
            })
            .collect();
        let mut values = s.values().to_vec();
        for r in 0..layout.radial {
            for &f in &layout.fibers {
                for (j, &p) in phases.iter().enumerate() {
                    values[r * layout.per_radius + f + layout.angular[j]] = p;
                }
            }
        }
        s = s.with_values(values)?;
        Ok(s)
    }

    /// The delta kernel at angular index `k` on every radius.
    pub fn as_kernel(&self, shape: &[usize], angular_axes: &[usize]) -> Result<PolarTensor> {
        let zeros = PolarTensor::zeros(shape.to_vec(), angular_axes.to_vec(), Domain::Spatial)?;
        self.check_sizes(&zeros.angular_sizes())?;
        let layout = zeros.layout();
        let at = layout.angular[layout.flat(&self.shifts)];
        let mut values = zeros.values().to_vec();
        for r in 0..layout.radial {
            for &f in &layout.fibers {
                values[r * layout.per_radius + f + at] = C64::new(1.0, 0.0);
            }
        }
        zeros.with_values(values)
    }
}

pub fn apply_rotor(rotor: &Rotor, a: &PolarTensor) -> Result<PolarTensor> {
    rotor.apply(a)
}

pub fn rotor_spectrum(rotor: &Rotor, shape: &[usize], angular_axes: &[usize]) -> Result<Spectrum> {
    rotor.spectrum(shape, angular_axes)
}

pub fn rotor_as_kernel(rotor: &Rotor, shape: &[usize], angular_axes: &[usize]) -> Result<PolarTensor> {
    rotor.as_kernel(shape, angular_axes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{circulant_from_kernel, fft_angular};

    fn c(v: f64) -> C64 {
        C64::new(v, 0.0)
    }

    #[test]
    fn shift_by_one() {
        let x = PolarTensor::from_rows(&[[10.0, 11.0, 12.0, 13.0]]).unwrap();
        let r1 = Rotor::new(&[1], &[4]).unwrap();
        assert_eq!(r1.apply(&x).unwrap().real_parts(), vec![13.0, 10.0, 11.0, 12.0]);
        assert_eq!(Rotor::identity(&[4]).apply(&x).unwrap(), x);
    }

    #[test]
    fn shifts_are_reduced() {
        let r = Rotor::new(&[-1, 9], &[4, 4]).unwrap();
        assert_eq!(r.shifts(), &[3, 1]);
        assert_eq!(r.inverse().shifts(), &[1, 3]);
        assert!(r.compose(&r.inverse()).unwrap().is_identity());
        assert!(Rotor::new(&[1], &[4, 4]).is_err());
        assert!(r.compose(&Rotor::new(&[0, 0], &[4, 5]).unwrap()).is_err());
    }

    #[test]
    fn axis_count_mismatch() {
        let x = PolarTensor::from_rows(&[[1.0, 2.0, 3.0]]).unwrap();
        let r = Rotor::new(&[1, 1], &[3, 3]).unwrap();
        assert!(matches!(r.apply(&x), Err(PolarError::RotorAxes { .. })));
    }

    #[test]
    fn kernel_and_matrix() {
        let r1 = Rotor::new(&[1], &[4]).unwrap();
        let k = r1.as_kernel(&[2, 4], &[1]).unwrap();
        assert_eq!(k.real_parts(), vec![0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0]);
        assert_eq!(
            Rotor::identity(&[4]).as_kernel(&[2, 4], &[1]).unwrap(),
            PolarTensor::identity_kernel(vec![2, 4], vec![1]).unwrap()
        );
        // The permutation matrix with ones at (i, i-1 mod 4).
        let m = circulant_from_kernel(&[c(0.0), c(1.0), c(0.0), c(0.0)]);
        for i in 0..4 {
            for j in 0..4 {
                let want = if (i + 3) % 4 == j { 1.0 } else { 0.0 };
                assert_eq!(m.get(i, j), c(want));
            }
        }
    }

    #[test]
    fn spectrum_is_unit_phase_and_matches_shift() {
        let a = PolarTensor::from_rows(&[[1.0, -2.0, 0.5, 3.0, 1.0], [0.0, 1.0, 2.0, -1.0, 4.0]])
            .unwrap();
        let r = Rotor::new(&[2], &[5]).unwrap();
        let ph = r.spectrum(a.shape(), a.angular_axes()).unwrap();
        assert!(ph.values().iter().all(|v| (v.norm() - 1.0).abs() < 1e-15));
        let lhs = fft_angular(&r.apply(&a).unwrap()).unwrap();
        let rhs = ph.hadamard(&fft_angular(&a).unwrap()).unwrap();
        assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-12);
        let id = Rotor::identity(&[5]).spectrum(a.shape(), a.angular_axes()).unwrap();
        assert!(id.values().iter().all(|&v| v == c(1.0)));
    }

    #[test]
    fn two_axis_rotor() {
        let vals: Vec<f64> = (0..12).map(|i| i as f64).collect();
        let a = PolarTensor::from_real(vec![1, 3, 4], vec![1, 2], &vals).unwrap();
        let r = Rotor::new(&[1, 2], &[3, 4]).unwrap();
        let out = r.apply(&a).unwrap();
        assert_eq!(out.get(&[0, 1, 2]), a.get(&[0, 0, 0]));
        assert_eq!(out.get(&[0, 0, 1]), a.get(&[0, 2, 3]));
        let k = r.as_kernel(a.shape(), a.angular_axes()).unwrap();
        assert_eq!(k.polar_product_naive(&a).unwrap(), out);
    }
}
