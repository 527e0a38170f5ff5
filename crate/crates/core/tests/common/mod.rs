#![allow(dead_code)]

use polar_core::{Domain, PolarTensor, Spectrum, C64};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn random_complex(rng: &mut ChaCha8Rng, n: usize) -> Vec<C64> {
    (0..n).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
}

pub fn random_real(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

pub fn tensor(rng: &mut ChaCha8Rng, shape: &[usize], axes: &[usize]) -> PolarTensor {
    let n = shape.iter().product();
    PolarTensor::new(shape.to_vec(), axes.to_vec(), random_complex(rng, n), Domain::Spatial).unwrap()
}

pub fn real_tensor(rng: &mut ChaCha8Rng, shape: &[usize], axes: &[usize]) -> PolarTensor {
    let n: usize = shape.iter().product();
    PolarTensor::from_real(shape.to_vec(), axes.to_vec(), &random_real(rng, n)).unwrap()
}

pub fn spectrum(rng: &mut ChaCha8Rng, shape: &[usize], axes: &[usize]) -> Spectrum {
    let n = shape.iter().product();
    Spectrum::from_values(shape.to_vec(), axes.to_vec(), random_complex(rng, n)).unwrap()
}

/// Textbook DFT with explicit twiddles.
pub fn textbook_dft(x: &[C64]) -> Vec<C64> {
    let n = x.len();
    (0..n)
        .map(|k| {
            x.iter()
                .enumerate()
                .map(|(t, v)| {
                    let ang = -2.0 * std::f64::consts::PI * ((k * t) % n) as f64 / n as f64;
                    v * C64::from_polar(1.0, ang)
                })
                .sum()
        })
        .collect()
}

/// `y[t] = sum_k a[k] b[t - k]` on one cycle.
pub fn cyclic_conv(a: &[C64], b: &[C64]) -> Vec<C64> {
    let n = a.len();
    (0..n)
        .map(|t| (0..n).map(|k| a[k] * b[(t + n - k) % n]).sum())
        .collect()
}

pub fn max_diff(a: &[C64], b: &[C64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn max_abs(a: &[C64]) -> f64 {
    a.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

/// Max deviation scaled by the larger operand (floored at 1).
pub fn rel_diff(a: &PolarTensor, b: &PolarTensor) -> f64 {
    let scale = a.max_abs().max(b.max_abs()).max(1.0);
    a.max_abs_diff(b).unwrap() / scale
}

pub fn reals(t: &PolarTensor) -> Vec<f64> {
    t.values().iter().map(|v| v.re).collect()
}

pub fn assert_reals(t: &PolarTensor, want: &[f64], tol: f64) {
    assert_eq!(t.len(), want.len());
    for (got, w) in t.values().iter().zip(want) {
        assert!((got.re - w).abs() <= tol && got.im.abs() <= tol, "got {:?}, want {:?}", t.values(), want);
    }
}

/// Central differences of a real function of complex parameters; entry `i`
/// is `dL/dRe(p_i) + i dL/dIm(p_i)`.
pub fn fd_complex(f: impl Fn(&[C64]) -> f64, p: &[C64], h: f64) -> Vec<C64> {
    (0..p.len())
        .map(|i| {
            let at = |d: C64| {
                let mut q = p.to_vec();
                q[i] += d;
                f(&q)
            };
            c(
                (at(c(h, 0.0)) - at(c(-h, 0.0))) / (2.0 * h),
                (at(c(0.0, h)) - at(c(0.0, -h))) / (2.0 * h),
            )
        })
        .collect()
}

pub fn fd_real(f: impl Fn(&[f64]) -> f64, p: &[f64], h: f64) -> Vec<f64> {
    (0..p.len())
        .map(|i| {
            let at = |d: f64| {
                let mut q = p.to_vec();
                q[i] += d;
                f(&q)
            };
            (at(h) - at(-h)) / (2.0 * h)
        })
        .collect()
}

/// `max |a - n| / max(max |n|, 1e-12)`.
pub fn grad_error(analytic: &[C64], numeric: &[C64]) -> f64 {
    max_diff(analytic, numeric) / max_abs(numeric).max(1e-12)
}

/// `Re sum conj(g) y`: a linear loss whose split gradient w.r.t. `y` is `g`.
pub fn pairing(g: &[C64], y: &[C64]) -> f64 {
    g.iter().zip(y).map(|(a, b)| (a.conj() * b).re).sum()
}
