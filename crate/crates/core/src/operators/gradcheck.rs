//! Central finite differences for verifying analytic gradients.

use crate::exec;
use crate::tensor::C64;

/// Default probe step.
pub const DEFAULT_STEP: f64 = 1e-6;

/// Numerical gradient of a real function of complex parameters, in the split
/// convention: entry `i` is `dL/dRe(p_i) + i dL/dIm(p_i)`.
///
/// Probes are independent and may run concurrently.
pub fn complex_gradient<F>(f: F, params: &[C64], h: f64) -> Vec<C64>
where
    F: Fn(&[C64]) -> f64 + Sync + Send,
{
    exec::map_indices(params.len(), |i| {
        let probe = |delta: C64| {
            let mut p = params.to_vec();
            p[i] += delta;
            f(&p)
        };
        let re = (probe(C64::new(h, 0.0)) - probe(C64::new(-h, 0.0))) / (2.0 * h);
        let im = (probe(C64::new(0.0, h)) - probe(C64::new(0.0, -h))) / (2.0 * h);
        C64::new(re, im)
    })
}

/// Numerical gradient of a real function of real parameters.
pub fn real_gradient<F>(f: F, params: &[f64], h: f64) -> Vec<f64>
where
    F: Fn(&[f64]) -> f64 + Sync + Send,
{
    exec::map_indices(params.len(), |i| {
        let probe = |delta: f64| {
            let mut p = params.to_vec();
            p[i] += delta;
            f(&p)
        };
        (probe(h) - probe(-h)) / (2.0 * h)
    })
}

/// `max_i |a_i - b_i| / max(max_i |b_i|, floor)`.
pub fn relative_error(analytic: &[C64], numeric: &[C64], floor: f64) -> f64 {
    let scale = numeric.iter().map(|v| v.norm()).fold(floor, f64::max);
    analytic
        .iter()
        .zip(numeric)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max)
        / scale
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic() {
        // L = |p|^2 => split gradient 2p
        let p = [C64::new(1.5, -0.5), C64::new(0.0, 2.0)];
        let g = complex_gradient(|q| q.iter().map(|v| v.norm_sqr()).sum(), &p, DEFAULT_STEP);
        let want: Vec<C64> = p.iter().map(|v| 2.0 * v).collect();
        assert!(relative_error(&g, &want, 1.0) < 1e-8);
        let r = real_gradient(|q| q[0] * q[1], &[2.0, 3.0], DEFAULT_STEP);
        assert!((r[0] - 3.0).abs() < 1e-8 && (r[1] - 2.0).abs() < 1e-8);
    }
}
