//! Worked examples, replayed and checked against their known values.

use std::io::{self, Write};

use polar_core::operators::{build_gate_kernel, energy_ratio, FrequencyMask};
use polar_core::spectral::{circulant_from_kernel, fft_angular, ifft_angular, inverse, min_spectral_magnitude};
use polar_core::{PolarTensor, Rotor, Spectrum, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Example {
    Aurora,
    Elisa,
    Rotor,
    Gate,
}

/// One compared quantity.
#[derive(Debug, Clone)]
pub struct Check {
    pub label: String,
    pub expected: Vec<C64>,
    pub got: Vec<C64>,
    pub tol: f64,
}

impl Check {
    fn new(label: &str, expected: Vec<C64>, got: Vec<C64>, tol: f64) -> Self {
        Self {
            label: label.into(),
            expected,
            got,
            tol,
        }
    }

    fn real(label: &str, expected: &[f64], got: &[C64], tol: f64) -> Self {
        Self::new(label, reals(expected), got.to_vec(), tol)
    }

    pub fn max_deviation(&self) -> f64 {
        if self.expected.len() != self.got.len() {
            return f64::INFINITY;
        }
        self.expected
            .iter()
            .zip(&self.got)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn passed(&self) -> bool {
        self.max_deviation() <= self.tol
    }
}

fn reals(v: &[f64]) -> Vec<C64> {
    v.iter().map(|&x| C64::new(x, 0.0)).collect()
}

/// Values rounded to 12 decimals for display.
pub fn fmt_values(v: &[C64]) -> String {
    let num = |x: f64| {
        let t = format!("{x:.12}");
        let t = t.trim_end_matches('0').trim_end_matches('.');
        if t == "-0" { "0".to_string() } else { t.to_string() }
    };
    let item = |c: &C64| {
        let im = num(c.im);
        if im == "0" {
            num(c.re)
        } else if im.starts_with('-') {
            format!("{}{im}i", num(c.re))
        } else {
            format!("{}+{im}i", num(c.re))
        }
    };
    format!("[{}]", v.iter().map(item).collect::<Vec<_>>().join(", "))
}

fn row(v: &[f64]) -> PolarTensor {
    PolarTensor::from_rows(&[v]).expect("valid row")
}

/// Prints the example's steps to `out` and returns its checks.
pub fn run(example: Example, out: &mut dyn Write) -> io::Result<Vec<Check>> {
    match example {
        Example::Aurora => aurora(out),
        Example::Elisa => elisa(out),
        Example::Rotor => rotor(out),
        Example::Gate => gate(out),
    }
}

fn aurora(out: &mut dyn Write) -> io::Result<Vec<Check>> {
    let tol = 1e-12;
    let a = row(&[2.0, 1.0, 1.0, 1.0]);
    writeln!(out, "step 1  a = {}", fmt_values(a.values()))?;
    let spec = fft_angular(&a).expect("spatial");
    writeln!(out, "step 2  DFT(a) = {}", fmt_values(spec.values()))?;
    let (min, at) = min_spectral_magnitude(&a).expect("spatial");
    writeln!(out, "step 3  min |a_hat| = {min} at (r,m) = ({},{}): invertible", at[0], at[1])?;
    let recip = spec.map(|v| 1.0 / v);
    writeln!(out, "step 4  1 / a_hat = {}", fmt_values(recip.values()))?;
    let inv = ifft_angular(&recip);
    writeln!(out, "step 5  b = IDFT(1 / a_hat) with the 1/4 factor")?;
    writeln!(out, "step 6  b[n] = 1/4 sum_m (1/a_hat[m]) e^(+i 2 pi m n / 4)")?;
    writeln!(out, "step 7  a^-1 = {}", fmt_values(inv.values()))?;
    let check = a.polar_product_naive(&inv).expect("conformable");
    writeln!(out, "step 8  a (x) a^-1 = {}", fmt_values(check.values()))?;
    let lib = inverse(&a).expect("invertible");
    Ok(vec![
        Check::real("DFT(a)", &[5.0, 1.0, 1.0, 1.0], spec.values(), tol),
        Check::real("min |a_hat|", &[1.0], &[C64::new(min, 0.0)], tol),
        Check::real("1 / a_hat", &[0.2, 1.0, 1.0, 1.0], recip.values(), tol),
        Check::real("a^-1", &[0.8, -0.2, -0.2, -0.2], inv.values(), tol),
        Check::real("library inverse", &[0.8, -0.2, -0.2, -0.2], lib.values(), tol),
        Check::real("a (x) a^-1", &[1.0, 0.0, 0.0, 0.0], check.values(), tol),
    ])
}

fn elisa(out: &mut dyn Write) -> io::Result<Vec<Check>> {
    let a = PolarTensor::from_rows(&[[2.0, 1.0, 0.0], [3.0, 2.0, 1.0]]).expect("rows");
    let b = PolarTensor::from_rows(&[[1.0, 0.0, 1.0], [2.0, 1.0, 0.0]]).expect("rows");
    let ab = a.polar_product_naive(&b).expect("conformable");
    let ba = b.polar_product_naive(&a).expect("conformable");
    writeln!(out, "A = {}", fmt_values(a.values()))?;
    writeln!(out, "B = {}", fmt_values(b.values()))?;
    writeln!(out, "A (x) B = {}", fmt_values(ab.values()))?;
    writeln!(out, "B (x) A = {}", fmt_values(ba.values()))?;
    let want = [3.0, 1.0, 2.0, 7.0, 7.0, 4.0];
    Ok(vec![
        Check::real("A (x) B", &want, ab.values(), 1e-12),
        Check::real("B (x) A", &want, ba.values(), 1e-12),
        Check::new("A (x) B - B (x) A", vec![C64::new(0.0, 0.0); 6], ab.sub(&ba).expect("conformable").into_values(), 0.0),
    ])
}

fn rotor(out: &mut dyn Write) -> io::Result<Vec<Check>> {
    let r1 = Rotor::new(&[1], &[4]).expect("valid rotor");
    let kernel = r1.as_kernel(&[1, 4], &[1]).expect("valid shape");
    let m = circulant_from_kernel(kernel.values());
    writeln!(out, "R_1 as a 4x4 matrix:")?;
    let mut got = Vec::with_capacity(16);
    for i in 0..4 {
        let line: Vec<C64> = (0..4).map(|j| m.get(i, j)).collect();
        writeln!(out, "  {}", line.iter().map(|v| format!("{}", v.re)).collect::<Vec<_>>().join(" "))?;
        got.extend(line);
    }
    let x = row(&[0.0, 1.0, 2.0, 3.0]);
    let shifted = r1.apply(&x).expect("one angular axis");
    writeln!(out, "R_1 (x0, x1, x2, x3) with x = {} -> {}", fmt_values(x.values()), fmt_values(shifted.values()))?;
    writeln!(out, "i.e. (x3, x0, x1, x2)")?;
    let matrix = [
        0.0, 0.0, 0.0, 1.0, //
        1.0, 0.0, 0.0, 0.0, //
        0.0, 1.0, 0.0, 0.0, //
        0.0, 0.0, 1.0, 0.0,
    ];
    Ok(vec![
        Check::real("R_1 matrix", &matrix, &got, 0.0),
        Check::real("R_1 x", &[3.0, 0.0, 1.0, 2.0], shifted.values(), 0.0),
        Check::new("R_1 x via matrix", shifted.values().to_vec(), m.mul_vec(x.values()), 1e-15),
    ])
}

fn gate(out: &mut dyn Write) -> io::Result<Vec<Check>> {
    let (band, alpha, n) = (4, 0.5, 32);
    let gate = build_gate_kernel(band, alpha, n, true).expect("valid parameters");
    writeln!(out, "gate M = {band}, alpha_w = {alpha}, N_theta = {n}, real spectrum")?;
    writeln!(out, "W_m for m = 0..=M: {}", fmt_values(&gate.kernel()[..=band]))?;
    let w = gate.spatial_kernel();
    let imag: Vec<C64> = w.iter().map(|v| C64::new(v.im, 0.0)).collect();
    let mirrored: Vec<C64> = (0..n).map(|t| w[(n - t) % n]).collect();
    let outside: Vec<C64> = gate.kernel()[band + 1..n - band].to_vec();
    writeln!(out, "max |Im W(theta)| = {:e}", imag.iter().map(|v| v.re.abs()).fold(0.0, f64::max))?;

    let values: Vec<C64> = (0..2 * n).map(|i| C64::new((i as f64 * 0.7).sin(), (i as f64 * 0.3).cos())).collect();
    let s = Spectrum::from_values(vec![2, n], vec![1], values).expect("valid shape");
    let mask = FrequencyMask::low_band(&[n], band);
    let open = gate.clone().with_strength(0.0).expect("valid strength");
    let passed = open.apply(&s, &mask).expect("conformable");
    let rho = energy_ratio(&s, &passed, &mask).expect("conformable");
    writeln!(out, "s = 0: energy ratio = {rho}")?;
    Ok(vec![
        Check::new("Im W(theta)", vec![C64::new(0.0, 0.0); n], imag, 1e-12),
        Check::new("W(theta) - W(-theta)", w.clone(), mirrored, 1e-12),
        Check::new("out-of-band W_m", vec![C64::new(0.0, 0.0); outside.len()], outside, 0.0),
        Check::new("s = 0 output", s.values().to_vec(), passed.values().to_vec(), 0.0),
        Check::real("energy ratio", &[1.0], &[C64::new(rho, 0.0)], 0.0),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_examples_pass() {
        for ex in [Example::Aurora, Example::Elisa, Example::Rotor, Example::Gate] {
            let mut buf = Vec::new();
            let checks = run(ex, &mut buf).unwrap();
            assert!(!checks.is_empty());
            for c in &checks {
                assert!(c.passed(), "{ex:?} {}: {}", c.label, c.max_deviation());
            }
            assert!(!buf.is_empty());
        }
    }

    #[test]
    fn formatting() {
        assert_eq!(fmt_values(&[C64::new(0.8, 0.0), C64::new(-0.2, 1e-17)]), "[0.8, -0.2]");
        assert_eq!(fmt_values(&[C64::new(1.0, -2.0)]), "[1-2i]");
        assert_eq!(fmt_values(&[C64::new(1.0000000000000002, -1e-17), C64::new(-0.0, 0.5)]), "[1, 0+0.5i]");
        let bad = Check::real("x", &[1.0], &[C64::new(1.5, 0.0)], 0.1);
        assert!(!bad.passed());
        assert_eq!(Check::real("x", &[1.0, 2.0], &[C64::new(1.0, 0.0)], 1.0).max_deviation(), f64::INFINITY);
    }
}
