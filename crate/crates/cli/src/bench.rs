//! Naive vs FFT polar product timing.

use std::fmt::Write as _;
use std::hint::black_box;
use std::time::{Duration, Instant};

use polar_core::exec::run_sequential;
use polar_core::spectral::polar_product_fft;
use polar_core::{Domain, PolarTensor, Result, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const CSV_HEADER: &str = "op,nr,ntheta,path,median_ns,reps,mul_count";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Path {
    Naive,
    Fft,
}

impl Path {
    pub fn name(self) -> &'static str {
        match self {
            Path::Naive => "naive",
            Path::Fft => "fft",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub op: String,
    pub nr: usize,
    pub ntheta: usize,
    pub path: Path,
    /// Median wall time of one call.
    pub median_ns: f64,
    pub reps: usize,
    /// Complex multiplies, for instrumented paths.
    pub mul_count: Option<u64>,
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub nr: usize,
    pub ntheta: Vec<usize>,
    pub reps: usize,
    pub warmup: usize,
    /// Each repetition loops the call until at least this much time passes.
    pub min_rep_time: Duration,
    pub seed: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            nr: 4,
            ntheta: (6..=13).map(|p| 1 << p).collect(),
            reps: 5,
            warmup: 2,
            min_rep_time: Duration::from_millis(20),
            seed: 7,
        }
    }
}

fn random_tensor(rng: &mut ChaCha8Rng, nr: usize, nt: usize) -> PolarTensor {
    let values = (0..nr * nt)
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    PolarTensor::new(vec![nr, nt], vec![1], values, Domain::Spatial).expect("valid shape")
}

/// Median per-call time of `f`, in ns.
fn time_median(reps: usize, warmup: usize, min_rep_time: Duration, f: &mut dyn FnMut()) -> f64 {
    // Warm-up runs also size the inner loop.
    let mut per_call = Duration::ZERO;
    for _ in 0..warmup.max(1) {
        let t = Instant::now();
        f();
        per_call = t.elapsed();
    }
    let inner = if per_call.is_zero() {
        1_000
    } else {
        (min_rep_time.as_nanos() / per_call.as_nanos()).clamp(1, 1_000_000) as usize
    };
    let mut samples: Vec<f64> = (0..reps)
        .map(|_| {
            let t = Instant::now();
            for _ in 0..inner {
                f();
            }
            t.elapsed().as_nanos() as f64 / inner as f64
        })
        .collect();
    samples.sort_by(f64::total_cmp);
    let mid = samples.len() / 2;
    if samples.len() % 2 == 1 {
        samples[mid]
    } else {
        0.5 * (samples[mid - 1] + samples[mid])
    }
}

/// Times both paths at every size on a single thread.
pub fn run_polar_product(cfg: &BenchConfig) -> Result<Vec<BenchRecord>> {
    if cfg.reps < 3 {
        return Err(polar_core::PolarError::InvalidParameter(format!("reps must be >= 3, got {}", cfg.reps)));
    }
    if cfg.nr == 0 || cfg.ntheta.iter().any(|&n| n < 2) {
        return Err(polar_core::PolarError::InvalidParameter("sizes must be >= 2 (N_r >= 1)".into()));
    }
    run_sequential(|| {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut out = Vec::with_capacity(2 * cfg.ntheta.len());
        for &nt in &cfg.ntheta {
            let a = random_tensor(&mut rng, cfg.nr, nt);
            let b = random_tensor(&mut rng, cfg.nr, nt);
            let (_, count) = a.polar_product_naive_counted(&b)?;
            let naive = time_median(cfg.reps, cfg.warmup, cfg.min_rep_time, &mut || {
                black_box(black_box(&a).polar_product_naive(black_box(&b)).expect("conformable"));
            });
            let fft = time_median(cfg.reps, cfg.warmup, cfg.min_rep_time, &mut || {
                black_box(polar_product_fft(black_box(&a), black_box(&b)).expect("conformable"));
            });
            for (path, median_ns, mul_count) in [(Path::Naive, naive, Some(count)), (Path::Fft, fft, None)] {
                out.push(BenchRecord {
                    op: "polar-product".into(),
                    nr: cfg.nr,
                    ntheta: nt,
                    path,
                    median_ns,
                    reps: cfg.reps,
                    mul_count,
                });
            }
        }
        Ok(out)
    })
}

/// Least-squares slope of `ln(median_ns)` against `ln(ntheta)`, leaving out
/// the smallest size. `None` with fewer than two remaining points.
pub fn fit_slope(records: &[BenchRecord], path: Path) -> Option<f64> {
    let mut pts: Vec<(f64, f64)> = records
        .iter()
        .filter(|r| r.path == path)
        .map(|r| (r.ntheta as f64, r.median_ns))
        .collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let pts: Vec<(f64, f64)> = pts.into_iter().skip(1).map(|(n, t)| (n.ln(), t.ln())).collect();
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

pub fn to_csv(records: &[BenchRecord]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in records {
        let count = r.mul_count.map(|c| c.to_string()).unwrap_or_default();
        let _ = writeln!(s, "{},{},{},{},{:.0},{},{}", r.op, r.nr, r.ntheta, r.path.name(), r.median_ns, r.reps, count);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(nt: usize, path: Path, t: f64) -> BenchRecord {
        BenchRecord {
            op: "polar-product".into(),
            nr: 1,
            ntheta: nt,
            path,
            median_ns: t,
            reps: 3,
            mul_count: None,
        }
    }

    #[test]
    fn slope_of_power_law() {
        // the first point is off the curve and must be ignored
        let mut recs = vec![rec(8, Path::Naive, 1e9)];
        recs.extend([16, 32, 64, 128].map(|n| rec(n, Path::Naive, 3.0 * (n as f64).powi(2))));
        assert!((fit_slope(&recs, Path::Naive).unwrap() - 2.0).abs() < 1e-12);
        assert!(fit_slope(&recs, Path::Fft).is_none());
    }

    #[test]
    fn small_run() {
        let cfg = BenchConfig {
            ntheta: vec![4, 8],
            reps: 3,
            min_rep_time: Duration::from_micros(50),
            ..BenchConfig::default()
        };
        let recs = run_polar_product(&cfg).unwrap();
        assert_eq!(recs.len(), 4);
        assert_eq!(recs[0].mul_count, Some(4 * 16));
        assert_eq!(recs[1].mul_count, None);
        let csv = to_csv(&recs);
        assert!(csv.starts_with(CSV_HEADER));
        assert!(csv.lines().nth(1).unwrap().starts_with("polar-product,4,4,naive,"));
        assert!(csv.lines().nth(2).unwrap().ends_with(",3,"));
        assert!(run_polar_product(&BenchConfig { reps: 2, ..cfg }).is_err());
    }
}
