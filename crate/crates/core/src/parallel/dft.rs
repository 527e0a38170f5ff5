use std::f64::consts::PI;

use crate::error::{PolarError, Result};
use crate::exec;
use crate::spectral::dft;
use crate::tensor::C64;

use super::ledger::{ExchangeLedger, Network};
use super::plan::ShardPlan;

fn twiddles(n: usize) -> Vec<C64> {
    (0..n).map(|t| C64::from_polar(1.0, -2.0 * PI * t as f64 / n as f64)).collect()
}

/// `X[k] = sum_j x[j] w^{jk}` for the requested rows, `w = e^{-i 2 pi / n}`.
fn direct_rows(x: &[C64], rows: impl Iterator<Item = usize>, w: &[C64]) -> Vec<C64> {
    let n = x.len();
    rows.map(|k| x.iter().enumerate().map(|(j, &v)| v * w[(j * k) % n]).sum())
        .collect()
}

/// O(n^2) DFT by direct summation.
pub fn dft_direct(x: &[C64]) -> Vec<C64> {
    direct_rows(x, 0..x.len(), &twiddles(x.len()))
}

/// Row-partitioned DFT: each worker computes a contiguous block of output
/// coefficients. Worker 0 holds `x` and broadcasts it to every other worker
/// that owns at least one row. More workers than rows are not used.
pub fn dft_row_partition(x: &[C64], worker_count: usize) -> Result<(Vec<C64>, ExchangeLedger)> {
    let n = x.len();
    if worker_count == 0 {
        return Err(PolarError::InvalidParameter("worker count must be >= 1".into()));
    }
    let worker_count = worker_count.min(n.max(1));
    let plan = ShardPlan::row_partition(n, worker_count)?;
    let mut net = Network::new();
    for w in 1..worker_count {
        if !plan.assignment()[w].is_empty() {
            net.send("broadcast", 0, w, x.to_vec());
        }
    }
    let local: Vec<Vec<C64>> = (0..worker_count)
        .map(|w| {
            if w == 0 || plan.assignment()[w].is_empty() {
                x.to_vec()
            } else {
                net.receive("broadcast", 0, w)
            }
        })
        .collect();
    let w = twiddles(n);
    let parts = exec::map_indices(worker_count, |id| {
        direct_rows(&local[id], plan.assignment()[id].iter().map(|&(_, k)| k), &w)
    });
    let mut out = vec![C64::new(0.0, 0.0); n];
    for (set, vals) in plan.assignment().iter().zip(parts) {
        for (&(_, k), v) in set.iter().zip(vals) {
            out[k] = v;
        }
    }
    Ok((out, net.into_ledger()))
}

/// One-level Cooley-Tukey DFT on two workers.
///
/// Worker 0 transforms the even-indexed samples, worker 1 the odd-indexed
/// ones. At the `combine` step they swap half-spectra (n/2 values each way),
/// then worker 0 forms the butterfly pairs `k in [0, n/4)` and worker 1 the
/// pairs `k in [n/4, n/2)`:
/// `X[k] = E[k] + w^k O[k]`, `X[k + n/2] = E[k] - w^k O[k]`.
pub fn dft_two_worker_ct(x: &[C64]) -> Result<(Vec<C64>, ExchangeLedger)> {
    let n = x.len();
    if n % 2 == 1 {
        return Err(PolarError::OddLength(n));
    }
    if n == 0 {
        return Err(PolarError::InvalidParameter("empty input".into()));
    }
    let half = n / 2;
    // Step 1: local half-length transforms, no communication.
    let mut local = exec::map_indices(2, |w| {
        let sub: Vec<C64> = x.iter().skip(w).step_by(2).copied().collect();
        dft(&sub)
    });
    let odd = local.pop().expect("two workers");
    let even = local.pop().expect("two workers");

    // Step 2: swap half-spectra.
    let mut net = Network::new();
    net.send("combine", 0, 1, even.clone());
    net.send("combine", 1, 0, odd.clone());
    let held = [(even, net.receive("combine", 1, 0)), (net.receive("combine", 0, 1), odd)];

    let ranges = [0..half / 2, half / 2..half];
    let parts = exec::map_indices(2, |w| {
        let (e, o) = &held[w];
        ranges[w]
            .clone()
            .map(|k| {
                let t = C64::from_polar(1.0, -2.0 * PI * k as f64 / n as f64) * o[k];
                (k, e[k] + t, e[k] - t)
            })
            .collect::<Vec<_>>()
    });
    let mut out = vec![C64::new(0.0, 0.0); n];
    for (k, top, bottom) in parts.into_iter().flatten() {
        out[k] = top;
        out[k + half] = bottom;
    }
    Ok((out, net.into_ledger()))
}
