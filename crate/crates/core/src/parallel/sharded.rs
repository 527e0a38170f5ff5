use crate::error::{PolarError, Result};
use crate::exec;
use crate::operators::SpectralOperator;
use crate::spectral::{fft_angular, ifft_angular, polar_product_fft, Spectrum};
use crate::tensor::{Domain, PolarTensor, C64};

use super::ledger::{ExchangeLedger, Network};
use super::plan::{blocks, ShardPlan, Strategy};

#[derive(Debug, Clone)]
pub struct ShardedProduct {
    pub output: PolarTensor,
    pub ledger: ExchangeLedger,
    /// Pointwise spectral multiplies performed by each worker.
    pub multiplies: Vec<u64>,
}

/// Polar product with the `(r, m)` index set partitioned across workers.
///
/// - `RadialShards`: each worker owns whole radii and runs the full FFT
///   product on them; no data crosses radii.
/// - `FrequencyShards`: inputs are born sharded in the spectral domain, each
///   worker multiplies its own coefficients, and the readout is inverse
///   transformed.
///
/// Both are communication-free.
pub fn sharded_polar_product(a: &PolarTensor, b: &PolarTensor, plan: &ShardPlan) -> Result<ShardedProduct> {
    a.check_conformable(b)?;
    a.require_domain(Domain::Spatial)?;
    let (n_r, per) = (a.radial_len(), a.per_radius());
    plan.validate(n_r, per)?;
    let workers = plan.worker_count();
    let net = Network::new();

    match plan.strategy() {
        Strategy::RadialShards => {
            let parts = exec::map_indices(workers, |w| -> Result<(Vec<usize>, Vec<C64>)> {
                let mut radii: Vec<usize> = plan.assignment()[w].iter().map(|&(r, _)| r).collect();
                radii.dedup();
                if radii.is_empty() {
                    return Ok((radii, Vec::new()));
                }
                let take = |t: &PolarTensor| -> Result<PolarTensor> {
                    let mut shape = t.shape().to_vec();
                    shape[0] = radii.len();
                    let values = radii.iter().flat_map(|&r| t.radius(r).iter().copied()).collect();
                    PolarTensor::new(shape, t.angular_axes().to_vec(), values, Domain::Spatial)
                };
                let local = polar_product_fft(&take(a)?, &take(b)?)?;
                Ok((radii, local.into_values()))
            });
            let mut out = vec![C64::new(0.0, 0.0); a.len()];
            let mut multiplies = Vec::with_capacity(workers);
            for part in parts {
                let (radii, values) = part?;
                multiplies.push(values.len() as u64);
                for (i, &r) in radii.iter().enumerate() {
                    out[r * per..(r + 1) * per].copy_from_slice(&values[i * per..(i + 1) * per]);
                }
            }
            Ok(ShardedProduct {
                output: a.with_values(out)?,
                ledger: net.into_ledger(),
                multiplies,
            })
        }
        Strategy::FrequencyShards => {
            let (fa, fb) = (fft_angular(a)?, fft_angular(b)?);
            let parts = exec::map_indices(workers, |w| {
                plan.assignment()[w]
                    .iter()
                    .map(|&(r, m)| {
                        let i = r * per + m;
                        (i, fa.values()[i] * fb.values()[i])
                    })
                    .collect::<Vec<_>>()
            });
            let mut spec = vec![C64::new(0.0, 0.0); a.len()];
            let mut multiplies = Vec::with_capacity(workers);
            for part in parts {
                multiplies.push(part.len() as u64);
                for (i, v) in part {
                    spec[i] = v;
                }
            }
            let output = ifft_angular(&fa.with_values(spec)?);
            Ok(ShardedProduct {
                output,
                ledger: net.into_ledger(),
                multiplies,
            })
        }
        Strategy::RowPartition => Err(PolarError::InvalidParameter(
            "row partitions apply to single transforms, not polar products".into(),
        )),
    }
}

/// Splits `blocks` into `stages` contiguous groups run as a pipeline. Each
/// stage boundary sends one activation tensor to the next stage.
pub fn pipeline_depth_split<B>(blocks_in: &[B], stages: usize, s: &Spectrum) -> Result<(Spectrum, ExchangeLedger)>
where
    B: SpectralOperator,
{
    if stages == 0 || (stages > blocks_in.len() && stages > 1) {
        return Err(PolarError::InvalidParameter(format!(
            "need 1 <= stages <= {} blocks, got {stages}",
            blocks_in.len()
        )));
    }
    let mut net = Network::new();
    let mut act = s.clone();
    for (stage, range) in blocks(blocks_in.len(), stages).into_iter().enumerate() {
        if stage > 0 {
            let step = format!("stage{}->stage{}", stage - 1, stage);
            act = act.with_values(net.receive(&step, stage - 1, stage))?;
        }
        for block in &blocks_in[range] {
            act = block.apply(&act)?;
        }
        if stage + 1 < stages {
            let step = format!("stage{}->stage{}", stage, stage + 1);
            net.send(&step, stage, stage + 1, act.values().to_vec());
        }
    }
    Ok((act, net.into_ledger()))
}
