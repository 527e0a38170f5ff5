use crate::error::{PolarError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Whole radii per worker.
    RadialShards,
    /// Blocks of in-radius (frequency) positions per worker, across all radii.
    FrequencyShards,
    /// Blocks of output rows of a single transform.
    RowPartition,
}

/// Assignment of `(r, m)` indices to workers. For [`Strategy::RowPartition`]
/// the indices are `(0, k)` for output row `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShardPlan {
    strategy: Strategy,
    assignment: Vec<Vec<(usize, usize)>>,
}

/// Splits `0..n` into `parts` contiguous blocks whose sizes differ by at most one.
pub(crate) fn blocks(n: usize, parts: usize) -> Vec<std::ops::Range<usize>> {
    (0..parts).map(|p| p * n / parts..(p + 1) * n / parts).collect()
}

impl ShardPlan {
    pub fn radial(n_r: usize, per_radius: usize, workers: usize) -> Result<Self> {
        check_workers(workers)?;
        let assignment = blocks(n_r, workers)
            .into_iter()
            .map(|rs| rs.flat_map(|r| (0..per_radius).map(move |m| (r, m))).collect())
            .collect();
        Ok(Self {
            strategy: Strategy::RadialShards,
            assignment,
        })
    }

    pub fn frequency(n_r: usize, per_radius: usize, workers: usize) -> Result<Self> {
        check_workers(workers)?;
        let assignment = blocks(per_radius, workers)
            .into_iter()
            .map(|ms| (0..n_r).flat_map(|r| ms.clone().map(move |m| (r, m))).collect())
            .collect();
        Ok(Self {
            strategy: Strategy::FrequencyShards,
            assignment,
        })
    }

    pub fn row_partition(n: usize, workers: usize) -> Result<Self> {
        check_workers(workers)?;
        let assignment = blocks(n, workers)
            .into_iter()
            .map(|ks| ks.map(|k| (0, k)).collect())
            .collect();
        Ok(Self {
            strategy: Strategy::RowPartition,
            assignment,
        })
    }

    /// An arbitrary assignment; checked by [`ShardPlan::validate`] at use.
    pub fn custom(strategy: Strategy, assignment: Vec<Vec<(usize, usize)>>) -> Result<Self> {
        check_workers(assignment.len())?;
        Ok(Self {
            strategy,
            assignment,
        })
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    pub fn worker_count(&self) -> usize {
        self.assignment.len()
    }

    pub fn assignment(&self) -> &[Vec<(usize, usize)>] {
        &self.assignment
    }

    /// Checks that the assignment partitions `0..n_r x 0..per_radius`, and
    /// that radial shards own whole radii.
    pub fn validate(&self, n_r: usize, per_radius: usize) -> Result<()> {
        let mut owner = vec![usize::MAX; n_r * per_radius];
        for (w, set) in self.assignment.iter().enumerate() {
            for &(r, m) in set {
                if r >= n_r || m >= per_radius {
                    return Err(PolarError::PartitionCoverage(format!(
                        "worker {w} owns ({r}, {m}) outside {n_r} x {per_radius}"
                    )));
                }
                let slot = &mut owner[r * per_radius + m];
                if *slot != usize::MAX {
                    return Err(PolarError::PartitionCoverage(format!(
                        "({r}, {m}) assigned to both worker {} and worker {w}",
                        *slot
                    )));
                }
                *slot = w;
            }
        }
        if let Some(i) = owner.iter().position(|&o| o == usize::MAX) {
            return Err(PolarError::PartitionCoverage(format!(
                "({}, {}) is not assigned to any worker",
                i / per_radius,
                i % per_radius
            )));
        }
        if self.strategy == Strategy::RadialShards {
            for r in 0..n_r {
                let row = &owner[r * per_radius..(r + 1) * per_radius];
                if row.iter().any(|&o| o != row[0]) {
                    return Err(PolarError::PartitionCoverage(format!(
                        "radius {r} is split across workers"
                    )));
                }
            }
        }
        Ok(())
    }
}

fn check_workers(workers: usize) -> Result<()> {
    if workers == 0 {
        return Err(PolarError::InvalidParameter("worker count must be >= 1".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_plans_partition() {
        for w in 1..6 {
            ShardPlan::radial(4, 8, w).unwrap().validate(4, 8).unwrap();
            ShardPlan::frequency(4, 8, w).unwrap().validate(4, 8).unwrap();
            ShardPlan::row_partition(8, w).unwrap().validate(1, 8).unwrap();
        }
        assert_eq!(blocks(5, 2), vec![0..2, 2..5]);
        assert!(ShardPlan::radial(4, 8, 0).is_err());
    }

    #[test]
    fn coverage_errors() {
        let gap = ShardPlan::custom(Strategy::FrequencyShards, vec![vec![(0, 0)], vec![(0, 1)]]).unwrap();
        assert!(matches!(gap.validate(1, 3), Err(PolarError::PartitionCoverage(_))));
        let dup = ShardPlan::custom(Strategy::FrequencyShards, vec![vec![(0, 0), (0, 1)], vec![(0, 1)]]).unwrap();
        assert!(dup.validate(1, 2).is_err());
        let split = ShardPlan::custom(Strategy::RadialShards, vec![vec![(0, 0)], vec![(0, 1)]]).unwrap();
        assert!(split.validate(1, 2).is_err());
        let out = ShardPlan::custom(Strategy::FrequencyShards, vec![vec![(0, 0), (0, 5)]]).unwrap();
        assert!(out.validate(1, 1).is_err());
    }
}
