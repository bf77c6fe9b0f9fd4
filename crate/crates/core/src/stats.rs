//! Per-slot ensemble accumulators with order-independent merging.
//!
//! A slot is one observable position (one beam splitter in a trajectory
//! ensemble, or the single end-port value of a dispersion ensemble). Each
//! slot stores `(count, sum, sum of squares)`, so merging two accumulators is
//! element-wise addition. For binary samples all three fields are integers in
//! `f64`, which makes merging exact: combining two halves equals accumulating
//! the pooled samples.

use crate::error::{Error, Result};

/// Running mean / standard-error accumulator over a fixed number of slots.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleStats {
    counts: Vec<u64>,
    sums: Vec<f64>,
    sum_sqs: Vec<f64>,
}

impl EnsembleStats {
    /// Empty accumulator with `slots` observable positions.
    pub fn with_slots(slots: usize) -> Self {
        Self {
            counts: vec![0; slots],
            sums: vec![0.0; slots],
            sum_sqs: vec![0.0; slots],
        }
    }

    /// Builds per-step statistics from binary survival counts: slot `i` saw
    /// `successes[i]` ones out of `samples` samples.
    pub fn from_binary_counts(successes: &[u64], samples: u64) -> Self {
        let sums: Vec<f64> = successes.iter().map(|&s| s as f64).collect();
        Self {
            counts: vec![samples; successes.len()],
            sum_sqs: sums.clone(),
            sums,
        }
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Records one sample value in `slot`.
    pub fn push(&mut self, slot: usize, value: f64) {
        self.counts[slot] += 1;
        self.sums[slot] += value;
        self.sum_sqs[slot] += value * value;
    }

    pub fn count(&self, slot: usize) -> u64 {
        self.counts[slot]
    }

    /// Sample mean of `slot`; NaN while empty.
    pub fn mean(&self, slot: usize) -> f64 {
        self.sums[slot] / self.counts[slot] as f64
    }

    /// Standard error of the mean, `sqrt(population variance / count)`.
    ///
    /// For binary samples this is exactly `sqrt(p (1 - p) / count)`.
    pub fn stderr(&self, slot: usize) -> f64 {
        let m = self.counts[slot] as f64;
        let mean = self.sums[slot] / m;
        let variance = (self.sum_sqs[slot] / m - mean * mean).max(0.0);
        (variance / m).sqrt()
    }

    /// Folds `other` into `self`; equivalent to having pushed the pooled samples.
    pub fn merge(&mut self, other: &EnsembleStats) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::StatsShapeMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        for slot in 0..self.len() {
            self.counts[slot] += other.counts[slot];
            self.sums[slot] += other.sums[slot];
            self.sum_sqs[slot] += other.sum_sqs[slot];
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn binary_stderr_matches_closed_form() {
        let mut stats = EnsembleStats::with_slots(1);
        for i in 0..1000 {
            stats.push(0, if i < 300 { 1.0 } else { 0.0 });
        }
        let p = 0.3;
        assert_abs_diff_eq!(stats.mean(0), p, epsilon = 1e-15);
        assert_abs_diff_eq!(
            stats.stderr(0),
            (p * (1.0 - p) / 1000.0).sqrt(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn from_binary_counts_agrees_with_pushes() {
        let mut pushed = EnsembleStats::with_slots(2);
        for i in 0..50 {
            pushed.push(0, if i < 20 { 1.0 } else { 0.0 });
            pushed.push(1, if i < 49 { 1.0 } else { 0.0 });
        }
        let direct = EnsembleStats::from_binary_counts(&[20, 49], 50);
        assert_eq!(pushed, direct);
    }

    #[test]
    fn merge_of_binary_halves_is_exact() {
        let mut left = EnsembleStats::from_binary_counts(&[10, 5], 20);
        let right = EnsembleStats::from_binary_counts(&[7, 3], 30);
        left.merge(&right).unwrap();
        assert_eq!(left, EnsembleStats::from_binary_counts(&[17, 8], 50));
    }

    #[test]
    fn merge_rejects_shape_mismatch() {
        let mut left = EnsembleStats::with_slots(2);
        let right = EnsembleStats::with_slots(3);
        assert_eq!(
            left.merge(&right),
            Err(Error::StatsShapeMismatch { left: 2, right: 3 })
        );
    }

    #[test]
    fn merge_of_scalar_samples_matches_pooled_accumulation() {
        let values: Vec<f64> = (0..200).map(|i| 0.9 + 1e-4 * (i as f64).sin()).collect();
        let mut pooled = EnsembleStats::with_slots(1);
        let mut left = EnsembleStats::with_slots(1);
        let mut right = EnsembleStats::with_slots(1);
        for (i, &v) in values.iter().enumerate() {
            pooled.push(0, v);
            if i < 100 {
                left.push(0, v);
            } else {
                right.push(0, v);
            }
        }
        left.merge(&right).unwrap();
        assert_eq!(left.count(0), pooled.count(0));
        assert_abs_diff_eq!(left.mean(0), pooled.mean(0), epsilon = 1e-14);
        // the variance difference of two sums is cancellation-limited, so the
        // scalar stderr only agrees to roughly sqrt(eps) relative
        approx::assert_relative_eq!(left.stderr(0), pooled.stderr(0), max_relative = 1e-6);
    }
}
