//! Transmission laws for the ideal beam-splitter array and for arrays whose
//! splitting angles are normally dispersed around the ideal value.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::exec::{self, Parallelism};
use crate::rng::stream_rng;
use crate::stats::EnsembleStats;

/// `cos^2(theta)` via the half-angle identity, exact at multiples of `pi/2`.
pub(crate) fn cos_squared(theta: f64) -> f64 {
    0.5 * (1.0 + (2.0 * theta).cos())
}

/// `sin^2(theta)` via the half-angle identity.
pub(crate) fn sin_squared(theta: f64) -> f64 {
    0.5 * (1.0 - (2.0 * theta).cos())
}

/// The angle `pi / 2N` that makes an N-splitter array transparent as N grows.
pub fn default_theta(n_splitters: usize) -> f64 {
    PI / (2.0 * n_splitters as f64)
}

/// End-to-end single-photon transmission `cos^(2N)(theta)` of an ideal array;
/// `theta` defaults to `pi / 2N`.
pub fn ideal_p1(n_splitters: usize, theta: Option<f64>) -> Result<f64> {
    if n_splitters == 0 {
        return Err(Error::EmptyArray);
    }
    let cos_sq = match theta {
        Some(t) => cos_squared(t),
        // cos^2(pi/2N) without forming pi/2N first keeps the N = 1 case exact
        None => 0.5 * (1.0 + (PI / n_splitters as f64).cos()),
    };
    Ok(power(cos_sq, n_splitters))
}

fn power(base: f64, exponent: usize) -> f64 {
    if exponent <= i32::MAX as usize {
        base.powi(exponent as i32)
    } else {
        base.powf(exponent as f64)
    }
}

/// Ensemble description for an array with normally dispersed angles.
#[derive(Debug, Clone, PartialEq)]
pub struct DispersionSpec {
    pub n_splitters: usize,
    /// Mean of the angle distribution; defaults to `pi / 2N`.
    pub mean_theta: f64,
    /// Standard deviation of the angle distribution, radians.
    pub sigma: f64,
    /// Number of angle vectors in the ensemble.
    pub n_samples: usize,
    pub seed: u64,
    /// First RNG stream index; lets callers keep several ensembles under one
    /// seed without sharing draws.
    pub stream_base: u64,
}

impl DispersionSpec {
    pub fn new(n_splitters: usize, sigma: f64, n_samples: usize, seed: u64) -> Result<Self> {
        if n_splitters == 0 {
            return Err(Error::EmptyArray);
        }
        let spec = Self {
            n_splitters,
            mean_theta: default_theta(n_splitters),
            sigma,
            n_samples,
            seed,
            stream_base: 0,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_mean_theta(mut self, mean_theta: f64) -> Result<Self> {
        self.mean_theta = mean_theta;
        self.validate()?;
        Ok(self)
    }

    pub fn with_stream_base(mut self, stream_base: u64) -> Self {
        self.stream_base = stream_base;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_splitters == 0 {
            return Err(Error::EmptyArray);
        }
        if !self.mean_theta.is_finite() {
            return Err(Error::NonFiniteAngle(self.mean_theta));
        }
        if !self.sigma.is_finite() || self.sigma < 0.0 {
            return Err(Error::InvalidSigma(self.sigma));
        }
        if self.n_samples == 0 {
            return Err(Error::EmptyEnsemble);
        }
        Ok(())
    }
}

/// One realization of per-splitter angles.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaVector(Vec<f64>);

impl ThetaVector {
    pub fn thetas(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<Vec<f64>> for ThetaVector {
    fn from(thetas: Vec<f64>) -> Self {
        Self(thetas)
    }
}

/// Draws N independent angles from `Normal(mean_theta, sigma)`. Negative
/// draws are kept as-is: `cos^2` is even, and clipping would bias the mean.
pub fn sample_thetas(spec: &DispersionSpec, rng: &mut impl Rng) -> ThetaVector {
    let normal = Normal::new(spec.mean_theta, spec.sigma).expect("validated spec");
    ThetaVector((0..spec.n_splitters).map(|_| normal.sample(rng)).collect())
}

/// Transmission of one realization, `prod_j cos^2(theta_j)`.
pub fn dispersion_p1(thetas: &ThetaVector) -> Result<f64> {
    if thetas.is_empty() {
        return Err(Error::EmptyArray);
    }
    Ok(thetas.thetas().iter().map(|&t| cos_squared(t)).product())
}

/// Mean and standard error of [`dispersion_p1`] over `n_samples` independent
/// angle vectors. Sample `i` draws from stream `stream_base + i`, so the
/// result is identical for any worker count.
pub fn dispersion_ensemble(
    spec: &DispersionSpec,
    parallelism: Parallelism,
) -> Result<EnsembleStats> {
    spec.validate()?;
    let values = exec::map_indexed(spec.n_samples as u64, parallelism, |i| {
        let mut rng = stream_rng(spec.seed, spec.stream_base + i);
        let thetas = sample_thetas(spec, &mut rng);
        dispersion_p1(&thetas).expect("spec guarantees a nonempty vector")
    });
    let mut stats = EnsembleStats::with_slots(1);
    for value in values {
        stats.push(0, value);
    }
    Ok(stats)
}

/// Closed-form ensemble expectation of [`dispersion_p1`] for independent
/// `theta_j ~ Normal(pi/2N, sigma^2)`:
///
/// `E[prod_j cos^2(theta_j)] = [(1 + cos(pi/N) exp(-2 sigma^2)) / 2]^N`,
///
/// using `E[cos(2 theta)] = cos(2 mean) exp(-2 sigma^2)`. Reduces to
/// [`ideal_p1`] at `sigma = 0`.
pub fn dispersion_expectation(n_splitters: usize, sigma: f64) -> Result<f64> {
    if n_splitters == 0 {
        return Err(Error::EmptyArray);
    }
    if !sigma.is_finite() || sigma < 0.0 {
        return Err(Error::InvalidSigma(sigma));
    }
    let factor = 0.5 * (1.0 + (PI / n_splitters as f64).cos() * (-2.0 * sigma * sigma).exp());
    Ok(power(factor, n_splitters))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn ideal_p1_edge_angles() {
        assert_eq!(ideal_p1(1, Some(std::f64::consts::FRAC_PI_2)).unwrap(), 0.0);
        assert_eq!(ideal_p1(1, Some(0.0)).unwrap(), 1.0);
        assert_eq!(ideal_p1(1, None).unwrap(), 0.0);
        assert_eq!(ideal_p1(2, None).unwrap(), 0.25);
        assert_abs_diff_eq!(ideal_p1(3, None).unwrap(), 27.0 / 64.0, epsilon = 1e-15);
    }

    #[test]
    fn ideal_p1_at_fifty_splitters() {
        // cos^100(pi/100), high-precision reference value
        assert_abs_diff_eq!(
            ideal_p1(50, None).unwrap(),
            0.951842078797778,
            epsilon = 1e-12
        );
    }

    #[test]
    fn ideal_p1_rejects_empty_array() {
        assert_eq!(ideal_p1(0, None), Err(Error::EmptyArray));
    }

    #[test]
    fn ideal_p1_monotone_toward_transparency() {
        let mut previous = ideal_p1(1, None).unwrap();
        for n in 2..=10_000 {
            let current = ideal_p1(n, None).unwrap();
            assert!(current > previous, "not increasing at N = {n}");
            previous = current;
        }
        assert!(previous > 0.9997);
        assert_abs_diff_eq!(previous, 0.999753290326796, epsilon = 1e-12);
    }

    #[test]
    fn degenerate_normal_returns_the_mean() {
        let spec = DispersionSpec::new(8, 0.0, 1, 3).unwrap();
        let mut rng = stream_rng(spec.seed, 0);
        let thetas = sample_thetas(&spec, &mut rng);
        assert!(thetas.thetas().iter().all(|&t| t == spec.mean_theta));
    }

    #[test]
    fn sampling_is_deterministic_per_seed() {
        let spec = DispersionSpec::new(16, 0.01, 1, 99).unwrap();
        let a = sample_thetas(&spec, &mut stream_rng(spec.seed, 5));
        let b = sample_thetas(&spec, &mut stream_rng(spec.seed, 5));
        assert_eq!(a, b);
        let c = sample_thetas(&spec, &mut stream_rng(spec.seed, 6));
        assert_ne!(a, c);
    }

    #[test]
    fn sample_mean_tracks_the_distribution_mean() {
        // 10^6 single-angle draws; the sample mean must land within
        // 5 sigma / sqrt(10^6) of the distribution mean.
        let spec = DispersionSpec::new(1, 0.01, 1, 7).unwrap();
        let draws = 1_000_000usize;
        let mut rng = stream_rng(spec.seed, 0);
        let mut sum = 0.0;
        for _ in 0..draws {
            sum += sample_thetas(&spec, &mut rng).thetas()[0];
        }
        let mean = sum / draws as f64;
        assert!((mean - spec.mean_theta).abs() < 5.0 * spec.sigma / 1000.0);
    }

    #[test]
    fn dispersion_p1_of_identical_angles_matches_ideal() {
        let theta = 0.021;
        let thetas = ThetaVector::from(vec![theta; 40]);
        assert_abs_diff_eq!(
            dispersion_p1(&thetas).unwrap(),
            ideal_p1(40, Some(theta)).unwrap(),
            epsilon = 1e-13
        );
    }

    #[test]
    fn one_opaque_splitter_blocks_everything() {
        let thetas = ThetaVector::from(vec![0.01, std::f64::consts::FRAC_PI_2, 0.01]);
        assert_eq!(dispersion_p1(&thetas).unwrap(), 0.0);
    }

    #[test]
    fn dispersion_p1_direct_product() {
        let thetas = ThetaVector::from(vec![PI / 6.0, PI / 4.0]);
        assert_abs_diff_eq!(dispersion_p1(&thetas).unwrap(), 0.375, epsilon = 1e-15);
    }

    #[test]
    fn dispersion_p1_rejects_empty_vector() {
        assert_eq!(
            dispersion_p1(&ThetaVector::from(vec![])),
            Err(Error::EmptyArray)
        );
    }

    #[test]
    fn expectation_reduces_to_ideal_at_zero_sigma() {
        for n in [1, 3, 50, 777] {
            assert_eq!(
                dispersion_expectation(n, 0.0).unwrap(),
                ideal_p1(n, None).unwrap()
            );
        }
    }

    #[test]
    fn expectation_reference_value() {
        // [(1 + cos(pi/100) e^{-2e-4}) / 2]^100, high-precision reference
        assert_abs_diff_eq!(
            dispersion_expectation(100, 0.01).unwrap(),
            0.965922130815579,
            epsilon = 1e-12
        );
    }

    #[test]
    fn expectation_decreases_with_sigma() {
        for n in [3usize, 10, 100] {
            let mut previous = dispersion_expectation(n, 0.0).unwrap();
            for sigma in [1e-4, 1e-3, 1e-2, 0.05, 0.2] {
                let current = dispersion_expectation(n, sigma).unwrap();
                assert!(
                    current < previous,
                    "not decreasing at N = {n}, sigma = {sigma}"
                );
                previous = current;
            }
        }
    }

    #[test]
    fn expectation_never_exceeds_ideal() {
        for n in 3..80 {
            let sigma_cap = (std::f64::consts::FRAC_PI_4 - default_theta(n)) / 4.0;
            let sigma = 0.9 * sigma_cap;
            assert!(dispersion_expectation(n, sigma).unwrap() <= ideal_p1(n, None).unwrap());
        }
    }

    #[test]
    fn zero_sigma_ensemble_is_exact() {
        let spec = DispersionSpec::new(25, 0.0, 64, 11).unwrap();
        let stats = dispersion_ensemble(&spec, Parallelism::Auto).unwrap();
        assert_eq!(stats.count(0), 64);
        assert_abs_diff_eq!(stats.mean(0), ideal_p1(25, None).unwrap(), epsilon = 1e-13);
        assert_abs_diff_eq!(stats.stderr(0), 0.0, epsilon = 1e-13);
    }

    #[test]
    fn ensemble_mean_matches_closed_form() {
        let spec = DispersionSpec::new(100, 0.01, 5000, 20).unwrap();
        let stats = dispersion_ensemble(&spec, Parallelism::Auto).unwrap();
        let expected = dispersion_expectation(100, 0.01).unwrap();
        let z = (stats.mean(0) - expected).abs() / stats.stderr(0);
        assert!(z < 4.0, "ensemble mean off by {z} standard errors");
    }

    #[test]
    fn single_angle_moment_matches_gaussian_identity() {
        // E[cos^2(theta)] = (1 + cos(2 mu) e^{-2 sigma^2}) / 2 checked by
        // direct Monte Carlo, one splitter, 10^6 draws.
        let spec = DispersionSpec::new(1, 0.02, 1, 13)
            .unwrap()
            .with_mean_theta(0.3)
            .unwrap();
        let mut rng = stream_rng(spec.seed, 0);
        let draws = 1_000_000usize;
        let mut stats = EnsembleStats::with_slots(1);
        for _ in 0..draws {
            stats.push(0, cos_squared(sample_thetas(&spec, &mut rng).thetas()[0]));
        }
        let closed =
            0.5 * (1.0 + (2.0 * spec.mean_theta).cos() * (-2.0 * spec.sigma * spec.sigma).exp());
        let z = (stats.mean(0) - closed).abs() / stats.stderr(0);
        assert!(z < 4.0, "moment off by {z} standard errors");
    }

    #[test]
    fn ensemble_is_deterministic_and_worker_independent() {
        let spec = DispersionSpec::new(60, 0.005, 400, 21).unwrap();
        let auto = dispersion_ensemble(&spec, Parallelism::Auto).unwrap();
        let seq = dispersion_ensemble(&spec, Parallelism::from_worker_hint(Some(1))).unwrap();
        let eight = dispersion_ensemble(&spec, Parallelism::from_worker_hint(Some(8))).unwrap();
        assert_eq!(auto, seq);
        assert_eq!(auto, eight);
    }

    #[test]
    fn spec_validation() {
        assert_eq!(DispersionSpec::new(0, 0.01, 10, 0), Err(Error::EmptyArray));
        assert_eq!(
            DispersionSpec::new(5, -0.01, 10, 0),
            Err(Error::InvalidSigma(-0.01))
        );
        assert_eq!(
            DispersionSpec::new(5, 0.01, 0, 0),
            Err(Error::EmptyEnsemble)
        );
    }
}
