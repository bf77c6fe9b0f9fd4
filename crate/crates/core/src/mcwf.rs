//! Quantum-jump Monte Carlo simulation of the array with absorption and
//! reflection as loss channels.
//!
//! Each splitter either transmits the photon (probability `1 - delta_p`) or
//! triggers a jump that collapses the transmitted mode to vacuum, with
//! `delta_p = gamma + sin^2(theta)`. After a jump the photon is gone, the
//! remaining survival indicators are zero, and the trajectory ends early:
//! whether the loss was absorption or reflection only enters through
//! `delta_p` itself.

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::array::{default_theta, sin_squared};
use crate::error::{Error, Result};
use crate::exec::{self, Parallelism};
use crate::rng::stream_rng;
use crate::stats::EnsembleStats;

/// Trajectory-ensemble description.
#[derive(Debug, Clone, PartialEq)]
pub struct McwfSpec {
    pub n_splitters: usize,
    /// Absorption probability per splitter.
    pub gamma: f64,
    /// Splitting angle; defaults to `pi / 2N`.
    pub theta: f64,
    /// Number of trajectories in the ensemble.
    pub n_trajectories: usize,
    pub seed: u64,
    /// Experimental: per-splitter angle spread. Zero (the default) keeps all
    /// splitters identical; nonzero draws each trajectory's angles from
    /// `Normal(theta, theta_sigma)`.
    pub theta_sigma: f64,
}

impl McwfSpec {
    pub fn new(n_splitters: usize, gamma: f64, n_trajectories: usize, seed: u64) -> Result<Self> {
        if n_splitters == 0 {
            return Err(Error::EmptyArray);
        }
        let spec = Self {
            n_splitters,
            gamma,
            theta: default_theta(n_splitters),
            n_trajectories,
            seed,
            theta_sigma: 0.0,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_theta(mut self, theta: f64) -> Result<Self> {
        self.theta = theta;
        self.validate()?;
        Ok(self)
    }

    pub fn with_theta_sigma(mut self, theta_sigma: f64) -> Result<Self> {
        self.theta_sigma = theta_sigma;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_splitters == 0 {
            return Err(Error::EmptyArray);
        }
        if self.n_trajectories == 0 {
            return Err(Error::EmptyEnsemble);
        }
        if !self.theta_sigma.is_finite() || self.theta_sigma < 0.0 {
            return Err(Error::InvalidSigma(self.theta_sigma));
        }
        jump_probability(self.gamma, self.theta)?;
        Ok(())
    }

    /// The per-splitter jump probability for the nominal angle.
    pub fn jump_probability(&self) -> f64 {
        jump_probability(self.gamma, self.theta).expect("validated spec")
    }
}

/// Per-splitter jump probability `gamma + sin^2(theta)` for a one-photon
/// input; rejected when it exceeds 1.
pub fn jump_probability(gamma: f64, theta: f64) -> Result<f64> {
    if !gamma.is_finite() || gamma < 0.0 {
        return Err(Error::InvalidGamma(gamma));
    }
    if !theta.is_finite() {
        return Err(Error::NonFiniteAngle(theta));
    }
    let delta_p = gamma + sin_squared(theta);
    if delta_p > 1.0 {
        return Err(Error::JumpProbabilityTooLarge {
            gamma,
            theta,
            delta_p,
        });
    }
    Ok(delta_p)
}

/// One stochastic realization: survival indicators per splitter and the jump
/// position, if any.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord {
    survival: Vec<bool>,
    jump_at: Option<usize>,
}

impl TrajectoryRecord {
    /// Survival indicator per splitter, `survival[n-1]` for splitter `n`.
    pub fn survival(&self) -> &[bool] {
        &self.survival
    }

    /// 1-based index of the splitter where the jump occurred.
    pub fn jump_at(&self) -> Option<usize> {
        self.jump_at
    }

    /// Checks the `1...1 0...0` step shape: ones up to the jump, zeros after.
    pub fn is_step_shaped(&self) -> bool {
        let boundary = self.jump_at.map_or(self.survival.len(), |j| j - 1);
        self.survival[..boundary].iter().all(|&s| s)
            && self.survival[boundary..].iter().all(|&s| !s)
    }
}

/// Runs one trajectory: at each splitter a uniform draw `r` is compared with
/// the jump probability; `r >= delta_p` transmits, anything else jumps and
/// ends the evolution.
pub fn run_trajectory(spec: &McwfSpec, rng: &mut impl Rng) -> TrajectoryRecord {
    let dispersed = (spec.theta_sigma > 0.0)
        .then(|| Normal::new(spec.theta, spec.theta_sigma).expect("validated spec"));
    let nominal_delta_p = spec.jump_probability();
    let mut survival = vec![false; spec.n_splitters];
    let mut jump_at = None;
    for (step, alive) in survival.iter_mut().enumerate() {
        let delta_p = match &dispersed {
            Some(normal) => (spec.gamma + sin_squared(normal.sample(rng))).min(1.0),
            None => nominal_delta_p,
        };
        let r: f64 = rng.random();
        if r >= delta_p {
            *alive = true;
        } else {
            jump_at = Some(step + 1);
            break;
        }
    }
    TrajectoryRecord { survival, jump_at }
}

/// Ensemble over trajectories `first .. first + count` of the spec's stream
/// space. Statistics come from integer survivor counts, so the result is
/// bit-identical for any worker count, and ensembles over disjoint ranges
/// merge exactly into the pooled ensemble.
pub fn run_ensemble_range(
    spec: &McwfSpec,
    first: u64,
    count: u64,
    parallelism: Parallelism,
) -> Result<EnsembleStats> {
    spec.validate()?;
    let jumps = exec::map_indexed(count, parallelism, |i| {
        let mut rng = stream_rng(spec.seed, first + i);
        run_trajectory(spec, &mut rng).jump_at
    });
    let mut jumped_by_step = vec![0u64; spec.n_splitters + 1];
    for jump in jumps.into_iter().flatten() {
        jumped_by_step[jump] += 1;
    }
    let mut survivors = vec![0u64; spec.n_splitters];
    let mut lost = 0u64;
    for step in 1..=spec.n_splitters {
        lost += jumped_by_step[step];
        survivors[step - 1] = count - lost;
    }
    Ok(EnsembleStats::from_binary_counts(&survivors, count))
}

/// Per-splitter survival mean and standard error over the spec's full
/// trajectory ensemble.
pub fn run_ensemble(spec: &McwfSpec, parallelism: Parallelism) -> Result<EnsembleStats> {
    run_ensemble_range(spec, 0, spec.n_trajectories as u64, parallelism)
}

/// Exponential survival curve `exp(-(gamma + sin^2(pi/2N)) n)`, the
/// continuous-decay description of the same loss process.
pub fn analytic_p1_absorption(step: usize, n_splitters: usize, gamma: f64) -> f64 {
    debug_assert!(n_splitters >= 1);
    (-(gamma + sin_squared(default_theta(n_splitters))) * step as f64).exp()
}

/// Exact ensemble expectation of the survival indicator at splitter `n`:
/// the trajectory process is a per-step Bernoulli trial, so
/// `E[P1(n)] = (1 - delta_p)^n` with no further approximation.
pub fn bernoulli_p1(step: usize, gamma: f64, theta: f64) -> Result<f64> {
    let delta_p = jump_probability(gamma, theta)?;
    Ok((1.0 - delta_p).powi(step as i32))
}
