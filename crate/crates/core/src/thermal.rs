//! Exact propagation of a single photon through the array when a fresh
//! truncated thermal state enters every auxiliary input port.
//!
//! The recurrence is exact within the Fock cutoff: the mixture at port `c_j`
//! is paired with a fresh thermal ancilla, sent through the splitter, and the
//! reflected mode is traced out. Mass dropped by truncation accumulates in
//! `leaked` instead of being renormalized away, so the truncation error of a
//! run is always visible.

use crate::array::{cos_squared, default_theta, sin_squared};
use crate::error::{Error, Result};
use crate::fock::{
    tensor_with_ancilla, thermal_mixture, trace_out_reflected, BeamSplitter, BeamSplitterAngle,
    FockCutoff, PortMixture,
};

/// Array with uniform angle, absorptionless splitters, and thermal noise at
/// every auxiliary port.
#[derive(Debug, Clone, PartialEq)]
pub struct ThermalArraySpec {
    pub n_splitters: usize,
    /// Uniform splitting angle; defaults to `pi / 2N`.
    pub theta: f64,
    /// Mean photon number of the thermal inputs.
    pub nbar: f64,
    /// Total-photon-number cutoff carried through the array.
    pub cutoff: FockCutoff,
    /// Cutoff of each fresh thermal ancilla; one photon by default.
    pub ancilla_cutoff: FockCutoff,
    /// Spread the truncated ancilla tail back over the kept weights instead
    /// of tracking it as leaked mass.
    pub renormalize_ancilla: bool,
}

impl ThermalArraySpec {
    pub fn new(n_splitters: usize, nbar: f64) -> Result<Self> {
        if n_splitters == 0 {
            return Err(Error::EmptyArray);
        }
        let spec = Self {
            n_splitters,
            theta: default_theta(n_splitters),
            nbar,
            cutoff: FockCutoff::default(),
            ancilla_cutoff: FockCutoff::new(1).expect("1 >= 1"),
            renormalize_ancilla: false,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_theta(mut self, theta: f64) -> Result<Self> {
        self.theta = theta;
        self.validate()?;
        Ok(self)
    }

    pub fn with_cutoff(mut self, cutoff: FockCutoff) -> Self {
        self.cutoff = cutoff;
        self
    }

    pub fn with_ancilla_cutoff(mut self, ancilla_cutoff: FockCutoff) -> Self {
        self.ancilla_cutoff = ancilla_cutoff;
        self
    }

    pub fn with_renormalized_ancilla(mut self, renormalize: bool) -> Self {
        self.renormalize_ancilla = renormalize;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_splitters == 0 {
            return Err(Error::EmptyArray);
        }
        if !self.theta.is_finite() {
            return Err(Error::NonFiniteAngle(self.theta));
        }
        if !self.nbar.is_finite() || self.nbar < 0.0 {
            return Err(Error::InvalidMeanPhotonNumber(self.nbar));
        }
        Ok(())
    }
}

/// Single-step output distribution for a one-photon input mixed with a
/// `(alpha, beta)` thermal ancilla: probabilities of 0, 1, and 2 photons at
/// the transmitted port.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepCoefficients {
    pub a0: f64,
    pub a1: f64,
    pub a2: f64,
}

impl StepCoefficients {
    /// `a0 + a1 + a2`; equals `alpha + beta` because the splitter and trace
    /// conserve probability.
    pub fn total(&self) -> f64 {
        self.a0 + self.a1 + self.a2
    }
}

/// Closed form of the single-step map:
/// `a0 = alpha sin^2(t) + 2 beta cos^2(t) sin^2(t)`,
/// `a1 = alpha cos^2(t) + beta cos^2(2t)`,
/// `a2 = 2 beta cos^2(t) sin^2(t)`.
pub fn step_coefficients(alpha: f64, beta: f64, theta: f64) -> StepCoefficients {
    let c2 = cos_squared(theta);
    let s2 = sin_squared(theta);
    let c2_double = cos_squared(2.0 * theta);
    StepCoefficients {
        a0: alpha * s2 + 2.0 * beta * c2 * s2,
        a1: alpha * c2 + beta * c2_double,
        a2: 2.0 * beta * c2 * s2,
    }
}

/// Propagates the single photon through all N splitters, returning the
/// mixture at every transmitted port `c_1 .. c_N`.
pub fn propagate_thermal_array(spec: &ThermalArraySpec) -> Result<Vec<PortMixture>> {
    spec.validate()?;
    let splitter = BeamSplitter::new(BeamSplitterAngle::new(spec.theta)?, spec.cutoff);
    let ancilla = thermal_mixture(spec.nbar, spec.ancilla_cutoff, spec.renormalize_ancilla)?;
    let mut port = PortMixture::single_photon(spec.cutoff);
    let mut ports = Vec::with_capacity(spec.n_splitters);
    for _ in 0..spec.n_splitters {
        let joint = tensor_with_ancilla(&port, &ancilla, spec.cutoff);
        let mut probs = vec![0.0; spec.cutoff.port_len()];
        for (state, weight) in &joint.components {
            let transmitted = trace_out_reflected(&splitter.apply(state)?);
            for (k, p) in transmitted.probs().iter().enumerate() {
                probs[k] += weight * p;
            }
        }
        port = PortMixture::new(spec.cutoff, probs, joint.leaked)?;
        ports.push(port.clone());
    }
    Ok(ports)
}

/// Geometric-decay approximation `alpha^N cos^(2N)(theta)` of the end-port
/// single-photon probability; exact at `nbar = 0` where `alpha = 1`.
pub fn thermal_p1_approx(n_splitters: usize, theta: f64, alpha: f64) -> f64 {
    debug_assert!(n_splitters >= 1);
    debug_assert!((0.0..=1.0).contains(&alpha));
    let n = n_splitters as i32;
    alpha.powi(n) * cos_squared(theta).powi(n)
}
