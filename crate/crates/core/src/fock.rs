//! Truncated two-mode Fock space: basis indexing, the beam-splitter
//! transformation, partial trace over the reflected port, and thermal input
//! mixtures.
//!
//! Basis order is canonical and stable across runs: states `|n_c, n_d>` are
//! grouped by ascending total photon number and sorted by descending `n_c`
//! inside each group, i.e. `(0,0), (1,0), (0,1), (2,0), (1,1), (0,2), ...`.
//!
//! Sign convention: the splitter maps the input modes as
//! `a -> c cos(theta) - d sin(theta)` and `b -> c sin(theta) + d cos(theta)`,
//! so its matrix is real orthogonal and block-diagonal in total photon
//! number. Probabilities are convention-independent; amplitudes are not.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Maximum total photon number retained across the two modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FockCutoff {
    n_max: usize,
}

impl FockCutoff {
    pub fn new(n_max: usize) -> Result<Self> {
        if n_max < 1 {
            return Err(Error::CutoffTooSmall(n_max));
        }
        Ok(Self { n_max })
    }

    pub fn n_max(self) -> usize {
        self.n_max
    }

    /// Two-mode basis size, `(n_max + 1)(n_max + 2) / 2`.
    pub fn basis_len(self) -> usize {
        (self.n_max + 1) * (self.n_max + 2) / 2
    }

    /// Number of single-port photon-number slots, `n_max + 1`.
    pub fn port_len(self) -> usize {
        self.n_max + 1
    }
}

impl Default for FockCutoff {
    /// Two photons: one signal photon plus at most one thermal companion.
    fn default() -> Self {
        Self { n_max: 2 }
    }
}

/// Canonical index of `|n_c, n_d>` in the two-mode basis.
pub fn basis_index(n_c: usize, n_d: usize, cutoff: FockCutoff) -> Result<usize> {
    let n = n_c + n_d;
    if n > cutoff.n_max() {
        return Err(Error::PhotonCountOutOfRange {
            n_c,
            n_d,
            n_max: cutoff.n_max(),
        });
    }
    Ok(n * (n + 1) / 2 + n_d)
}

/// All `(n_c, n_d)` pairs in canonical order.
pub fn basis_states(cutoff: FockCutoff) -> impl Iterator<Item = (usize, usize)> {
    (0..=cutoff.n_max()).flat_map(|n| (0..=n).map(move |n_d| (n - n_d, n_d)))
}

/// Real beam-splitter angle in radians; `cos` is the transmission amplitude
/// and `sin` the reflection amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamSplitterAngle {
    theta: f64,
}

impl BeamSplitterAngle {
    /// Any finite angle is allowed; `cos^2` handles the rest.
    pub fn new(theta: f64) -> Result<Self> {
        if !theta.is_finite() {
            return Err(Error::NonFiniteAngle(theta));
        }
        Ok(Self { theta })
    }

    pub fn radians(self) -> f64 {
        self.theta
    }
}

/// Pure state of the two modes, amplitudes in canonical basis order.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeState {
    cutoff: FockCutoff,
    amplitudes: Vec<Complex64>,
}

impl TwoModeState {
    pub fn vacuum(cutoff: FockCutoff) -> Self {
        let mut amplitudes = vec![Complex64::ZERO; cutoff.basis_len()];
        amplitudes[0] = Complex64::ONE;
        Self { cutoff, amplitudes }
    }

    /// Number state `|n_c, n_d>`.
    pub fn number_state(n_c: usize, n_d: usize, cutoff: FockCutoff) -> Result<Self> {
        let index = basis_index(n_c, n_d, cutoff)?;
        let mut amplitudes = vec![Complex64::ZERO; cutoff.basis_len()];
        amplitudes[index] = Complex64::ONE;
        Ok(Self { cutoff, amplitudes })
    }

    pub fn from_amplitudes(cutoff: FockCutoff, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != cutoff.basis_len() {
            return Err(Error::AmplitudeLengthMismatch {
                got: amplitudes.len(),
                expected: cutoff.basis_len(),
            });
        }
        Ok(Self { cutoff, amplitudes })
    }

    pub fn cutoff(&self) -> FockCutoff {
        self.cutoff
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, n_c: usize, n_d: usize) -> Result<Complex64> {
        Ok(self.amplitudes[basis_index(n_c, n_d, self.cutoff)?])
    }

    pub fn norm_squared(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }
}

/// Beam-splitter unitary on the truncated two-mode basis.
#[derive(Debug, Clone)]
pub struct BeamSplitter {
    angle: BeamSplitterAngle,
    cutoff: FockCutoff,
    /// Row-major `dim x dim`; real in this convention.
    matrix: Vec<f64>,
}

impl BeamSplitter {
    pub fn new(angle: BeamSplitterAngle, cutoff: FockCutoff) -> Self {
        let dim = cutoff.basis_len();
        let mut matrix = vec![0.0; dim * dim];
        let cos = angle.radians().cos();
        let sin = angle.radians().sin();
        let factorial: Vec<f64> = {
            let mut f = vec![1.0; cutoff.n_max() + 1];
            for k in 1..=cutoff.n_max() {
                f[k] = f[k - 1] * k as f64;
            }
            f
        };
        let binomial = |n: usize, k: usize| factorial[n] / (factorial[k] * factorial[n - k]);

        for (n_a, n_b) in basis_states(cutoff) {
            let col = basis_index(n_a, n_b, cutoff).expect("in-range basis state");
            let n = n_a + n_b;
            // Expand (cos c+ - sin d+)^n_a (sin c+ + cos d+)^n_b term by term.
            for n_c in 0..=n {
                let n_d = n - n_c;
                let mut sum = 0.0;
                let k_min = n_c.saturating_sub(n_b);
                let k_max = n_c.min(n_a);
                for k in k_min..=k_max {
                    let l = n_c - k;
                    sum += binomial(n_a, k)
                        * binomial(n_b, l)
                        * cos.powi((k + n_b - l) as i32)
                        * (-sin).powi((n_a - k) as i32)
                        * sin.powi(l as i32);
                }
                let prefactor =
                    (factorial[n_c] * factorial[n_d] / (factorial[n_a] * factorial[n_b])).sqrt();
                let row = basis_index(n_c, n_d, cutoff).expect("in-range basis state");
                matrix[row * dim + col] = prefactor * sum;
            }
        }
        Self {
            angle,
            cutoff,
            matrix,
        }
    }

    pub fn angle(&self) -> BeamSplitterAngle {
        self.angle
    }

    pub fn cutoff(&self) -> FockCutoff {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        self.cutoff.basis_len()
    }

    /// Matrix element `<row|U|col>` in canonical basis order.
    pub fn element(&self, row: usize, col: usize) -> f64 {
        self.matrix[row * self.dim() + col]
    }

    /// Applies the splitter to a state of matching cutoff; photon number is
    /// conserved, so no truncation can occur here and the norm is preserved.
    pub fn apply(&self, state: &TwoModeState) -> Result<TwoModeState> {
        if state.cutoff() != self.cutoff {
            return Err(Error::CutoffMismatch {
                state: state.cutoff().n_max(),
                operator: self.cutoff.n_max(),
            });
        }
        let dim = self.dim();
        let mut out = vec![Complex64::ZERO; dim];
        for (row, slot) in out.iter_mut().enumerate() {
            let mut acc = Complex64::ZERO;
            for (col, amp) in state.amplitudes().iter().enumerate() {
                acc += self.matrix[row * dim + col] * amp;
            }
            *slot = acc;
        }
        Ok(TwoModeState {
            cutoff: self.cutoff,
            amplitudes: out,
        })
    }
}

/// Diagonal photon-number mixture at one port, with the probability mass
/// dropped by truncation tracked in `leaked` rather than renormalized away.
#[derive(Debug, Clone, PartialEq)]
pub struct PortMixture {
    cutoff: FockCutoff,
    probs: Vec<f64>,
    leaked: f64,
}

impl PortMixture {
    pub fn new(cutoff: FockCutoff, probs: Vec<f64>, leaked: f64) -> Result<Self> {
        if probs.len() != cutoff.port_len() {
            return Err(Error::AmplitudeLengthMismatch {
                got: probs.len(),
                expected: cutoff.port_len(),
            });
        }
        for (index, &value) in probs.iter().enumerate() {
            if !(0.0..=1.0 + 1e-12).contains(&value) {
                return Err(Error::InvalidProbability { index, value });
            }
        }
        Ok(Self {
            cutoff,
            probs,
            leaked,
        })
    }

    pub fn vacuum(cutoff: FockCutoff) -> Self {
        let mut probs = vec![0.0; cutoff.port_len()];
        probs[0] = 1.0;
        Self {
            cutoff,
            probs,
            leaked: 0.0,
        }
    }

    /// Exactly one photon, the array's input state.
    pub fn single_photon(cutoff: FockCutoff) -> Self {
        let mut probs = vec![0.0; cutoff.port_len()];
        probs[1] = 1.0;
        Self {
            cutoff,
            probs,
            leaked: 0.0,
        }
    }

    pub fn cutoff(&self) -> FockCutoff {
        self.cutoff
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Probability of finding exactly `k` photons.
    pub fn prob(&self, k: usize) -> f64 {
        self.probs[k]
    }

    pub fn leaked(&self) -> f64 {
        self.leaked
    }

    /// `sum(probs) + leaked`; equals 1 up to rounding for any mixture built
    /// by this crate.
    pub fn total_mass(&self) -> f64 {
        self.probs.iter().sum::<f64>() + self.leaked
    }
}

/// Photon-number distribution at the transmitted port after discarding the
/// reflected one: `probs[k] = sum_d |amplitude(k, d)|^2`.
pub fn trace_out_reflected(state: &TwoModeState) -> PortMixture {
    let cutoff = state.cutoff();
    let mut probs = vec![0.0; cutoff.port_len()];
    for (n_c, n_d) in basis_states(cutoff) {
        let amp = state
            .amplitude(n_c, n_d)
            .expect("basis iteration stays in range");
        probs[n_c] += amp.norm_sqr();
    }
    PortMixture {
        cutoff,
        probs,
        leaked: 0.0,
    }
}

/// Bose-Einstein mixture with mean photon number `nbar`, truncated at
/// `cutoff.n_max()` photons: `probs[k] = nbar^k / (1 + nbar)^(k+1)`.
///
/// The dropped tail has the closed form `(nbar / (1 + nbar))^(n_max + 1)`;
/// it lands in `leaked` unless `renormalize` spreads it back over the kept
/// weights.
pub fn thermal_mixture(nbar: f64, cutoff: FockCutoff, renormalize: bool) -> Result<PortMixture> {
    if !nbar.is_finite() || nbar < 0.0 {
        return Err(Error::InvalidMeanPhotonNumber(nbar));
    }
    let mut probs = Vec::with_capacity(cutoff.port_len());
    for k in 0..cutoff.port_len() {
        probs.push(nbar.powi(k as i32) / (1.0 + nbar).powi(k as i32 + 1));
    }
    let leaked = (nbar / (1.0 + nbar)).powi(cutoff.port_len() as i32);
    if renormalize {
        let kept = 1.0 - leaked;
        for p in &mut probs {
            *p /= kept;
        }
        PortMixture::new(cutoff, probs, 0.0)
    } else {
        PortMixture::new(cutoff, probs, leaked)
    }
}

/// Classical mixture of pure two-mode number states, as produced by pairing a
/// port distribution with a fresh ancilla.
#[derive(Debug, Clone)]
pub struct TensorMixture {
    /// Nonzero-weight number states `|n_port, n_ancilla>`.
    pub components: Vec<(TwoModeState, f64)>,
    /// Previously leaked mass plus everything dropped while pairing.
    pub leaked: f64,
}

/// Pairs a port mixture with an ancilla mixture into joint number states.
/// Components whose total photon number exceeds `cutoff` are dropped and
/// their weight added to `leaked`, so weights and `leaked` still sum to 1.
pub fn tensor_with_ancilla(
    port: &PortMixture,
    ancilla: &PortMixture,
    cutoff: FockCutoff,
) -> TensorMixture {
    let mut components = Vec::new();
    let mut leaked = port.leaked() + (1.0 - port.leaked()) * ancilla.leaked();
    for (n_port, &p_port) in port.probs().iter().enumerate() {
        for (n_anc, &p_anc) in ancilla.probs().iter().enumerate() {
            let weight = p_port * p_anc;
            if weight == 0.0 {
                continue;
            }
            if n_port + n_anc > cutoff.n_max() {
                leaked += weight;
            } else {
                let state = TwoModeState::number_state(n_port, n_anc, cutoff)
                    .expect("component within cutoff");
                components.push((state, weight));
            }
        }
    }
    TensorMixture { components, leaked }
}
