//! Optimal array length under absorption.
//!
//! With per-splitter absorption `gamma` and the transparency condition
//! `theta = pi / 2N`, the end-to-end transmission
//! `P1(N) = exp(-gamma N) cos^(2N)(pi / 2N)` rises toward the measurement
//! limit and then falls to the absorption losses, peaking at a critical
//! count `N_c`. Stationarity of `ln P1` in N gives the closed relation
//! `gamma = 2 ln cos(pi / 2N_c) + (pi / N_c) tan(pi / 2N_c)`, which is
//! strictly decreasing in `N_c` and therefore invertible by bisection.

use std::f64::consts::PI;

use crate::array::ideal_p1;
use crate::error::{Error, Result};

/// Relative bisection tolerance on the critical count.
const N_REAL_REL_TOL: f64 = 1e-12;

/// End-to-end transmission with absorption, `exp(-gamma N) cos^(2N)(pi/2N)`.
pub fn transmission_with_absorption(n_splitters: usize, gamma: f64) -> f64 {
    (-gamma * n_splitters as f64).exp()
        * ideal_p1(n_splitters, None).expect("n_splitters >= 1 at call sites")
}

/// Absorption coefficient for which `n_c` splitters are stationary:
/// `2 ln cos(pi/2n) + (pi/n) tan(pi/2n)`. Positive and strictly decreasing
/// for `n_c >= 2`; diverges toward `n_c = 1` where the tangent blows up.
pub fn critical_gamma(n_c: f64) -> Result<f64> {
    if !n_c.is_finite() || n_c < 2.0 {
        return Err(Error::CriticalCountBelowTwo(n_c));
    }
    let half_angle = PI / (2.0 * n_c);
    Ok(2.0 * half_angle.cos().ln() + (PI / n_c) * half_angle.tan())
}

/// Solution of the critical-count problem for one absorption coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalResult {
    pub gamma: f64,
    /// Real stationary point of `ln P1`, from inverting [`critical_gamma`].
    pub n_real: f64,
    /// Integer argmax of the transmission; within 1 of `n_real`.
    pub n_int: usize,
    /// Transmission at `n_int`.
    pub p1_at_max: f64,
    /// Small-angle estimate `pi / (2 sqrt(gamma))` of `n_real`.
    pub asymptotic_estimate: f64,
}

/// Small-angle limit of the stationarity relation, `n_c ~ pi / (2 sqrt(gamma))`.
pub fn asymptotic_critical_n(gamma: f64) -> f64 {
    debug_assert!(gamma > 0.0);
    PI / (2.0 * gamma.sqrt())
}

/// Alternative `sqrt(pi / gamma) / 2` estimate quoted in some treatments;
/// smaller than [`asymptotic_critical_n`] by a factor `sqrt(pi)`. Exposed for
/// comparison output, not used as the solver's reference.
pub fn asymptotic_critical_n_alt(gamma: f64) -> f64 {
    debug_assert!(gamma > 0.0);
    0.5 * (PI / gamma).sqrt()
}

/// Inverts [`critical_gamma`] by bisection and locates the integer argmax of
/// the transmission by scanning a bracket around the real root (expanding it
/// while the maximum sits on an edge). Ties between adjacent integers go to
/// the smaller count.
pub fn solve_critical_n(gamma: f64) -> Result<CriticalResult> {
    if !gamma.is_finite() || gamma <= 0.0 {
        return Err(Error::NonPositiveGamma(gamma));
    }
    let limit = critical_gamma(2.0).expect("2 is in range");
    if gamma > limit {
        return Err(Error::GammaAboveSolvableRange { gamma, limit });
    }

    let mut lo = 2.0;
    let mut hi = (10.0_f64).max(10.0 * asymptotic_critical_n(gamma));
    debug_assert!(critical_gamma(hi).expect("hi >= 2") <= gamma);
    // critical_gamma decreases in n, so gamma(lo) >= gamma >= gamma(hi)
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if critical_gamma(mid)? >= gamma {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo) <= N_REAL_REL_TOL * hi {
            break;
        }
    }
    let n_real = 0.5 * (lo + hi);

    let mut window_lo = (n_real.floor() as usize).saturating_sub(3).max(2);
    let mut window_hi = n_real.ceil() as usize + 3;
    let (n_int, p1_at_max) = loop {
        let best = (window_lo..=window_hi)
            .map(|n| (n, transmission_with_absorption(n, gamma)))
            // strictly-greater comparison resolves ties to the smaller count
            .fold((window_lo, f64::NEG_INFINITY), |best, (n, p)| {
                if p > best.1 {
                    (n, p)
                } else {
                    best
                }
            });
        if best.0 == window_lo && window_lo > 2 {
            window_lo = window_lo.saturating_sub(8).max(2);
        } else if best.0 == window_hi {
            window_hi += 8;
        } else {
            break best;
        }
    };

    Ok(CriticalResult {
        gamma,
        n_real,
        n_int,
        p1_at_max,
        asymptotic_estimate: asymptotic_critical_n(gamma),
    })
}
