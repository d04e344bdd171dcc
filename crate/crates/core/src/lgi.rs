//! Leggett-Garg analysis of the damped `σ_x` dynamics on the heating branch.
//!
//! With three equally spaced measurements separated by `t`, the LG function is
//! `K₃(t) = 2 e^{-γt/2} cos(ωt) - e^{-γt} cos(2ωt)`, and macrorealism demands
//! `K₃ ≤ 1`. The quantum time `τ_q` is the largest total span `2t` over which
//! a violation is still possible.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qubit;

/// Default absolute tolerance on `τ_q`.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Minimum scan density for the `τ_q` search, in points per period `2π/ω`.
pub const POINTS_PER_PERIOD: usize = 1000;

fn check_rates(omega: f64, gamma: f64) -> Result<()> {
    if !(omega.is_finite() && omega > 0.0) {
        return Err(Error::domain(format!("omega must be positive, got {omega}")));
    }
    if !(gamma.is_finite() && gamma >= 0.0) {
        return Err(Error::domain(format!("gamma must be >= 0, got {gamma}")));
    }
    Ok(())
}

fn check_time(t: f64) -> Result<()> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("time must be >= 0, got {t}")))
    }
}

/// Symmetrised two-time correlator of `σ_x`, `e^{-γτ/2} cos(ωτ)`.
pub fn correlation_xx(tau: f64, omega: f64, gamma: f64) -> Result<f64> {
    check_time(tau)?;
    if !(gamma.is_finite() && gamma >= 0.0) {
        return Err(Error::domain(format!("gamma must be >= 0, got {gamma}")));
    }
    Ok((-0.5 * gamma * tau).exp() * (omega * tau).cos())
}

/// `K₃(t)` for equally spaced measurements separated by `t`.
pub fn k3(t: f64, omega: f64, gamma: f64) -> Result<f64> {
    check_time(t)?;
    check_rates(omega, gamma)?;
    Ok(k3_unchecked(t, omega, gamma))
}

fn k3_unchecked(t: f64, omega: f64, gamma: f64) -> f64 {
    2.0 * (-0.5 * gamma * t).exp() * (omega * t).cos() - (-gamma * t).exp() * (2.0 * omega * t).cos()
}

/// A quantity with the sign of `K₃(t) - 1`, free of cancellation near `t = 0`.
///
/// With `u = e^{-γt/2}` and `θ = ωt`, `K₃ - 1 = (u sin θ)² - (1 - u cos θ)²`,
/// so the sign is that of `|u sin θ| - (1 - u cos θ)`. The subtrahend is
/// evaluated as `(1 - u) + 2u sin²(θ/2)`, a sum of nonnegative terms.
pub fn violation_margin(t: f64, omega: f64, gamma: f64) -> f64 {
    let u = (-0.5 * gamma * t).exp();
    let theta = omega * t;
    let one_minus_c = -(-0.5 * gamma * t).exp_m1() + 2.0 * u * (0.5 * theta).sin().powi(2);
    (u * theta.sin()).abs() - one_minus_c
}

/// End of the window that can contain violations.
///
/// For `t ≥ (2/γ) ln(1+√2)` the envelope bound `2e^{-γt/2} + e^{-γt} ≤ 1`
/// forbids `K₃ > 1`.
pub fn violation_window_end(gamma: f64) -> f64 {
    2.0 * std::f64::consts::SQRT_2.ln_1p() / gamma
}

/// Largest measurement span `2t` with `K₃(t) > 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QuantumTime {
    /// Undamped dynamics violate the inequality at arbitrarily late times.
    Unbounded,
    Finite(f64),
}

impl QuantumTime {
    pub fn as_finite(self) -> Option<f64> {
        match self {
            QuantumTime::Finite(v) => Some(v),
            QuantumTime::Unbounded => None,
        }
    }

    pub fn violated(self) -> bool {
        match self {
            QuantumTime::Unbounded => true,
            QuantumTime::Finite(v) => v > 0.0,
        }
    }

    /// Strict `τ_q > τ_h`; values within `1e-12` of each other count as a tie
    /// and therefore as not exceeding.
    pub fn exceeds(self, tau_h: f64) -> bool {
        match self {
            QuantumTime::Unbounded => true,
            QuantumTime::Finite(v) => v > tau_h + 1e-12,
        }
    }
}

impl fmt::Display for QuantumTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuantumTime::Unbounded => f.write_str("unbounded"),
            QuantumTime::Finite(v) => write!(f, "{v:.16e}"),
        }
    }
}

impl Serialize for QuantumTime {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            QuantumTime::Unbounded => s.serialize_str("unbounded"),
            QuantumTime::Finite(v) => s.serialize_f64(*v),
        }
    }
}

impl<'de> Deserialize<'de> for QuantumTime {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Tag(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(QuantumTime::Finite(v)),
            Repr::Tag(s) if s == "unbounded" => Ok(QuantumTime::Unbounded),
            Repr::Tag(s) => Err(serde::de::Error::custom(format!("bad quantum time `{s}`"))),
        }
    }
}

impl std::str::FromStr for QuantumTime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "unbounded" {
            return Ok(QuantumTime::Unbounded);
        }
        s.parse::<f64>()
            .map(QuantumTime::Finite)
            .map_err(|_| Error::domain(format!("bad quantum time `{s}`")))
    }
}

/// `τ_q` with the default scan density.
pub fn quantum_time(omega: f64, gamma: f64, tol: f64) -> Result<QuantumTime> {
    quantum_time_with_resolution(omega, gamma, tol, POINTS_PER_PERIOD)
}

/// `τ_q = max{2t : K₃(t) > 1}`, located to absolute tolerance `tol`.
///
/// Scans `(0, violation_window_end]` right to left with at least
/// `points_per_period` samples per period, then bisects the last crossing.
/// When no sample violates but `γ < 2ω`, the violation window `(0, ε)` is
/// narrower than one scan step and is found by halving toward `t = 0`.
pub fn quantum_time_with_resolution(
    omega: f64,
    gamma: f64,
    tol: f64,
    points_per_period: usize,
) -> Result<QuantumTime> {
    check_rates(omega, gamma)?;
    if !(tol > 0.0) {
        return Err(Error::domain(format!("tolerance must be positive, got {tol}")));
    }
    if gamma == 0.0 {
        return Ok(QuantumTime::Unbounded);
    }
    let window = violation_window_end(gamma);
    let period = std::f64::consts::TAU / omega;
    let n = ((points_per_period.max(1) as f64 * window / period).ceil() as usize).max(points_per_period);
    let h = window / n as f64;
    let margin = |t: f64| violation_margin(t, omega, gamma);

    // Bracket [inside, outside] with margin(inside) > 0 ≥ margin(outside).
    let mut bracket = None;
    for i in (1..=n).rev() {
        let t = i as f64 * h;
        if margin(t) > 0.0 {
            bracket = Some((t, (t + h).min(window)));
            break;
        }
    }
    if bracket.is_none() && gamma < 2.0 * omega {
        let mut outside = h;
        for _ in 0..1100 {
            let t = 0.5 * outside;
            if t == 0.0 {
                break;
            }
            if margin(t) > 0.0 {
                bracket = Some((t, outside));
                break;
            }
            outside = t;
        }
    }
    let Some((mut inside, mut outside)) = bracket else {
        return Ok(QuantumTime::Finite(0.0));
    };
    if inside >= window {
        return Ok(QuantumTime::Finite(2.0 * window));
    }
    // τ_q = 2t, so t needs half the tolerance.
    while outside - inside > 0.5 * tol {
        let mid = 0.5 * (inside + outside);
        if mid <= inside || mid >= outside {
            break;
        }
        if margin(mid) > 0.0 {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    Ok(QuantumTime::Finite(2.0 * inside))
}

/// Hot-bath temperature at which `γ = 2ω₂`, `T_q = ω₂ / (2 acoth(2ω₂/γ₀))`.
///
/// Above it the heating-branch dynamics cannot violate the inequality.
pub fn threshold_temperature(omega2: f64, gamma0: f64) -> Result<f64> {
    if !(omega2.is_finite() && omega2 > 0.0) {
        return Err(Error::domain(format!("omega2 must be positive, got {omega2}")));
    }
    if !(gamma0.is_finite() && gamma0 > 0.0) {
        return Err(Error::domain(format!("gamma0 must be positive, got {gamma0}")));
    }
    if gamma0 >= 2.0 * omega2 {
        return Err(Error::NoQuantumPhase { omega2, gamma0 });
    }
    let a = qubit::acoth(2.0 * omega2 / gamma0)?;
    let t = omega2 / (2.0 * a);
    if t.is_finite() {
        Ok(t)
    } else {
        Err(Error::Overflow("threshold temperature"))
    }
}

/// Sampled `K₃` curve together with the quantum time.
#[derive(Debug, Clone, Serialize)]
pub struct LgResult {
    pub omega: f64,
    pub gamma: f64,
    pub t_samples: Vec<f64>,
    pub k3_values: Vec<f64>,
    pub tau_q: QuantumTime,
    pub violated: bool,
}

/// Samples `K₃` on `n` uniform points of `[0, t_max]` and computes `τ_q`.
pub fn analyze(omega: f64, gamma: f64, t_max: f64, n: usize, tol: f64) -> Result<LgResult> {
    check_rates(omega, gamma)?;
    check_time(t_max)?;
    if n < 2 {
        return Err(Error::domain("need at least two samples"));
    }
    let step = t_max / (n - 1) as f64;
    let t_samples: Vec<f64> = (0..n).map(|i| i as f64 * step).collect();
    let k3_values = t_samples.iter().map(|&t| k3_unchecked(t, omega, gamma)).collect();
    let tau_q = quantum_time(omega, gamma, tol)?;
    Ok(LgResult { omega, gamma, t_samples, k3_values, tau_q, violated: tau_q.violated() })
}
