//! Closed-form thermal quantities of a single qubit with Hamiltonian
//! `H = ω σ_z / 2`, weakly coupled to a bosonic bath.
//!
//! Natural units throughout: ħ = k_B = 1, so frequencies, temperatures and
//! energies share one unit and rates are inverse times.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest temperature accepted anywhere in the crate.
///
/// Below this `exp(ω/T)` overflows for any reasonable frequency, so such
/// inputs are rejected instead of silently producing zeros and infinities.
pub const MIN_TEMPERATURE: f64 = 1e-12;

fn check_frequency(omega: f64) -> Result<()> {
    if omega.is_finite() && omega > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("frequency must be positive and finite, got {omega}")))
    }
}

fn check_temperature(t: f64) -> Result<()> {
    if t.is_nan() || t < MIN_TEMPERATURE {
        Err(Error::domain(format!("temperature must be >= {MIN_TEMPERATURE}, got {t}")))
    } else {
        Ok(())
    }
}

/// `coth(x)` for `x > 0`.
pub fn coth(x: f64) -> Result<f64> {
    if x.is_nan() || x <= 0.0 {
        return Err(Error::domain(format!("coth argument must be positive, got {x}")));
    }
    let t = x.tanh();
    if t == 0.0 {
        return Err(Error::Overflow("coth"));
    }
    Ok(1.0 / t)
}

/// Inverse hyperbolic cotangent, `acoth(z) = ln((z+1)/(z-1)) / 2` for `z > 1`.
pub fn acoth(z: f64) -> Result<f64> {
    if z.is_nan() || z <= 1.0 {
        return Err(Error::domain(format!("acoth argument must exceed 1, got {z}")));
    }
    if z.is_infinite() {
        return Ok(0.0);
    }
    // ln(1 + 2/(z-1)) keeps full precision for large z.
    let v = 0.5 * (2.0 / (z - 1.0)).ln_1p();
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow("acoth"))
    }
}

/// Bose-Einstein occupation `n = 1/(exp(ω/T) - 1)`.
pub fn thermal_occupation(omega: f64, temperature: f64) -> Result<f64> {
    check_frequency(omega)?;
    check_temperature(temperature)?;
    let denom = (omega / temperature).exp_m1();
    if denom == 0.0 {
        return Err(Error::Overflow("thermal occupation"));
    }
    Ok(1.0 / denom)
}

/// Effective damping rate `γ = γ₀ coth(ω/2T) = γ₀ (2n + 1)`.
pub fn damping_rate(omega: f64, temperature: f64, gamma0: f64) -> Result<f64> {
    check_frequency(omega)?;
    check_temperature(temperature)?;
    if !(gamma0.is_finite() && gamma0 > 0.0) {
        return Err(Error::domain(format!("gamma0 must be positive, got {gamma0}")));
    }
    let gamma = gamma0 * coth(omega / (2.0 * temperature))?;
    if gamma.is_finite() {
        Ok(gamma)
    } else {
        Err(Error::Overflow("damping rate"))
    }
}

/// Half the expectation value of `σ_z`; the qubit energy is `ω P`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Polarization(f64);

impl Polarization {
    const SLACK: f64 = 1e-12;

    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && value.abs() <= 0.5 + Self::SLACK {
            Ok(Polarization(value))
        } else {
            Err(Error::domain(format!("polarization must lie in [-1/2, 1/2], got {value}")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Thermal equilibrium polarization `-tanh(ω/2T)/2`.
pub fn equilibrium_polarization(omega: f64, temperature: f64) -> Result<Polarization> {
    check_frequency(omega)?;
    check_temperature(temperature)?;
    Ok(Polarization(-0.5 * (omega / (2.0 * temperature)).tanh()))
}

/// Polarization after relaxing for `time` on an isochore at fixed `omega`.
///
/// `P(t) = P_eq + (P0 - P_eq) exp(-γ t)`.
pub fn relax_polarization(
    p0: Polarization,
    omega: f64,
    temperature: f64,
    gamma0: f64,
    time: f64,
) -> Result<Polarization> {
    if time.is_nan() || time < 0.0 {
        return Err(Error::domain(format!("relaxation time must be >= 0, got {time}")));
    }
    let gamma = damping_rate(omega, temperature, gamma0)?;
    let p_eq = equilibrium_polarization(omega, temperature)?.value();
    Polarization::new(p_eq + (p0.value() - p_eq) * (-gamma * time).exp())
}

/// A qubit at frequency `omega` coupled to a bath at `temperature`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BathCoupling {
    pub omega: f64,
    pub temperature: f64,
    pub gamma0: f64,
    /// Thermal occupation of the bath mode at `omega`.
    pub n: f64,
    /// Effective damping rate, `gamma0 * (2n + 1)`.
    pub gamma: f64,
}

impl BathCoupling {
    pub fn new(omega: f64, temperature: f64, gamma0: f64) -> Result<Self> {
        let gamma = damping_rate(omega, temperature, gamma0)?;
        let n = thermal_occupation(omega, temperature)?;
        Ok(BathCoupling { omega, temperature, gamma0, n, gamma })
    }

    pub fn equilibrium(&self) -> Polarization {
        Polarization(-0.5 * (self.omega / (2.0 * self.temperature)).tanh())
    }
}

/// The eight parameters of the two-level Otto cycle.
///
/// Heating happens at `omega2` against the hot bath, cooling at `omega1`
/// against the cold bath. `tau1` is the expansion (ω₂→ω₁) time and `tau2` the
/// compression (ω₁→ω₂) time. `sigma` is the internal friction coefficient: a
/// unitary stroke of duration τ raises the polarization by `sigma²/τ`.
///
/// Fields are public so that out-of-range points (as produced by a sweep) can
/// still be represented; [`EngineParams::validate`] checks the hard invariants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EngineParams {
    pub omega1: f64,
    pub omega2: f64,
    pub tau1: f64,
    pub tau2: f64,
    #[serde(rename = "T_h")]
    pub t_hot: f64,
    #[serde(rename = "T_c")]
    pub t_cold: f64,
    pub gamma0: f64,
    pub sigma: f64,
}

impl EngineParams {
    /// Reference engine of the phase-diagram sweeps, with `T_h = 20`,
    /// `γ₀ = 1` and no friction.
    pub fn baseline() -> Self {
        EngineParams {
            omega1: 10.0,
            omega2: 20.0,
            tau1: 0.01,
            tau2: 0.1,
            t_hot: 20.0,
            t_cold: 1.0,
            gamma0: 1.0,
            sigma: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let p = self;
        let pos = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::domain(format!("{name} must be positive and finite, got {v}")))
            }
        };
        pos("omega1", p.omega1)?;
        pos("omega2", p.omega2)?;
        pos("tau1", p.tau1)?;
        pos("tau2", p.tau2)?;
        pos("gamma0", p.gamma0)?;
        check_temperature(p.t_cold)?;
        check_temperature(p.t_hot)?;
        if p.omega1 >= p.omega2 {
            return Err(Error::domain(format!(
                "need omega1 < omega2, got {} >= {}",
                p.omega1, p.omega2
            )));
        }
        if p.t_hot <= p.t_cold {
            return Err(Error::domain(format!(
                "need T_h > T_c, got {} <= {}",
                p.t_hot, p.t_cold
            )));
        }
        if !(p.sigma.is_finite() && p.sigma >= 0.0) {
            return Err(Error::domain(format!("sigma must be >= 0, got {}", p.sigma)));
        }
        Ok(())
    }

    /// `ω₁/T_c > ω₂/T_h`, i.e. the equilibrium polarization gap is positive.
    pub fn engine_condition(&self) -> bool {
        self.omega1 / self.t_cold > self.omega2 / self.t_hot
    }

    /// Reduced friction `σ̄ = σ/τ₂`.
    pub fn sigma_bar(&self) -> f64 {
        self.sigma / self.tau2
    }

    pub fn with_sigma_bar(mut self, sigma_bar: f64) -> Self {
        self.sigma = sigma_bar * self.tau2;
        self
    }

    pub fn hot_bath(&self) -> Result<BathCoupling> {
        BathCoupling::new(self.omega2, self.t_hot, self.gamma0)
    }

    pub fn cold_bath(&self) -> Result<BathCoupling> {
        BathCoupling::new(self.omega1, self.t_cold, self.gamma0)
    }
}
