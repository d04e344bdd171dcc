//! Finite-time Otto cycle of a two-level system with internal friction.
//!
//! Branch order and corner labels:
//!
//! ```text
//!   A --heating (ω₂, T_h, τ_h)--> B --expansion (ω₂→ω₁, τ₁)--> C
//!   C --cooling (ω₁, T_c, τ_c)--> D --compression (ω₁→ω₂, τ₂)--> A
//! ```
//!
//! Each isochore relaxes the polarization toward its bath equilibrium by the
//! factors `y = e^{-γ_h τ_h}` and `x = e^{-γ_c τ_c}`; each unitary stroke of
//! duration τ raises it by `σ²/τ`. Work `W` is counted as work done ON the
//! qubit, so the engine delivers `W_out = -W`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qubit::{self, EngineParams};

/// How the bath damping rates of the two isochores are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RateModel {
    /// `γ_h = γ₀ coth(ω₂/2T_h)` and `γ_c = γ₀ coth(ω₁/2T_c)`, each branch at
    /// its own frequency.
    #[default]
    BranchFrequency,
    /// Both branches use the hot rate `γ_h`.
    EqualGamma,
}

impl RateModel {
    pub fn from_equal_gamma(equal_gamma: bool) -> Self {
        if equal_gamma {
            RateModel::EqualGamma
        } else {
            RateModel::BranchFrequency
        }
    }
}

/// `(γ_h, γ_c)` under the given rate model.
pub fn branch_rates(params: &EngineParams, model: RateModel) -> Result<(f64, f64)> {
    let gamma_h = qubit::damping_rate(params.omega2, params.t_hot, params.gamma0)?;
    let gamma_c = match model {
        RateModel::BranchFrequency => qubit::damping_rate(params.omega1, params.t_cold, params.gamma0)?,
        RateModel::EqualGamma => gamma_h,
    };
    Ok((gamma_h, gamma_c))
}

/// `ΔP_eq = P_h^eq - P_c^eq = -tanh(ω₂/2T_h)/2 + tanh(ω₁/2T_c)/2`.
pub fn delta_p_eq(params: &EngineParams) -> Result<f64> {
    let hot = qubit::equilibrium_polarization(params.omega2, params.t_hot)?.value();
    let cold = qubit::equilibrium_polarization(params.omega1, params.t_cold)?.value();
    Ok(hot - cold)
}

/// Polarization gained on a unitary stroke of duration `tau`, `σ²/τ`.
pub fn friction_increment(sigma: f64, tau: f64) -> Result<f64> {
    if !(tau.is_finite() && tau > 0.0) {
        return Err(Error::domain(format!("stroke duration must be positive, got {tau}")));
    }
    Ok(sigma * sigma / tau)
}

/// The ratios `(R, x_max)` that fix the minimal-time schedule.
///
/// `R = σ²ω₁(1/τ₁+1/τ₂) / (Δω (ΔP_eq + σ²/τ₁))` and
/// `x_max = (ΔP_eq - σ²/τ₂) / (ΔP_eq + σ²/τ₁)`.
pub fn r_and_xmax(params: &EngineParams) -> Result<(f64, f64)> {
    let dp = delta_p_eq(params)?;
    let f1 = friction_increment(params.sigma, params.tau1)?;
    let f2 = friction_increment(params.sigma, params.tau2)?;
    let denom = dp + f1;
    if !(denom > 0.0) {
        return Err(Error::DegenerateDenominator(denom));
    }
    let d_omega = params.omega2 - params.omega1;
    let r = params.omega1 * (f1 + f2) / (d_omega * denom);
    let x_max = (dp - f2) / denom;
    Ok((r, x_max))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Feasibility {
    /// Positive gap and `σ²/τ₂ < ΔP_eq`.
    Feasible,
    /// `σ²/τ₂ = ΔP_eq`: the bound is saturated and thermalization times diverge.
    Boundary,
    /// `ΔP_eq ≤ 0`, no engine at any friction.
    NoEngine,
    /// `σ²/τ₂ > ΔP_eq`.
    FrictionBound,
}

pub fn feasibility(params: &EngineParams) -> Result<Feasibility> {
    let dp = delta_p_eq(params)?;
    if !(dp > 0.0) {
        return Ok(Feasibility::NoEngine);
    }
    let f2 = friction_increment(params.sigma, params.tau2)?;
    Ok(if f2 < dp {
        Feasibility::Feasible
    } else if f2 == dp {
        Feasibility::Boundary
    } else {
        Feasibility::FrictionBound
    })
}

/// `ΔP_eq > 0` and `σ²/τ₂ ≤ ΔP_eq`. Saturation counts as feasible here; see
/// [`feasibility`] to tell it apart.
pub fn feasible(params: &EngineParams) -> bool {
    matches!(feasibility(params), Ok(Feasibility::Feasible | Feasibility::Boundary))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimalTimes {
    pub tau_h: f64,
    pub tau_c: f64,
    pub x: f64,
    pub y: f64,
}

/// Heating and cooling times of the shortest cycle that still delivers
/// nonnegative work, at fixed `ω₁,₂` and `τ₁,₂`.
///
/// With `s = √(R x_max (1 + R - x_max))` the relaxation factors are
/// `y = (x_max - s) / (x_max (R+1))` and `x = (x_max - s)/(R+1)`, so
/// `x = x_max y` and the work vanishes there.
pub fn optimal_times(params: &EngineParams, model: RateModel) -> Result<OptimalTimes> {
    params.validate()?;
    match feasibility(params)? {
        Feasibility::Feasible => {}
        other => {
            return Err(Error::InfeasibleCycle(format!(
                "{other:?}: dP_eq = {}, sigma^2/tau2 = {}",
                delta_p_eq(params)?,
                friction_increment(params.sigma, params.tau2)?
            )))
        }
    }
    let (r, x_max) = r_and_xmax(params)?;
    let disc = r * x_max * (1.0 + r - x_max);
    if disc < 0.0 {
        return Err(Error::InfeasibleCycle(format!("negative discriminant {disc}")));
    }
    let num = x_max - disc.sqrt();
    if !(num > 0.0) {
        return Err(Error::InfeasibleCycle(format!(
            "thermalization times diverge (x_max = {x_max} <= R = {r})"
        )));
    }
    let y_arg = num / (x_max * (r + 1.0));
    let x_arg = num / (r + 1.0);
    let (gamma_h, gamma_c) = branch_rates(params, model)?;
    let tau_h = (-y_arg.ln() / gamma_h).max(0.0);
    let tau_c = (-x_arg.ln() / gamma_c).max(0.0);
    Ok(OptimalTimes {
        tau_h,
        tau_c,
        x: (-gamma_c * tau_c).exp(),
        y: (-gamma_h * tau_h).exp(),
    })
}

/// Corner polarizations of the periodic steady state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Corners {
    /// Start of heating.
    #[serde(rename = "P_A")]
    pub a: f64,
    /// End of heating.
    #[serde(rename = "P_B")]
    pub b: f64,
    /// End of expansion.
    #[serde(rename = "P_C")]
    pub c: f64,
    /// End of cooling.
    #[serde(rename = "P_D")]
    pub d: f64,
}

fn check_factors(x: f64, y: f64) -> Result<()> {
    if !((0.0..=1.0).contains(&x) && (0.0..=1.0).contains(&y)) {
        return Err(Error::domain(format!("relaxation factors must lie in [0, 1], got x={x}, y={y}")));
    }
    if x * y >= 1.0 {
        return Err(Error::NoFixedPoint);
    }
    Ok(())
}

/// Fixed point of the four-branch polarization map
/// `A → B = P_h + (A - P_h) y → C = B + σ²/τ₁ → D = P_c + (C - P_c) x → A = D + σ²/τ₂`.
pub fn cycle_fixed_point(params: &EngineParams, x: f64, y: f64) -> Result<Corners> {
    check_factors(x, y)?;
    let p_h = qubit::equilibrium_polarization(params.omega2, params.t_hot)?.value();
    let p_c = qubit::equilibrium_polarization(params.omega1, params.t_cold)?.value();
    let f1 = friction_increment(params.sigma, params.tau1)?;
    let f2 = friction_increment(params.sigma, params.tau2)?;
    // A (1 - xy) = P_c (1-x) + x P_h (1-y) + x f1 + f2
    let a = (p_c * (1.0 - x) + x * p_h * (1.0 - y) + x * f1 + f2) / (1.0 - x * y);
    let b = p_h + (a - p_h) * y;
    let c = b + f1;
    let d = p_c + (c - p_c) * x;
    Ok(Corners { a, b, c, d })
}

/// Closed form of the heating-branch gain `P_B - P_A`:
/// `[ΔP_eq (1-x)(1-y) - σ²(1-y)(x/τ₁ + 1/τ₂)] / (1 - xy)`.
pub fn heating_gain(params: &EngineParams, x: f64, y: f64) -> Result<f64> {
    check_factors(x, y)?;
    let dp = delta_p_eq(params)?;
    let s2 = params.sigma * params.sigma;
    Ok((dp * (1.0 - x) * (1.0 - y) - s2 * (1.0 - y) * (x / params.tau1 + 1.0 / params.tau2)) / (1.0 - x * y))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BranchWork {
    /// `∫ P dω` along the ramp.
    pub adiabatic: f64,
    /// `∫ ω dP` from the friction-driven polarization rise.
    pub irreversible: f64,
    pub total: f64,
}

/// Work on a linear frequency ramp `ω_i → ω_f` of duration `tau_i`, starting
/// from polarization `p0`.
pub fn branch_work(omega_i: f64, omega_f: f64, tau_i: f64, p0: f64, sigma: f64) -> Result<BranchWork> {
    let inc = friction_increment(sigma, tau_i)?;
    Ok(BranchWork {
        adiabatic: (omega_f - omega_i) * (0.5 * inc + p0),
        irreversible: 0.5 * (omega_f + omega_i) * inc,
        total: (omega_f - omega_i) * p0 + inc * omega_f,
    })
}

/// `(Q_h, Q_c) = (ω₂ (P_B - P_A), ω₁ (P_D - P_C))`.
pub fn heats(params: &EngineParams, corners: &Corners) -> (f64, f64) {
    (params.omega2 * (corners.b - corners.a), params.omega1 * (corners.d - corners.c))
}

/// Steady-state work per cycle done on the qubit.
///
/// `W = -Δω [ΔP_eq (1-x)(1-y)/(1-xy) - σ²/(1-xy) (x/τ₁ + 1/τ₂)(1-y)] + σ²ω₁(1/τ₂ + 1/τ₁)`
pub fn total_work(params: &EngineParams, x: f64, y: f64) -> Result<f64> {
    check_factors(x, y)?;
    let dp = delta_p_eq(params)?;
    let s2 = params.sigma * params.sigma;
    let (t1, t2) = (params.tau1, params.tau2);
    let q = 1.0 - x * y;
    let d_omega = params.omega2 - params.omega1;
    Ok(-d_omega * (dp * (1.0 - x) * (1.0 - y) / q - s2 / q * (x / t1 + 1.0 / t2) * (1.0 - y))
        + s2 * params.omega1 * (1.0 / t2 + 1.0 / t1))
}

/// Entropy produced in the two reservoirs per cycle, `-(Q_c/T_c + Q_h/T_h)`,
/// written with the closed-form heating gain.
pub fn entropy_production(params: &EngineParams, x: f64, y: f64) -> Result<f64> {
    let gain = heating_gain(params, x, y)?;
    let s2 = params.sigma * params.sigma;
    let ratio = params.omega1 / params.t_cold - params.omega2 / params.t_hot;
    Ok(ratio * gain + params.omega1 * s2 / params.t_cold * (1.0 / params.tau1 + 1.0 / params.tau2))
}

/// Long-time entropy production coefficients `(Σ_c, Σ_h) = (ω₁σ²/T_c, ω₂σ²/T_h)`.
pub fn entropy_rates(params: &EngineParams) -> (f64, f64) {
    let s2 = params.sigma * params.sigma;
    (params.omega1 * s2 / params.t_cold, params.omega2 * s2 / params.t_hot)
}

/// Full thermodynamic bookkeeping at the minimal-time schedule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleSolution {
    pub x: f64,
    pub y: f64,
    pub tau_h: f64,
    pub tau_c: f64,
    pub gamma_h: f64,
    pub gamma_c: f64,
    #[serde(rename = "R")]
    pub r: f64,
    pub x_max: f64,
    /// Absent when `x = y = 1` (frictionless limit, zero-length isochores),
    /// where every polarization is a fixed point.
    pub corners: Option<Corners>,
    pub expansion_work: Option<BranchWork>,
    pub compression_work: Option<BranchWork>,
    #[serde(rename = "W_total")]
    pub w_total: f64,
    #[serde(rename = "W_out")]
    pub w_out: f64,
    #[serde(rename = "Q_h")]
    pub q_h: f64,
    #[serde(rename = "Q_c")]
    pub q_c: f64,
    #[serde(rename = "DeltaS")]
    pub delta_s: f64,
    #[serde(rename = "Sigma_c")]
    pub sigma_c: f64,
    #[serde(rename = "Sigma_h")]
    pub sigma_h: f64,
    pub cycle_time: f64,
}

pub fn solve(params: &EngineParams, model: RateModel) -> Result<CycleSolution> {
    let times = optimal_times(params, model)?;
    let (gamma_h, gamma_c) = branch_rates(params, model)?;
    let (r, x_max) = r_and_xmax(params)?;
    let (sigma_c, sigma_h) = entropy_rates(params);
    let OptimalTimes { tau_h, tau_c, x, y } = times;
    let cycle_time = params.tau1 + params.tau2 + tau_h + tau_c;
    let base = CycleSolution {
        x,
        y,
        tau_h,
        tau_c,
        gamma_h,
        gamma_c,
        r,
        x_max,
        corners: None,
        expansion_work: None,
        compression_work: None,
        w_total: 0.0,
        w_out: 0.0,
        q_h: 0.0,
        q_c: 0.0,
        delta_s: 0.0,
        sigma_c,
        sigma_h,
        cycle_time,
    };
    if x * y >= 1.0 {
        // σ → 0 limit: no thermalization and no friction, nothing is exchanged.
        return Ok(base);
    }
    let corners = cycle_fixed_point(params, x, y)?;
    let (q_h, q_c) = heats(params, &corners);
    let w_total = total_work(params, x, y)?;
    Ok(CycleSolution {
        corners: Some(corners),
        expansion_work: Some(branch_work(params.omega2, params.omega1, params.tau1, corners.b, params.sigma)?),
        compression_work: Some(branch_work(params.omega1, params.omega2, params.tau2, corners.d, params.sigma)?),
        w_total,
        w_out: -w_total,
        q_h,
        q_c,
        delta_s: entropy_production(params, x, y)?,
        ..base
    })
}

/// Cycle outcome for reporting, including the reason when no schedule exists.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleReport {
    pub params: EngineParams,
    pub rate_model: RateModel,
    pub delta_p_eq: f64,
    /// `σ²/τ₂`, to compare with `delta_p_eq`.
    pub friction_bound: f64,
    pub feasibility: Feasibility,
    pub feasible: bool,
    pub solution: Option<CycleSolution>,
    pub reason: Option<String>,
}

pub fn report(params: &EngineParams, model: RateModel) -> Result<CycleReport> {
    params.validate()?;
    let delta_p_eq = delta_p_eq(params)?;
    let friction_bound = friction_increment(params.sigma, params.tau2)?;
    let feasibility = feasibility(params)?;
    let (solution, reason) = match solve(params, model) {
        Ok(s) => (Some(s), None),
        Err(e @ Error::InfeasibleCycle(_)) => (None, Some(e.to_string())),
        Err(e) => return Err(e),
    };
    Ok(CycleReport {
        params: *params,
        rate_model: model,
        delta_p_eq,
        friction_bound,
        feasibility,
        feasible: solution.is_some(),
        solution,
        reason,
    })
}
