use thiserror::Error;

use crate::config::ConfigError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    /// An intermediate quantity left the representable range.
    #[error("overflow while evaluating {0}")]
    Overflow(&'static str),

    #[error("step {dt} exceeds the stability limit {limit}")]
    StepTooLarge { dt: f64, limit: f64 },

    #[error("no quantum phase: gamma0 = {gamma0} is not below 2*omega2 = {}", 2.0 * omega2)]
    NoQuantumPhase { omega2: f64, gamma0: f64 },

    #[error("degenerate denominator: dP_eq + sigma^2/tau1 = {0}")]
    DegenerateDenominator(f64),

    #[error("infeasible cycle: {0}")]
    InfeasibleCycle(String),

    #[error("cycle map has no unique fixed point (x*y = 1)")]
    NoFixedPoint,

    #[error("critical value {0} is not bracketed by the sweep range")]
    NotBracketed(&'static str),

    #[error("unknown sweep axis `{0}` (expected T_h, T_c or sigma_bar)")]
    UnknownAxis(String),

    #[error(transparent)]
    Config(#[from] ConfigError),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Short machine-readable tag, used in CLI error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Overflow(_) => "overflow",
            Error::StepTooLarge { .. } => "step_too_large",
            Error::NoQuantumPhase { .. } => "no_quantum_phase",
            Error::DegenerateDenominator(_) => "degenerate_denominator",
            Error::InfeasibleCycle(_) => "infeasible_cycle",
            Error::NoFixedPoint => "no_fixed_point",
            Error::NotBracketed(_) => "not_bracketed",
            Error::UnknownAxis(_) => "unknown_axis",
            Error::Config(e) => e.kind(),
        }
    }
}
