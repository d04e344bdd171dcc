//! Leggett-Garg test of quantumness for a finite-time two-level Otto engine.
//!
//! The crate is organised bottom-up:
//!
//! * [`qubit`]: thermal occupation, damping rates and isochoric relaxation.
//! * [`lindblad`]: a brute-force RK4 integrator of the master equation, used
//!   only to cross-check the closed forms.
//! * [`lgi`]: correlators, the LG function `K₃`, the quantum time `τ_q` and
//!   the threshold temperature `T_q`.
//! * [`cycle`]: the Otto cycle with internal friction: corner polarizations,
//!   work, heat, entropy production and the minimal-time thermalization
//!   schedule.
//! * [`sweep`]: quantum/classical/infeasible phase diagrams over `(T_h, σ̄)`
//!   and `(T_h, T_c)`.
//! * [`config`] and [`output`]: the `key = value` run configuration and the
//!   CSV/JSON formats used by the command-line tool.
//!
//! Units are natural, ħ = k_B = 1.

pub mod config;
pub mod cycle;
pub mod error;
pub mod lgi;
pub mod lindblad;
pub mod output;
pub mod qubit;
pub mod sweep;

pub use config::{ConfigError, RunConfig};
pub use cycle::{CycleReport, CycleSolution, RateModel};
pub use error::{Error, Result};
pub use lgi::{LgResult, QuantumTime};
pub use lindblad::DensityMatrix;
pub use qubit::{BathCoupling, EngineParams, Polarization};
pub use sweep::{Axis, AxisName, AxisScale, Cell, CellClass, PhaseDiagram, Regime, SweepOptions};
