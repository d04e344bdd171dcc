//! Quantum/classical phase diagrams of the engine.
//!
//! A cell is quantum when the LG inequality can still be violated within the
//! heating stroke, i.e. when `τ_q > τ_h`. Diagrams are stored column by
//! column along the x axis (the swept engine parameter, `σ̄` or `T_c`), each
//! column ordered by increasing y (normally `T_h`).

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cycle::{self, RateModel};
use crate::error::{Error, Result};
use crate::lgi::{self, QuantumTime};
use crate::qubit::{self, EngineParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AxisName {
    #[serde(rename = "T_h")]
    THot,
    #[serde(rename = "T_c")]
    TCold,
    #[serde(rename = "sigma_bar")]
    SigmaBar,
}

impl AxisName {
    pub fn as_str(self) -> &'static str {
        match self {
            AxisName::THot => "T_h",
            AxisName::TCold => "T_c",
            AxisName::SigmaBar => "sigma_bar",
        }
    }

    fn apply(self, params: EngineParams, value: f64) -> EngineParams {
        match self {
            AxisName::THot => EngineParams { t_hot: value, ..params },
            AxisName::TCold => EngineParams { t_cold: value, ..params },
            AxisName::SigmaBar => params.with_sigma_bar(value),
        }
    }
}

impl fmt::Display for AxisName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AxisName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "T_h" => Ok(AxisName::THot),
            "T_c" => Ok(AxisName::TCold),
            "sigma_bar" => Ok(AxisName::SigmaBar),
            other => Err(Error::UnknownAxis(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AxisScale {
    #[default]
    Linear,
    Log,
}

impl FromStr for AxisScale {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(AxisScale::Linear),
            "log" => Ok(AxisScale::Log),
            other => Err(Error::domain(format!("unknown axis scale `{other}` (expected linear or log)"))),
        }
    }
}

/// `count` points from `min` to `max` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub name: AxisName,
    pub min: f64,
    pub max: f64,
    pub count: usize,
    #[serde(default)]
    pub scale: AxisScale,
}

impl Axis {
    pub fn new(name: AxisName, min: f64, max: f64, count: usize) -> Result<Self> {
        Self::with_scale(name, min, max, count, AxisScale::Linear)
    }

    pub fn with_scale(name: AxisName, min: f64, max: f64, count: usize, scale: AxisScale) -> Result<Self> {
        let axis = Axis { name, min, max, count, scale };
        axis.validate()?;
        Ok(axis)
    }

    pub fn validate(&self) -> Result<()> {
        if self.count < 2 {
            return Err(Error::domain(format!("axis {} needs at least 2 points", self.name)));
        }
        if !(self.min.is_finite() && self.max.is_finite() && self.max > self.min) {
            return Err(Error::domain(format!(
                "axis {} needs finite min < max, got [{}, {}]",
                self.name, self.min, self.max
            )));
        }
        let positive = match self.name {
            AxisName::SigmaBar => self.min >= 0.0,
            AxisName::THot | AxisName::TCold => self.min > 0.0,
        };
        if !positive || (self.scale == AxisScale::Log && self.min <= 0.0) {
            return Err(Error::domain(format!("axis {} has a nonpositive range start {}", self.name, self.min)));
        }
        Ok(())
    }

    pub fn value(&self, i: usize) -> f64 {
        let last = self.count - 1;
        if i == 0 {
            return self.min;
        }
        if i >= last {
            return self.max;
        }
        let f = i as f64 / last as f64;
        match self.scale {
            AxisScale::Linear => self.min + (self.max - self.min) * f,
            AxisScale::Log => self.min * (self.max / self.min).powf(f),
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.value(i)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CellClass {
    Quantum,
    Classical,
    Infeasible,
}

impl CellClass {
    pub fn as_str(self) -> &'static str {
        match self {
            CellClass::Quantum => "quantum",
            CellClass::Classical => "classical",
            CellClass::Infeasible => "infeasible",
        }
    }
}

impl FromStr for CellClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quantum" => Ok(CellClass::Quantum),
            "classical" => Ok(CellClass::Classical),
            "infeasible" => Ok(CellClass::Infeasible),
            other => Err(Error::domain(format!("unknown cell class `{other}`"))),
        }
    }
}

/// Classification of one parameter point with its diagnostics. `tau_h` is
/// absent for infeasible cells; `tau_q` only when the hot-bath rate itself
/// cannot be evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub class: CellClass,
    pub tau_h: Option<f64>,
    pub tau_q: Option<QuantumTime>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepOptions {
    pub rate_model: RateModel,
    /// Absolute tolerance of the `τ_q` search.
    pub tol: f64,
    /// Worker threads for [`sweep`]; 0 uses rayon's default.
    pub threads: usize,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions { rate_model: RateModel::BranchFrequency, tol: lgi::DEFAULT_TOL, threads: 0 }
    }
}

/// Quantum iff the minimal-time heating stroke is shorter than `τ_q` at the
/// hot-bath damping rate. Never fails: every error becomes an infeasible cell.
pub fn classify_cell(params: &EngineParams, options: &SweepOptions) -> Cell {
    let tau_q = qubit::damping_rate(params.omega2, params.t_hot, params.gamma0)
        .and_then(|gamma| lgi::quantum_time(params.omega2, gamma, options.tol))
        .ok();
    let tau_h = cycle::optimal_times(params, options.rate_model).ok().map(|t| t.tau_h);
    let class = match (tau_h, tau_q) {
        (Some(th), Some(tq)) if tq.exceeds(th) => CellClass::Quantum,
        (Some(_), Some(_)) => CellClass::Classical,
        _ => CellClass::Infeasible,
    };
    Cell { class, tau_h, tau_q }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    /// A single quantum/classical transition.
    #[serde(rename = "i")]
    Single,
    /// Several alternating transitions.
    #[serde(rename = "ii")]
    Multiple,
    /// No quantum cell at all.
    #[serde(rename = "iii")]
    Classical,
}

impl Regime {
    pub fn label(self) -> &'static str {
        match self {
            Regime::Single => "i",
            Regime::Multiple => "ii",
            Regime::Classical => "iii",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnRegime {
    pub regime: Regime,
    /// Quantum↔classical boundaries among the feasible cells.
    pub transitions: usize,
    pub quantum_cells: usize,
    /// Set for all-quantum columns: the transition lies beyond the range.
    pub boundary_above_range: bool,
}

/// Regime of one column ordered by increasing `T_h`. Infeasible cells are
/// skipped when counting boundaries.
pub fn column_regime(column: &[CellClass]) -> ColumnRegime {
    let feasible: Vec<CellClass> = column.iter().copied().filter(|c| *c != CellClass::Infeasible).collect();
    let quantum_cells = feasible.iter().filter(|c| **c == CellClass::Quantum).count();
    let transitions = feasible.windows(2).filter(|w| w[0] != w[1]).count();
    let (regime, boundary_above_range) = if quantum_cells == 0 {
        (Regime::Classical, false)
    } else if transitions == 0 {
        (Regime::Single, true)
    } else if transitions == 1 {
        (Regime::Single, false)
    } else {
        (Regime::Multiple, false)
    };
    ColumnRegime { regime, transitions, quantum_cells, boundary_above_range }
}

/// A critical axis value and the adjacent-column interval that contains the
/// true transition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bracket {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalValues {
    /// End of regime i.
    pub c1: Option<Bracket>,
    /// Start of the all-classical regime iii.
    pub c2: Option<Bracket>,
}

impl CriticalValues {
    pub fn c1(&self) -> Result<Bracket> {
        self.c1.ok_or(Error::NotBracketed("c1"))
    }

    pub fn c2(&self) -> Result<Bracket> {
        self.c2.ok_or(Error::NotBracketed("c2"))
    }
}

/// `c1`: last column of the leading regime-i run, bracketed by the next
/// column. `c2`: first column of the trailing regime-iii run, bracketed by the
/// previous column.
pub fn critical_values(regimes: &[Regime], axis_values: &[f64]) -> CriticalValues {
    assert_eq!(regimes.len(), axis_values.len(), "one regime per axis value");
    let n = regimes.len();
    let lead = regimes.iter().take_while(|r| **r == Regime::Single).count();
    let c1 = (lead > 0 && lead < n).then(|| Bracket {
        value: axis_values[lead - 1],
        lower: axis_values[lead - 1],
        upper: axis_values[lead],
    });
    let trail = regimes.iter().rev().take_while(|r| **r == Regime::Classical).count();
    let c2 = (trail > 0 && trail < n).then(|| {
        let first = n - trail;
        Bracket { value: axis_values[first], lower: axis_values[first - 1], upper: axis_values[first] }
    });
    CriticalValues { c1, c2 }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseDiagram {
    pub base: EngineParams,
    pub options: SweepOptions,
    pub x_axis: Axis,
    pub y_axis: Axis,
    /// Row-major: `cells[j * nx + i]` is column `i` (x value), row `j` (y value).
    pub cells: Vec<Cell>,
    pub regimes: Vec<ColumnRegime>,
    pub critical: CriticalValues,
    /// `T_q` of the base parameters, when a quantum phase exists at all.
    pub threshold_temperature: Option<f64>,
}

impl PhaseDiagram {
    pub fn nx(&self) -> usize {
        self.x_axis.count
    }

    pub fn ny(&self) -> usize {
        self.y_axis.count
    }

    pub fn cell(&self, i: usize, j: usize) -> &Cell {
        &self.cells[j * self.nx() + i]
    }

    pub fn column(&self, i: usize) -> Vec<CellClass> {
        (0..self.ny()).map(|j| self.cell(i, j).class).collect()
    }

    pub fn regime_labels(&self) -> Vec<Regime> {
        self.regimes.iter().map(|r| r.regime).collect()
    }

    /// Parameters of cell `(i, j)`.
    pub fn params_at(&self, i: usize, j: usize) -> EngineParams {
        point(&self.base, &self.x_axis, &self.y_axis, i, j)
    }
}

fn point(base: &EngineParams, x: &Axis, y: &Axis, i: usize, j: usize) -> EngineParams {
    let p = x.name.apply(*base, x.value(i));
    y.name.apply(p, y.value(j))
}

/// Classify every grid cell. The result is independent of the thread count:
/// cells are pure functions of their index and are assembled in index order.
pub fn sweep(base: &EngineParams, x_axis: Axis, y_axis: Axis, options: SweepOptions) -> Result<PhaseDiagram> {
    x_axis.validate()?;
    y_axis.validate()?;
    if x_axis.name == y_axis.name {
        return Err(Error::domain(format!("both axes sweep {}", x_axis.name)));
    }
    let (nx, ny) = (x_axis.count, y_axis.count);
    let compute = || -> Vec<Cell> {
        (0..nx * ny)
            .into_par_iter()
            .map(|idx| classify_cell(&point(base, &x_axis, &y_axis, idx % nx, idx / nx), &options))
            .collect()
    };
    let cells = if options.threads == 0 {
        compute()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(options.threads)
            .build()
            .map_err(|e| Error::domain(format!("thread pool: {e}")))?
            .install(compute)
    };
    let regimes: Vec<ColumnRegime> = (0..nx)
        .map(|i| column_regime(&(0..ny).map(|j| cells[j * nx + i].class).collect::<Vec<_>>()))
        .collect();
    let labels: Vec<Regime> = regimes.iter().map(|r| r.regime).collect();
    let critical = critical_values(&labels, &x_axis.values());
    Ok(PhaseDiagram {
        base: *base,
        options,
        x_axis,
        y_axis,
        cells,
        regimes,
        critical,
        threshold_temperature: lgi::threshold_temperature(base.omega2, base.gamma0).ok(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use CellClass::*;

    #[test]
    fn regime_examples() {
        assert_eq!(column_regime(&[Quantum, Quantum, Classical, Classical]).regime, Regime::Single);
        assert_eq!(column_regime(&[Quantum, Classical, Quantum, Classical]).regime, Regime::Multiple);
        assert_eq!(column_regime(&[Classical; 4]).regime, Regime::Classical);
        assert_eq!(column_regime(&[Infeasible; 3]).regime, Regime::Classical);
        let all_q = column_regime(&[Quantum; 3]);
        assert_eq!(all_q.regime, Regime::Single);
        assert!(all_q.boundary_above_range);
        // infeasible cells do not split a run
        let r = column_regime(&[Infeasible, Quantum, Infeasible, Quantum, Classical]);
        assert_eq!((r.regime, r.transitions), (Regime::Single, 1));
    }

    #[test]
    fn critical_value_examples() {
        use Regime::*;
        let axis = [1.0, 2.0, 3.0, 4.0, 5.0];
        let cv = critical_values(&[Single, Single, Multiple, Multiple, Classical], &axis);
        let c1 = cv.c1().unwrap();
        let c2 = cv.c2().unwrap();
        assert_eq!((c1.lower, c1.upper), (2.0, 3.0));
        assert_eq!((c2.lower, c2.upper), (4.0, 5.0));
        let cv = critical_values(&[Single; 5], &axis);
        assert_eq!(cv.c1(), Err(Error::NotBracketed("c1")));
        assert_eq!(cv.c2(), Err(Error::NotBracketed("c2")));
        let cv = critical_values(&[Multiple, Classical, Classical, Classical, Classical], &axis);
        assert!(cv.c1.is_none());
        assert_eq!(cv.c2().unwrap().value, 2.0);
    }

    #[test]
    fn axis_values_hit_endpoints() {
        let a = Axis::with_scale(AxisName::THot, 5.0, 500.0, 7, AxisScale::Log).unwrap();
        let v = a.values();
        assert_eq!((v[0], v[6]), (5.0, 500.0));
        assert!((v[3] - 50.0).abs() < 1e-12);
        assert!(v.windows(2).all(|w| w[1] > w[0]));
        let a = Axis::new(AxisName::SigmaBar, 0.0, 0.7, 8).unwrap();
        assert!((a.value(1) - 0.1).abs() < 1e-15);
    }

    #[test]
    fn axis_validation() {
        assert!(Axis::new(AxisName::THot, 0.0, 5.0, 3).is_err());
        assert!(Axis::new(AxisName::THot, 1.0, 5.0, 1).is_err());
        assert!(Axis::new(AxisName::THot, 5.0, 1.0, 3).is_err());
        assert!(Axis::with_scale(AxisName::SigmaBar, 0.0, 1.0, 3, AxisScale::Log).is_err());
        assert!(matches!("T_x".parse::<AxisName>(), Err(Error::UnknownAxis(_))));
        assert_eq!("sigma_bar".parse::<AxisName>().unwrap(), AxisName::SigmaBar);
    }

    #[test]
    fn cell_examples() {
        let base = EngineParams::baseline();
        let opts = SweepOptions::default();
        let t_q = lgi::threshold_temperature(base.omega2, base.gamma0).unwrap();
        let tiny = base.with_sigma_bar(1e-4);
        assert_eq!(classify_cell(&EngineParams { t_hot: 0.5 * t_q, ..tiny }, &opts).class, Quantum);
        assert_eq!(classify_cell(&EngineParams { t_hot: 1.5 * t_q, ..tiny }, &opts).class, Classical);
        let over = base.with_sigma_bar(3.0);
        let c = classify_cell(&over, &opts);
        assert_eq!(c.class, Infeasible);
        assert!(c.tau_h.is_none() && c.tau_q.is_some());
        // T_c above T_h is representable in a sweep and simply infeasible
        let swapped = EngineParams { t_cold: 30.0, ..base };
        assert_eq!(classify_cell(&swapped, &opts).class, Infeasible);
    }

    #[test]
    fn small_all_quantum_grid() {
        let base = EngineParams::baseline();
        let x = Axis::new(AxisName::SigmaBar, 0.0, 1e-6, 2).unwrap();
        let y = Axis::new(AxisName::THot, 10.0, 20.0, 2).unwrap();
        let d = sweep(&base, x, y, SweepOptions::default()).unwrap();
        assert!(d.cells.iter().all(|c| c.class == Quantum));
        assert!(d.regimes.iter().all(|r| r.boundary_above_range));
    }

    #[test]
    fn same_axis_twice_is_rejected() {
        let base = EngineParams::baseline();
        let x = Axis::new(AxisName::THot, 5.0, 10.0, 2).unwrap();
        assert!(sweep(&base, x, x, SweepOptions::default()).is_err());
    }
}
