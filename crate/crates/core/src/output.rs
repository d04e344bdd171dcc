//! Columnar and structured output.
//!
//! Floats in CSV are written with 17 significant digits in scientific
//! notation, which round-trips bit-exactly through [`read_phase_csv`].

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::cycle::CycleReport;
use crate::error::{Error, Result};
use crate::lgi::QuantumTime;
use crate::sweep::{Axis, Bracket, Cell, CellClass, PhaseDiagram, Regime};

pub const PHASE_HEADER: &str = "axis1,axis2,tau_h,tau_q,class";

pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

/// One phase-diagram CSV row. `axis1` is the swept engine parameter, `axis2`
/// the `T_h` value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseRow {
    pub axis1: f64,
    pub axis2: f64,
    pub tau_h: Option<f64>,
    pub tau_q: Option<QuantumTime>,
    pub class: CellClass,
}

pub fn phase_rows(diagram: &PhaseDiagram) -> Vec<PhaseRow> {
    let xs = diagram.x_axis.values();
    let ys = diagram.y_axis.values();
    diagram
        .cells
        .iter()
        .enumerate()
        .map(|(idx, cell)| {
            let Cell { class, tau_h, tau_q } = *cell;
            PhaseRow { axis1: xs[idx % xs.len()], axis2: ys[idx / xs.len()], tau_h, tau_q, class }
        })
        .collect()
}

pub fn write_phase_csv(rows: &[PhaseRow]) -> String {
    let mut out = String::with_capacity(rows.len() * 96);
    out.push_str(PHASE_HEADER);
    out.push('\n');
    for r in rows {
        let tau_q = r.tau_q.map(|q| q.to_string()).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            fmt_f64(r.axis1),
            fmt_f64(r.axis2),
            fmt_opt(r.tau_h),
            tau_q,
            r.class.as_str()
        );
    }
    out
}

pub fn phase_csv(diagram: &PhaseDiagram) -> String {
    write_phase_csv(&phase_rows(diagram))
}

pub fn read_phase_csv(text: &str) -> Result<Vec<PhaseRow>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == PHASE_HEADER => {}
        _ => return Err(Error::domain(format!("phase CSV must start with `{PHASE_HEADER}`"))),
    }
    let bad = |line: usize, what: &str| Error::domain(format!("phase CSV line {}: {what}", line + 1));
    let mut rows = Vec::new();
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 5 {
            return Err(bad(i, "expected 5 fields"));
        }
        let num = |s: &str| s.parse::<f64>().map_err(|_| bad(i, &format!("bad number `{s}`")));
        let opt = |s: &str| if s.is_empty() { Ok(None) } else { num(s).map(Some) };
        let tau_q = if f[3].is_empty() { None } else { Some(f[3].parse::<QuantumTime>().map_err(|_| bad(i, "bad tau_q"))?) };
        rows.push(PhaseRow {
            axis1: num(f[0])?,
            axis2: num(f[1])?,
            tau_h: opt(f[2])?,
            tau_q,
            class: f[4].parse().map_err(|_| bad(i, "bad class"))?,
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCounts {
    pub quantum: usize,
    pub classical: usize,
    pub infeasible: usize,
}

/// Stable JSON summary of a sweep. Field order is the serialization order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseSummary {
    pub x_axis: Axis,
    pub y_axis: Axis,
    pub regimes: Vec<Regime>,
    pub regime_c1: Option<Bracket>,
    pub regime_c2: Option<Bracket>,
    #[serde(rename = "T_q")]
    pub t_q: Option<f64>,
    pub counts: ClassCounts,
}

pub fn phase_summary(diagram: &PhaseDiagram) -> PhaseSummary {
    let count = |c: CellClass| diagram.cells.iter().filter(|cell| cell.class == c).count();
    PhaseSummary {
        x_axis: diagram.x_axis,
        y_axis: diagram.y_axis,
        regimes: diagram.regime_labels(),
        regime_c1: diagram.critical.c1,
        regime_c2: diagram.critical.c2,
        t_q: diagram.threshold_temperature,
        counts: ClassCounts {
            quantum: count(CellClass::Quantum),
            classical: count(CellClass::Classical),
            infeasible: count(CellClass::Infeasible),
        },
    }
}

pub fn summary_json(diagram: &PhaseDiagram) -> String {
    serde_json::to_string_pretty(&phase_summary(diagram)).expect("summary is always serializable")
}

/// `t,K3` table.
pub fn k3_csv(times: &[f64], values: &[f64]) -> String {
    let mut out = String::from("t,K3\n");
    for (t, k) in times.iter().zip(values) {
        let _ = writeln!(out, "{},{}", fmt_f64(*t), fmt_f64(*k));
    }
    out
}

pub fn cycle_json(report: &CycleReport) -> String {
    serde_json::to_string_pretty(report).expect("report is always serializable")
}

/// `key,value` rows of the cycle record; quantities that do not exist for
/// this cycle are left empty.
pub fn cycle_csv(report: &CycleReport) -> String {
    let s = report.solution.as_ref();
    let c = s.and_then(|s| s.corners);
    let rows: [(&str, Option<f64>); 15] = [
        ("x", s.map(|s| s.x)),
        ("y", s.map(|s| s.y)),
        ("tau_h", s.map(|s| s.tau_h)),
        ("tau_c", s.map(|s| s.tau_c)),
        ("P_A", c.map(|c| c.a)),
        ("P_B", c.map(|c| c.b)),
        ("P_C", c.map(|c| c.c)),
        ("P_D", c.map(|c| c.d)),
        ("W_total", s.map(|s| s.w_total)),
        ("W_out", s.map(|s| s.w_out)),
        ("Q_h", s.map(|s| s.q_h)),
        ("Q_c", s.map(|s| s.q_c)),
        ("DeltaS", s.map(|s| s.delta_s)),
        ("delta_p_eq", Some(report.delta_p_eq)),
        ("cycle_time", s.map(|s| s.cycle_time)),
    ];
    let mut out = String::from("key,value\n");
    for (k, v) in rows {
        let _ = writeln!(out, "{k},{}", fmt_opt(v));
    }
    let _ = writeln!(out, "feasible,{}", report.feasible);
    out
}
