//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits nonzero if any criterion fails.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use otto_lgi::cycle::{self, RateModel};
use otto_lgi::lgi::{self, QuantumTime, DEFAULT_TOL};
use otto_lgi::output;
use otto_lgi::qubit::{self, EngineParams};
use otto_lgi::sweep::{self, Axis, AxisName, AxisScale, CellClass, PhaseDiagram, Regime, SweepOptions};
use otto_lgi::{lindblad, Error};

type Outcome = Result<String, String>;

struct Criterion {
    id: &'static str,
    name: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn log_uniform(r: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (r.gen_range(lo.ln()..hi.ln())).exp()
}

/// Engine parameters with ω₁ < ω₂ and T_c < T_h; friction up to 0.05.
fn random_params(r: &mut ChaCha8Rng) -> EngineParams {
    let omega1 = r.gen_range(1.0..20.0);
    let t_cold = log_uniform(r, 0.1, 10.0);
    EngineParams {
        omega1,
        omega2: omega1 + r.gen_range(0.1..30.0),
        tau1: log_uniform(r, 0.005, 1.0),
        tau2: log_uniform(r, 0.005, 1.0),
        t_hot: t_cold + log_uniform(r, 0.1, 200.0),
        t_cold,
        gamma0: log_uniform(r, 0.1, 5.0),
        sigma: r.gen_range(0.0..0.05),
    }
}

fn err(e: Error) -> String {
    e.to_string()
}

fn c1_undamped_bound() -> Outcome {
    let omega = 20.0;
    let t_star = PI / (3.0 * omega);
    let at_star = lgi::k3(t_star, omega, 0.0).map_err(err)?;
    ensure((at_star - 1.5).abs() <= 1e-9, || format!("K3(pi/3) = {at_star}"))?;
    // global maximum over one period, refined by golden-section search
    let period = 2.0 * PI / omega;
    let n = 100_000;
    let (mut best_t, mut best) = (0.0, f64::NEG_INFINITY);
    for k in 0..=n {
        let t = period * k as f64 / n as f64;
        let v = lgi::k3(t, omega, 0.0).map_err(err)?;
        if v > best {
            (best_t, best) = (t, v);
        }
    }
    let h = period / n as f64;
    let (mut a, mut b) = (best_t - h, best_t + h);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        let (c, d) = (b - g * (b - a), a + g * (b - a));
        if lgi::k3(c, omega, 0.0).map_err(err)? > lgi::k3(d, omega, 0.0).map_err(err)? {
            b = d;
        } else {
            a = c;
        }
    }
    let t_max = 0.5 * (a + b);
    let max = lgi::k3(t_max, omega, 0.0).map_err(err)?;
    ensure((max - 1.5).abs() <= 1e-9, || format!("max K3 = {max}"))?;
    let phase = omega * t_max;
    ensure(
        (phase - PI / 3.0).abs() < 1e-6 || (phase - 5.0 * PI / 3.0).abs() < 1e-6,
        || format!("maximum at omega t = {phase}"),
    )?;
    Ok(format!("max K3 = {max:.12}, omega t* = {phase:.9}"))
}

fn c2_decoherence_cutoff() -> Outcome {
    let omega = 20.0;
    let zero = |r: f64| -> Result<bool, String> {
        Ok(lgi::quantum_time(omega, r * omega, DEFAULT_TOL).map_err(err)? == QuantumTime::Finite(0.0))
    };
    // scan for the first ratio without violations, then check it stays that way
    let ratios: Vec<f64> = (1..=400).map(|k| k as f64 * 0.01).collect();
    let first = ratios
        .iter()
        .position(|r| zero(*r).unwrap_or(false))
        .ok_or("tau_q never vanishes for gamma/omega <= 4")?;
    for r in &ratios[first..] {
        ensure(zero(*r)?, || format!("violations reappear at gamma/omega = {r}"))?;
    }
    let (mut lo, mut hi) = (ratios[first - 1], ratios[first]);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if zero(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    ensure((1.8..=2.2).contains(&hi), || format!("critical gamma/omega = {hi}"))?;
    Ok(format!("critical gamma/omega2 = {hi:.9}"))
}

fn c3_oracle_equivalence() -> Outcome {
    let mut r = rng(3);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let omega = r.gen_range(1.0..20.0);
        let temperature = log_uniform(&mut r, 0.2, 50.0);
        let ratio = log_uniform(&mut r, 0.05, 2.0);
        let gamma0 = ratio * omega / qubit::coth(omega / (2.0 * temperature)).map_err(err)?;
        let e = lindblad::oracle_discrepancy(omega, temperature, gamma0, 400).map_err(err)?;
        ensure(e <= 1e-6, || format!("omega={omega}, T={temperature}, gamma0={gamma0}: error {e:e}"))?;
        worst = worst.max(e);
    }
    Ok(format!("20 triples, max envelope-relative error {worst:.3e}"))
}

fn c4_first_law() -> Outcome {
    let mut r = rng(4);
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let p = random_params(&mut r);
        let (x, y) = (r.gen_range(0.0..0.99), r.gen_range(0.0..0.99));
        let corners = cycle::cycle_fixed_point(&p, x, y).map_err(err)?;
        let (q_h, q_c) = cycle::heats(&p, &corners);
        let w = cycle::total_work(&p, x, y).map_err(err)?;
        let residual = (w + q_h + q_c).abs();
        ensure(residual <= 1e-12, || format!("{p:?}, x={x}, y={y}: residual {residual:e}"))?;
        worst = worst.max(residual);
    }
    Ok(format!("10^4 draws, max |W + Q_h + Q_c| = {worst:.3e}"))
}

/// Feasible draws for criteria 5 and 7: friction drawn below the feasibility bound
/// and kept only if a finite schedule exists.
fn feasible_draws(n: usize) -> Vec<EngineParams> {
    let mut r = rng(5);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let mut p = random_params(&mut r);
        let Ok(dp) = cycle::delta_p_eq(&p) else { continue };
        if dp <= 0.0 {
            continue;
        }
        p.sigma = r.gen_range(0.0..1.0) * (p.tau2 * dp).sqrt();
        if cycle::optimal_times(&p, RateModel::BranchFrequency).is_ok() {
            out.push(p);
        }
    }
    out
}

fn c5_optimal_point() -> Outcome {
    let (mut w_worst, mut x_worst): (f64, f64) = (0.0, 0.0);
    for p in feasible_draws(1000) {
        let t = cycle::optimal_times(&p, RateModel::BranchFrequency).map_err(err)?;
        let (_, x_max) = cycle::r_and_xmax(&p).map_err(err)?;
        let dx = (t.x - x_max * t.y).abs();
        ensure(dx <= 1e-12, || format!("{p:?}: |x - x_max y| = {dx:e}"))?;
        if t.x * t.y < 1.0 {
            let w = cycle::total_work(&p, t.x, t.y).map_err(err)?.abs();
            ensure(w <= 1e-10, || format!("{p:?}: |W| = {w:e}"))?;
            w_worst = w_worst.max(w);
        }
        x_worst = x_worst.max(dx);
    }
    let base = EngineParams::baseline();
    let mut taus = Vec::new();
    for sigma in [1e-3, 1e-4, 1e-5] {
        let t = cycle::optimal_times(&EngineParams { sigma, ..base }, RateModel::BranchFrequency).map_err(err)?;
        taus.push(t.tau_h);
    }
    ensure(taus.windows(2).all(|w| w[1] < w[0]), || format!("tau_h not decreasing: {taus:?}"))?;
    ensure(taus[2] < 0.02 * taus[0], || format!("tau_h does not approach 0: {taus:?}"))?;
    Ok(format!(
        "1000 draws, max |W| = {w_worst:.2e}, max |x - x_max y| = {x_worst:.2e}; tau_h(sigma=1e-3,1e-4,1e-5) = {:.3e}, {:.3e}, {:.3e}",
        taus[0], taus[1], taus[2]
    ))
}

fn c6_heating_gain() -> Outcome {
    let mut r = rng(6);
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let p = random_params(&mut r);
        let (x, y) = (r.gen_range(0.0..0.99), r.gen_range(0.0..0.99));
        let c = cycle::cycle_fixed_point(&p, x, y).map_err(err)?;
        let closed = cycle::heating_gain(&p, x, y).map_err(err)?;
        let d = ((c.b - c.a) - closed).abs();
        ensure(d <= 1e-12, || format!("{p:?}, x={x}, y={y}: difference {d:e}"))?;
        worst = worst.max(d);
    }
    Ok(format!("10^4 draws, max difference {worst:.3e}"))
}

fn c7_entropy() -> Outcome {
    let mut min_ds = f64::INFINITY;
    for p in feasible_draws(1000) {
        let t = cycle::optimal_times(&p, RateModel::BranchFrequency).map_err(err)?;
        if t.x * t.y >= 1.0 {
            continue;
        }
        let ds = cycle::entropy_production(&p, t.x, t.y).map_err(err)?;
        ensure(ds >= -1e-12, || format!("{p:?}: DeltaS = {ds:e}"))?;
        min_ds = min_ds.min(ds);
    }
    let mut r = rng(7);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let mut p = random_params(&mut r);
        p.t_hot = p.omega2 * p.t_cold / p.omega1;
        p.sigma = r.gen_range(0.0..0.1);
        let ds = cycle::entropy_production(&p, 0.0, 0.0).map_err(err)?;
        let expected = p.omega1 * p.sigma * p.sigma / p.t_cold * (1.0 / p.tau1 + 1.0 / p.tau2);
        let d = (ds - expected).abs();
        ensure(d <= 1e-12, || format!("{p:?}: DeltaS = {ds}, expected {expected}"))?;
        worst = worst.max(d);
    }
    Ok(format!("min DeltaS over feasible optima {min_ds:.3e}; quasistatic ratio max deviation {worst:.3e}"))
}

fn first_index(labels: &[Regime], r: Regime) -> Option<usize> {
    labels.iter().position(|l| *l == r)
}

/// `i x3, ii x5, ...`
fn run_lengths(labels: &[Regime]) -> String {
    let mut runs: Vec<(Regime, usize)> = Vec::new();
    for l in labels {
        match runs.last_mut() {
            Some((r, n)) if r == l => *n += 1,
            _ => runs.push((*l, 1)),
        }
    }
    runs.iter().map(|(r, n)| format!("{} x{n}", r.label())).collect::<Vec<_>>().join(", ")
}

/// All three regimes appear, first i, then ii, then iii, with bracketed
/// critical values in increasing order.
fn three_bands(d: &PhaseDiagram) -> Result<(f64, f64), String> {
    let labels = d.regime_labels();
    let seq = run_lengths(&labels);
    let (i, ii, iii) = match (
        first_index(&labels, Regime::Single),
        first_index(&labels, Regime::Multiple),
        first_index(&labels, Regime::Classical),
    ) {
        (Some(a), Some(b), Some(c)) => (a, b, c),
        _ => {
            let s = output::phase_summary(d).counts;
            return Err(format!(
                "missing regimes; cells quantum/classical/infeasible = {}/{}/{}; labels: {seq}",
                s.quantum, s.classical, s.infeasible
            ));
        }
    };
    ensure(i < ii && ii < iii, || format!("regimes out of order: {seq}"))?;
    let c1 = d.critical.c1().map_err(err)?;
    let c2 = d.critical.c2().map_err(err)?;
    ensure(c1.value < c2.value, || format!("c1 = {} >= c2 = {}", c1.value, c2.value))?;
    Ok((c1.value, c2.value))
}

fn sigma_diagram(threads: usize) -> Result<PhaseDiagram, String> {
    let base = EngineParams::baseline();
    let x = Axis::new(AxisName::SigmaBar, 0.0, 0.7, 200).map_err(err)?;
    let y = Axis::with_scale(AxisName::THot, 5.0, 500.0, 200, AxisScale::Log).map_err(err)?;
    sweep::sweep(&base, x, y, SweepOptions { threads, ..SweepOptions::default() }).map_err(err)
}

fn c8a_sigma_sweep() -> Outcome {
    let d = sigma_diagram(0)?;
    let (c1, c2) = three_bands(&d)?;
    let t_q = d.threshold_temperature.ok_or("no threshold temperature")?;
    let ys = d.y_axis.values();
    let mut checked = 0;
    for (i, reg) in d.regimes.iter().enumerate() {
        if reg.regime != Regime::Single {
            continue;
        }
        ensure(!reg.boundary_above_range, || format!("column {i} is all quantum although T_q = {t_q} is in range"))?;
        let col = d.column(i);
        let feasible: Vec<usize> = (0..col.len()).filter(|j| col[*j] != CellClass::Infeasible).collect();
        let k = feasible
            .windows(2)
            .position(|w| col[w[0]] != col[w[1]])
            .ok_or_else(|| format!("column {i}: no boundary"))?;
        let (below, above) = (feasible[k], feasible[k + 1]);
        if col[below] != CellClass::Quantum {
            continue;
        }
        // one grid cell of slack on either side of the bracketing cells
        let lo = ys[below.saturating_sub(1)];
        let hi = ys[(above + 1).min(ys.len() - 1)];
        ensure(lo <= t_q && t_q <= hi, || {
            format!("column {i} (sigma_bar = {}): boundary in [{}, {}], T_q = {t_q}", d.x_axis.value(i), ys[below], ys[above])
        })?;
        checked += 1;
    }
    ensure(checked > 0, || "no regime-i column with a quantum-to-classical boundary".into())?;
    Ok(format!("sigma_bar_C1 = {c1:.4}, sigma_bar_C2 = {c2:.4}; {checked} regime-i columns match T_q = {t_q:.3}"))
}

fn c8b_cold_sweep() -> Outcome {
    let base = EngineParams::baseline().with_sigma_bar(2.0 / 3.0);
    let x = Axis::new(AxisName::TCold, 0.1, 20.0, 200).map_err(err)?;
    let y = Axis::with_scale(AxisName::THot, 5.0, 500.0, 200, AxisScale::Log).map_err(err)?;
    let d = sweep::sweep(&base, x, y, SweepOptions::default()).map_err(err)?;
    let (c1, c2) = three_bands(&d)?;
    Ok(format!("T_C1 = {c1:.4}, T_C2 = {c2:.4}"))
}

fn c9_determinism() -> Outcome {
    let reference = output::phase_csv(&sigma_diagram(1)?);
    for threads in [1, 2, 4, 0] {
        let csv = output::phase_csv(&sigma_diagram(threads)?);
        ensure(csv == reference, || format!("CSV differs with {threads} threads"))?;
    }
    Ok(format!("5 sweeps (threads 1, 1, 2, 4, auto), {} bytes each, identical", reference.len()))
}

fn main() {
    let criteria = [
        Criterion { id: "1", name: "undamped LG bound", budget: Duration::from_secs(1), run: c1_undamped_bound },
        Criterion { id: "2", name: "decoherence cutoff", budget: Duration::from_secs(10), run: c2_decoherence_cutoff },
        Criterion { id: "3", name: "oracle equivalence", budget: Duration::from_secs(60), run: c3_oracle_equivalence },
        Criterion { id: "4", name: "first law", budget: Duration::from_secs(5), run: c4_first_law },
        Criterion { id: "5", name: "optimal-point identities", budget: Duration::from_secs(10), run: c5_optimal_point },
        Criterion { id: "6", name: "heating gain closed form", budget: Duration::from_secs(5), run: c6_heating_gain },
        Criterion { id: "7", name: "entropy production", budget: Duration::from_secs(5), run: c7_entropy },
        Criterion { id: "8a", name: "phase diagram, sigma_bar sweep", budget: Duration::from_secs(150), run: c8a_sigma_sweep },
        Criterion { id: "8b", name: "phase diagram, T_c sweep at sigma_bar = 2/3", budget: Duration::from_secs(150), run: c8b_cold_sweep },
        Criterion { id: "9", name: "thread-count determinism", budget: Duration::from_secs(300), run: c9_determinism },
    ];
    let mut failed = Vec::new();
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > c.budget => Err(format!("{detail}; over the {:?} budget", c.budget)),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS criterion {} ({}): {detail} [{:.2} s]", c.id, c.name, elapsed.as_secs_f64()),
            Err(detail) => {
                println!("FAIL criterion {} ({}): {detail} [{:.2} s]", c.id, c.name, elapsed.as_secs_f64());
                failed.push(c.id);
            }
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", criteria.len());
    } else {
        println!("acceptance: {} of {} criteria failed: {}", failed.len(), criteria.len(), failed.join(", "));
        std::process::exit(1);
    }
}
