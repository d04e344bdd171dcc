use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand};
use serde_json::json;

use otto_lgi::config::OutputFormat;
use otto_lgi::sweep::{self, Axis, AxisName, PhaseDiagram};
use otto_lgi::{cycle, lgi, lindblad, output, RunConfig};

const THREADS_ENV: &str = "OTTO_LGI_THREADS";

#[derive(Parser)]
#[command(name = "otto-lgi", version, about = "Leggett-Garg quantumness of a finite-time qubit Otto engine")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the t,K3 table of the three-time LG parameter.
    K3 {
        #[arg(long)]
        omega: f64,
        #[arg(long)]
        gamma: f64,
        #[arg(long)]
        t_max: f64,
        #[arg(long, default_value_t = 1000)]
        n: usize,
    },
    /// Print the quantum time scale for one (omega, gamma) pair.
    TauQ {
        #[arg(long)]
        omega: f64,
        #[arg(long)]
        gamma: f64,
        #[arg(long, default_value_t = lgi::DEFAULT_TOL)]
        tol: f64,
    },
    /// Solve the minimal-time cycle of a configuration.
    Cycle {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        format: Option<OutputFormat>,
    },
    /// Phase diagram over sigma_bar (columns) and T_h (rows).
    SweepSigma(SweepArgs),
    /// Phase diagram over T_c (columns) and T_h (rows).
    SweepTc(SweepArgs),
    /// Compare the analytic correlator with the master-equation oracle.
    OracleCheck {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(clap::Args)]
struct SweepArgs {
    #[arg(long)]
    config: PathBuf,
    /// Grid size as NXxNY, overriding the configured point counts.
    #[arg(long)]
    grid: Option<String>,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    json: Option<PathBuf>,
    /// Which output goes to stdout when it has no file path.
    #[arg(long)]
    format: Option<OutputFormat>,
}

/// A failure with its exit code and error-record tag.
struct Failure {
    code: u8,
    kind: String,
    message: String,
}

impl Failure {
    fn usage(kind: &str, message: impl Into<String>) -> Self {
        Failure { code: 1, kind: kind.to_string(), message: message.into() }
    }
}

impl From<otto_lgi::Error> for Failure {
    fn from(e: otto_lgi::Error) -> Self {
        let code = match e {
            otto_lgi::Error::Config(_) | otto_lgi::Error::UnknownAxis(_) => 1,
            _ => 2,
        };
        Failure { code, kind: e.kind().to_string(), message: e.to_string() }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        match e.downcast::<otto_lgi::Error>() {
            Ok(e) => e.into(),
            Err(e) => Failure::usage("io", format!("{e:#}")),
        }
    }
}

type CliResult<T = ()> = Result<T, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            report_failure(&Failure::usage("usage", e.kind().to_string()));
            return ExitCode::from(1);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            report_failure(&f);
            ExitCode::from(f.code)
        }
    }
}

fn report_failure(f: &Failure) {
    eprintln!("{}", json!({ "error": f.kind, "message": f.message, "exit_code": f.code }));
}

fn run(command: Command) -> CliResult {
    match command {
        Command::K3 { omega, gamma, t_max, n } => {
            let r = lgi::analyze(omega, gamma, t_max, n, lgi::DEFAULT_TOL)?;
            print!("{}", output::k3_csv(&r.t_samples, &r.k3_values));
        }
        Command::TauQ { omega, gamma, tol } => {
            let tau_q = lgi::quantum_time(omega, gamma, tol)?;
            println!("{}", json!({ "omega": omega, "gamma": gamma, "tol": tol, "tau_q": tau_q }));
        }
        Command::Cycle { config, format } => {
            let cfg = load_config(&config)?;
            let report = cycle::report(&cfg.params, cfg.rate_model())?;
            let text = match format.unwrap_or(cfg.format) {
                OutputFormat::Json => output::cycle_json(&report) + "\n",
                OutputFormat::Csv => output::cycle_csv(&report),
            };
            print!("{text}");
            if !report.feasible {
                let reason = report.reason.unwrap_or_else(|| "no finite-time schedule".into());
                return Err(Failure { code: 2, kind: "infeasible_cycle".into(), message: reason });
            }
        }
        Command::SweepSigma(args) => run_sweep(args, AxisName::SigmaBar)?,
        Command::SweepTc(args) => run_sweep(args, AxisName::TCold)?,
        Command::OracleCheck { config } => {
            let cfg = load_config(&config)?;
            let p = cfg.params;
            let mut branches = Vec::new();
            let mut worst: f64 = 0.0;
            for (branch, omega, temperature) in [("hot", p.omega2, p.t_hot), ("cold", p.omega1, p.t_cold)] {
                let err = lindblad::oracle_discrepancy(omega, temperature, p.gamma0, cfg.oracle_points)?;
                worst = worst.max(err);
                branches.push(json!({ "branch": branch, "omega": omega, "T": temperature, "max_rel_error": err }));
            }
            let passed = worst <= cfg.oracle_rtol;
            let record = json!({ "max_rel_error": worst, "rtol": cfg.oracle_rtol, "passed": passed, "branches": branches });
            println!("{}", serde_json::to_string_pretty(&record).expect("json"));
            if !passed {
                return Err(Failure {
                    code: 3,
                    kind: "oracle_mismatch".into(),
                    message: format!("max relative error {worst:e} exceeds {:e}", cfg.oracle_rtol),
                });
            }
        }
    }
    Ok(())
}

fn load_config(path: &Path) -> CliResult<RunConfig> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))
        .map_err(Failure::from)?;
    otto_lgi::config::parse_config(&text).map_err(|e| otto_lgi::Error::from(e).into())
}

fn parse_grid(spec: &str) -> CliResult<(usize, usize)> {
    let err = || Failure::usage("usage", format!("--grid expects NXxNY, got `{spec}`"));
    let (a, b) = spec.split_once(['x', 'X']).ok_or_else(err)?;
    Ok((a.trim().parse().map_err(|_| err())?, b.trim().parse().map_err(|_| err())?))
}

/// Configured thread count, capped by the environment variable when set.
fn thread_count(configured: usize) -> CliResult<usize> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(configured);
    };
    let cap: usize = raw
        .trim()
        .parse()
        .map_err(|_| Failure::usage("usage", format!("{THREADS_ENV} must be a non-negative integer, got `{raw}`")))?;
    Ok(match (configured, cap) {
        (c, 0) => c,
        (0, cap) => cap,
        (c, cap) => c.min(cap),
    })
}

fn run_sweep(args: SweepArgs, x_name: AxisName) -> CliResult {
    let cfg = load_config(&args.config)?;
    let (mut x_grid, mut y_grid) = match x_name {
        AxisName::TCold => (cfg.t_cold_grid, cfg.t_hot_grid),
        _ => (cfg.sigma_bar_grid, cfg.t_hot_grid),
    };
    if let Some(spec) = &args.grid {
        let (nx, ny) = parse_grid(spec)?;
        x_grid.n = nx;
        y_grid.n = ny;
    }
    let x_axis: Axis = x_grid.axis(x_name)?;
    let y_axis: Axis = y_grid.axis(AxisName::THot)?;
    let mut options = cfg.sweep_options();
    options.threads = thread_count(options.threads)?;
    let diagram: PhaseDiagram = sweep::sweep(&cfg.params, x_axis, y_axis, options)?;

    let csv_path = args.csv.or(cfg.output_csv);
    let json_path = args.json.or(cfg.output_json);
    let csv = output::phase_csv(&diagram);
    let summary = output::summary_json(&diagram) + "\n";
    if let Some(p) = &csv_path {
        write(p, &csv)?;
    }
    if let Some(p) = &json_path {
        write(p, &summary)?;
    }
    match args.format.unwrap_or(cfg.format) {
        OutputFormat::Csv if csv_path.is_none() => print!("{csv}"),
        OutputFormat::Json if json_path.is_none() => print!("{summary}"),
        _ => {}
    }
    Ok(())
}

fn write(path: &Path, text: &str) -> CliResult {
    fs::write(path, text)
        .map_err(|e| anyhow!(e).context(format!("writing {}", path.display())))
        .map_err(Failure::from)
}
