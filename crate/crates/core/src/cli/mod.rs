//! `flexcool` command-line front end.
//!
//! Every subcommand reads an optional flat config (see [`config`]), runs the
//! library and renders deterministic CSV, JSON or text. Exit codes: 0 success,
//! 2 usage or config error, 3 domain error, 4 oracle numeric failure,
//! 5 failed validity check in `validate`.

pub mod config;
pub mod output;

use std::f64::consts::PI;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::cooling_model::{
    ground_state_threshold_temperature, minimize_detuning, qf_quantum_criterion,
    rescale_oscillator, steady_phonon_basic, steady_phonon_full, thermal_phonon_number,
    HybridParams,
};
use crate::coupling::validity_report;
use crate::error::Error;
use crate::hyperfine::constants::{H, HBAR};
use crate::hyperfine::{
    exact_transition_frequency, larmor_frequency, zeeman_energy, HyperfineState, StaticField,
};
use crate::lindblad_oracle::{
    approximation_residual, evolve_populations, mean_phonon, steady_populations, OracleConfig,
    PopulationVector, PumpModel,
};
use config::RunConfig;
use output::{json_doc, round12, rounded, CsvDoc};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;
pub const EXIT_INVALID: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "flexcool", version, about = "Steady-state cooling of a flexural mode by an out-coupled condensate")]
pub struct Cli {
    /// Flat `key = value` config; baseline values fill the gaps.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Write output here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Worker threads for sweeps; 0 lets rayon decide. Output does not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Hyperfine energies E/h and Larmor frequencies over a field grid.
    Levels(LevelsArgs),
    /// Closed-form steady state with every intermediate quantity.
    Steady,
    /// ⟨n⟩ₛ against x = ħδ/μ_c.
    SweepDetuning(DetuningArgs),
    /// n_th and ⟨n⟩ₛ against bath temperature.
    SweepTemperature(TemperatureArgs),
    /// ⟨n⟩ₛ over a log grid of quality factor and frequency.
    SweepQf(QfArgs),
    /// Truncated-Fock oracle against the closed form.
    MasterEq(MasterEqArgs),
    /// Regime-of-validity checks and the Q·f criterion.
    Validate,
}

#[derive(Debug, Args)]
pub struct LevelsArgs {
    #[arg(long, default_value_t = 0.0)]
    pub b_min: f64,
    #[arg(long, default_value_t = 0.5)]
    pub b_max: f64,
    #[arg(long, default_value_t = 101)]
    pub points: usize,
}

#[derive(Debug, Args)]
pub struct DetuningArgs {
    #[arg(long, default_value_t = 0.01)]
    pub x_min: f64,
    #[arg(long, default_value_t = 0.99)]
    pub x_max: f64,
    #[arg(long, default_value_t = 99)]
    pub points: usize,
}

#[derive(Debug, Args)]
pub struct TemperatureArgs {
    #[arg(long, default_value_t = 0.0)]
    pub t_min: f64,
    #[arg(long, default_value_t = 4.2)]
    pub t_max: f64,
    #[arg(long, default_value_t = 421)]
    pub points: usize,
}

#[derive(Debug, Args)]
pub struct QfArgs {
    #[arg(long, default_value_t = 1e3)]
    pub q_min: f64,
    #[arg(long, default_value_t = 1e7)]
    pub q_max: f64,
    #[arg(long, default_value_t = 1e3)]
    pub f_min: f64,
    #[arg(long, default_value_t = 1e7)]
    pub f_max: f64,
    /// Points per axis.
    #[arg(long, default_value_t = 41)]
    pub points: usize,
}

#[derive(Debug, Args)]
pub struct MasterEqArgs {
    /// Also evolve from the thermal state for this long, in seconds.
    #[arg(long)]
    pub t_final: Option<f64>,
}

/// Failure of a subcommand, carrying its exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Model(Error),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Model(e) if e.is_numeric() => EXIT_NUMERIC,
            CliError::Model(_) => EXIT_DOMAIN,
            CliError::Io(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Model(e) => write!(f, "error: {e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Model(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Rendered output plus the exit code it should produce.
pub struct Rendered {
    pub text: String,
    pub code: i32,
}

impl Rendered {
    fn ok(text: String) -> Self {
        Self { text, code: EXIT_OK }
    }
}

/// Parses `args` (including the program name), runs and writes output.
/// Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    match execute(&cli) {
        Ok(rendered) => {
            let written = match &cli.out {
                Some(path) => std::fs::write(path, &rendered.text),
                None => stdout.write_all(rendered.text.as_bytes()),
            };
            if let Err(e) = written {
                let _ = writeln!(stderr, "{}", CliError::Io(e));
                return 1;
            }
            rendered.code
        }
        Err(e) => {
            let _ = writeln!(stderr, "{e}");
            e.exit_code()
        }
    }
}

fn load_config(cli: &Cli) -> CliResult<RunConfig> {
    match &cli.config {
        None => Ok(RunConfig::default()),
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            RunConfig::parse(&text).map_err(CliError::Usage)
        }
    }
}

fn resolve_format(requested: Option<Format>, default: Format, allowed: &[Format]) -> CliResult<Format> {
    let format = requested.unwrap_or(default);
    if allowed.contains(&format) {
        Ok(format)
    } else {
        Err(CliError::Usage(format!("format {format:?} not available for this command")))
    }
}

pub fn execute(cli: &Cli) -> CliResult<Rendered> {
    let cfg = load_config(cli)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    const TABLE: &[Format] = &[Format::Csv, Format::Json];
    const REPORT: &[Format] = &[Format::Text, Format::Json];

    match &cli.command {
        Command::Levels(args) => {
            let table = cmd_levels(args)?;
            Ok(Rendered::ok(table.render(&cfg, resolve_format(cli.format, Format::Csv, TABLE)?)))
        }
        Command::Steady => {
            let format = resolve_format(cli.format, Format::Json, TABLE)?;
            Ok(Rendered::ok(cmd_steady(&cfg, format)?))
        }
        Command::SweepDetuning(args) => {
            let format = resolve_format(cli.format, Format::Csv, TABLE)?;
            let table = pool.install(|| cmd_sweep_detuning(&cfg, args))?;
            Ok(Rendered::ok(table.render(&cfg, format)))
        }
        Command::SweepTemperature(args) => {
            let format = resolve_format(cli.format, Format::Csv, TABLE)?;
            let table = pool.install(|| cmd_sweep_temperature(&cfg, args))?;
            Ok(Rendered::ok(table.render(&cfg, format)))
        }
        Command::SweepQf(args) => {
            let format = resolve_format(cli.format, Format::Csv, TABLE)?;
            let table = pool.install(|| cmd_sweep_qf(&cfg, args))?;
            Ok(Rendered::ok(table.render(&cfg, format)))
        }
        Command::MasterEq(args) => {
            resolve_format(cli.format, Format::Json, &[Format::Json])?;
            Ok(Rendered::ok(cmd_master_eq(&cfg, args)?))
        }
        Command::Validate => {
            let format = resolve_format(cli.format, Format::Text, REPORT)?;
            cmd_validate(&cfg, format)
        }
    }
}

/// Columns of numbers plus trailing notes.
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub notes: Vec<String>,
    /// Machine-readable form of the notes for JSON output.
    pub summary: Value,
}

impl Table {
    fn new(header: Vec<String>) -> Self {
        Self {
            header,
            rows: Vec::new(),
            notes: Vec::new(),
            summary: json!({}),
        }
    }

    pub fn render(&self, cfg: &RunConfig, format: Format) -> String {
        match format {
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|r| Value::Array(r.iter().map(|x| round12(*x)).collect()))
                    .collect();
                json_doc(&json!({
                    "config": cfg,
                    "columns": self.header,
                    "rows": rows,
                    "summary": output::round_tree(self.summary.clone()),
                }))
            }
            _ => {
                let header: Vec<&str> = self.header.iter().map(String::as_str).collect();
                let mut doc = CsvDoc::new(cfg, &header);
                for row in &self.rows {
                    doc.row(row);
                }
                for note in &self.notes {
                    doc.note(note);
                }
                doc.finish()
            }
        }
    }
}

fn check_points(points: usize) -> CliResult<()> {
    if points < 2 {
        return Err(CliError::Usage("need at least 2 grid points".into()));
    }
    Ok(())
}

fn linear_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let step = (hi - lo) / (points - 1) as f64;
    (0..points)
        .map(|i| if i + 1 == points { hi } else { lo + step * i as f64 })
        .collect()
}

fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let (a, b) = (lo.log10(), hi.log10());
    linear_grid(a, b, points).into_iter().map(|e| 10f64.powf(e)).collect()
}

fn finite(name: &str, values: &[f64]) -> CliResult<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(CliError::Usage(format!("{name}: range bounds must be finite")))
    }
}

pub fn cmd_levels(args: &LevelsArgs) -> CliResult<Table> {
    check_points(args.points)?;
    finite("levels", &[args.b_min, args.b_max])?;
    if !(args.b_min >= 0.0 && args.b_max > args.b_min) {
        return Err(CliError::Usage("levels: need 0 <= b-min < b-max".into()));
    }
    let states = HyperfineState::all();
    let mut header = vec!["B_tesla".to_owned()];
    header.extend(states.iter().map(|s| format!("E_{}_hz", s.label())));
    header.push("omega_L_linear_hz".into());
    header.push("omega_L_exact_hz".into());
    let mut table = Table::new(header);
    for b in linear_grid(args.b_min, args.b_max, args.points) {
        let field = StaticField::new(b)?;
        let mut row = vec![b];
        for state in states {
            row.push(zeeman_energy(state, field)? / H);
        }
        row.push(larmor_frequency(field) / (2.0 * PI));
        row.push(exact_transition_frequency(field) / (2.0 * PI));
        table.rows.push(row);
    }
    Ok(table)
}

pub fn cmd_steady(cfg: &RunConfig, format: Format) -> CliResult<String> {
    let params = cfg.to_params()?;
    let result = steady_phonon_full(&params)?;
    let qf = qf_quantum_criterion(params.osc.omega_m, params.osc.quality_q, params.osc.temperature);
    match format {
        Format::Json => Ok(json_doc(&json!({
            "config": cfg,
            "result": rounded(&result),
            "qf_criterion": rounded(&qf),
        }))),
        _ => {
            let fields = [
                ("n_th", result.n_th),
                ("n_steady", result.n_steady),
                ("cooling_factor", result.cooling_factor),
                ("cooling_factor_chain", result.cooling_factor_chain),
                ("kappa", result.kappa),
                ("g0", result.g0),
                ("g_n", result.g_n),
                ("rabi", result.rabi),
                ("tau", result.tau),
                ("gamma", result.gamma),
                ("zeta", result.zeta),
                ("detuning_ratio", result.detuning_ratio),
                ("a_qm", result.a_qm),
                ("thermal_amplitude", result.thermal_amplitude),
                ("gradient", result.gradient),
                ("implied_bias_field_t", result.implied_bias_field_t),
            ];
            let header: Vec<&str> = fields.iter().map(|(k, _)| *k).collect();
            let mut doc = CsvDoc::new(cfg, &header);
            doc.row(&fields.map(|(_, v)| v));
            doc.note(&format!("validity all_pass={}", result.validity.all_pass()));
            Ok(doc.finish())
        }
    }
}

fn with_ratio(params: &HybridParams, x: f64) -> HybridParams {
    let mut p = *params;
    p.detuning_delta = x * params.mu_c / HBAR;
    p
}

/// Evaluates `f` over `grid` on the current rayon pool, keeping grid order.
fn par_eval<T, F>(grid: &[T], f: F) -> CliResult<Vec<f64>>
where
    T: Sync,
    F: Fn(&T) -> crate::Result<f64> + Sync,
{
    grid.par_iter()
        .map(&f)
        .collect::<crate::Result<Vec<f64>>>()
        .map_err(CliError::from)
}

pub fn cmd_sweep_detuning(cfg: &RunConfig, args: &DetuningArgs) -> CliResult<Table> {
    check_points(args.points)?;
    finite("sweep-detuning", &[args.x_min, args.x_max])?;
    if !(args.x_min > 0.0 && args.x_min < args.x_max && args.x_max < 1.0) {
        return Err(CliError::Usage("sweep-detuning: need 0 < x-min < x-max < 1".into()));
    }
    let params = cfg.to_params()?;
    let grid = linear_grid(args.x_min, args.x_max, args.points);
    let values = par_eval(&grid, |x| Ok(steady_phonon_full(&with_ratio(&params, *x))?.n_steady))?;

    let mut table = Table::new(vec!["x".into(), "n_steady".into()]);
    table.rows = grid.iter().zip(&values).map(|(x, n)| vec![*x, *n]).collect();

    let best = values
        .iter()
        .enumerate()
        .fold(0, |best, (i, v)| if *v < values[best] { i } else { best });
    let lo = grid[best.saturating_sub(1)];
    let hi = grid[(best + 1).min(grid.len() - 1)];
    let (x_ref, n_ref) = minimize_detuning(&params, lo, hi)?;
    table.notes.push(format!(
        "grid minimum: x={},n_steady={}",
        output::fmt_num(grid[best]),
        output::fmt_num(values[best])
    ));
    table.notes.push(format!(
        "refined minimum: x={},n_steady={}",
        output::fmt_num(x_ref),
        output::fmt_num(n_ref)
    ));
    table.summary = json!({
        "grid_minimum": {"x": grid[best], "n_steady": values[best]},
        "refined_minimum": {"x": x_ref, "n_steady": n_ref},
    });
    Ok(table)
}

pub fn cmd_sweep_temperature(cfg: &RunConfig, args: &TemperatureArgs) -> CliResult<Table> {
    check_points(args.points)?;
    finite("sweep-temperature", &[args.t_min, args.t_max])?;
    if !(args.t_min >= 0.0 && args.t_max > args.t_min) {
        return Err(CliError::Usage("sweep-temperature: need 0 <= t-min < t-max".into()));
    }
    let params = cfg.to_params()?;
    let grid = linear_grid(args.t_min, args.t_max, args.points);
    let values = par_eval(&grid, |t| Ok(steady_phonon_full(&params.with_temperature(*t))?.n_steady))?;

    let mut table = Table::new(vec!["T_K".into(), "n_th".into(), "n_steady".into()]);
    table.rows = grid
        .iter()
        .zip(&values)
        .map(|(t, n)| vec![*t, thermal_phonon_number(params.osc.omega_m, *t), *n])
        .collect();
    let threshold = ground_state_threshold_temperature(&params)?;
    table.notes.push(format!("ground-state threshold: T_K={}", output::fmt_num(threshold)));
    table.summary = json!({"ground_state_threshold_K": threshold});
    Ok(table)
}

/// Q at which ⟨n⟩ₛ = 1 for frequency `f_hz`, by bisection in log Q; `None`
/// if the crossing lies outside `[q_lo, q_hi]`.
pub fn contour_quality(base: &HybridParams, f_hz: f64, q_lo: f64, q_hi: f64) -> crate::Result<Option<f64>> {
    let n_at = |log_q: f64| -> crate::Result<f64> {
        let p = rescale_oscillator(base, 2.0 * PI * f_hz, 10f64.powf(log_q))?;
        Ok(steady_phonon_full(&p)?.n_steady)
    };
    let (mut lo, mut hi) = (q_lo.log10(), q_hi.log10());
    let (n_lo, n_hi) = (n_at(lo)?, n_at(hi)?);
    if !(n_lo >= 1.0 && n_hi <= 1.0) {
        return Ok(None);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if n_at(mid)? > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-13 {
            break;
        }
    }
    Ok(Some(10f64.powf(0.5 * (lo + hi))))
}

pub fn cmd_sweep_qf(cfg: &RunConfig, args: &QfArgs) -> CliResult<Table> {
    check_points(args.points)?;
    finite("sweep-qf", &[args.q_min, args.q_max, args.f_min, args.f_max])?;
    if !(args.q_min > 0.0 && args.q_max > args.q_min && args.f_min > 0.0 && args.f_max > args.f_min) {
        return Err(CliError::Usage("sweep-qf: need 0 < q-min < q-max and 0 < f-min < f-max".into()));
    }
    let params = cfg.to_params()?;
    let qs = log_grid(args.q_min, args.q_max, args.points);
    let fs = log_grid(args.f_min, args.f_max, args.points);
    let cells: Vec<(f64, f64)> = qs.iter().flat_map(|q| fs.iter().map(move |f| (*q, *f))).collect();
    let values = par_eval(&cells, |(q, f)| {
        Ok(steady_phonon_full(&rescale_oscillator(&params, 2.0 * PI * f, *q)?)?.n_steady)
    })?;

    let mut table = Table::new(vec!["quality_Q".into(), "f_m_hz".into(), "n_steady".into()]);
    table.rows = cells.iter().zip(&values).map(|((q, f), n)| vec![*q, *f, *n]).collect();

    let contour: Vec<Option<f64>> = fs
        .par_iter()
        .map(|f| contour_quality(&params, *f, args.q_min, args.q_max))
        .collect::<crate::Result<_>>()?;
    let mut points = Vec::new();
    for (f, q) in fs.iter().zip(contour) {
        if let Some(q) = q {
            table.notes.push(format!(
                "contour n_steady=1: f_m_hz={},quality_Q={}",
                output::fmt_num(*f),
                output::fmt_num(q)
            ));
            points.push(json!({"f_m_hz": f, "quality_Q": q}));
        }
    }
    table.summary = json!({"contour": points});
    Ok(table)
}

fn oracle_config(cfg: &RunConfig, params: &HybridParams) -> CliResult<(OracleConfig, f64)> {
    let result = steady_phonon_full(params)?;
    let gamma = cfg.oracle_gamma_per_s.unwrap_or(result.gamma);
    let mut oracle = OracleConfig::new(result.g_n, result.tau, gamma, result.kappa, result.n_th)?;
    if let Some(n) = cfg.n_max {
        oracle = oracle.with_n_max(n);
    }
    if let Some(dt) = cfg.dt_s {
        oracle = oracle.with_dt(dt);
    }
    let closed = steady_phonon_basic(result.n_th, result.g_n, result.tau, gamma, result.kappa)?;
    Ok((oracle, closed))
}

fn ratio(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        if a == 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        a / b
    }
}

pub fn cmd_master_eq(cfg: &RunConfig, args: &MasterEqArgs) -> CliResult<String> {
    let params = cfg.to_params()?;
    let (oracle, closed) = oracle_config(cfg, &params)?;
    let n_max = oracle.resolved_n_max();

    let exact = steady_populations(&oracle)?;
    let exact_mean = mean_phonon(&exact);
    let eighth = mean_phonon(&steady_populations(&oracle.with_pump(PumpModel::EIGHTH))?);
    let quarter = mean_phonon(&steady_populations(&oracle.with_pump(PumpModel::QUARTER))?);
    let quarter_prediction = if oracle.kappa > 0.0 {
        oracle.n_th
            / (1.0 + oracle.gamma * oracle.g * oracle.g * oracle.tau * oracle.tau / (4.0 * oracle.kappa))
    } else {
        f64::NAN
    };
    let residual = approximation_residual(&exact, oracle.g, oracle.tau);

    let mut record = json!({
        "config": cfg,
        "oracle": rounded(&json!({
            "g": oracle.g,
            "tau": oracle.tau,
            "gamma": oracle.gamma,
            "kappa": oracle.kappa,
            "n_th": oracle.n_th,
            "n_max": n_max,
            "tail_mass": exact.tail_mass(),
            "trace": exact.trace(),
        })),
        "exact_mean": round12(exact_mean),
        "closed_form_mean": round12(closed),
        "ratio_exact_to_closed_form": round12(ratio(exact_mean, closed)),
        "linearized_eighth_mean": round12(eighth),
        "ratio_eighth_to_closed_form": round12(ratio(eighth, closed)),
        "linearized_quarter_mean": round12(quarter),
        "small_angle_quarter_prediction": round12(quarter_prediction),
        "approximation_residual": rounded(&residual),
    });

    if let Some(t_final) = args.t_final {
        let start = PopulationVector::thermal(oracle.n_th, n_max);
        let p = evolve_populations(&start, &oracle, t_final)?;
        record["evolution"] = rounded(&json!({
            "t_final": t_final,
            "mean": mean_phonon(&p),
            "trace": p.trace(),
            "tail_mass": p.tail_mass(),
        }));
    }
    Ok(json_doc(&record))
}

pub fn cmd_validate(cfg: &RunConfig, format: Format) -> CliResult<Rendered> {
    let params = cfg.to_params()?;
    let report = validity_report(&params)?;
    let qf = qf_quantum_criterion(params.osc.omega_m, params.osc.quality_q, params.osc.temperature);
    let pass = report.all_pass() && qf.pass;
    let code = if pass { EXIT_OK } else { EXIT_INVALID };

    let text = match format {
        Format::Json => json_doc(&json!({
            "config": cfg,
            "checks": rounded(&report),
            "qf_criterion": rounded(&qf),
            "all_pass": pass,
        })),
        _ => {
            let mut out = format!("# resolved-config: {}\n", cfg.canonical_json());
            let status = |ok: bool| if ok { "PASS" } else { "FAIL" };
            for check in report.checks() {
                let ratio = check.ratio.map_or_else(|| "n/a".to_owned(), output::fmt_num);
                out.push_str(&format!(
                    "{:<16} {:>20} < {:<20} {}\n",
                    check.name,
                    ratio,
                    output::fmt_num(check.threshold),
                    status(check.pass)
                ));
            }
            out.push_str(&format!(
                "{:<16} {:>20} > {:<20} {}\n",
                "qf_product_hz",
                output::fmt_num(qf.product),
                output::fmt_num(qf.bound),
                status(qf.pass)
            ));
            out.push_str(&format!("overall {}\n", status(pass)));
            out
        }
    };
    Ok(Rendered { text, code })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids_hit_endpoints_exactly() {
        let g = linear_grid(0.01, 0.99, 99);
        assert_eq!(g.len(), 99);
        assert_eq!(g[0], 0.01);
        assert_eq!(g[98], 0.99);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
        let l = log_grid(1e3, 1e7, 41);
        assert!((l[10] - 1e4).abs() < 1e-8);
        assert_eq!(l[40], 1e7);
    }

    #[test]
    fn levels_zero_field_row() {
        let t = cmd_levels(&LevelsArgs { b_min: 0.0, b_max: 0.1, points: 3 }).unwrap();
        assert_eq!(t.header.len(), 11);
        let row = &t.rows[0];
        let upper: Vec<f64> = row[1..6].to_vec();
        let lower: Vec<f64> = row[6..9].to_vec();
        assert!(upper.iter().all(|e| (e - 0.5 * 6.835e9).abs() < 1e-3));
        assert!(lower.iter().all(|e| (e + 0.5 * 6.835e9).abs() < 1e-3));
        assert_eq!(row[9], 0.0);
        assert!(cmd_levels(&LevelsArgs { b_min: 0.2, b_max: 0.1, points: 3 }).is_err());
        assert!(cmd_levels(&LevelsArgs { b_min: 0.0, b_max: 0.1, points: 1 }).is_err());
    }

    #[test]
    fn detuning_sweep_finds_one_third() {
        let cfg = RunConfig::default();
        let t = cmd_sweep_detuning(&cfg, &DetuningArgs { x_min: 0.01, x_max: 0.99, points: 99 }).unwrap();
        let x = t.summary["refined_minimum"]["x"].as_f64().unwrap();
        assert!((x - 1.0 / 3.0).abs() < 1e-6);
        let n_th = t.rows.iter().map(|r| r[1]).fold(0.0, f64::max);
        assert!(n_th < 1041.4);
    }

    #[test]
    fn contour_follows_q_over_f_squared() {
        let cfg = RunConfig { temperature_K: 4.2, ..RunConfig::default() };
        let p = cfg.to_params().unwrap();
        let q1 = contour_quality(&p, 1e4, 1e3, 1e7).unwrap().unwrap();
        assert!(((q1 * 1e6 / 1e4) / 1.1116e7 - 1.0).abs() < 1e-3, "{q1}");
        assert!(contour_quality(&p, 1e7, 1e3, 1e7).unwrap().is_none());
    }
}
