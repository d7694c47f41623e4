//! Command-line front end.
//!
//! Commands read an optional JSON configuration (`--config`), apply flag
//! overrides, run in a rayon pool of `--threads` workers and emit a table as
//! CSV or JSON to `--out` or standard output. Errors are reported on
//! standard error as one JSON object and map to stable exit codes.

pub mod config;
pub mod reproduce;
pub mod table;

use crate::error::Error;
use crate::fresnel::{r_pair_imag, r_pair_real};
use crate::lifshitz::{
    ideal_metal_classical, pressure_breakdown, pressure_evanescent, pressure_matsubara,
    pressure_propagating_direct, pressure_propagating_residual, sweep, Polarization,
    PressureBreakdown, SummationConfig,
};
use crate::params::PhysicalParams;
use crate::response::{classify_region, eps_imag_axis, eps_real_axis};
use clap::{Args, Parser, Subcommand};
use config::{Overrides, Point, RunConfig};
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;
use table::{Cell, Format, Table};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Numeric(#[from] Error),
    /// Some rows of a table failed; the table itself was written.
    #[error("{0} of {1} rows failed")]
    PartialFailure(usize, usize),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Numeric(Error::InvalidParameter(_)) => EXIT_CONFIG,
            CliError::Numeric(_) | CliError::PartialFailure(..) => EXIT_NUMERIC,
            CliError::Io(_) => EXIT_IO,
        }
    }

    fn kind(&self) -> &'static str {
        match self.exit_code() {
            EXIT_CONFIG => "config",
            EXIT_NUMERIC => "numeric",
            _ => "io",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "graphene-casimir", version, about = "Casimir pressure between two graphene sheets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// JSON configuration file; unknown keys are rejected.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output file instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,
    /// Relative tolerance of the Matsubara sum and of the permittivity
    /// integrals.
    #[arg(long, global = true, value_name = "X")]
    pub tol: Option<f64>,
    /// Temperature, K.
    #[arg(long, global = true, value_name = "K")]
    pub temperature: Option<f64>,
    /// Separation between the sheets, m.
    #[arg(long, global = true, value_name = "M")]
    pub separation: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Permittivities at the configured spectral points.
    Permittivity,
    /// Reflection coefficients at the configured spectral points.
    Reflection,
    /// TM, TE and total pressure at one separation.
    Pressure,
    /// Evanescent/propagating decomposition of the TM pressure.
    PressureSplit {
        /// Also evaluate the propagating part from its oscillatory integral.
        #[arg(long)]
        direct: bool,
    },
    /// Pressure breakdown over a separation grid.
    Sweep {
        /// Skip the evanescent/propagating split.
        #[arg(long)]
        no_split: bool,
    },
    /// Recompute the published comparison points and print a pass/fail table.
    ReproducePaper,
}

/// Runs the parsed command line and returns the process exit code.
pub fn main_with(cli: Cli) -> i32 {
    match run(&cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let msg = serde_json::json!({
                "error": { "kind": e.kind(), "exit_code": e.exit_code(), "message": e.to_string() }
            });
            eprintln!("{msg}");
            e.exit_code()
        }
    }
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let c = &cli.common;
    let mut cfg = match &c.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    cfg.apply(&Overrides {
        temperature_k: c.temperature,
        separation_m: c.separation,
        tol: c.tol,
    });
    if let Some(n) = c.threads {
        if n == 0 {
            return Err(CliError::Config("--threads must be >= 1".into()));
        }
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let params = cfg.physical()?;

    let (table, extra) = match &cli.command {
        Command::Permittivity => (permittivity_table(&cfg, &params)?, None),
        Command::Reflection => (reflection_table(&cfg, &params)?, None),
        Command::Pressure => (pressure_table(&params, &cfg.summation()?)?, None),
        Command::PressureSplit { direct } => {
            (pressure_split_table(&params, &cfg.summation()?, *direct)?, None)
        }
        Command::Sweep { no_split } => {
            let split = !no_split && cfg.split.unwrap_or(true);
            let (t, failed) = sweep_table(&cfg.grid()?, &params, &cfg.summation()?, split)?;
            (t, (failed > 0).then_some(failed))
        }
        Command::ReproducePaper => {
            let rows = reproduce::run(&params, &cfg.summation()?)?;
            let report = reproduce::report(&reproduce::evaluate(&rows));
            if c.out.is_some() {
                print!("{report}");
            } else {
                eprint!("{report}");
            }
            (reproduce::table(&rows), None)
        }
    };
    emit(&table, c.format, c.out.as_ref())?;
    match extra {
        Some(failed) => Err(CliError::PartialFailure(failed, table.rows.len())),
        None => Ok(()),
    }
}

fn emit(table: &Table, format: Format, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => {
            let f = std::fs::File::create(path)
                .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            let mut w = std::io::BufWriter::new(f);
            table.write(format, &mut w)?;
            w.flush().map_err(|e| CliError::Io(e.to_string()))
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            table.write(format, &mut lock)
        }
    }
}

fn point_cells(p: Point, params: &PhysicalParams) -> Vec<Cell> {
    match p {
        Point::Real(s) => vec![
            "real".into(),
            s.q.into(),
            s.omega.into(),
            Cell::Empty,
            classify_region(s, params).as_str().into(),
        ],
        Point::Imaginary(m) => vec![
            "imaginary".into(),
            m.q.into(),
            m.xi.into(),
            Cell::Int(u64::from(m.l)),
            Cell::Empty,
        ],
    }
}

const POINT_COLUMNS: [&str; 5] = ["axis", "q_per_m", "omega_or_xi_rad_s", "l", "region"];

pub fn permittivity_table(cfg: &RunConfig, params: &PhysicalParams) -> Result<Table, CliError> {
    let rcfg = cfg.response()?;
    let mut cols = POINT_COLUMNS.to_vec();
    cols.extend(["re_eps_L", "im_eps_L", "re_eps_Tr", "im_eps_Tr", "err_est"]);
    let mut t = Table::new("permittivity", cols);
    for p in cfg.points(params)? {
        let e = match p {
            Point::Real(s) => eps_real_axis(s, params, &rcfg)?,
            Point::Imaginary(m) => eps_imag_axis(m, params, &rcfg)?,
        };
        let mut row = point_cells(p, params);
        row.extend([
            e.eps_l.re.into(),
            e.eps_l.im.into(),
            e.eps_tr.re.into(),
            e.eps_tr.im.into(),
            e.relative_error().into(),
        ]);
        t.push(row);
    }
    Ok(t)
}

pub fn reflection_table(cfg: &RunConfig, params: &PhysicalParams) -> Result<Table, CliError> {
    let rcfg = cfg.response()?;
    let mut cols = POINT_COLUMNS.to_vec();
    cols.extend(["re_r_TM", "im_r_TM", "re_r_TE", "im_r_TE"]);
    let mut t = Table::new("reflection", cols);
    for p in cfg.points(params)? {
        let r = match p {
            Point::Real(s) => r_pair_real(&eps_real_axis(s, params, &rcfg)?, s)?,
            Point::Imaginary(m) => r_pair_imag(&eps_imag_axis(m, params, &rcfg)?, m)?,
        };
        let mut row = point_cells(p, params);
        row.extend([r.r_tm.re.into(), r.r_tm.im.into(), r.r_te.re.into(), r.r_te.im.into()]);
        t.push(row);
    }
    Ok(t)
}

fn log_wall_time(command: &str, start: Instant) {
    let msg = serde_json::json!({ "command": command, "wall_time_s": start.elapsed().as_secs_f64() });
    eprintln!("{msg}");
}

pub fn pressure_table(params: &PhysicalParams, cfg: &SummationConfig) -> Result<Table, CliError> {
    let start = Instant::now();
    let b = pressure_breakdown(params, cfg, false)?;
    let mut t = Table::new(
        "pressure",
        vec![
            "a_m",
            "T_K",
            "P_TM_Pa",
            "P_TM_err_Pa",
            "P_TE_Pa",
            "P_TE_err_Pa",
            "P_total_Pa",
            "P_total_err_Pa",
            "P_IM_Pa",
            "P_TM_over_P_TE",
            "P_TM_over_P_total",
            "P_total_over_P_IM",
            "rel_tol",
            "l_max_cap",
            "q_cutoff_factor",
        ],
    );
    t.push(vec![
        b.separation_m.into(),
        b.temperature_k.into(),
        b.p_tm.value.into(),
        b.p_tm.error.into(),
        b.p_te.value.into(),
        b.p_te.error.into(),
        b.p_total.value.into(),
        b.p_total.error.into(),
        b.p_im.into(),
        b.tm_over_te().into(),
        b.tm_over_total().into(),
        b.total_over_im().into(),
        cfg.rel_tol.into(),
        Cell::Int(u64::from(cfg.l_max_cap)),
        cfg.q_cutoff_factor.into(),
    ]);
    log_wall_time("pressure", start);
    Ok(t)
}

pub fn pressure_split_table(
    params: &PhysicalParams,
    cfg: &SummationConfig,
    direct: bool,
) -> Result<Table, CliError> {
    let start = Instant::now();
    let m = pressure_matsubara(params, Polarization::Tm, cfg)?;
    let ev = pressure_evanescent(params, Polarization::Tm, cfg)?;
    let prop = pressure_propagating_residual(m, ev.total);
    let d = if direct {
        Some(pressure_propagating_direct(params, Polarization::Tm, cfg)?)
    } else {
        None
    };
    let p_im = ideal_metal_classical(params)?;
    let mut t = Table::new(
        "pressure-split",
        vec![
            "a_m",
            "T_K",
            "P_TM_Pa",
            "P_TM_err_Pa",
            "P_TM_evan_Pa",
            "P_TM_evan_err_Pa",
            "P_TM_evan_plasmonic_Pa",
            "P_TM_evan_deep_Pa",
            "P_TM_prop_Pa",
            "P_TM_prop_err_Pa",
            "P_TM_prop_direct_Pa",
            "P_TM_prop_direct_err_Pa",
            "P_IM_Pa",
            "P_TM_evan_over_P_IM",
            "P_TM_prop_over_P_IM",
            "rel_tol",
            "real_rel_tol",
            "direct_rel_tol",
        ],
    );
    t.push(vec![
        params.separation_m.into(),
        params.temperature_k.into(),
        m.value.into(),
        m.error.into(),
        ev.total.value.into(),
        ev.total.error.into(),
        ev.plasmonic.value.into(),
        ev.deep.value.into(),
        prop.value.into(),
        prop.error.into(),
        d.map(|v| v.value).into(),
        d.map(|v| v.error).into(),
        p_im.into(),
        (ev.total.value / p_im).into(),
        (prop.value / p_im).into(),
        cfg.rel_tol.into(),
        cfg.real_rel_tol.into(),
        cfg.direct_rel_tol.into(),
    ]);
    log_wall_time("pressure-split", start);
    Ok(t)
}

pub const SWEEP_COLUMNS: [&str; 20] = [
    "a_m",
    "P_TM_Pa",
    "P_TE_Pa",
    "P_total_Pa",
    "P_IM_Pa",
    "P_TM_evan_Pa",
    "P_TM_prop_Pa",
    "P_TM_evan_plasmonic_Pa",
    "P_TM_evan_deep_Pa",
    "P_TM_over_P_TE",
    "P_TM_over_P_total",
    "P_total_over_P_IM",
    "P_TM_over_P_IM",
    "P_TM_evan_over_P_IM",
    "P_TM_prop_over_P_IM",
    "P_TM_err_Pa",
    "P_TE_err_Pa",
    "P_TM_evan_err_Pa",
    "P_TM_prop_err_Pa",
    "status",
];

/// Sweep-table cells of one row; all numeric cells are empty on failure.
pub fn sweep_cells(a: f64, r: &crate::Result<PressureBreakdown>) -> Vec<Cell> {
    match r {
        Ok(b) => {
            let s = b.split;
            vec![
                a.into(),
                b.p_tm.value.into(),
                b.p_te.value.into(),
                b.p_total.value.into(),
                b.p_im.into(),
                s.map(|s| s.evanescent.value).into(),
                s.map(|s| s.propagating.value).into(),
                s.map(|s| s.plasmonic.value).into(),
                s.map(|s| s.deep.value).into(),
                b.tm_over_te().into(),
                b.tm_over_total().into(),
                b.total_over_im().into(),
                b.tm_over_im().into(),
                b.tm_evan_over_im().into(),
                b.tm_prop_over_im().into(),
                b.p_tm.error.into(),
                b.p_te.error.into(),
                s.map(|s| s.evanescent.error).into(),
                s.map(|s| s.propagating.error).into(),
                "ok".into(),
            ]
        }
        Err(e) => {
            let mut row = vec![Cell::Num(a)];
            row.extend(std::iter::repeat(Cell::Empty).take(SWEEP_COLUMNS.len() - 2));
            row.push(format!("error: {e}").into());
            row
        }
    }
}

/// Sweep table and the number of failed rows.
pub fn sweep_table(
    grid: &[f64],
    params: &PhysicalParams,
    cfg: &SummationConfig,
    split: bool,
) -> Result<(Table, usize), CliError> {
    let rows = sweep(grid, params, cfg, split)?;
    let mut t = Table::new("sweep", SWEEP_COLUMNS.to_vec());
    let mut failed = 0;
    for r in &rows {
        if let Err(e) = &r.result {
            log::error!("a = {:e} m: {e}", r.separation_m);
            failed += 1;
        }
        t.push(sweep_cells(r.separation_m, &r.result));
    }
    Ok((t, failed))
}
