//! Command-line front end for the `blochcover` library.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use blochcover::tradeoff::{self, build_berry_table_until, linear_grid, CORRECTION_BITS};
use blochcover::{
    berry_grid, build_table, covering_radius, covering_radius_sampled, platonic, simulate, spiral_points, CoverEntry,
    CoverTable, Generator, PointSet, Solid,
};

pub mod format;

use format::{csv_row, num};

/// Largest grid size the comparison baseline is extended to.
pub const BASELINE_D_MAX: usize = 64;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Verification(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl From<blochcover::Error> for CliError {
    fn from(e: blochcover::Error) -> Self {
        CliError::Invalid(e.to_string())
    }
}

fn invalid(flag: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Invalid(format!("{flag}: {msg}"))
}

#[derive(Debug, Parser)]
#[command(name = "blochcover", version, about = "Bloch-sphere coverings for remote qubit state preparation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a point set as CSV.
    Points(PointsArgs),
    /// Covering radius of a point set.
    Covering(CoveringArgs),
    /// Covering radius for a range of generator sizes.
    Table(TableArgs),
    /// Classical bits against entanglement over a grid of r².
    Tradeoff(TradeoffArgs),
    /// Run the preparation protocol on random targets.
    Simulate(SimulateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Spiral,
    BerryGrid,
    Platonic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Exact,
    Sample,
}

#[derive(Debug, Clone, Args)]
pub struct SetArgs {
    #[arg(long, value_enum)]
    pub algo: Algo,
    /// Point count for `spiral`.
    #[arg(long)]
    pub n: Option<usize>,
    /// Grid size for `berry-grid`.
    #[arg(long)]
    pub d: Option<usize>,
    /// Drop coincident `berry-grid` states.
    #[arg(long)]
    pub dedup: bool,
    /// Solid for `platonic`.
    #[arg(long)]
    pub solid: Option<Solid>,
}

#[derive(Debug, Args)]
pub struct PointsArgs {
    #[command(flatten)]
    pub set: SetArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CoveringArgs {
    #[command(flatten)]
    pub set: SetArgs,
    #[arg(long, value_enum, default_value = "exact")]
    pub method: Method,
    #[arg(long, default_value_t = 2_000_000)]
    pub samples: usize,
    /// Required with `--method sample`.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long, value_enum)]
    pub algo: Algo,
    #[arg(long, default_value_t = 2)]
    pub n_min: usize,
    #[arg(long, default_value_t = 1024)]
    pub n_max: usize,
    /// Smallest grid size for `berry-grid`.
    #[arg(long, default_value_t = 2)]
    pub d_min: usize,
    /// Largest grid size for `berry-grid`.
    #[arg(long, default_value_t = 30)]
    pub d_max: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TradeoffArgs {
    /// Read `n,rho_f[,d,grid_size]` rows instead of building a spiral table.
    #[arg(long)]
    pub table: Option<PathBuf>,
    #[arg(long, default_value_t = 2)]
    pub n_min: usize,
    #[arg(long, default_value_t = 1024)]
    pub n_max: usize,
    #[arg(long, default_value_t = 0.0025)]
    pub r2_min: f64,
    #[arg(long, default_value_t = 0.5)]
    pub r2_max: f64,
    #[arg(long, default_value_t = 200)]
    pub steps: usize,
    /// Add the box-grid baseline columns.
    #[arg(long)]
    pub compare: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub set: SetArgs,
    #[arg(long, default_value_t = 100_000)]
    pub trials: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Points(a) => cmd_points(&a),
        Command::Covering(a) => cmd_covering(&a),
        Command::Table(a) => cmd_table(&a),
        Command::Tradeoff(a) => cmd_tradeoff(&a),
        Command::Simulate(a) => cmd_simulate(&a),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => fs::write(p, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

pub fn point_set(a: &SetArgs) -> Result<PointSet, CliError> {
    match a.algo {
        Algo::Spiral => {
            let n = a.n.ok_or_else(|| invalid("--n", "required for --algo spiral"))?;
            spiral_points(n).map_err(|e| invalid("--n", e))
        }
        Algo::BerryGrid => {
            let d = a.d.ok_or_else(|| invalid("--d", "required for --algo berry-grid"))?;
            if d > 256 {
                return Err(invalid("--d", "must be at most 256"));
            }
            berry_grid(d, a.dedup).map_err(|e| invalid("--d", e))
        }
        Algo::Platonic => {
            let s = a.solid.ok_or_else(|| invalid("--solid", "required for --algo platonic"))?;
            Ok(platonic(s))
        }
    }
}

fn cmd_points(a: &PointsArgs) -> Result<(), CliError> {
    let ps = point_set(&a.set)?;
    let mut s = String::from("index,x,y,z\n");
    for (i, p) in ps.iter().enumerate() {
        s.push_str(&csv_row(&[i.to_string(), num(p.x()), num(p.y()), num(p.z())]));
    }
    emit(a.out.as_deref(), &s)
}

#[derive(Serialize)]
struct CoveringRecord<'a> {
    label: &'a str,
    n: usize,
    rho_f: f64,
    method: &'static str,
    witness_site: usize,
    witness_x: f64,
    witness_y: f64,
    witness_z: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
}

fn json_line<T: Serialize>(v: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(v).map_err(io::Error::other)?;
    s.push('\n');
    Ok(s)
}

fn cmd_covering(a: &CoveringArgs) -> Result<(), CliError> {
    let ps = point_set(&a.set)?;
    let (res, samples, seed) = match a.method {
        Method::Exact => (covering_radius(&ps)?, None, None),
        Method::Sample => {
            let seed = a.seed.ok_or_else(|| invalid("--seed", "required for --method sample"))?;
            if a.samples == 0 {
                return Err(invalid("--samples", "must be at least 1"));
            }
            (covering_radius_sampled(&ps, a.samples, seed)?, Some(a.samples), Some(seed))
        }
    };
    let w = res.witness_vertex;
    let rec = CoveringRecord {
        label: &ps.label,
        n: ps.len(),
        rho_f: res.rho_f,
        method: res.method.name(),
        witness_site: res.witness_site,
        witness_x: w.x(),
        witness_y: w.y(),
        witness_z: w.z(),
        samples,
        seed,
    };
    emit(a.out.as_deref(), &json_line(&rec)?)
}

fn check_range(lo_flag: &str, lo: usize, hi_flag: &str, hi: usize, max: usize) -> Result<(), CliError> {
    if lo < 2 {
        return Err(invalid(lo_flag, "must be at least 2"));
    }
    if hi < lo {
        return Err(invalid(hi_flag, format!("must be at least {lo_flag} ({lo})")));
    }
    if hi > max {
        return Err(invalid(hi_flag, format!("must be at most {max}")));
    }
    Ok(())
}

fn cmd_table(a: &TableArgs) -> Result<(), CliError> {
    let s = match a.algo {
        Algo::Spiral => {
            check_range("--n-min", a.n_min, "--n-max", a.n_max, tradeoff::MAX_TABLE_PARAM)?;
            let t = build_table(Generator::Spiral, a.n_min, a.n_max)?;
            let mut s = String::from("n,rho_f\n");
            for e in t.entries() {
                s.push_str(&csv_row(&[e.n.to_string(), num(e.rho_f)]));
            }
            s
        }
        Algo::BerryGrid => {
            check_range("--d-min", a.d_min, "--d-max", a.d_max, 128)?;
            let t = build_table(Generator::BerryGrid, a.d_min, a.d_max)?;
            let mut s = String::from("n,rho_f,d,grid_size\n");
            for e in t.entries() {
                s.push_str(&csv_row(&[e.n.to_string(), num(e.rho_f), e.param.to_string(), e.index_space.to_string()]));
            }
            s
        }
        Algo::Platonic => return Err(invalid("--algo", "table supports spiral and berry-grid")),
    };
    emit(a.out.as_deref(), &s)
}

#[derive(Deserialize)]
struct TableRow {
    n: usize,
    rho_f: f64,
    d: Option<usize>,
    grid_size: Option<usize>,
}

/// Parses a table written by the `table` subcommand.
pub fn parse_table(label: &str, text: &str) -> Result<CoverTable, CliError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let headers = rdr.headers().map_err(|e| invalid("--table", e))?;
    if !headers.iter().any(|h| h == "n") || !headers.iter().any(|h| h == "rho_f") {
        return Err(invalid("--table", "header must contain n and rho_f"));
    }
    let mut entries = Vec::new();
    for row in rdr.deserialize::<TableRow>() {
        let row = row.map_err(|e| invalid("--table", e))?;
        let index_space = row.grid_size.unwrap_or(row.n);
        if row.n == 0 || index_space < row.n {
            return Err(invalid("--table", format!("n = {} must be positive and at most grid_size", row.n)));
        }
        entries.push(CoverEntry { n: row.n, rho_f: row.rho_f, index_space, param: row.d.unwrap_or(row.n) });
    }
    if entries.is_empty() {
        return Err(invalid("--table", "no rows"));
    }
    CoverTable::new(label, entries).map_err(|e| invalid("--table", e))
}

fn cmd_tradeoff(a: &TradeoffArgs) -> Result<(), CliError> {
    if !(a.r2_min > 0.0 && a.r2_min <= 0.5) {
        return Err(invalid("--r2-min", "must lie in (0, 0.5]"));
    }
    if !(a.r2_max >= a.r2_min && a.r2_max <= 0.5) {
        return Err(invalid("--r2-max", "must lie in [--r2-min, 0.5]"));
    }
    if a.steps == 0 {
        return Err(invalid("--steps", "must be at least 1"));
    }
    let table = match &a.table {
        Some(p) => parse_table(&p.display().to_string(), &fs::read_to_string(p)?)?,
        None => {
            check_range("--n-min", a.n_min, "--n-max", a.n_max, tradeoff::MAX_TABLE_PARAM)?;
            build_table(Generator::Spiral, a.n_min, a.n_max)?
        }
    };
    let baseline = if a.compare { Some(build_berry_table_until(a.r2_min, BASELINE_D_MAX)?) } else { None };

    let mut header = vec![
        "r_squared",
        "ebits",
        "n",
        "cbits_step3",
        "cbits_total",
        "area_bound_cbits",
        "index_bits",
        "message_bits",
        "status",
    ];
    if baseline.is_some() {
        header.extend([
            "baseline_d",
            "baseline_grid_size",
            "baseline_n",
            "baseline_cbits_step3",
            "baseline_cbits_dedup",
            "baseline_status",
        ]);
    }
    let mut s = header.join(",");
    s.push('\n');

    for r2 in linear_grid(a.r2_min, a.r2_max, a.steps) {
        let mut row = vec![num(r2), num(tradeoff::ebits(r2)?)];
        match tradeoff::tradeoff_point(&table, r2) {
            Ok(p) => row.extend([
                p.n.to_string(),
                num(p.cbits_step3),
                num(p.cbits_total),
                num(tradeoff::area_lower_bound(r2)?),
                p.index_bits.to_string(),
                (p.index_bits + CORRECTION_BITS).to_string(),
                "ok".to_string(),
            ]),
            Err(_) => {
                row.extend([String::new(), String::new(), String::new()]);
                row.push(num(tradeoff::area_lower_bound(r2)?));
                row.extend([String::new(), String::new(), "no-cover".to_string()]);
            }
        }
        if let Some(b) = &baseline {
            match tradeoff::cheapest_cover(b, r2) {
                Ok(e) => {
                    let dedup_n = tradeoff::min_n(b, r2)?;
                    row.extend([
                        e.param.to_string(),
                        e.index_space.to_string(),
                        e.n.to_string(),
                        num((e.index_space as f64).log2()),
                        num((dedup_n as f64).log2()),
                        "ok".to_string(),
                    ]);
                }
                Err(_) => {
                    row.extend(std::iter::repeat_n(String::new(), 5));
                    row.push("no-cover".to_string());
                }
            }
        }
        s.push_str(&csv_row(&row));
    }
    emit(a.out.as_deref(), &s)
}

/// Bound on the angular reconstruction error accepted by `simulate`.
pub const RECONSTRUCTION_TOL: f64 = 1e-9;

fn cmd_simulate(a: &SimulateArgs) -> Result<(), CliError> {
    let ps = point_set(&a.set)?;
    if a.trials == 0 {
        return Err(invalid("--trials", "must be at least 1"));
    }
    if a.trials > 100_000_000 {
        return Err(invalid("--trials", "must be at most 100000000"));
    }
    let report = simulate(&ps, a.trials, a.seed)?;
    emit(a.out.as_deref(), &json_line(&report)?)?;
    if !report.all_within_cap {
        return Err(CliError::Verification(format!(
            "site infidelity {} exceeds covering radius {}",
            report.max_infidelity_to_site, report.rho_f_used
        )));
    }
    if report.reconstruction_max_error > RECONSTRUCTION_TOL {
        return Err(CliError::Verification(format!(
            "reconstruction error {} exceeds {RECONSTRUCTION_TOL}",
            report.reconstruction_max_error
        )));
    }
    Ok(())
}
