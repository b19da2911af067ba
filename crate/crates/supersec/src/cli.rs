//! Command-line interface.
//!
//! Six subcommands cover the analytic curves and tables, the Monte-Carlo
//! validation harness, and the end-to-end payload pipeline. Curves and
//! tables emit CSV with one header row; structured single reports emit JSON.
//! Numbers are printed with full round-trip precision. Output goes to
//! standard output unless `--out` names a file; relative `--out` paths are
//! resolved against `SUPERSEC_OUT_DIR` when that variable is set. File
//! writes are atomic (write to a temporary sibling, then rename).
//!
//! Exit codes: 0 success, 1 validation found disagreement, 2 usage or domain
//! error, 3 infeasible or non-binding power allocation, 4 internal error.

use crate::capacity;
use crate::constellation::{Bits2, PacCoefficient};
use crate::error::{Error, Result};
use crate::montecarlo;
use crate::pac::{self, SolveStatus};
use crate::pipeline::{self, PayloadKind, TransmitConfig};
use crate::sep::{scp_breakdown, sigma_from_snr, SnrDb};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

/// Environment variable holding the default output directory for relative
/// `--out` paths.
pub const OUT_DIR_ENV: &str = "SUPERSEC_OUT_DIR";

#[derive(Parser)]
#[command(
    name = "supersec",
    version,
    about = "Superposition-coded secure modulation: SEP analytics, power allocation, capacity gap, and a seeded link simulator",
    after_help = "Exit codes: 0 ok, 1 validation disagreement, 2 usage/domain error, 3 infeasible or non-binding power allocation, 4 internal error."
)]
struct Cli {
    /// Worker threads for Monte-Carlo commands (0 = all cores). Results are
    /// bit-identical for any thread count.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Outer-layer SEP vs power-allocation coefficient for both receivers.
    ///
    /// CSV columns: a,sep_leg,sep_eve
    SepCurve(SepCurveArgs),
    /// Optimal power-allocation table over an (snr_eve, msep) grid.
    ///
    /// CSV columns: snr_leg_db,snr_eve_db,msep_b,pac_a,sep_leg,sep_eve,status
    /// (pac_a prints '-' when the constraint is not active).
    PacTable(PacTableArgs),
    /// All sixteen symbol-correctness components at one operating point (JSON).
    SepBreakdown(SepBreakdownArgs),
    /// Wiretap vs actual equivalent SNR over an (snr_leg, msep) grid.
    ///
    /// CSV columns: snr_leg_db,snr_eve_db,msep_b,bandwidth_hz,pac_a,
    /// wiretap_capacity_bps,snr_equ_wiretap_db,snr_equ_actual_db,gap_db
    /// ('-' marks cells without an active allocation).
    CapacityGap(CapacityGapArgs),
    /// Monte-Carlo validation of the closed-form SEP over an (a, snr) grid.
    ///
    /// CSV columns: a,snr_db,sigma,analytic_sep,trials,errors,mc_sep,
    /// ci99_low,ci99_high,pass. Exits 1 if any cell disagrees.
    Validate(ValidateArgs),
    /// Transmit a payload to both receivers and report link metrics (JSON).
    Transmit(TransmitArgs),
}

#[derive(Args)]
struct SepCurveArgs {
    /// Legitimate-receiver channel SNR in dB.
    #[arg(long, allow_hyphen_values = true)]
    snr_leg: f64,
    /// Eavesdropper channel SNR in dB.
    #[arg(long, allow_hyphen_values = true)]
    snr_eve: f64,
    /// First grid point in a.
    #[arg(long, default_value_t = 0.001)]
    a_start: f64,
    /// Last grid point in a (inclusive up to rounding).
    #[arg(long, default_value_t = 0.499)]
    a_stop: f64,
    /// Grid step in a.
    #[arg(long, default_value_t = 0.001)]
    a_step: f64,
    /// Output file (CSV); standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PacTableArgs {
    /// Legitimate-receiver channel SNR in dB.
    #[arg(long, allow_hyphen_values = true, default_value_t = 20.0)]
    snr_leg: f64,
    /// Eavesdropper SNR values in dB (comma separated).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true,
          default_values_t = [-15.0, -10.0, -5.0, 0.0, 5.0])]
    snr_eve: Vec<f64>,
    /// Eavesdropper SEP floors (comma separated, each in (0, 0.75)).
    #[arg(long, value_delimiter = ',', default_values_t = [0.74, 0.73, 0.72, 0.71])]
    msep: Vec<f64>,
    /// Output file (CSV); standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SepBreakdownArgs {
    /// Power-allocation coefficient, in (0, 0.5).
    #[arg(long)]
    a: f64,
    /// Channel SNR in dB.
    #[arg(long, allow_hyphen_values = true)]
    snr: f64,
    /// Output file (JSON); standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CapacityGapArgs {
    /// Legitimate-receiver SNR values in dB (comma separated).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_values_t = [20.0])]
    snr_leg: Vec<f64>,
    /// Eavesdropper channel SNR in dB (fixed for the whole curve).
    #[arg(long, allow_hyphen_values = true, default_value_t = -10.0)]
    snr_eve: f64,
    /// Eavesdropper SEP floors (comma separated).
    #[arg(long, value_delimiter = ',', default_values_t = [0.71, 0.72, 0.73, 0.74])]
    msep: Vec<f64>,
    /// Channel bandwidth in Hz.
    #[arg(long, default_value_t = 1.0)]
    bandwidth: f64,
    /// Output file (CSV); standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    /// Power-allocation grid values (comma separated, each in (0, 0.5)).
    #[arg(long, value_delimiter = ',', default_values_t = [0.01, 0.05, 0.1, 0.2, 0.4])]
    a: Vec<f64>,
    /// Channel SNR grid values in dB (comma separated).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true,
          default_values_t = [-15.0, -10.0, -5.0, 0.0, 20.0])]
    snr: Vec<f64>,
    /// Monte-Carlo trials per grid cell (>= 1).
    #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    /// Master seed; cell k uses a derived sub-seed.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output file (CSV); standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TransmitArgs {
    /// Flat key = value config file mirroring the transmit options.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Legitimate-receiver channel SNR in dB.
    #[arg(long, allow_hyphen_values = true)]
    snr_leg: Option<f64>,
    /// Eavesdropper design channel SNR in dB (drives the allocation).
    #[arg(long, allow_hyphen_values = true)]
    snr_eve: Option<f64>,
    /// Eavesdropper SEP floor; the allocation is solved from it.
    #[arg(long)]
    msep: Option<f64>,
    /// Fixed power-allocation coefficient (alternative to --msep).
    #[arg(long)]
    pac: Option<f64>,
    /// Master seed for payload, inner layer, and both channels.
    #[arg(long)]
    seed: Option<u64>,
    /// Payload spec: random_bits:N | raw_bytes:PATH | raw_image:WxH:PATH.
    #[arg(long)]
    payload: Option<String>,
    /// Send the outer layer alone at full power (no inner layer).
    #[arg(long)]
    no_superposition: bool,
    /// What-if actual eavesdropper SNR in dB (design SNR still drives the
    /// allocation).
    #[arg(long, allow_hyphen_values = true)]
    snr_eve_actual: Option<f64>,
    /// Output file (JSON); standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Machine-readable failure record emitted on standard error.
#[derive(Serialize)]
struct ErrorRecord<'a> {
    error: &'a str,
    exit_code: i32,
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::PacNotActive(_) | Error::NoSecrecyMargin { .. } => 3,
        Error::FrameLengthMismatch { .. }
        | Error::InvalidPac(_)
        | Error::InvalidParameter(_) => 2,
        Error::NonMonotoneEveSep { .. } | Error::Io(_) => 4,
    }
}

fn emit_error(err: &Error) -> i32 {
    let exit_code = exit_code_for(err);
    let record = ErrorRecord { error: &err.to_string(), exit_code };
    eprintln!("{}", serde_json::to_string(&record).unwrap());
    exit_code
}

/// Resolve the output target: relative paths land under `SUPERSEC_OUT_DIR`
/// when it is set.
fn resolve_out(path: &Path) -> PathBuf {
    if path.is_relative() {
        if let Some(dir) = std::env::var_os(OUT_DIR_ENV) {
            return PathBuf::from(dir).join(path);
        }
    }
    path.to_path_buf()
}

/// Write to a temporary sibling and rename into place.
fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let parent = path.parent().filter(|p| !p.as_os_str().is_empty());
    if let Some(dir) = parent {
        fs::create_dir_all(dir)?;
    }
    let mut tmp = path.as_os_str().to_os_string();
    tmp.push(format!(".tmp.{}", std::process::id()));
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

fn deliver(out: &Option<PathBuf>, contents: String) -> Result<()> {
    match out {
        Some(path) => write_atomic(&resolve_out(path), &contents),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |x| x.to_string())
}

fn status_str(status: SolveStatus) -> &'static str {
    match status {
        SolveStatus::ConstraintActive => "active",
        SolveStatus::ConstraintNonBinding => "non-binding",
        SolveStatus::Infeasible => "infeasible",
    }
}

fn parse_pac(a: f64) -> Result<PacCoefficient> {
    PacCoefficient::new(a)
}

fn a_grid(start: f64, stop: f64, step: f64) -> Result<Vec<PacCoefficient>> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidParameter(format!("a-step must be positive, got {step}")));
    }
    if stop < start {
        return Err(Error::InvalidParameter("a-stop must be >= a-start".into()));
    }
    let mut grid = Vec::new();
    let n = ((stop - start) / step).round() as u64;
    for k in 0..=n {
        let a = start + k as f64 * step;
        if a > stop + step * 1e-9 {
            break;
        }
        grid.push(parse_pac(a)?);
    }
    Ok(grid)
}

fn run_sep_curve(args: &SepCurveArgs) -> Result<()> {
    let grid = a_grid(args.a_start, args.a_stop, args.a_step)?;
    let leg = pac::sep_curve(SnrDb::new(args.snr_leg), &grid);
    let eve = pac::sep_curve(SnrDb::new(args.snr_eve), &grid);
    let mut csv = String::from("a,sep_leg,sep_eve\n");
    for (l, e) in leg.iter().zip(eve.iter()) {
        writeln!(csv, "{},{},{}", l.0, l.1, e.1).unwrap();
    }
    deliver(&args.out, csv)
}

fn run_pac_table(args: &PacTableArgs) -> Result<()> {
    let eves: Vec<SnrDb> = args.snr_eve.iter().map(|&v| SnrDb::new(v)).collect();
    let rows = pac::pac_table(SnrDb::new(args.snr_leg), &eves, &args.msep)?;
    let mut csv = String::from("snr_leg_db,snr_eve_db,msep_b,pac_a,sep_leg,sep_eve,status\n");
    for row in rows {
        let a = match row.solution.status {
            SolveStatus::ConstraintActive => row.solution.a.map(|a| a.value()),
            _ => None,
        };
        writeln!(
            csv,
            "{},{},{},{},{},{},{}",
            row.snr_leg.db(),
            row.snr_eve.db(),
            row.msep_b,
            fmt_opt(a),
            row.solution.sep_leg,
            row.solution.sep_eve,
            status_str(row.solution.status)
        )
        .unwrap();
    }
    deliver(&args.out, csv)
}

/// JSON view of a breakdown with one named field per reference table cell:
/// `scp_<landed region>_<sent symbol>` and the four per-outer-symbol sums.
#[derive(Serialize)]
struct BreakdownJson {
    a: f64,
    snr_db: f64,
    sigma: f64,
    scp_0010_0010: f64,
    scp_0000_0000: f64,
    scp_0011_0011: f64,
    scp_0001_0001: f64,
    scp_1010_0010: f64,
    scp_1000_0000: f64,
    scp_1011_0011: f64,
    scp_1001_0001: f64,
    scp_1110_0010: f64,
    scp_1100_0000: f64,
    scp_1111_0011: f64,
    scp_1101_0001: f64,
    scp_0110_0010: f64,
    scp_0100_0000: f64,
    scp_0111_0011: f64,
    scp_0101_0001: f64,
    scp_10_0010: f64,
    scp_00_0000: f64,
    scp_11_0011: f64,
    scp_01_0001: f64,
    sep: f64,
}

fn run_sep_breakdown(args: &SepBreakdownArgs) -> Result<()> {
    let a = parse_pac(args.a)?;
    let snr = SnrDb::new(args.snr);
    let sigma = sigma_from_snr(snr);
    let b = scp_breakdown(a, sigma);
    let lbl = |bits: &str| Bits2::new(u8::from_str_radix(bits, 2).unwrap()).unwrap();
    let cell = |landed: &str, sent: &str| b.cell(lbl(sent), lbl(landed));
    let json = BreakdownJson {
        a: a.value(),
        snr_db: snr.db(),
        sigma: sigma.value(),
        scp_0010_0010: cell("00", "10"),
        scp_0000_0000: cell("00", "00"),
        scp_0011_0011: cell("00", "11"),
        scp_0001_0001: cell("00", "01"),
        scp_1010_0010: cell("10", "10"),
        scp_1000_0000: cell("10", "00"),
        scp_1011_0011: cell("10", "11"),
        scp_1001_0001: cell("10", "01"),
        scp_1110_0010: cell("11", "10"),
        scp_1100_0000: cell("11", "00"),
        scp_1111_0011: cell("11", "11"),
        scp_1101_0001: cell("11", "01"),
        scp_0110_0010: cell("01", "10"),
        scp_0100_0000: cell("01", "00"),
        scp_0111_0011: cell("01", "11"),
        scp_0101_0001: cell("01", "01"),
        scp_10_0010: b.outer(lbl("10")),
        scp_00_0000: b.outer(lbl("00")),
        scp_11_0011: b.outer(lbl("11")),
        scp_01_0001: b.outer(lbl("01")),
        sep: b.sep(),
    };
    deliver(&args.out, format!("{}\n", serde_json::to_string_pretty(&json).unwrap()))
}

fn run_capacity_gap(args: &CapacityGapArgs) -> Result<()> {
    let legs: Vec<SnrDb> = args.snr_leg.iter().map(|&v| SnrDb::new(v)).collect();
    let cells =
        capacity::capacity_gap_curve(&legs, SnrDb::new(args.snr_eve), &args.msep, args.bandwidth)?;
    let mut csv = String::from(
        "snr_leg_db,snr_eve_db,msep_b,bandwidth_hz,pac_a,wiretap_capacity_bps,snr_equ_wiretap_db,snr_equ_actual_db,gap_db\n",
    );
    for cell in cells {
        writeln!(
            csv,
            "{},{},{},{},{},{},{},{},{}",
            cell.snr_leg.db(),
            cell.snr_eve.db(),
            cell.msep_b,
            args.bandwidth,
            fmt_opt(cell.pac.map(|a| a.value())),
            fmt_opt(cell.report.map(|r| r.wiretap_capacity_bps)),
            fmt_opt(cell.report.map(|r| r.snr_equ_wiretap_db)),
            fmt_opt(cell.report.map(|r| r.snr_equ_actual_db)),
            fmt_opt(cell.report.map(|r| r.gap_db)),
        )
        .unwrap();
    }
    deliver(&args.out, csv)
}

/// Returns the summary exit code: 0 when every cell agrees, 1 otherwise.
fn run_validate(args: &ValidateArgs) -> Result<i32> {
    let mut grid = Vec::new();
    for &a in &args.a {
        for &snr in &args.snr {
            grid.push((parse_pac(a)?, SnrDb::new(snr)));
        }
    }
    let report = montecarlo::validate_closed_form(&grid, args.trials, args.seed)?;
    let mut csv = String::from(
        "a,snr_db,sigma,analytic_sep,trials,errors,mc_sep,ci99_low,ci99_high,pass\n",
    );
    for cell in &report.cells {
        writeln!(
            csv,
            "{},{},{},{},{},{},{},{},{},{}",
            cell.a,
            cell.snr_db,
            cell.sigma,
            cell.analytic_sep,
            cell.estimate.trials,
            cell.estimate.errors,
            cell.estimate.point,
            cell.estimate.ci99_low,
            cell.estimate.ci99_high,
            cell.pass
        )
        .unwrap();
    }
    deliver(&args.out, csv)?;
    if report.all_pass {
        eprintln!("validation: {}/{} cells agree", report.cells.len(), report.cells.len());
        Ok(0)
    } else {
        let failing = report.cells.iter().filter(|c| !c.pass).count();
        let record = ErrorRecord {
            error: &format!(
                "validation: {failing}/{} cells disagree with the closed form",
                report.cells.len()
            ),
            exit_code: 1,
        };
        eprintln!("{}", serde_json::to_string(&record).unwrap());
        Ok(1)
    }
}

/// Flat `key = value` config file; `#` starts a comment. Keys mirror the
/// transmit options: snr_leg, snr_eve, msep_b, pac_a, seed, payload_kind,
/// superposition_enabled, snr_eve_actual.
struct FileConfig {
    snr_leg: Option<f64>,
    snr_eve: Option<f64>,
    msep_b: Option<f64>,
    pac_a: Option<f64>,
    seed: Option<u64>,
    payload_kind: Option<String>,
    superposition_enabled: Option<bool>,
    snr_eve_actual: Option<f64>,
}

fn parse_config_file(path: &Path) -> Result<FileConfig> {
    let text = fs::read_to_string(path)?;
    let mut cfg = FileConfig {
        snr_leg: None,
        snr_eve: None,
        msep_b: None,
        pac_a: None,
        seed: None,
        payload_kind: None,
        superposition_enabled: None,
        snr_eve_actual: None,
    };
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::InvalidParameter(format!(
                "{}:{}: expected `key = value`",
                path.display(),
                lineno + 1
            ))
        })?;
        let key = key.trim();
        let value = value.trim();
        let bad = |what: &str| {
            Error::InvalidParameter(format!(
                "{}:{}: invalid {what}: {value}",
                path.display(),
                lineno + 1
            ))
        };
        match key {
            "snr_leg" => cfg.snr_leg = Some(value.parse().map_err(|_| bad("snr_leg"))?),
            "snr_eve" => cfg.snr_eve = Some(value.parse().map_err(|_| bad("snr_eve"))?),
            "msep_b" => cfg.msep_b = Some(value.parse().map_err(|_| bad("msep_b"))?),
            "pac_a" => cfg.pac_a = Some(value.parse().map_err(|_| bad("pac_a"))?),
            "seed" => cfg.seed = Some(value.parse().map_err(|_| bad("seed"))?),
            "payload_kind" => cfg.payload_kind = Some(value.to_string()),
            "superposition_enabled" => {
                cfg.superposition_enabled = Some(value.parse().map_err(|_| bad("flag"))?)
            }
            "snr_eve_actual" => {
                cfg.snr_eve_actual = Some(value.parse().map_err(|_| bad("snr_eve_actual"))?)
            }
            other => {
                return Err(Error::InvalidParameter(format!(
                    "{}:{}: unknown config key `{other}`",
                    path.display(),
                    lineno + 1
                )))
            }
        }
    }
    Ok(cfg)
}

/// Parse a payload spec and load file-backed payloads.
fn parse_payload(spec: &str) -> Result<(PayloadKind, Vec<u8>)> {
    let bad = || Error::InvalidParameter(format!("invalid payload spec: {spec}"));
    if let Some(rest) = spec.strip_prefix("random_bits:") {
        let symbols: u64 = rest.parse().map_err(|_| bad())?;
        return Ok((PayloadKind::RandomBits { symbols }, Vec::new()));
    }
    if let Some(path) = spec.strip_prefix("raw_bytes:") {
        let bytes = fs::read(path)?;
        return Ok((PayloadKind::RawBytes, bytes));
    }
    if let Some(rest) = spec.strip_prefix("raw_image:") {
        let (dims, path) = rest.split_once(':').ok_or_else(bad)?;
        let (w, h) = dims.split_once('x').ok_or_else(bad)?;
        let width: u32 = w.parse().map_err(|_| bad())?;
        let height: u32 = h.parse().map_err(|_| bad())?;
        let bytes = fs::read(path)?;
        return Ok((PayloadKind::RawImage { width, height }, bytes));
    }
    Err(bad())
}

fn run_transmit(args: &TransmitArgs) -> Result<()> {
    let file = match &args.config {
        Some(path) => Some(parse_config_file(path)?),
        None => None,
    };
    let get = |cli: Option<f64>, from_file: fn(&FileConfig) -> Option<f64>| {
        cli.or_else(|| file.as_ref().and_then(from_file))
    };

    let snr_leg = get(args.snr_leg, |f| f.snr_leg)
        .ok_or_else(|| Error::InvalidParameter("snr_leg is required (flag or config)".into()))?;
    let snr_eve = get(args.snr_eve, |f| f.snr_eve)
        .ok_or_else(|| Error::InvalidParameter("snr_eve is required (flag or config)".into()))?;
    // An allocation driver on the command line replaces both file-side
    // drivers, so `--pac`/`--msep` can override a config cleanly.
    let (msep_b, pac_raw) = if args.msep.is_some() || args.pac.is_some() {
        (args.msep, args.pac)
    } else {
        (
            file.as_ref().and_then(|f| f.msep_b),
            file.as_ref().and_then(|f| f.pac_a),
        )
    };
    let pac_a = match pac_raw {
        Some(a) => Some(parse_pac(a)?),
        None => None,
    };
    let seed = args.seed.or(file.as_ref().and_then(|f| f.seed)).unwrap_or(0);
    let payload_spec = args
        .payload
        .clone()
        .or_else(|| file.as_ref().and_then(|f| f.payload_kind.clone()))
        .ok_or_else(|| Error::InvalidParameter("payload is required (flag or config)".into()))?;
    let (payload_kind, payload) = parse_payload(&payload_spec)?;
    let superposition_enabled = if args.no_superposition {
        false
    } else {
        file.as_ref().and_then(|f| f.superposition_enabled).unwrap_or(true)
    };
    let snr_eve_actual = get(args.snr_eve_actual, |f| f.snr_eve_actual).map(SnrDb::new);

    let config = TransmitConfig {
        snr_leg: SnrDb::new(snr_leg),
        snr_eve: SnrDb::new(snr_eve),
        msep_b,
        pac_a,
        seed,
        payload_kind,
        superposition_enabled,
        snr_eve_actual,
    };
    let report = pipeline::transmit_payload(&payload, &config)?;
    deliver(&args.out, format!("{}\n", serde_json::to_string_pretty(&report).unwrap()))
}

/// Run the CLI against an argument vector; returns the process exit code.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            let code = err.exit_code();
            let _ = err.print();
            return code;
        }
    };
    if cli.threads > 0 {
        // Ignore failure: the global pool may already exist when embedded.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global();
    }
    let outcome = match &cli.command {
        Command::SepCurve(args) => run_sep_curve(args).map(|()| 0),
        Command::PacTable(args) => run_pac_table(args).map(|()| 0),
        Command::SepBreakdown(args) => run_sep_breakdown(args).map(|()| 0),
        Command::CapacityGap(args) => run_capacity_gap(args).map(|()| 0),
        Command::Validate(args) => run_validate(args),
        Command::Transmit(args) => run_transmit(args).map(|()| 0),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => emit_error(&err),
    }
}
