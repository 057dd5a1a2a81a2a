//! Command-line front end: theory curves, Monte Carlo sweeps, and single
//! runs, emitting CSV (scientific notation, fixed significant digits) or a
//! human-readable summary.
//!
//! Exit codes are a stable scripting contract: 0 success, 1 usage or
//! validation failure (including I/O), 2 numerical failure (quadrature
//! non-convergence or domain errors).

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::channel::link_budget;
use crate::config::{db_to_linear, parse_config, ConfigFile};
use crate::error::{Error, Result};
use crate::quadrature::QuadratureSpec;
use crate::simulation::{
    grid_for_units, run, sweep_area, with_target_snr, BerRecord, RunSpec, Scheme,
};
use crate::theory::{cpolsk_ber, dpolsk_ber};

#[derive(Parser, Debug)]
#[command(
    name = "ris-dpolsk",
    version,
    about = "Link-level BER simulator for surface-encoded differential polarization keying"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Theoretical BER of both schemes over an SNR grid, as CSV
    Theory(TheoryArgs),
    /// Monte Carlo sweep over surface areas, one CSV row per (area, scheme, sigma_e)
    Sweep(SweepArgs),
    /// One Monte Carlo run, reported as a human-readable summary
    Single(SingleArgs),
}

#[derive(Args, Debug)]
struct TheoryArgs {
    /// JSON config file (built-in defaults when omitted)
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output CSV path (stdout when omitted)
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// SNR grid in dB, comma-separated; wins over --areas
    #[arg(long, value_name = "LIST", value_delimiter = ',', num_args = 0..)]
    gamma_db: Option<Vec<f64>>,
    /// Surface areas in m^2 whose link SNRs form the grid, comma-separated
    #[arg(long, value_name = "LIST", value_delimiter = ',', num_args = 0..)]
    areas: Option<Vec<f64>>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// JSON config file (built-in defaults when omitted)
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output CSV path (stdout when omitted)
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Scheme selection, overriding the config
    #[arg(long, value_enum)]
    scheme: Option<SchemeSelection>,
    /// Data bits per run, overriding the config
    #[arg(long, value_name = "N")]
    trials: Option<u64>,
    /// Master seed, overriding the config
    #[arg(long, value_name = "U64")]
    seed: Option<u64>,
    /// Rotation-estimate error std-devs in degrees, comma-separated
    #[arg(long, value_name = "LIST", value_delimiter = ',', num_args = 0..)]
    sigma_e_deg: Option<Vec<f64>>,
    /// Polarization rotation angle in degrees, overriding the config
    #[arg(long, value_name = "DEG")]
    beta_deg: Option<f64>,
    /// Surface areas in m^2, comma-separated, overriding the config
    #[arg(long, value_name = "LIST", value_delimiter = ',', num_args = 0..)]
    areas: Option<Vec<f64>>,
    /// Worker threads for the simulation (library default when omitted)
    #[arg(long, value_name = "N")]
    workers: Option<usize>,
}

#[derive(Args, Debug)]
struct SingleArgs {
    /// JSON config file (built-in defaults when omitted)
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output path for the summary (stdout when omitted)
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Scheme to run (first configured scheme when omitted)
    #[arg(long, value_enum)]
    scheme: Option<SingleScheme>,
    /// Data bits, overriding the config
    #[arg(long, value_name = "N")]
    trials: Option<u64>,
    /// Master seed, overriding the config
    #[arg(long, value_name = "U64")]
    seed: Option<u64>,
    /// Rotation-estimate error std-dev in degrees
    #[arg(long, value_name = "DEG")]
    sigma_e_deg: Option<f64>,
    /// Polarization rotation angle in degrees, overriding the config
    #[arg(long, value_name = "DEG")]
    beta_deg: Option<f64>,
    /// Rescale transmit power so the link SNR hits this value (dB)
    #[arg(long, value_name = "DB")]
    gamma_db: Option<f64>,
    /// Worker threads for the simulation (library default when omitted)
    #[arg(long, value_name = "N")]
    workers: Option<usize>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SchemeSelection {
    Dpolsk,
    Cpolsk,
    Both,
}

impl SchemeSelection {
    fn schemes(self) -> Vec<Scheme> {
        match self {
            SchemeSelection::Dpolsk => vec![Scheme::Dpolsk],
            SchemeSelection::Cpolsk => vec![Scheme::Cpolsk],
            SchemeSelection::Both => vec![Scheme::Dpolsk, Scheme::Cpolsk],
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SingleScheme {
    Dpolsk,
    Cpolsk,
}

impl From<SingleScheme> for Scheme {
    fn from(s: SingleScheme) -> Scheme {
        match s {
            SingleScheme::Dpolsk => Scheme::Dpolsk,
            SingleScheme::Cpolsk => Scheme::Cpolsk,
        }
    }
}

/// Parses arguments and runs the selected command, returning the process
/// exit code. Help/version requests exit 0; usage errors exit 1; runtime
/// failures map through [`Error::exit_code`].
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Theory(args) => {
            let config = load_config(args.config.as_deref())?;
            let text = cmd_theory(args, &config)?;
            deliver(&text, output_path(args.out.as_deref(), &config))
        }
        Command::Sweep(args) => {
            let config = sweep_config(args)?;
            let rows = with_workers(args.workers, || run_sweep(&config))?;
            let text = sweep_csv(&rows, config.output.precision);
            deliver(&text, output_path(args.out.as_deref(), &config))
        }
        Command::Single(args) => {
            let config = load_config(args.config.as_deref())?;
            let (spec, record) = with_workers(args.workers, || run_single(args, &config))?;
            let text = single_summary(&spec, &record);
            deliver(&text, output_path(args.out.as_deref(), &config))
        }
    }
}

/// Loads and validates the config file, or the built-in defaults.
fn load_config(path: Option<&Path>) -> Result<ConfigFile> {
    match path {
        Some(p) => parse_config(p),
        None => Ok(ConfigFile::default()),
    }
}

/// The --out flag wins over the config's csv_path.
fn output_path(flag: Option<&Path>, config: &ConfigFile) -> Option<PathBuf> {
    flag.map(Path::to_path_buf)
        .or_else(|| config.output.csv_path.as_ref().map(PathBuf::from))
}

fn deliver(text: &str, out: Option<PathBuf>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

/// Runs a closure on a dedicated worker pool when a thread count is given.
/// Results never depend on the pool size; the knob exists for throughput
/// control and for exercising the determinism contract.
fn with_workers<T, F>(workers: Option<usize>, f: F) -> Result<T>
where
    F: FnOnce() -> Result<T> + Send,
    T: Send,
{
    match workers {
        None => f(),
        Some(0) => Err(Error::validation("workers", "must be at least 1")),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::validation("workers", e.to_string()))?
            .install(f),
    }
}

/// One float in scientific notation with the configured significant digits.
fn fmt_float(x: f64, precision: usize) -> String {
    format!("{:.*e}", precision.saturating_sub(1), x)
}

fn cmd_theory(args: &TheoryArgs, config: &ConfigFile) -> Result<String> {
    let gammas_db = match (&args.gamma_db, &args.areas) {
        (Some(g), _) => g.clone(),
        (None, Some(areas)) => areas_to_gamma_db(areas, config)?,
        (None, None) => areas_to_gamma_db(&config.sweep.areas_m2, config)?,
    };
    theory_csv(&gammas_db, config.output.precision)
}

/// Maps each requested area to its link SNR (dB) under the config scenario.
fn areas_to_gamma_db(areas: &[f64], config: &ConfigFile) -> Result<Vec<f64>> {
    let base = config.to_scenario()?;
    let unit_area = base.unit_area();
    areas
        .iter()
        .map(|&area| {
            if !(area > 0.0) || (area / unit_area).round() < 1.0 {
                return Err(Error::AreaTooSmall {
                    area_m2: area,
                    unit_area_m2: unit_area,
                });
            }
            let (rows, cols) = grid_for_units((area / unit_area).round() as usize);
            let mut scenario = base.clone();
            scenario.num_units_rows = rows;
            scenario.num_units_cols = cols;
            Ok(10.0 * link_budget(&scenario)?.gamma.log10())
        })
        .collect()
}

/// Theory CSV: one row per SNR grid point, both schemes' theoretical BER.
pub fn theory_csv(gammas_db: &[f64], precision: usize) -> Result<String> {
    let spec = QuadratureSpec::default();
    let mut out = String::from("gamma_db,ber_dpolsk_theory,ber_cpolsk_theory\n");
    for &gamma_db in gammas_db {
        let gamma = db_to_linear(gamma_db);
        let dpolsk = dpolsk_ber(gamma, &spec)?;
        let cpolsk = cpolsk_ber(gamma);
        out.push_str(&format!(
            "{},{},{}\n",
            fmt_float(gamma_db, precision),
            fmt_float(dpolsk, precision),
            fmt_float(cpolsk, precision),
        ));
    }
    Ok(out)
}

/// Folds sweep flags into the config and re-validates the result, so flag
/// errors carry the same field-named diagnostics as file errors.
fn sweep_config(args: &SweepArgs) -> Result<ConfigFile> {
    let mut config = load_config(args.config.as_deref())?;
    if let Some(beta) = args.beta_deg {
        config.scenario.rotation_beta_deg = beta;
    }
    if let Some(selection) = args.scheme {
        config.run.schemes = selection.schemes();
    }
    if let Some(trials) = args.trials {
        config.run.num_bits = i64::try_from(trials)
            .map_err(|_| Error::validation("run.num_bits", "exceeds the supported range"))?;
    }
    if let Some(seed) = args.seed {
        config.run.master_seed = seed;
    }
    if let Some(sigmas) = &args.sigma_e_deg {
        config.run.sigma_e_deg = sigmas.clone();
    }
    if let Some(areas) = &args.areas {
        config.sweep.areas_m2 = areas.clone();
    }
    config.validate()?;
    Ok(config)
}

/// One finished sweep row: the run result plus the sweep coordinates that
/// the record itself does not carry.
pub struct SweepRow {
    pub scheme: Scheme,
    pub sigma_e_deg: f64,
    pub seed: u64,
    pub record: BerRecord,
}

/// Runs the full (area × scheme × sigma_e) grid in that nesting order.
fn run_sweep(config: &ConfigFile) -> Result<Vec<SweepRow>> {
    let scenario = config.to_scenario()?;
    let mut rows = Vec::new();
    for &area in &config.sweep.areas_m2 {
        for &scheme in &config.run.schemes {
            for &sigma_e_deg in &config.run.sigma_e_deg {
                let base = RunSpec {
                    scheme,
                    scenario: scenario.clone(),
                    num_bits: config.num_bits(),
                    master_seed: config.run.master_seed,
                    sigma_e: sigma_e_deg.to_radians(),
                    sigma_e_per_burst: config.run.sigma_e_per_burst,
                    d_init: config.run.d_init,
                };
                let record = sweep_area(&[area], &base)?
                    .pop()
                    .expect("one record per requested area");
                rows.push(SweepRow {
                    scheme,
                    sigma_e_deg,
                    seed: base.master_seed,
                    record,
                });
            }
        }
    }
    Ok(rows)
}

/// Sweep CSV with the fixed column contract.
pub fn sweep_csv(rows: &[SweepRow], precision: usize) -> String {
    let mut out = String::from(
        "area_m2,M,gamma_db,scheme,sigma_e_deg,ber_sim,ci_low,ci_high,ber_theory,trials,seed\n",
    );
    for row in rows {
        let r = &row.record;
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            fmt_float(r.area_m2, precision),
            r.num_units,
            fmt_float(r.gamma_db, precision),
            row.scheme,
            fmt_float(row.sigma_e_deg, precision),
            fmt_float(r.ber_simulated, precision),
            fmt_float(r.ci_low, precision),
            fmt_float(r.ci_high, precision),
            fmt_float(r.ber_theory, precision),
            r.trials,
            row.seed,
        ));
    }
    out
}

fn run_single(args: &SingleArgs, config: &ConfigFile) -> Result<(RunSpec, BerRecord)> {
    let mut scenario = config.to_scenario()?;
    if let Some(beta) = args.beta_deg {
        if !beta.is_finite() {
            return Err(Error::validation("scenario.rotation_beta_deg", "must be finite"));
        }
        scenario.rotation_angle = beta.to_radians();
    }
    if let Some(gamma_db) = args.gamma_db {
        scenario = with_target_snr(&scenario, db_to_linear(gamma_db))?;
    }
    let scheme = args
        .scheme
        .map(Scheme::from)
        .or_else(|| config.run.schemes.first().copied())
        .ok_or_else(|| Error::validation("run.schemes", "must name at least one scheme"))?;
    let sigma_e_deg = args
        .sigma_e_deg
        .unwrap_or_else(|| config.run.sigma_e_deg.first().copied().unwrap_or(0.0));
    if !(sigma_e_deg >= 0.0 && sigma_e_deg.is_finite()) {
        return Err(Error::validation(
            "run.sigma_e_deg",
            "must be finite and nonnegative",
        ));
    }
    let num_bits = match args.trials {
        Some(0) => return Err(Error::validation("run.num_bits", "must be at least 1")),
        Some(t) => t,
        None => {
            config.validate()?;
            config.num_bits()
        }
    };
    let spec = RunSpec {
        scheme,
        scenario,
        num_bits,
        master_seed: args.seed.unwrap_or(config.run.master_seed),
        sigma_e: sigma_e_deg.to_radians(),
        sigma_e_per_burst: config.run.sigma_e_per_burst,
        d_init: config.run.d_init,
    };
    let record = run(&spec)?;
    Ok((spec, record))
}

/// Human-readable report for a single run.
fn single_summary(spec: &RunSpec, r: &BerRecord) -> String {
    let mut out = String::new();
    out.push_str(&format!("scheme:      {}\n", spec.scheme));
    out.push_str(&format!(
        "surface:     {} units ({} x {}), area {} m^2\n",
        r.num_units,
        spec.scenario.num_units_rows,
        spec.scenario.num_units_cols,
        fmt_float(r.area_m2, 12),
    ));
    out.push_str(&format!(
        "snr:         {} dB ({} linear)\n",
        fmt_float(r.gamma_db, 12),
        fmt_float(r.gamma_linear, 12),
    ));
    out.push_str(&format!(
        "rotation:    {} deg, sigma_e {} deg ({})\n",
        fmt_float(spec.scenario.rotation_angle.to_degrees(), 12),
        fmt_float(spec.sigma_e.to_degrees(), 12),
        if spec.sigma_e_per_burst { "per burst" } else { "per slot" },
    ));
    out.push_str(&format!(
        "trials:      {} bits, seed {}\n",
        r.trials, spec.master_seed
    ));
    out.push_str(&format!("errors:      {}\n", r.errors_count));
    out.push_str(&format!("ber:         {}\n", fmt_float(r.ber_simulated, 12)));
    out.push_str(&format!(
        "ci95:        [{}, {}]\n",
        fmt_float(r.ci_low, 12),
        fmt_float(r.ci_high, 12),
    ));
    out.push_str(&format!("ber_theory:  {}\n", fmt_float(r.ber_theory, 12)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn floats_format_to_fixed_significant_digits() {
        assert_eq!(fmt_float(0.5, 12), "5.00000000000e-1");
        assert_eq!(fmt_float(0.5, 3), "5.00e-1");
        assert_eq!(fmt_float(6.515782689535244e-8, 12), "6.51578268954e-8");
        assert_eq!(fmt_float(-12.25, 12), "-1.22500000000e1");
    }

    #[test]
    fn formatted_floats_reparse_losslessly_at_the_emitted_precision() {
        for x in [0.5, 1.0 / 3.0, 2.270e-5, 6.515782689535244e-8, 1234.5678] {
            let text = fmt_float(x, 12);
            let reparsed: f64 = text.parse().unwrap();
            assert_eq!(fmt_float(reparsed, 12), text);
            assert_relative_eq!(reparsed, x, max_relative = 1e-11);
        }
    }

    #[test]
    fn empty_theory_grid_is_header_only() {
        let csv = theory_csv(&[], 12).unwrap();
        assert_eq!(csv, "gamma_db,ber_dpolsk_theory,ber_cpolsk_theory\n");
    }

    #[test]
    fn theory_rows_carry_the_closed_form() {
        let csv = theory_csv(&[0.0], 12).unwrap();
        let row = csv.lines().nth(1).unwrap();
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 3);
        let gamma_db: f64 = fields[0].parse().unwrap();
        let dpolsk: f64 = fields[1].parse().unwrap();
        let cpolsk: f64 = fields[2].parse().unwrap();
        assert_eq!(gamma_db, 0.0);
        // 0 dB is γ=1: the coherent law gives e^{-1}/2.
        assert_relative_eq!(cpolsk, 0.18393972058572117, max_relative = 1e-11);
        assert!(dpolsk >= cpolsk);
    }

    #[test]
    fn theory_ordering_holds_across_a_grid() {
        let csv = theory_csv(&[-3.0, 0.0, 5.0, 10.0, 14.0], 12).unwrap();
        for row in csv.lines().skip(1) {
            let fields: Vec<f64> = row.split(',').map(|f| f.parse().unwrap()).collect();
            assert!(
                fields[1] >= fields[2],
                "differential below coherent at {} dB",
                fields[0]
            );
        }
    }

    #[test]
    fn sweep_csv_header_is_the_exact_contract() {
        let csv = sweep_csv(&[], 12);
        assert_eq!(
            csv,
            "area_m2,M,gamma_db,scheme,sigma_e_deg,ber_sim,ci_low,ci_high,ber_theory,trials,seed\n"
        );
    }

    #[test]
    fn sweep_rows_follow_the_area_scheme_sigma_nesting() {
        let mut config = ConfigFile::default();
        config.run.num_bits = 200;
        config.run.sigma_e_deg = vec![0.0, 5.0];
        config.sweep.areas_m2 = vec![0.39, 0.6];
        config.validate().unwrap();
        let rows = run_sweep(&config).unwrap();
        assert_eq!(rows.len(), 2 * 2 * 2);
        // Area-major, then scheme, then sigma.
        assert_eq!(rows[0].record.num_units, 156);
        assert_eq!(rows[0].scheme, Scheme::Dpolsk);
        assert_eq!(rows[0].sigma_e_deg, 0.0);
        assert_eq!(rows[1].sigma_e_deg, 5.0);
        assert_eq!(rows[2].scheme, Scheme::Cpolsk);
        assert_eq!(rows[4].record.num_units, 240);
        let csv = sweep_csv(&rows, 12);
        assert_eq!(csv.lines().count(), 1 + 8);
        let first = csv.lines().nth(1).unwrap();
        assert!(first.contains(",dpolsk,"), "row was: {first}");
        assert!(first.ends_with(",200,1"), "row was: {first}");
    }

    #[test]
    fn usage_errors_exit_one_and_help_exits_zero() {
        assert_eq!(main_with_args(["ris-dpolsk", "--help"]), 0);
        assert_eq!(main_with_args(["ris-dpolsk", "--version"]), 0);
        assert_eq!(main_with_args(["ris-dpolsk", "no-such-command"]), 1);
        assert_eq!(main_with_args(["ris-dpolsk", "sweep", "--bogus-flag"]), 1);
    }

    #[test]
    fn single_summary_reports_every_headline_number() {
        let mut config = ConfigFile::default();
        config.run.num_bits = 500;
        let args = SingleArgs {
            config: None,
            out: None,
            scheme: Some(SingleScheme::Cpolsk),
            trials: None,
            seed: Some(3),
            sigma_e_deg: None,
            beta_deg: Some(45.0),
            gamma_db: Some(6.0),
            workers: None,
        };
        let (spec, record) = run_single(&args, &config).unwrap();
        assert_relative_eq!(record.gamma_db, 6.0, max_relative = 1e-9);
        let text = single_summary(&spec, &record);
        assert!(text.contains("scheme:      cpolsk"));
        assert!(text.contains("seed 3"));
        assert!(text.contains("ber_theory:"));
        assert!(text.contains("ci95:"));
    }

    #[test]
    fn single_rejects_bad_overrides() {
        let config = ConfigFile::default();
        let mut args = SingleArgs {
            config: None,
            out: None,
            scheme: None,
            trials: Some(0),
            seed: None,
            sigma_e_deg: None,
            beta_deg: None,
            gamma_db: None,
            workers: None,
        };
        assert!(run_single(&args, &config).is_err());
        args.trials = Some(10);
        args.sigma_e_deg = Some(-2.0);
        assert!(run_single(&args, &config).is_err());
    }

    #[test]
    fn worker_pool_validation() {
        assert!(with_workers(Some(0), || Ok(())).is_err());
        assert_eq!(with_workers(Some(2), || Ok(7)).unwrap(), 7);
        assert_eq!(with_workers(None, || Ok(7)).unwrap(), 7);
    }
}
