//! `shg` — steady states, stability, squeezing spectra and figure sweeps
//! for a doubly driven singly resonant frequency doubler.
//!
//! Operating points are given either in scaled coordinates (`--m` with
//! `--eta` or `--fraction`) or in physical units (`--gamma-c`, `--gamma-s`,
//! `--mu`, `--alpha-in`, `--beta-in`, `--phi`); the two flag families must
//! not be mixed. Exit codes: 0 success, 1 domain error (instability,
//! invalid parameters), 2 usage error. Domain errors print one
//! machine-parsable line `error: <kind>: <message>` on stderr.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use shg_core::model::{scale, DriveConfig, OperatingPoint, PhysicalParams};
use shg_core::oracle::compare_with_closed_form;
use shg_core::spectra::{squeezed_phase, PowerCalibration};
use shg_core::steady::{eigenvalues_closed, solve_intracavity, StabilityReport};
use shg_core::sweep::{fig1_dataset, fig2_dataset, spectrum_sweep, uniform_grid, TableFormat};

/// Environment variable that, when set, prefixes relative `--output` paths.
const OUTPUT_DIR_ENV: &str = "SHG_OUTPUT_DIR";

#[derive(Parser)]
#[command(
    name = "shg",
    version,
    about = "Squeezing spectra of a doubly driven singly resonant frequency doubler"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the classical intracavity steady state from physical drives.
    #[command(allow_negative_numbers = true)]
    SteadyState {
        #[command(flatten)]
        physical: PhysicalArgs,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Drift eigenvalues and stability classification at an operating point.
    #[command(allow_negative_numbers = true)]
    Stability {
        #[command(flatten)]
        point: PointArgs,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Squeezing/antisqueezing spectra at one operating point, over a
    /// frequency grid (a single row when --omega-max 0).
    #[command(allow_negative_numbers = true)]
    Spectrum {
        #[command(flatten)]
        point: PointArgs,
        /// Largest scaled frequency omega/gamma of the grid.
        #[arg(long, default_value_t = 10.0)]
        omega_max: f64,
        /// Number of grid intervals (rows = steps + 1).
        #[arg(long, default_value_t = 200)]
        omega_steps: usize,
        /// Also evaluate the linear-response oracle and the relative
        /// deviation per row.
        #[arg(long)]
        with_oracle: bool,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Zero-frequency squeezing and antisqueezing in dB versus m.
    Fig1 {
        #[command(flatten)]
        grid: MGridArgs,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Classical output power in mW versus m.
    Fig2 {
        #[command(flatten)]
        grid: MGridArgs,
        /// Power calibration constant in mW per scaled-unit squared.
        #[arg(long, default_value_t = PowerCalibration::DEFAULT_MW)]
        power_calibration: f64,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Verify the closed-form spectra against the linear-response oracle
    /// over a deterministic grid plus seeded random stable points.
    OracleCheck {
        /// Number of additional randomized stable points.
        #[arg(long, default_value_t = 200)]
        points: usize,
        /// Seed for the randomized points.
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Fail (exit 1) if the worst relative deviation exceeds this.
        #[arg(long, default_value_t = 1e-10)]
        tolerance: f64,
    },
}

/// Physical-unit description of cavity and drives.
#[derive(Args, Debug, Default, Clone)]
struct PhysicalArgs {
    /// Input coupling rate of the fundamental (s^-1).
    #[arg(long)]
    gamma_c: Option<f64>,
    /// Intracavity loss rate (s^-1).
    #[arg(long)]
    gamma_s: Option<f64>,
    /// Two-photon coupling rate (s^-1 per photon).
    #[arg(long)]
    mu: Option<f64>,
    /// Fundamental drive modulus |alpha_in| (sqrt(photons/s)).
    #[arg(long)]
    alpha_in: Option<f64>,
    /// Harmonic drive modulus |beta_in| (sqrt(photons/s)).
    #[arg(long)]
    beta_in: Option<f64>,
    /// Fundamental drive phase phi (rad); the harmonic phase is 2*phi + pi.
    #[arg(long)]
    phi: Option<f64>,
}

impl PhysicalArgs {
    fn any(&self) -> bool {
        self.gamma_c.is_some()
            || self.gamma_s.is_some()
            || self.mu.is_some()
            || self.alpha_in.is_some()
            || self.beta_in.is_some()
            || self.phi.is_some()
    }

    fn resolve(&self) -> Result<(PhysicalParams, DriveConfig), CliError> {
        let alpha_in = self
            .alpha_in
            .ok_or_else(|| usage("--alpha-in is required"))?;
        let params = PhysicalParams::new(
            self.gamma_c.ok_or_else(|| usage("--gamma-c is required"))?,
            self.gamma_s.unwrap_or(0.0),
            self.mu.ok_or_else(|| usage("--mu is required"))?,
        )?;
        let drive = DriveConfig::in_phase(
            alpha_in,
            self.phi.unwrap_or(0.0),
            self.beta_in.unwrap_or(0.0),
        )?;
        Ok((params, drive))
    }
}

/// Operating point, either scaled or physical.
#[derive(Args, Debug, Default, Clone)]
struct PointArgs {
    /// Scaled photon number m.
    #[arg(long)]
    m: Option<f64>,
    /// Scaled harmonic drive eta_in.
    #[arg(long)]
    eta: Option<f64>,
    /// Instability fraction f = eta_in / (1 + m); alternative to --eta.
    #[arg(long)]
    fraction: Option<f64>,
    #[command(flatten)]
    physical: PhysicalArgs,
}

impl PointArgs {
    fn resolve(&self) -> Result<OperatingPoint, CliError> {
        let scaled = self.m.is_some() || self.eta.is_some() || self.fraction.is_some();
        if scaled && self.physical.any() {
            return Err(usage(
                "scaled flags (--m/--eta/--fraction) cannot be mixed with physical flags",
            ));
        }
        if scaled {
            if self.eta.is_some() && self.fraction.is_some() {
                return Err(usage("--eta and --fraction are mutually exclusive"));
            }
            let m = self
                .m
                .ok_or_else(|| usage("--m is required with scaled flags"))?;
            let point = match (self.eta, self.fraction) {
                (Some(eta), None) => OperatingPoint::new(m, eta)?,
                (None, Some(f)) => OperatingPoint::from_fraction(m, f)?,
                (None, None) => OperatingPoint::new(m, 0.0)?,
                (Some(_), Some(_)) => unreachable!(),
            };
            Ok(point)
        } else if self.physical.any() {
            let (params, drive) = self.physical.resolve()?;
            let steady = solve_intracavity(&params, &drive)?;
            Ok(scale(&params, &steady, &drive)?)
        } else {
            Err(usage(
                "an operating point is required: --m with --eta/--fraction, or physical flags",
            ))
        }
    }
}

#[derive(Args, Debug, Clone)]
struct MGridArgs {
    /// Largest m of the sweep.
    #[arg(long, default_value_t = 20.0)]
    m_max: f64,
    /// Number of grid intervals (rows = steps + 1).
    #[arg(long, default_value_t = 400)]
    m_steps: usize,
    /// Instability fractions, comma separated, each in [0, 1).
    #[arg(long, value_delimiter = ',', default_values_t = [0.0, 0.5, 0.75])]
    fractions: Vec<f64>,
}

#[derive(Args, Debug, Clone)]
struct IoArgs {
    /// Output format.
    #[arg(long, value_parser = parse_format, default_value = "csv")]
    format: Format,
    /// Write to a file instead of stdout; relative paths are joined to
    /// $SHG_OUTPUT_DIR when it is set.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

fn parse_format(s: &str) -> Result<Format, String> {
    match s {
        "csv" => Ok(Format::Csv),
        "json" => Ok(Format::Json),
        other => Err(format!("unknown format {other:?}, expected csv or json")),
    }
}

enum CliError {
    Usage(String),
    Domain(shg_core::Error),
    Io(std::io::Error),
    Tolerance(String),
}

fn usage(msg: &str) -> CliError {
    CliError::Usage(msg.to_string())
}

impl From<shg_core::Error> for CliError {
    fn from(e: shg_core::Error) -> Self {
        CliError::Domain(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

fn emit(text: &str, output: &Option<PathBuf>) -> Result<(), CliError> {
    match output {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => {
            let resolved = match std::env::var_os(OUTPUT_DIR_ENV) {
                Some(dir) if path.is_relative() => Path::new(&dir).join(path),
                _ => path.clone(),
            };
            if let Some(parent) = resolved.parent() {
                if !parent.as_os_str().is_empty() {
                    std::fs::create_dir_all(parent)?;
                }
            }
            std::fs::write(resolved, text)?;
            Ok(())
        }
    }
}

fn key_value_report(pairs: &[(&str, String)], format: Format) -> String {
    match format {
        Format::Csv => {
            let mut out = String::new();
            for (k, v) in pairs {
                out.push_str(&format!("{k} = {v}\n"));
            }
            out
        }
        Format::Json => {
            let body: Vec<String> = pairs
                .iter()
                .map(|(k, v)| {
                    // numbers stay bare; booleans too; anything else is quoted
                    if v.parse::<f64>().is_ok() || v == "true" || v == "false" {
                        format!("  \"{k}\": {v}")
                    } else {
                        format!("  \"{k}\": \"{v}\"")
                    }
                })
                .collect();
            format!("{{\n{}\n}}\n", body.join(",\n"))
        }
    }
}

fn run_steady_state(physical: &PhysicalArgs, io: &IoArgs) -> Result<(), CliError> {
    let (params, drive) = physical.resolve()?;
    let steady = solve_intracavity(&params, &drive)?;
    let point = scale(&params, &steady, &drive)?;
    let report = eigenvalues_closed(&params, &point);
    let pairs = [
        ("alpha_amp", format!("{}", steady.alpha_amp)),
        ("alpha_phase", format!("{}", steady.alpha_phase)),
        ("n", format!("{}", steady.n)),
        ("residual", format!("{:e}", steady.residual)),
        ("m", format!("{}", point.m)),
        ("eta_in", format!("{}", point.eta_in)),
        ("fraction", format!("{}", point.fraction())),
        ("stable", format!("{}", report.stable)),
        ("theta_s", format!("{}", squeezed_phase(&drive))),
    ];
    emit(&key_value_report(&pairs, io.format), &io.output)
}

fn stability_pairs(report: &StabilityReport) -> [(&'static str, String); 5] {
    [
        ("lambda_minus", format!("{}", report.lambda_minus)),
        ("lambda_plus", format!("{}", report.lambda_plus)),
        ("stable", format!("{}", report.stable)),
        ("fraction", format!("{}", report.fraction)),
        ("margin", format!("{}", report.margin)),
    ]
}

fn run_stability(point_args: &PointArgs, io: &IoArgs) -> Result<(), CliError> {
    let point = point_args.resolve()?;
    // physical entry reports eigenvalues in s^-1, scaled entry in gamma units
    let params = if point_args.physical.any() {
        let (params, _) = point_args.physical.resolve()?;
        params
    } else {
        PhysicalParams::scaled_units()
    };
    let report = eigenvalues_closed(&params, &point);
    emit(
        &key_value_report(&stability_pairs(&report), io.format),
        &io.output,
    )
}

fn run_spectrum(
    point_args: &PointArgs,
    omega_max: f64,
    omega_steps: usize,
    with_oracle: bool,
    io: &IoArgs,
) -> Result<(), CliError> {
    let point = point_args.resolve()?;
    let grid = if omega_max == 0.0 {
        vec![0.0]
    } else {
        uniform_grid(0.0, omega_max, omega_steps.max(1))?
    };
    let mut table = spectrum_sweep(&point, &grid, with_oracle)?;
    table.set_meta("command", "spectrum");
    table.set_meta("omega_max", omega_max);
    table.set_meta("omega_steps", omega_steps);
    let format = match io.format {
        Format::Csv => TableFormat::Csv,
        Format::Json => TableFormat::Json,
    };
    emit(&table.render(format), &io.output)
}

fn run_fig(
    which: &str,
    grid_args: &MGridArgs,
    cal: Option<f64>,
    io: &IoArgs,
) -> Result<(), CliError> {
    let grid = uniform_grid(0.0, grid_args.m_max, grid_args.m_steps.max(1))?;
    let mut table = match which {
        "fig1" => fig1_dataset(&grid, &grid_args.fractions)?,
        _ => {
            let cal = PowerCalibration::new(cal.unwrap_or(PowerCalibration::DEFAULT_MW))?;
            fig2_dataset(&grid, &grid_args.fractions, &cal)?
        }
    };
    table.set_meta("command", which);
    let format = match io.format {
        Format::Csv => TableFormat::Csv,
        Format::Json => TableFormat::Json,
    };
    emit(&table.render(format), &io.output)
}

fn run_oracle_check(points: usize, seed: u64, tolerance: f64) -> Result<(), CliError> {
    // deterministic anchor grid first
    let omega_grid: Vec<f64> = (0..=20).map(|i| 0.5 * i as f64).collect();
    let anchors = [
        (2.5, 0.0),
        (2.5, 1.75),
        (2.5, 2.625),
        (20.0, 10.5),
        (0.0, 0.5),
    ];
    let mut worst: f64 = 0.0;
    for (m, eta) in anchors {
        let point = OperatingPoint::new(m, eta)?;
        worst = worst.max(compare_with_closed_form(&point, &omega_grid)?);
    }

    let mut rng = StdRng::seed_from_u64(seed);
    for _ in 0..points {
        let m: f64 = rng.gen_range(0.0..50.0);
        let fraction: f64 = rng.gen_range(0.0..0.95);
        let w: f64 = rng.gen_range(0.0..100.0);
        let point = OperatingPoint::from_fraction(m, fraction)?;
        worst = worst.max(compare_with_closed_form(&point, &[w])?);
    }

    println!(
        "points_checked = {}",
        anchors.len() * omega_grid.len() + points
    );
    println!("max_relative_error = {worst:e}");
    if worst > tolerance {
        return Err(CliError::Tolerance(format!(
            "oracle deviation {worst:e} exceeds tolerance {tolerance:e}"
        )));
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::SteadyState { physical, io } => run_steady_state(physical, io),
        Command::Stability { point, io } => run_stability(point, io),
        Command::Spectrum {
            point,
            omega_max,
            omega_steps,
            with_oracle,
            io,
        } => run_spectrum(point, *omega_max, *omega_steps, *with_oracle, io),
        Command::Fig1 { grid, io } => run_fig("fig1", grid, None, io),
        Command::Fig2 {
            grid,
            power_calibration,
            io,
        } => run_fig("fig2", grid, Some(*power_calibration), io),
        Command::OracleCheck {
            points,
            seed,
            tolerance,
        } => run_oracle_check(*points, *seed, *tolerance),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: usage: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Domain(e)) => {
            // Display output already leads with the error kind
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(CliError::Io(e)) => {
            eprintln!("error: io: {e}");
            ExitCode::from(1)
        }
        Err(CliError::Tolerance(msg)) => {
            eprintln!("error: tolerance: {msg}");
            ExitCode::from(1)
        }
    }
}
