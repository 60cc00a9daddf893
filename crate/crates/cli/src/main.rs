//! `xepecs`: command-line front end for the sp-model XEPECS simulator.

mod config;
mod output;
mod svg;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use xepecs_core::amplitudes::XepecsCalculator;
use xepecs_core::entanglement::{entropy_sweep_with, PRODUCT_BASIS};
use xepecs_core::spectra::{default_emission_grid, default_kinetic_energy, energy_grid, xepecs_spectra_with, xps_spectrum, XPS_GRID};
use xepecs_core::{entangled_state, full_density_matrix, Spin};

use config::{parse_range, AngleSpec, ConfigError, Epsilon, RunConfig, CONFIG_ENV};
use output::{ComplexMatrix, Table};

#[derive(Parser, Debug)]
#[command(name = "xepecs", version, about = "Spin-polarization entanglement in X-ray emission after photoemission")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args, Debug)]
struct CommonArgs {
    /// Flat JSON configuration file.
    #[arg(long, global = true, env = CONFIG_ENV, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Emission polar angle in degrees, or START:END:STEP for `entropy`.
    #[arg(long, global = true, value_name = "DEG")]
    theta: Option<String>,
    /// Emission azimuth in degrees.
    #[arg(long, global = true, value_name = "DEG", allow_negative_numbers = true)]
    phi: Option<String>,
    /// Angle of the first polarization vector in degrees.
    #[arg(long, global = true, value_name = "DEG", allow_negative_numbers = true)]
    beta1: Option<String>,
    /// Angle of the second polarization vector in degrees.
    #[arg(long, global = true, value_name = "DEG", allow_negative_numbers = true)]
    beta2: Option<String>,
    /// Photoelectron kinetic energy in eV, or `auto` for the main J=1 XPS line.
    #[arg(long, global = true, value_name = "EV|auto", allow_negative_numbers = true)]
    epsilon: Option<String>,
    /// Output file. Defaults to standard output.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Photoemission spectrum versus kinetic energy.
    Xps {
        /// Photoelectron spin. Both spins are written when omitted.
        #[arg(long, value_enum)]
        spin: Option<SpinArg>,
        /// Kinetic-energy grid in eV.
        #[arg(long, value_name = "START:END:STEP")]
        grid: Option<String>,
    },
    /// Emission spectra for the four spin-polarization channels.
    Xepecs {
        /// Emission-energy grid in eV. Defaults to ±3 eV around the emission line.
        #[arg(long, value_name = "START:END:STEP")]
        grid: Option<String>,
    },
    /// Density matrix of the spin-polarization state.
    Rho,
    /// Entanglement entropy versus emission angle. Defaults to --theta 0:180:1.
    Entropy,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SpinArg {
    Up,
    Down,
}

impl From<SpinArg> for Spin {
    fn from(s: SpinArg) -> Spin {
        match s {
            SpinArg::Up => Spin::Up,
            SpinArg::Down => Spin::Down,
        }
    }
}

#[derive(Debug)]
enum CliError {
    Config(ConfigError),
    Domain(xepecs_core::Error),
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e)
    }
}

impl From<xepecs_core::Error> for CliError {
    fn from(e: xepecs_core::Error) -> Self {
        use xepecs_core::Error as E;
        let field = match &e {
            E::InvalidParams(_) => "params",
            E::InvalidGeometry(_) => "geometry",
            E::NonPositiveWidth(_) => "gamma",
            E::GridNotAscending => "grid",
            _ => return CliError::Domain(e),
        };
        CliError::Config(ConfigError::new(field, e.to_string()))
    }
}

enum Report {
    Table { table: Table, title: &'static str, x_label: &'static str, y_label: &'static str },
    Matrix(ComplexMatrix),
}

fn load_config(common: &CommonArgs) -> Result<RunConfig, ConfigError> {
    let mut cfg = match &common.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    let number = |field: &str, s: &String| match AngleSpec::parse(field, s)? {
        AngleSpec::Single(v) => Ok(v),
        AngleSpec::Range { .. } => Err(ConfigError::new(field, "a single value is required")),
    };
    if let Some(v) = &common.phi {
        cfg.phi_deg = number("phi", v)?;
    }
    if let Some(v) = &common.beta1 {
        cfg.beta1_deg = number("beta1", v)?;
    }
    if let Some(v) = &common.beta2 {
        cfg.beta2_deg = number("beta2", v)?;
    }
    if let Some(v) = &common.epsilon {
        cfg.epsilon = Epsilon::parse("epsilon", v)?;
    }
    Ok(cfg)
}

fn single_theta(common: &CommonArgs, cfg: &mut RunConfig) -> Result<(), ConfigError> {
    if let Some(t) = &common.theta {
        match AngleSpec::parse("theta", t)? {
            AngleSpec::Single(v) => cfg.theta_deg = v,
            AngleSpec::Range { .. } => {
                return Err(ConfigError::new("theta", "ranges are only accepted by the entropy command"))
            }
        }
    }
    Ok(())
}

fn grid(spec: &Option<String>, default: impl FnOnce() -> Vec<f64>) -> Result<Vec<f64>, CliError> {
    match spec {
        Some(s) => {
            let (start, end, step) = parse_range("grid", s)?;
            Ok(energy_grid(start, end, step)?)
        }
        None => Ok(default()),
    }
}

fn epsilon(cfg: &RunConfig, calc: &XepecsCalculator) -> f64 {
    match cfg.epsilon {
        Epsilon::Auto => default_kinetic_energy(calc),
        Epsilon::Value(v) => v,
    }
}

fn compute(cli: &Cli) -> Result<Report, CliError> {
    let common = &cli.common;
    let mut cfg = load_config(common)?;
    let sweep = match (&cli.command, &common.theta) {
        (Command::Entropy, Some(t)) => Some(AngleSpec::parse("theta", t)?.values()),
        (Command::Entropy, None) => Some(config::inclusive_range(0.0, 180.0, 1.0)),
        _ => {
            single_theta(common, &mut cfg)?;
            None
        }
    };
    cfg.validate()?;
    let calc = XepecsCalculator::new(cfg.params)?;

    match &cli.command {
        Command::Xps { spin, grid: spec } => {
            let (start, end, step) = XPS_GRID;
            let grid = grid(spec, || energy_grid(start, end, step).expect("valid default grid"))?;
            let spins: Vec<Spin> = match spin {
                Some(s) => vec![(*s).into()],
                None => Spin::ALL.to_vec(),
            };
            let series = spins.iter().map(|&s| xps_spectrum(&calc, s, &grid)).collect::<Result<Vec<_>, _>>()?;
            let mut columns = vec!["kinetic_energy_eV"];
            columns.extend(spins.iter().map(|s| match s {
                Spin::Up => "intensity_up",
                Spin::Down => "intensity_down",
            }));
            let mut table = Table::new(&columns);
            for (k, &e) in grid.iter().enumerate() {
                let mut row = vec![e];
                row.extend(series.iter().map(|s| s.intensity[k]));
                table.push(row);
            }
            Ok(Report::Table { table, title: "XPS", x_label: "kinetic energy (eV)", y_label: "intensity" })
        }
        Command::Xepecs { grid: spec } => {
            let eps = epsilon(&cfg, &calc);
            let geom = cfg.geometry_at(cfg.theta_deg)?;
            let grid = grid(spec, || default_emission_grid(&calc, eps))?;
            let series = xepecs_spectra_with(&calc, &geom, eps, &grid)?;
            let mut table = Table::new(&["emission_energy_eV", "I_U1", "I_U2", "I_D1", "I_D2"]);
            for (k, &w) in grid.iter().enumerate() {
                let mut row = vec![w];
                row.extend(series.iter().map(|s| s.intensity[k]));
                table.push(row);
            }
            Ok(Report::Table { table, title: "XEPECS", x_label: "emission energy (eV)", y_label: "intensity" })
        }
        Command::Rho => {
            let eps = epsilon(&cfg, &calc);
            let geom = cfg.geometry_at(cfg.theta_deg)?;
            let rho = full_density_matrix(&entangled_state(&calc.amplitudes(&geom, eps))?);
            let labels: Vec<String> =
                PRODUCT_BASIS.iter().map(|(s, p)| format!("{}{}", if *s == Spin::Up { 'U' } else { 'D' }, p.index() + 1)).collect();
            let entries =
                (0..4).map(|i| (0..4).map(|j| (rho.entries[(i, j)].re, rho.entries[(i, j)].im)).collect()).collect();
            Ok(Report::Matrix(ComplexMatrix { labels, entries }))
        }
        Command::Entropy => {
            let thetas = sweep.expect("entropy always has a sweep");
            for &t in &thetas {
                cfg.geometry_at(t)?;
            }
            let eps = epsilon(&cfg, &calc);
            let template = cfg.geometry_at(90.0)?;
            let curve = entropy_sweep_with(&calc, &template, &thetas, eps)?;
            let mut table = Table::new(&["theta_deg", "entropy_bits"]);
            for (t, s) in curve.thetas_deg.iter().zip(&curve.entropy) {
                table.push(vec![*t, *s]);
            }
            Ok(Report::Table { table, title: "Entanglement entropy", x_label: "theta (deg)", y_label: "S (bits)" })
        }
    }
}

fn render(report: &Report, format: Format) -> Result<String, CliError> {
    Ok(match (report, format) {
        (Report::Table { table, .. }, Format::Csv) => table.to_csv(),
        (Report::Table { table, .. }, Format::Json) => table.to_json(),
        (Report::Table { table, title, x_label, y_label }, Format::Svg) => svg::render(&svg::Plot {
            title,
            x_label,
            y_label,
            x: table.column(0),
            series: table.columns[1..]
                .iter()
                .enumerate()
                .map(|(k, name)| svg::Series { name, y: table.column(k + 1) })
                .collect(),
        }),
        (Report::Matrix(m), Format::Csv) => m.to_csv(),
        (Report::Matrix(m), Format::Json) => m.to_json(),
        (Report::Matrix(_), Format::Svg) => {
            return Err(ConfigError::new("format", "svg output is not available for rho").into())
        }
    })
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let report = compute(cli)?;
    let text = render(&report, cli.common.format)?;
    match &cli.common.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| ConfigError::new("out", format!("cannot write {}: {e}", path.display())))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            // A closed pipe (e.g. `| head`) is not an error.
            let _ = stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Config(e)) => {
            eprintln!("xepecs: configuration error: {e}");
            ExitCode::from(2)
        }
        Err(CliError::Domain(e)) => {
            eprintln!("xepecs: computation error: {e}");
            ExitCode::from(3)
        }
    }
}
