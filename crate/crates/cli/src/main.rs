use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use layerr::prelude::*;
use layerr_cli::config::ExperimentConfig;
use layerr_cli::roots_check::{roots_check, CheckSurface, MAX_DEVIATION};
use layerr_cli::sweep::{sphere_sweep, SweepConfig};
use layerr_cli::{experiment, presets, sweep, CliError};
use std::result::Result;

/// Layer-potential quadrature errors and their a-priori estimates.
///
/// Thread count: LAYERR_THREADS (default: available parallelism).
/// Exit codes: 0 success, 1 configuration error, 2 validation failure.
#[derive(Parser)]
#[command(name = "layerr", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment described by a TOML file and write CSV.
    Run {
        config: PathBuf,
        /// Overrides the output path of the configuration.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write zero runtimes so the output is reproducible.
        #[arg(long)]
        deterministic: bool,
    },
    /// Run a built-in experiment.
    Preset {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(presets::NAMES))]
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        deterministic: bool,
        /// Print the preset as a TOML configuration instead of running it.
        #[arg(long)]
        print_config: bool,
    },
    /// Measured error against the simplified sphere estimate (cosine map,
    /// n_phi = 2 n_t, unit density).
    SphereSweep {
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        #[arg(long, value_enum, default_value_t = HarmonicKernel::Single)]
        kernel: HarmonicKernel,
        /// Comma-separated n_t values.
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        /// Comma-separated signed distances, negative inside.
        #[arg(
            long,
            value_delimiter = ',',
            required = true,
            allow_hyphen_values = true
        )]
        d: Vec<f64>,
        #[arg(long, default_value_t = 12)]
        theta_samples: usize,
        #[arg(long, default_value_t = 3)]
        phi_samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare Newton roots with closed forms (residual only for the blob).
    RootsCheck {
        #[arg(long, value_enum)]
        surface: RootsSurface,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Overrides the 1e-10 bound on |newton - closed form|.
        #[arg(long)]
        max_deviation: Option<f64>,
        /// Overrides the bound on |R^2|/scale^2.
        #[arg(long)]
        max_residual: Option<f64>,
    },
    /// Print the nodes and weights of a one-dimensional rule.
    Nodes {
        #[arg(long, value_enum)]
        rule: RuleName,
        #[arg(long)]
        n: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum HarmonicKernel {
    Single,
    Double,
}

#[derive(Clone, Copy, ValueEnum)]
enum RootsSurface {
    Sphere,
    Spheroid,
    Blob,
}

#[derive(Clone, Copy, ValueEnum)]
enum RuleName {
    Gl,
    Tz,
    Laguerre,
}

fn run_config(
    mut cfg: ExperimentConfig,
    out: Option<PathBuf>,
    deterministic: bool,
) -> Result<(), CliError> {
    if out.is_some() {
        cfg.output.path = out;
    }
    cfg.output.deterministic |= deterministic;
    let rows = experiment::run_experiment(&cfg)?;
    let failed = rows.iter().filter(|r| !r.error.is_empty()).count();
    if failed > 0 {
        eprintln!("{failed} of {} points recorded errors", rows.len());
    }
    Ok(())
}

fn create(path: &PathBuf) -> Result<std::io::BufWriter<std::fs::File>, CliError> {
    std::fs::File::create(path)
        .map(std::io::BufWriter::new)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", path.display())))
}

fn execute(cli: Cli) -> Result<(), CliError> {
    layerr_cli::init_threads()?;
    match cli.command {
        Command::Run {
            config,
            out,
            deterministic,
        } => run_config(ExperimentConfig::from_path(&config)?, out, deterministic),
        Command::Preset {
            name,
            out,
            deterministic,
            print_config,
        } => {
            let cfg = presets::preset(&name)
                .ok_or_else(|| CliError::Config(format!("unknown preset {name}")))?;
            if print_config {
                print!("{}", cfg.to_toml());
                return Ok(());
            }
            run_config(cfg, out, deterministic)
        }
        Command::SphereSweep {
            radius,
            kernel,
            n,
            d,
            theta_samples,
            phi_samples,
            out,
        } => {
            let cfg = SweepConfig {
                radius,
                kernel: match kernel {
                    HarmonicKernel::Single => KernelSpec::HarmonicSingle,
                    HarmonicKernel::Double => KernelSpec::HarmonicDouble,
                },
                n_t: n,
                distances: d,
                theta_samples,
                phi_samples,
            };
            let rows = sphere_sweep(&cfg)?;
            match out {
                Some(p) => sweep::write_csv(create(&p)?, &rows),
                None => sweep::write_csv(std::io::stdout().lock(), &rows),
            }
        }
        Command::RootsCheck {
            surface,
            samples,
            seed,
            max_deviation,
            max_residual,
        } => {
            let surface = match surface {
                RootsSurface::Sphere => CheckSurface::Sphere,
                RootsSurface::Spheroid => CheckSurface::Spheroid,
                RootsSurface::Blob => CheckSurface::Blob,
            };
            if samples == 0 {
                return Err(CliError::Config("samples must be positive".into()));
            }
            let r = roots_check(surface, samples, seed);
            let dev_tol = max_deviation.unwrap_or(MAX_DEVIATION);
            let res_tol = max_residual.unwrap_or(r.residual_threshold());
            println!("surface: {:?}", r.surface);
            println!("samples: {}", r.samples);
            println!("newton failures: {}", r.failures);
            match r.max_deviation {
                Some(d) => {
                    println!("max |newton - closed form|: {d:.3e} (threshold {dev_tol:.0e})")
                }
                None => println!("max |newton - closed form|: n/a (residual only)"),
            }
            println!(
                "max |R^2|/scale^2: {:.3e} (threshold {res_tol:.0e})",
                r.max_residual
            );
            if r.passed_with(dev_tol, res_tol) {
                println!("PASS");
                Ok(())
            } else {
                println!("FAIL");
                Err(CliError::Validation("root thresholds violated".into()))
            }
        }
        Command::Nodes { rule, n } => {
            if n == 0 {
                return Err(CliError::Config("n must be positive".into()));
            }
            let r = match rule {
                RuleName::Gl => gauss_legendre(n),
                RuleName::Tz => trapezoidal(n),
                RuleName::Laguerre => gauss_laguerre(n),
            };
            let mut w = csv::Writer::from_writer(std::io::stdout().lock());
            let err = |e: csv::Error| CliError::Io(e.to_string());
            w.write_record(["node", "weight"]).map_err(err)?;
            for (x, wt) in r.iter() {
                w.write_record([experiment::float(x), experiment::float(wt)])
                    .map_err(err)?;
            }
            w.flush().map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage errors are configuration errors; help and version succeed
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("layerr: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
