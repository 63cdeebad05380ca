//! Error and estimate evaluation over a set of target points.

use std::io::Write;
use std::time::Instant;

use layerr::estimates::TzSkip;
use layerr::prelude::*;
use rayon::prelude::*;
use std::result::Result;

use crate::config::ExperimentConfig;
use crate::{targets, CliError};

pub const HEADER: [&str; 13] = [
    "x",
    "y",
    "z",
    "distance_to_grid",
    "E_Q",
    "E_EST",
    "E_TZ",
    "E_GL",
    "tz_skipped",
    "t_star",
    "phi_star",
    "runtime_us",
    "error",
];

/// One output row. Fields that could not be computed are `None` and the
/// reason is kept in `error`.
#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub x: [f64; 3],
    pub distance_to_grid: f64,
    pub e_q: Option<f64>,
    pub estimate: Option<EstimateBreakdown>,
    pub runtime_us: u128,
    pub error: Vec<String>,
}

pub fn float(v: f64) -> String {
    format!("{v:.16e}")
}

fn skip_name(s: Option<TzSkip>) -> &'static str {
    match s {
        None => "",
        Some(TzSkip::Cone) => "cone",
        Some(TzSkip::NoRoot) => "no-root",
        Some(TzSkip::LargeGeometryFactor) => "large-geometry-factor",
    }
}

impl Row {
    pub fn record(&self) -> Vec<String> {
        let opt = |v: Option<f64>| v.map(float).unwrap_or_default();
        let e = self.estimate.as_ref();
        vec![
            float(self.x[0]),
            float(self.x[1]),
            float(self.x[2]),
            float(self.distance_to_grid),
            opt(self.e_q),
            opt(e.map(|e| e.total)),
            opt(e.map(|e| e.e_tz)),
            opt(e.map(|e| e.e_gl)),
            e.map(|e| skip_name(e.tz_skip).to_string())
                .unwrap_or_default(),
            opt(e.map(|e| e.closest_grid.0)),
            opt(e.map(|e| e.closest_grid.1)),
            self.runtime_us.to_string(),
            self.error.join("; "),
        ]
    }
}

pub struct Experiment {
    pub evaluator: PotentialEvaluator,
    pub estimator: Estimator,
    pub points: Vec<[f64; 3]>,
    pub deterministic: bool,
}

impl Experiment {
    pub fn new(cfg: &ExperimentConfig) -> Result<Self, CliError> {
        cfg.validate()?;
        let surface = cfg.surface.build()?;
        let kernel = cfg.kernel.build()?;
        let evaluator = PotentialEvaluator::new(
            &surface,
            kernel,
            cfg.density.into(),
            cfg.grid.n_t,
            cfg.grid.n_phi,
        )
        .map_err(|e| CliError::Config(e.to_string()))?;
        let estimator = Estimator::for_evaluator(&evaluator, cfg.estimate_options()?)
            .map_err(|e| CliError::Config(e.to_string()))?;
        let points = targets::generate(&cfg.targets, &surface, evaluator.grid())?;
        Ok(Self {
            evaluator,
            estimator,
            points,
            deterministic: cfg.output.deterministic,
        })
    }

    pub fn row(&self, x: [f64; 3]) -> Row {
        let mut error = Vec::new();
        let e_q = self
            .evaluator
            .measured_error(x)
            .map_err(|e| error.push(format!("quadrature: {e}")))
            .ok();
        let start = Instant::now();
        let estimate = self
            .estimator
            .estimate(x)
            .map_err(|e| error.push(format!("estimate: {e}")))
            .ok();
        let elapsed = start.elapsed().as_micros();
        Row {
            x,
            distance_to_grid: self.evaluator.discretization().min_distance(&x),
            e_q,
            estimate,
            runtime_us: if self.deterministic { 0 } else { elapsed },
            error,
        }
    }

    /// Rows in the order of the target points.
    pub fn rows(&self) -> Vec<Row> {
        self.points.par_iter().map(|&x| self.row(x)).collect()
    }
}

pub fn write_csv<W: Write>(out: W, rows: &[Row]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER).map_err(io)?;
    for r in rows {
        w.write_record(r.record()).map_err(io)?;
    }
    w.flush().map_err(|e| CliError::Io(e.to_string()))
}

fn io(e: csv::Error) -> CliError {
    CliError::Io(e.to_string())
}

/// Runs the experiment and writes the CSV to the configured path, or to
/// standard output. Returns the rows.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<Row>, CliError> {
    let exp = Experiment::new(cfg)?;
    let rows = exp.rows();
    match &cfg.output.path {
        Some(p) => {
            let f = std::fs::File::create(p)
                .map_err(|e| CliError::Io(format!("cannot create {}: {e}", p.display())))?;
            write_csv(std::io::BufWriter::new(f), &rows)?;
        }
        None => write_csv(std::io::stdout().lock(), &rows)?,
    }
    Ok(rows)
}
