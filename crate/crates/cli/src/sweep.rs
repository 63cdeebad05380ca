//! Sphere sweeps comparing the measured error with the simplified estimate.

use std::f64::consts::PI;
use std::io::Write;

use layerr::prelude::*;
use rayon::prelude::*;
use std::result::Result;

use crate::experiment::float;
use crate::targets::spherical;
use crate::CliError;

pub const HEADER: [&str; 5] = ["n", "d", "E_Q_min", "E_Q_max", "E_simplified"];

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub radius: f64,
    pub kernel: KernelSpec,
    /// `n_t` values; each run uses `n_φ = 2 n_t`.
    pub n_t: Vec<usize>,
    /// Signed distances from the sphere, negative inside.
    pub distances: Vec<f64>,
    pub theta_samples: usize,
    pub phi_samples: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub n_t: usize,
    pub d: f64,
    pub e_q_min: f64,
    pub e_q_max: f64,
    pub e_simplified: f64,
}

impl SweepConfig {
    fn validate(&self) -> Result<(), CliError> {
        let bad = |m: &str| Err(CliError::Config(m.into()));
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return bad("radius must be positive");
        }
        if matches!(self.kernel, KernelSpec::ModHelmholtzSingle { .. }) {
            return bad("the sphere sweep supports the harmonic kernels only");
        }
        if self.n_t.is_empty() || self.n_t.iter().any(|&n| n < 4) {
            return bad("every n must be at least 4");
        }
        if self.distances.is_empty()
            || self
                .distances
                .iter()
                .any(|&d| d == 0.0 || !d.is_finite() || d <= -self.radius)
        {
            return bad("distances must be nonzero, finite and greater than -radius");
        }
        if self.theta_samples == 0 || self.phi_samples == 0 {
            return bad("sample counts must be positive");
        }
        Ok(())
    }

    /// Surface-parallel sample points at distance `d`: the full polar range
    /// and azimuths in `[0, π/n_φ]`.
    pub fn points(&self, d: f64, n_phi: usize) -> Vec<[f64; 3]> {
        let r = self.radius + d;
        let mut pts = Vec::with_capacity(self.theta_samples * self.phi_samples);
        for i in 0..self.theta_samples {
            let theta = PI * (i as f64 + 0.5) / self.theta_samples as f64;
            for k in 0..self.phi_samples {
                let frac = if self.phi_samples == 1 {
                    0.0
                } else {
                    k as f64 / (self.phi_samples - 1) as f64
                };
                pts.push(spherical(r, theta, PI / n_phi as f64 * frac));
            }
        }
        pts
    }
}

pub fn sphere_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>, CliError> {
    cfg.validate()?;
    let surface = SurfaceParam::sphere(cfg.radius, ThetaMap::Cosine);
    let mut rows = Vec::new();
    for &n_t in &cfg.n_t {
        let n_phi = 2 * n_t;
        let ev = PotentialEvaluator::new(&surface, cfg.kernel, DensitySpec::Unit, n_t, n_phi)
            .map_err(|e| CliError::Config(e.to_string()))?;
        for &d in &cfg.distances {
            let errs: Vec<f64> = cfg
                .points(d, n_phi)
                .par_iter()
                .filter_map(|&x| ev.measured_error(x).ok())
                .collect();
            let e_simplified = sphere_simplified(cfg.radius + d, cfg.radius, cfg.kernel.p(), n_phi)
                .map_err(|e| CliError::Config(e.to_string()))?;
            rows.push(SweepRow {
                n_t,
                d,
                e_q_min: errs.iter().copied().fold(f64::NAN, f64::min),
                e_q_max: errs.iter().copied().fold(f64::NAN, f64::max),
                e_simplified,
            });
        }
    }
    Ok(rows)
}

pub fn write_csv<W: Write>(out: W, rows: &[SweepRow]) -> Result<(), CliError> {
    let err = |e: csv::Error| CliError::Io(e.to_string());
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER).map_err(err)?;
    for r in rows {
        w.write_record([
            r.n_t.to_string(),
            float(r.d),
            float(r.e_q_min),
            float(r.e_q_max),
            float(r.e_simplified),
        ])
        .map_err(err)?;
    }
    w.flush().map_err(|e| CliError::Io(e.to_string()))
}
