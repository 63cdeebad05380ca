//! Newton roots compared with closed forms, or checked by residual.

use std::f64::consts::PI;

use layerr::prelude::*;
use layerr::roots::RootSource;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const MAX_DEVIATION: f64 = 1e-10;
pub const MAX_RESIDUAL: f64 = 1e-10;
/// Residual threshold when no closed form exists.
pub const MAX_RESIDUAL_ONLY: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckSurface {
    /// `θ`-roots against the closed form.
    Sphere,
    /// `φ`-roots of a 1:3 spheroid against the closed form.
    Spheroid,
    /// `θ`-roots on the blob, residual only.
    Blob,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RootsReport {
    pub surface: CheckSurface,
    pub samples: usize,
    pub failures: usize,
    /// Largest `|newton - closed form|`; `None` in residual-only mode.
    pub max_deviation: Option<f64>,
    /// Largest `|R²| / scale²` at the Newton root.
    pub max_residual: f64,
}

impl RootsReport {
    pub fn residual_threshold(&self) -> f64 {
        match self.surface {
            CheckSurface::Blob => MAX_RESIDUAL_ONLY,
            _ => MAX_RESIDUAL,
        }
    }

    pub fn passed(&self) -> bool {
        self.passed_with(MAX_DEVIATION, self.residual_threshold())
    }

    pub fn passed_with(&self, max_deviation: f64, max_residual: f64) -> bool {
        self.failures == 0
            && self.max_residual < max_residual
            && self.max_deviation.map_or(true, |d| d < max_deviation)
    }
}

fn unit_vector(rng: &mut ChaCha8Rng) -> [f64; 3] {
    loop {
        let v: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-3 && n <= 1.0 {
            return v.map(|c| c / n);
        }
    }
}

fn norm(x: [f64; 3]) -> f64 {
    (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt()
}

pub fn roots_check(surface: CheckSurface, samples: usize, seed: u64) -> RootsReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = RootsReport {
        surface,
        samples,
        failures: 0,
        max_deviation: (surface != CheckSurface::Blob).then_some(0.0),
        max_residual: 0.0,
    };
    for i in 0..samples {
        let outcome = match surface {
            CheckSurface::Sphere => sphere_case(&mut rng, i),
            CheckSurface::Spheroid => spheroid_case(&mut rng),
            CheckSurface::Blob => blob_case(&mut rng, i),
        };
        match outcome {
            Some((dev, res)) => {
                report.max_residual = report.max_residual.max(res);
                if let (Some(m), Some(d)) = (report.max_deviation.as_mut(), dev) {
                    *m = m.max(d);
                }
            }
            None => report.failures += 1,
        }
    }
    report
}

type Case = Option<(Option<f64>, f64)>;

fn sphere_case(rng: &mut ChaCha8Rng, i: usize) -> Case {
    let a = 1.0;
    let phi = rng.gen_range(0.0..2.0 * PI);
    let ratio = rng.gen_range(1.05..3.0);
    let m = if i % 2 == 0 { ratio } else { 1.0 / ratio };
    let x = unit_vector(rng).map(|c| c * a * m);
    let surf = SurfaceParam::sphere(a, ThetaMap::Cosine);
    let scale = a + norm(x);
    let closed = sphere_theta_root(a, phi, x).ok()?;
    let xt = x[0] * phi.cos() + x[1] * phi.sin();
    let start = Complex64::new(xt.atan2(x[2]), 0.1);
    let n = newton_root(
        RootSource::Surface(&surf),
        RootVariable::Theta,
        phi,
        x,
        start,
        scale,
    )
    .ok()?;
    Some((
        Some((n.value - closed.value).norm()),
        n.residual / (scale * scale),
    ))
}

fn spheroid_case(rng: &mut ChaCha8Rng) -> Case {
    let surf = SurfaceParam::spheroid(1.0, 3.0, ThetaMap::Cosine);
    let theta = rng.gen_range(0.1..PI - 0.1);
    let x = unit_vector(rng).map(|c| c * rng.gen_range(0.3..3.0) * 3.0);
    let scale = 3.0 + norm(x);
    let closed = axisym_phi_root(&surf, theta, x).ok()?;
    let start = Complex64::new(x[1].atan2(x[0]), 0.1);
    let n = newton_root(
        RootSource::Surface(&surf),
        RootVariable::Phi,
        theta,
        x,
        start,
        scale,
    )
    .ok()?;
    Some((
        Some((n.value - closed.value).norm()),
        n.residual / (scale * scale),
    ))
}

fn blob_case(rng: &mut ChaCha8Rng, i: usize) -> Case {
    let surf = SurfaceParam::blob(ThetaMap::Cosine);
    let theta = rng.gen_range(0.2..PI - 0.2);
    let phi = rng.gen_range(0.0..2.0 * PI);
    let d = rng.gen_range(0.02..0.3) * if i % 2 == 0 { 1.0 } else { -1.0 };
    let t = surf.theta_map.t_of_theta(theta).ok()?;
    let p = surf.eval_t_real(t, phi).real_point();
    let nrm = surf.normal(t, phi);
    let x: [f64; 3] = std::array::from_fn(|c| p[c] + d * nrm[c]);
    let scale = surf.shape.bounding_radius() + norm(x);
    let n = newton_root(
        RootSource::Surface(&surf),
        RootVariable::Theta,
        phi,
        x,
        Complex64::new(theta, 0.1),
        scale,
    )
    .ok()?;
    Some((None, n.residual / (scale * scale)))
}
