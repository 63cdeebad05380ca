//! Target point generators.

use std::f64::consts::PI;

use layerr::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::result::Result;

use crate::config::{Axis, Side, TargetConfig};
use crate::CliError;

/// Random points closer than this to a grid node are redrawn.
pub const MIN_GRID_DISTANCE: f64 = 1e-3;

const MAX_DRAWS_PER_POINT: usize = 10_000;

fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| {
        if n == 1 {
            0.5 * (lo + hi)
        } else {
            lo + (hi - lo) * i as f64 / (n - 1) as f64
        }
    })
}

pub fn spherical(r: f64, theta: f64, phi: f64) -> [f64; 3] {
    [
        r * theta.sin() * phi.cos(),
        r * theta.sin() * phi.sin(),
        r * theta.cos(),
    ]
}

/// Whether `x` lies inside the surface, from the double-layer identity
/// (`4π` inside, `0` outside) on the reference grid.
pub fn is_inside(reference: &Discretization, x: [f64; 3]) -> bool {
    reference
        .evaluate(KernelSpec::HarmonicDouble, &x)
        .is_ok_and(|v| v > 2.0 * PI)
}

pub fn generate(
    cfg: &TargetConfig,
    surface: &SurfaceParam,
    grid: &QuadratureGrid,
) -> Result<Vec<[f64; 3]>, CliError> {
    Ok(match cfg {
        TargetConfig::Plane {
            axis,
            offset,
            extent,
            resolution,
        } => {
            let (i, j, k) = match axis {
                Axis::X => (0, 1, 2),
                Axis::Y => (1, 0, 2),
                Axis::Z => (2, 0, 1),
            };
            let mut pts = Vec::with_capacity(resolution[0] * resolution[1]);
            for v in linspace(extent[1][0], extent[1][1], resolution[1]) {
                for u in linspace(extent[0][0], extent[0][1], resolution[0]) {
                    let mut x = [0.0; 3];
                    x[i] = *offset;
                    x[j] = u;
                    x[k] = v;
                    pts.push(x);
                }
            }
            pts
        }
        TargetConfig::RadialSweep { distances, angles } => {
            let mut pts = Vec::with_capacity(distances.len() * angles.len());
            for &[theta, phi] in angles {
                let t = surface
                    .theta_map
                    .t_of_theta(theta)
                    .map_err(|e| CliError::Config(format!("targets.angles: {e}")))?;
                let p = surface.eval_t_real(t, phi).real_point();
                let n = surface.normal(t, phi);
                for &d in distances {
                    pts.push(std::array::from_fn(|c| p[c] + d * n[c]));
                }
            }
            pts
        }
        TargetConfig::Random {
            count,
            bounding_shell: [lo, hi],
            seed,
            side,
        } => {
            let coarse = Discretization::new(surface, DensitySpec::Unit, grid.clone());
            let reference = Discretization::new(
                surface,
                DensitySpec::Unit,
                grid.upsampled(layerr::potentials::REFERENCE_UPSAMPLING)
                    .map_err(|e| CliError::Config(e.to_string()))?,
            );
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let mut pts = Vec::with_capacity(*count);
            let mut draws = 0;
            while pts.len() < *count {
                draws += 1;
                if draws > MAX_DRAWS_PER_POINT * count {
                    return Err(CliError::Config(format!(
                        "targets: only {} of {count} admissible points after {} draws; check bounding_shell and side",
                        pts.len(),
                        draws - 1
                    )));
                }
                let u = unit_vector(&mut rng);
                let r = (lo.powi(3) + rng.gen::<f64>() * (hi.powi(3) - lo.powi(3))).cbrt();
                let x = u.map(|c| c * r);
                let keep = match side {
                    Side::Both => true,
                    Side::Exterior => !is_inside(&reference, x),
                    Side::Interior => is_inside(&reference, x),
                };
                if keep && coarse.min_distance(&x) >= MIN_GRID_DISTANCE {
                    pts.push(x);
                }
            }
            pts
        }
        TargetConfig::Shell {
            radius,
            resolution: [n_theta, n_phi],
        } => {
            let mut pts = Vec::with_capacity(n_theta * n_phi);
            for i in 0..*n_theta {
                let theta = PI * (i as f64 + 0.5) / *n_theta as f64;
                for j in 0..*n_phi {
                    let phi = 2.0 * PI * (j as f64 + 0.5) / *n_phi as f64;
                    pts.push(spherical(*radius, theta, phi));
                }
            }
            pts
        }
        TargetConfig::Explicit { points } => points.clone(),
    })
}

fn unit_vector(rng: &mut ChaCha8Rng) -> [f64; 3] {
    loop {
        let v: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let n2: f64 = v.iter().map(|c| c * c).sum();
        if n2 > 1e-6 && n2 <= 1.0 {
            let n = n2.sqrt();
            return v.map(|c| c / n);
        }
    }
}
