//! Experiment configuration read from TOML.

use std::path::{Path, PathBuf};

use layerr::prelude::*;
use serde::{Deserialize, Serialize};
use std::result::Result;

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub surface: SurfaceConfig,
    pub kernel: KernelConfig,
    #[serde(default)]
    pub density: DensityName,
    pub grid: GridConfig,
    pub targets: TargetConfig,
    #[serde(default)]
    pub cone: ConeConfig,
    #[serde(default)]
    pub estimate: EstimateConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MapName {
    Linear,
    #[default]
    Cosine,
}

impl From<MapName> for ThetaMap {
    fn from(m: MapName) -> Self {
        match m {
            MapName::Linear => ThetaMap::Linear,
            MapName::Cosine => ThetaMap::Cosine,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SurfaceConfig {
    Sphere {
        radius: f64,
        #[serde(default)]
        theta_map: MapName,
    },
    /// `a` is the equatorial and `b` the polar semi-axis.
    Spheroid {
        a: f64,
        b: f64,
        #[serde(default)]
        theta_map: MapName,
    },
    /// Profiles `a(θ) = Σ a_k cos(kθ)` and `b(θ) = Σ b_k cos(kθ)`.
    Axisymmetric {
        a: Vec<f64>,
        b: Vec<f64>,
        #[serde(default)]
        theta_map: MapName,
    },
    Blob {
        #[serde(default)]
        theta_map: MapName,
    },
}

impl SurfaceConfig {
    pub fn build(&self) -> Result<SurfaceParam, CliError> {
        let s = match self {
            SurfaceConfig::Sphere { radius, theta_map } => {
                SurfaceParam::sphere(*radius, (*theta_map).into())
            }
            SurfaceConfig::Spheroid { a, b, theta_map } => {
                SurfaceParam::spheroid(*a, *b, (*theta_map).into())
            }
            SurfaceConfig::Axisymmetric { a, b, theta_map } => SurfaceParam::new(
                Shape::Axisymmetric {
                    a: Profile::cosine_series(a.clone()).map_err(field("surface.a"))?,
                    b: Profile::cosine_series(b.clone()).map_err(field("surface.b"))?,
                },
                (*theta_map).into(),
            ),
            SurfaceConfig::Blob { theta_map } => SurfaceParam::blob((*theta_map).into()),
        };
        s.shape.validate().map_err(field("surface"))?;
        Ok(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case", deny_unknown_fields)]
pub enum KernelConfig {
    HarmonicSingle,
    HarmonicDouble,
    ModHelmholtzSingle { omega: f64 },
}

impl KernelConfig {
    pub fn build(self) -> Result<KernelSpec, CliError> {
        let k = match self {
            KernelConfig::HarmonicSingle => KernelSpec::HarmonicSingle,
            KernelConfig::HarmonicDouble => KernelSpec::HarmonicDouble,
            KernelConfig::ModHelmholtzSingle { omega } => KernelSpec::ModHelmholtzSingle { omega },
        };
        k.validate().map_err(field("kernel.omega"))?;
        Ok(k)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DensityName {
    #[default]
    Unit,
    Oscillatory,
}

impl From<DensityName> for DensitySpec {
    fn from(d: DensityName) -> Self {
        match d {
            DensityName::Unit => DensitySpec::Unit,
            DensityName::Oscillatory => DensitySpec::Oscillatory,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub n_t: usize,
    pub n_phi: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axis {
    X,
    Y,
    Z,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    #[default]
    Exterior,
    Interior,
    Both,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum TargetConfig {
    /// Regular grid on the plane `axis = offset`. `extent` and `resolution`
    /// refer to the other two axes in increasing order, so `y` gives `(x, z)`.
    /// Endpoints are included.
    Plane {
        axis: Axis,
        offset: f64,
        extent: [[f64; 2]; 2],
        resolution: [usize; 2],
    },
    /// Points `γ(θ, φ) + d n(θ, φ)` for every listed distance and `[θ, φ]`
    /// pair; negative distances lie inside.
    RadialSweep {
        distances: Vec<f64>,
        angles: Vec<[f64; 2]>,
    },
    /// Uniform by volume in the shell `r_min ≤ |x| ≤ r_max`.
    Random {
        count: usize,
        bounding_shell: [f64; 2],
        seed: u64,
        #[serde(default)]
        side: Side,
    },
    /// Midpoint grid in `θ` and uniform grid in `φ` on a sphere.
    Shell {
        radius: f64,
        resolution: [usize; 2],
    },
    Explicit {
        points: Vec<[f64; 3]>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeConfig {
    pub a: f64,
    pub k_c: f64,
}

impl Default for ConeConfig {
    fn default() -> Self {
        let c = ConeParams::default();
        Self { a: c.a, k_c: c.k_c }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RootModelName {
    Bivariate,
    #[default]
    Tracking,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimateConfig {
    pub laguerre_nodes: usize,
    pub taylor_order: usize,
    pub root_model: RootModelName,
}

impl Default for EstimateConfig {
    fn default() -> Self {
        let o = EstimateOptions::default();
        Self {
            laguerre_nodes: o.laguerre_nodes,
            taylor_order: o.taylor_order,
            root_model: RootModelName::default(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// CSV destination; standard output when absent.
    pub path: Option<PathBuf>,
    /// Write zero in the runtime column so the file is reproducible.
    #[serde(default)]
    pub deterministic: bool,
}

fn field(name: &'static str) -> impl Fn(Error) -> CliError {
    move |e| CliError::Config(format!("{name}: {e}"))
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let cfg: Self = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text).map_err(|e| match e {
            CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration serializes")
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Config(m));
        if self.grid.n_t < 4 || self.grid.n_phi < 4 {
            return bad(format!(
                "grid: n_t and n_phi must be at least 4, got {} and {}",
                self.grid.n_t, self.grid.n_phi
            ));
        }
        self.surface.build()?;
        self.kernel.build()?;
        self.estimate_options()?;
        match &self.targets {
            TargetConfig::Plane {
                extent, resolution, ..
            } => {
                if resolution.contains(&0) {
                    return bad("targets.resolution: entries must be positive".into());
                }
                if extent.iter().flatten().any(|v| !v.is_finite()) {
                    return bad("targets.extent: entries must be finite".into());
                }
            }
            TargetConfig::RadialSweep { distances, angles } => {
                if distances
                    .iter()
                    .chain(angles.iter().flatten())
                    .any(|v| !v.is_finite())
                {
                    return bad("targets: distances and angles must be finite".into());
                }
            }
            TargetConfig::Random {
                count,
                bounding_shell: [lo, hi],
                ..
            } => {
                if *count == 0 {
                    return bad("targets.count: must be positive".into());
                }
                if !(*lo >= 0.0 && hi > lo && hi.is_finite()) {
                    return bad(format!(
                        "targets.bounding_shell: need 0 <= r_min < r_max, got [{lo}, {hi}]"
                    ));
                }
            }
            TargetConfig::Shell { radius, resolution } => {
                if !(*radius > 0.0 && radius.is_finite()) {
                    return bad(format!("targets.radius: must be positive, got {radius}"));
                }
                if resolution.contains(&0) {
                    return bad("targets.resolution: entries must be positive".into());
                }
            }
            TargetConfig::Explicit { points } => {
                if points.iter().flatten().any(|v| !v.is_finite()) {
                    return bad("targets.points: coordinates must be finite".into());
                }
            }
        }
        Ok(())
    }

    pub fn estimate_options(&self) -> Result<EstimateOptions, CliError> {
        let o = EstimateOptions {
            cone: ConeParams {
                a: self.cone.a,
                k_c: self.cone.k_c,
            },
            laguerre_nodes: self.estimate.laguerre_nodes,
            taylor_order: self.estimate.taylor_order,
            root_model: match self.estimate.root_model {
                RootModelName::Bivariate => RootModelKind::Bivariate,
                RootModelName::Tracking => RootModelKind::Tracking,
            },
            ..EstimateOptions::default()
        };
        if o.laguerre_nodes == 0 || o.taylor_order == 0 {
            return Err(CliError::Config(
                "estimate: laguerre_nodes and taylor_order must be positive".into(),
            ));
        }
        if !(o.cone.a > 0.0 && o.cone.k_c > 0.0) {
            return Err(CliError::Config("cone: a and k_c must be positive".into()));
        }
        Ok(o)
    }
}
