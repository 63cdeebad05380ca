//! Built-in experiment configurations.

use crate::config::*;

pub const NAMES: [&str; 5] = [
    "sphere-linear",
    "sphere-cosine",
    "spheroid-wall",
    "spheroid-random",
    "blob-shell",
];

fn sphere_plane(theta_map: MapName) -> ExperimentConfig {
    ExperimentConfig {
        surface: SurfaceConfig::Sphere {
            radius: 1.0,
            theta_map,
        },
        kernel: KernelConfig::HarmonicSingle,
        density: DensityName::Unit,
        grid: GridConfig { n_t: 30, n_phi: 60 },
        targets: TargetConfig::Plane {
            axis: Axis::Y,
            offset: 0.0,
            extent: [[-1.5, 1.5], [-1.5, 1.5]],
            resolution: [121, 121],
        },
        cone: ConeConfig::default(),
        estimate: EstimateConfig::default(),
        output: OutputConfig::default(),
    }
}

pub fn preset(name: &str) -> Option<ExperimentConfig> {
    Some(match name {
        "sphere-linear" => sphere_plane(MapName::Linear),
        "sphere-cosine" => sphere_plane(MapName::Cosine),
        "spheroid-wall" => ExperimentConfig {
            surface: SurfaceConfig::Spheroid {
                a: 1.0,
                b: 3.0,
                theta_map: MapName::Cosine,
            },
            kernel: KernelConfig::HarmonicSingle,
            density: DensityName::Oscillatory,
            grid: GridConfig { n_t: 40, n_phi: 80 },
            targets: TargetConfig::Plane {
                axis: Axis::Y,
                offset: 1.02,
                extent: [[-1.5, 1.5], [-3.5, 3.5]],
                resolution: [61, 141],
            },
            cone: ConeConfig::default(),
            estimate: EstimateConfig::default(),
            output: OutputConfig::default(),
        },
        "spheroid-random" => ExperimentConfig {
            surface: SurfaceConfig::Spheroid {
                a: 1.0,
                b: 3.0,
                theta_map: MapName::Cosine,
            },
            kernel: KernelConfig::HarmonicDouble,
            density: DensityName::Oscillatory,
            grid: GridConfig {
                n_t: 60,
                n_phi: 120,
            },
            targets: TargetConfig::Random {
                count: 300,
                bounding_shell: [1.02, 2.0],
                seed: 1,
                side: Side::Exterior,
            },
            cone: ConeConfig::default(),
            estimate: EstimateConfig::default(),
            output: OutputConfig::default(),
        },
        "blob-shell" => ExperimentConfig {
            surface: SurfaceConfig::Blob {
                theta_map: MapName::Cosine,
            },
            kernel: KernelConfig::ModHelmholtzSingle { omega: 3.0 },
            density: DensityName::Oscillatory,
            grid: GridConfig { n_t: 40, n_phi: 80 },
            targets: TargetConfig::Shell {
                radius: 1.46,
                resolution: [30, 60],
            },
            cone: ConeConfig::default(),
            estimate: EstimateConfig::default(),
            output: OutputConfig::default(),
        },
        _ => return None,
    })
}
