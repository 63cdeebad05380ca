//! Benchmark fixtures shared by the criterion targets.

use layerr::prelude::*;

/// Unit sphere with the cosine map.
pub fn unit_sphere() -> SurfaceParam {
    SurfaceParam::sphere(1.0, ThetaMap::Cosine)
}

/// Points on a ray through `(t, φ) = (0.3, 0.7)` at the given distances.
pub fn sphere_targets(distances: &[f64]) -> Vec<[f64; 3]> {
    let s = unit_sphere();
    let p = s.eval_t_real(0.3, 0.7).real_point();
    distances.iter().map(|d| p.map(|v| v * (1.0 + d))).collect()
}
