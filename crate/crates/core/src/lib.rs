//! Quadrature error estimates for layer potentials evaluated near smooth
//! surfaces of spherical topology.
//!
//! Surfaces are parametrized by a polar angle `θ = θ(t)` and an azimuth `φ`
//! and discretized with an `n_t`-point Gauss-Legendre rule in `t ∈ [-1, 1]`
//! and an `n_φ`-point trapezoidal rule in `φ ∈ [0, 2π)`. For an evaluation
//! point off the surface the crate computes
//!
//! * the layer potential itself with the tensor-product rule ([`potentials`]),
//! * the complex roots of the squared distance function that govern the
//!   exponential error decay ([`roots`]),
//! * an a-priori estimate of the quadrature error, split into the
//!   trapezoidal and Gauss-Legendre contributions ([`estimates`]).
//!
//! ```
//! use layerr::prelude::*;
//!
//! let surface = SurfaceParam::sphere(1.0, ThetaMap::Cosine);
//! let eval = PotentialEvaluator::new(
//!     &surface, KernelSpec::HarmonicSingle, DensitySpec::Unit, 30, 60,
//! ).unwrap();
//! let u = eval.potential([0.0, 0.0, 2.0]).unwrap();
//! assert!((u - 2.0 * std::f64::consts::PI).abs() < 1e-9);
//! ```

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// `is_multiple_of` is newer than the supported toolchain.
#![allow(clippy::manual_is_multiple_of)]

pub mod error;
pub mod estimates;
pub mod potentials;
pub mod quadrature;
pub mod roots;
pub mod special;
pub mod surfaces;
pub mod vec3;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Commonly used items.
pub mod prelude {
    pub use crate::error::{Error, Result};
    pub use crate::estimates::{
        cone_test, e_fac_tz_analytic, est_gl, est_tz, sphere_simplified, ConeParams,
        EstimateBreakdown, EstimateOptions, Estimator,
    };
    pub use crate::potentials::{
        integrand_f, measured_error, potential_quadrature, reference_potential, DensitySpec,
        Discretization, KernelSpec, PotentialEvaluator,
    };
    pub use crate::quadrature::{
        gauss_laguerre, gauss_legendre, trapezoidal, QuadratureGrid, Rule1D, RuleKind,
    };
    pub use crate::roots::{
        axisym_phi_root, circle_root, newton_root, sphere_theta_root, LinearRootModel, RootMethod,
        RootModelKind, RootResult, RootVariable,
    };
    pub use crate::special::HalfInteger;
    pub use crate::surfaces::{
        Jet, Parametrization, Profile, Shape, SurfaceParam, TaylorSurrogate, ThetaMap,
    };
    pub use num_complex::Complex64;
}
