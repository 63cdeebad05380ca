//! Analytic parametrizations `γ°(θ, φ)` of genus-0 surfaces, the polar maps
//! `θ(t)`, and local Taylor surrogates.
//!
//! Everything is evaluated in complex arithmetic so that the same code serves
//! the real quadrature nodes and the complex roots of the squared distance.
//! For real arguments the imaginary parts are exactly zero.

mod shapes;
mod taylor;

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::vec3::{self, V3};

pub use shapes::{Profile, Shape};
pub use taylor::{TaylorSurrogate, DEFAULT_ORDER as TAYLOR_DEFAULT_ORDER};

type C = Complex64;

/// Map from the Gauss-Legendre variable `t ∈ [-1, 1]` to the polar angle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum ThetaMap {
    /// `θ = (t + 1) π / 2`.
    Linear,
    /// `θ = π - arccos(t)`, i.e. `t = -cos θ`.
    #[default]
    Cosine,
}

impl ThetaMap {
    pub fn theta(self, t: f64) -> f64 {
        match self {
            ThetaMap::Linear => (t + 1.0) * FRAC_PI_2,
            ThetaMap::Cosine => PI - t.clamp(-1.0, 1.0).acos(),
        }
    }

    /// Analytic continuation; the cosine map uses the principal `arccos`.
    pub fn theta_c(self, t: C) -> C {
        match self {
            ThetaMap::Linear => (t + 1.0) * FRAC_PI_2,
            ThetaMap::Cosine => C::from(PI) - t.acos(),
        }
    }

    /// Inverse map for real `θ ∈ [0, π]`.
    pub fn t_of_theta(self, theta: f64) -> Result<f64> {
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::InvalidArgument(format!(
                "polar angle {theta} outside [0, pi]"
            )));
        }
        Ok(self.t_of_theta_unchecked(theta))
    }

    fn t_of_theta_unchecked(self, theta: f64) -> f64 {
        match self {
            ThetaMap::Linear => -1.0 + 2.0 * theta / PI,
            ThetaMap::Cosine => -theta.cos(),
        }
    }

    /// Inverse map for complex `θ`; branch-free for both maps.
    pub fn t_of_theta_c(self, theta: C) -> C {
        match self {
            ThetaMap::Linear => theta * (2.0 / PI) - 1.0,
            ThetaMap::Cosine => -theta.cos(),
        }
    }

    pub fn dtheta_dt(self, t: f64) -> f64 {
        match self {
            ThetaMap::Linear => FRAC_PI_2,
            ThetaMap::Cosine => 1.0 / (1.0 - t * t).sqrt(),
        }
    }

    /// `dθ/dt` expressed through `θ`, valid for complex `θ`.
    pub fn dtheta_dt_at_theta(self, theta: C) -> C {
        match self {
            ThetaMap::Linear => C::from(FRAC_PI_2),
            ThetaMap::Cosine => theta.sin().inv(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ThetaMap::Linear => "linear",
            ThetaMap::Cosine => "cosine",
        }
    }
}

impl std::str::FromStr for ThetaMap {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "linear" => Ok(ThetaMap::Linear),
            "cosine" | "cos" => Ok(ThetaMap::Cosine),
            other => Err(Error::InvalidArgument(format!(
                "unknown theta map '{other}'"
            ))),
        }
    }
}

/// A point on the surface with its two first partial derivatives.
///
/// `d_polar` is `∂/∂θ` for jets returned by [`Parametrization::eval`] and
/// `∂/∂t` for jets returned by the `t`-level methods of [`SurfaceParam`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    pub point: V3<C>,
    pub d_polar: V3<C>,
    pub d_phi: V3<C>,
}

impl Jet {
    pub fn real_point(&self) -> [f64; 3] {
        self.point.map(|c| c.re)
    }

    pub fn real_d_polar(&self) -> [f64; 3] {
        self.d_polar.map(|c| c.re)
    }

    pub fn real_d_phi(&self) -> [f64; 3] {
        self.d_phi.map(|c| c.re)
    }

    /// `∂_polar γ × ∂_φ γ` (not normalized).
    pub fn cross(&self) -> V3<C> {
        vec3::cross(&self.d_polar, &self.d_phi)
    }

    /// `‖∂_polar γ × ∂_φ γ‖` continued as the principal square root of the
    /// sum of squared components.
    pub fn area_element(&self) -> C {
        let c = self.cross();
        vec3::dot(&c, &c).sqrt()
    }

    fn scale_polar(mut self, factor: C) -> Self {
        self.d_polar = vec3::scale(&self.d_polar, factor);
        self
    }

    /// Conjugate every component.
    pub fn conj(&self) -> Self {
        let c = |v: &V3<C>| v.map(|z| z.conj());
        Jet {
            point: c(&self.point),
            d_polar: c(&self.d_polar),
            d_phi: c(&self.d_phi),
        }
    }
}

/// An analytic surface `γ°(θ, φ)` that accepts complex arguments.
pub trait Parametrization: Send + Sync {
    /// `γ°` and its partials `∂_θ γ°`, `∂_φ γ°`.
    fn eval(&self, theta: C, phi: C) -> Jet;

    /// `∂^j γ° / ∂θ^j` for `j = 0..=order` at a real point.
    ///
    /// The default uses the Cauchy integral formula on a small circle around
    /// `θ`, which is spectrally accurate for entire parametrizations.
    fn theta_derivatives(&self, theta: f64, phi: f64, order: usize) -> Vec<[f64; 3]> {
        cauchy_derivatives(|z| self.eval(z, C::from(phi)).point, theta, order)
    }

    /// `∂^j γ° / ∂φ^j` for `j = 0..=order` at a real point.
    fn phi_derivatives(&self, theta: f64, phi: f64, order: usize) -> Vec<[f64; 3]> {
        cauchy_derivatives(|z| self.eval(C::from(theta), z).point, phi, order)
    }
}

const CAUCHY_RADIUS: f64 = 0.3;
const CAUCHY_POINTS: usize = 48;

pub(crate) fn cauchy_derivatives<F>(f: F, center: f64, order: usize) -> Vec<[f64; 3]>
where
    F: Fn(C) -> V3<C>,
{
    let m = CAUCHY_POINTS;
    let samples: Vec<(C, V3<C>)> = (0..m)
        .map(|k| {
            let w = C::from_polar(1.0, 2.0 * PI * k as f64 / m as f64);
            (w, f(center + w * CAUCHY_RADIUS))
        })
        .collect();
    let mut out = Vec::with_capacity(order + 1);
    let mut factorial = 1.0;
    for j in 0..=order {
        if j > 0 {
            factorial *= j as f64;
        }
        let mut acc = [C::from(0.0); 3];
        for (w, v) in &samples {
            let wj = w.powi(-(j as i32));
            for i in 0..3 {
                acc[i] += v[i] * wj;
            }
        }
        let s = factorial / (m as f64 * CAUCHY_RADIUS.powi(j as i32));
        out.push(acc.map(|c| c.re * s));
    }
    out
}

/// A surface together with the polar map used to discretize it.
#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceParam {
    pub shape: Shape,
    pub theta_map: ThetaMap,
}

impl SurfaceParam {
    pub fn new(shape: Shape, theta_map: ThetaMap) -> Self {
        Self { shape, theta_map }
    }

    pub fn sphere(radius: f64, theta_map: ThetaMap) -> Self {
        Self::new(Shape::Sphere { radius }, theta_map)
    }

    /// Spheroid with equatorial semi-axis `a` and polar semi-axis `b`.
    pub fn spheroid(a: f64, b: f64, theta_map: ThetaMap) -> Self {
        Self::new(
            Shape::Axisymmetric {
                a: Profile::constant(a),
                b: Profile::constant(b),
            },
            theta_map,
        )
    }

    pub fn blob(theta_map: ThetaMap) -> Self {
        Self::new(Shape::Blob, theta_map)
    }

    pub fn is_axisymmetric(&self) -> bool {
        self.shape.is_axisymmetric()
    }

    /// `γ°(θ, φ)` with `θ`-partials.
    pub fn eval(&self, theta: C, phi: C) -> Jet {
        self.shape.eval(theta, phi)
    }

    /// `γ(t, φ) = γ°(θ(t), φ)` with `∂_t γ = ∂_θ γ° · dθ/dt`.
    pub fn eval_t(&self, t: C, phi: C) -> Jet {
        let theta = self.theta_map.theta_c(t);
        self.eval_t_at_theta(theta, phi)
    }

    /// `t`-level jet at a given polar angle; avoids the `arccos` branch when
    /// the polar angle is already known.
    pub fn eval_t_at_theta(&self, theta: C, phi: C) -> Jet {
        self.shape
            .eval(theta, phi)
            .scale_polar(self.theta_map.dtheta_dt_at_theta(theta))
    }

    /// Real `t`-level jet, the form used on quadrature nodes.
    pub fn eval_t_real(&self, t: f64, phi: f64) -> Jet {
        let theta = self.theta_map.theta(t);
        self.shape
            .eval(C::from(theta), C::from(phi))
            .scale_polar(C::from(self.theta_map.dtheta_dt(t)))
    }

    /// `‖∂_t γ × ∂_φ γ‖` at a real parameter point.
    pub fn area_element(&self, t: f64, phi: f64) -> f64 {
        if t.abs() >= 1.0 {
            return 0.0;
        }
        let jet = self.eval_t_real(t, phi);
        let c = jet.cross().map(|z| z.re);
        vec3::norm(&c)
    }

    /// Outward unit normal at a real parameter point (undefined at the poles).
    pub fn normal(&self, t: f64, phi: f64) -> [f64; 3] {
        let jet = self.eval_t_real(t, phi);
        let c = jet.cross().map(|z| z.re);
        let n = vec3::norm(&c);
        c.map(|v| v / n)
    }

    /// `κ = ‖∂_t γ‖ / ‖∂_φ γ‖`.
    pub fn grid_anisotropy(&self, t: f64, phi: f64) -> Result<f64> {
        let jet = self.eval_t_real(t, phi);
        let gt = vec3::norm(&jet.real_d_polar());
        let gp = vec3::norm(&jet.real_d_phi());
        if !(gp > 0.0) || !gt.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "grid anisotropy undefined at a pole (t={t})"
            )));
        }
        Ok(gt / gp)
    }

    /// Order-`q` Taylor surrogate centred at `(θ*, φ*)`.
    pub fn taylor_surrogate(&self, theta: f64, phi: f64, order: usize) -> Result<TaylorSurrogate> {
        TaylorSurrogate::new(&self.shape, theta, phi, order)
    }
}

impl Parametrization for SurfaceParam {
    fn eval(&self, theta: C, phi: C) -> Jet {
        self.shape.eval(theta, phi)
    }

    fn theta_derivatives(&self, theta: f64, phi: f64, order: usize) -> Vec<[f64; 3]> {
        self.shape.theta_derivatives(theta, phi, order)
    }

    fn phi_derivatives(&self, theta: f64, phi: f64, order: usize) -> Vec<[f64; 3]> {
        self.shape.phi_derivatives(theta, phi, order)
    }
}
