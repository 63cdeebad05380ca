//! Complex roots of the squared distance `R²(w) = Σ (γ_i(w) - x_i)²` along
//! one parameter line of the surface.
//!
//! Closed forms exist for circles, for the azimuthal root of axisymmetric
//! surfaces and for the polar root of spheres. Everything else goes through a
//! one-dimensional complex Newton iteration, either on the exact surface or on
//! a Taylor surrogate. Roots come in conjugate pairs; the representative with
//! non-negative imaginary part is returned.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::surfaces::{Parametrization, Shape, SurfaceParam, TaylorSurrogate, ThetaMap};
use crate::vec3::{self, V3};

type C = Complex64;

/// Imaginary parts tried, in order, for the Newton initial guess.
pub const NEWTON_LADDER: [f64; 4] = [0.1, 0.2, 0.5, 1.0];
pub const NEWTON_MAX_ITER: usize = 60;
/// Largest Newton step in the angle variable.
pub const NEWTON_MAX_STEP: f64 = 0.5;
/// Iterates whose `Σ|γ_i - x_i|²` exceeds this multiple of `scale²` are
/// abandoned: the residual there is dominated by cancellation.
const NEWTON_MAGNITUDE_LIMIT: f64 = 1e8;
/// Convergence threshold on `|R²| / scale²`.
pub const NEWTON_TOL: f64 = 1e-13;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RootVariable {
    Theta,
    Phi,
    T,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RootMethod {
    AnalyticCircle,
    AnalyticAxisymPhi,
    AnalyticSphereTheta,
    Newton,
    LinearModel,
    Combined,
}

impl RootMethod {
    pub fn is_analytic(self) -> bool {
        matches!(
            self,
            RootMethod::AnalyticCircle
                | RootMethod::AnalyticAxisymPhi
                | RootMethod::AnalyticSphereTheta
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RootResult {
    pub value: C,
    pub variable: RootVariable,
    /// The real parameter held fixed along the line.
    pub fixed_coordinate: f64,
    /// `λ > 1` of the closed-form roots.
    pub lambda: Option<f64>,
    pub method: RootMethod,
    /// `|R²(value)|` on the evaluator that produced the root.
    pub residual: f64,
}

impl RootResult {
    pub fn conj(&self) -> Self {
        Self {
            value: self.value.conj(),
            ..*self
        }
    }

    /// Maps a polar-angle root to the quadrature variable `t`.
    pub fn to_t(&self, map: ThetaMap) -> Result<Self> {
        if self.variable != RootVariable::Theta {
            return Err(Error::InvalidArgument(
                "only polar-angle roots map to t".into(),
            ));
        }
        Ok(Self {
            value: canonical(map.t_of_theta_c(self.value)),
            variable: RootVariable::T,
            ..*self
        })
    }
}

fn canonical(z: C) -> C {
    if z.im < 0.0 {
        z.conj()
    } else {
        z
    }
}

/// `center + i ln(λ + √(λ² - 1))`.
fn lambda_root(center: f64, lambda: f64) -> C {
    C::new(center, lambda.acosh())
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda.is_finite() && lambda > 1.0 {
        Ok(())
    } else {
        Err(Error::NoRootExists("evaluation point lies on the curve"))
    }
}

/// Azimuthal root for the circle of radius `a` in the plane `z = 0`.
pub fn circle_root(a: f64, x: [f64; 3]) -> Result<RootResult> {
    if !(a > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "radius must be positive, got {a}"
        )));
    }
    let rho = x[0].hypot(x[1]);
    if rho == 0.0 {
        return Err(Error::NoRootExists("point on the symmetry axis"));
    }
    let lambda = (a * a + vec3::dot(&x, &x)) / (2.0 * a * rho);
    check_lambda(lambda)?;
    let value = lambda_root(x[1].atan2(x[0]), lambda);
    let p = [value.cos() * a, value.sin() * a, C::from(0.0)];
    Ok(RootResult {
        value,
        variable: RootVariable::Phi,
        fixed_coordinate: 0.0,
        lambda: Some(lambda),
        method: RootMethod::AnalyticCircle,
        residual: crate::potentials::squared_distance(&p, &x).norm(),
    })
}

/// Azimuthal root `φ₀(θ̄)` of an axisymmetric surface.
pub fn axisym_phi_root(surface: &SurfaceParam, theta_bar: f64, x: [f64; 3]) -> Result<RootResult> {
    if !surface.is_axisymmetric() {
        return Err(Error::InvalidArgument(
            "closed-form azimuthal root needs an axisymmetric surface".into(),
        ));
    }
    let s = theta_bar.sin();
    if !(s > 1e-14) || theta_bar >= std::f64::consts::PI {
        return Err(Error::NoRootExists("R^2 is independent of phi at a pole"));
    }
    let rho = x[0].hypot(x[1]);
    if rho == 0.0 {
        return Err(Error::NoRootExists("point on the symmetry axis"));
    }
    let (a, b) = surface.shape.profile_values(C::from(theta_bar));
    let at = a.re * s;
    let bt = b.re * theta_bar.cos();
    let lambda = (at * at + rho * rho + (bt - x[2]).powi(2)) / (2.0 * at * rho);
    check_lambda(lambda)?;
    let value = lambda_root(x[1].atan2(x[0]), lambda);
    let residual = residual_on_surface(&surface.shape, RootVariable::Phi, theta_bar, value, &x);
    Ok(RootResult {
        value,
        variable: RootVariable::Phi,
        fixed_coordinate: theta_bar,
        lambda: Some(lambda),
        method: RootMethod::AnalyticAxisymPhi,
        residual,
    })
}

/// Polar root `θ₀(φ̄)` of the sphere of radius `a` centred at the origin.
pub fn sphere_theta_root(a: f64, phi_bar: f64, x: [f64; 3]) -> Result<RootResult> {
    if !(a > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "radius must be positive, got {a}"
        )));
    }
    let xt = x[0] * phi_bar.cos() + x[1] * phi_bar.sin();
    let den = xt.hypot(x[2]);
    if den == 0.0 {
        return Err(Error::NoRootExists("R^2 is constant in theta"));
    }
    let lambda = (a * a + vec3::dot(&x, &x)) / (2.0 * a * den);
    check_lambda(lambda)?;
    let value = lambda_root(xt.atan2(x[2]), lambda);
    let residual = residual_on_surface(
        &Shape::Sphere { radius: a },
        RootVariable::Theta,
        phi_bar,
        value,
        &x,
    );
    Ok(RootResult {
        value,
        variable: RootVariable::Theta,
        fixed_coordinate: phi_bar,
        lambda: Some(lambda),
        method: RootMethod::AnalyticSphereTheta,
        residual,
    })
}

/// Where Newton evaluates `R²` and its derivative.
#[derive(Clone, Copy)]
pub enum RootSource<'a> {
    Surface(&'a dyn Parametrization),
    Surrogate(&'a TaylorSurrogate),
}

impl RootSource<'_> {
    /// `(R²(w), dR²/dw)` along the line selected by `variable`.
    fn r2(&self, variable: RootVariable, fixed: f64, w: C, x: &[f64; 3]) -> (C, C) {
        let (f, df, _) = self.r2_with_magnitude(variable, fixed, w, x);
        (f, df)
    }

    /// As [`Self::r2`], plus `Σ|γ_i - x_i|²`.
    fn r2_with_magnitude(
        &self,
        variable: RootVariable,
        fixed: f64,
        w: C,
        x: &[f64; 3],
    ) -> (C, C, f64) {
        let (point, deriv): (V3<C>, V3<C>) = match (self, variable) {
            (RootSource::Surface(s), RootVariable::Theta) => {
                let j = s.eval(w, C::from(fixed));
                (j.point, j.d_polar)
            }
            (RootSource::Surface(s), _) => {
                let j = s.eval(C::from(fixed), w);
                (j.point, j.d_phi)
            }
            (RootSource::Surrogate(m), RootVariable::Theta) => m.eval_theta(w),
            (RootSource::Surrogate(m), _) => m.eval_phi(w),
        };
        let r = vec3::sub(&point, &x.map(C::from));
        let magnitude = r.iter().map(|c| c.norm_sqr()).sum();
        (vec3::dot(&r, &r), vec3::dot(&r, &deriv) * 2.0, magnitude)
    }

    /// `|R²(w)|` along the line selected by `variable`.
    pub fn residual(&self, variable: RootVariable, fixed: f64, w: C, x: [f64; 3]) -> f64 {
        self.r2(variable, fixed, w, &x).0.norm()
    }
}

fn residual_on_surface(
    surface: &dyn Parametrization,
    variable: RootVariable,
    fixed: f64,
    w: C,
    x: &[f64; 3],
) -> f64 {
    RootSource::Surface(surface)
        .r2(variable, fixed, w, x)
        .0
        .norm()
}

/// Complex Newton iteration for a root of `R²` in `θ` or `φ`.
///
/// `initial` is tried first; on failure the imaginary part is replaced by
/// each entry of [`NEWTON_LADDER`] in turn. Steps are capped at
/// [`NEWTON_MAX_STEP`]. `scale` normalizes the residual tolerance.
pub fn newton_root(
    source: RootSource<'_>,
    variable: RootVariable,
    fixed: f64,
    x: [f64; 3],
    initial: C,
    scale: f64,
) -> Result<RootResult> {
    if variable == RootVariable::T {
        return Err(Error::InvalidArgument(
            "Newton works in theta or phi, not t".into(),
        ));
    }
    let tol = NEWTON_TOL * scale * scale;
    let mut best = f64::INFINITY;
    let starts =
        std::iter::once(initial).chain(NEWTON_LADDER.iter().map(|&im| C::new(initial.re, im)));
    for start in starts {
        let mut w = start;
        for _ in 0..NEWTON_MAX_ITER {
            let (f, df, magnitude) = source.r2_with_magnitude(variable, fixed, w, &x);
            if !(magnitude <= NEWTON_MAGNITUDE_LIMIT * scale * scale) {
                break;
            }
            let res = f.norm();
            if res.is_finite() {
                best = best.min(res);
            }
            if res < tol {
                // a real root means the point sits on the surface line; it is
                // double, so Newton only resolves it to about √tol
                if w.im.abs() <= 10.0 * NEWTON_TOL.sqrt() {
                    break;
                }
                return Ok(RootResult {
                    value: canonical(w),
                    variable,
                    fixed_coordinate: fixed,
                    lambda: None,
                    method: RootMethod::Newton,
                    residual: res,
                });
            }
            if df.norm() == 0.0 || !df.is_finite() {
                break;
            }
            let mut step = f / df;
            if step.norm() > NEWTON_MAX_STEP {
                step *= NEWTON_MAX_STEP / step.norm();
            }
            w -= step;
            if !w.is_finite() || w.im.abs() > 50.0 {
                break;
            }
        }
    }
    Err(Error::NonConvergence {
        best_residual: best,
    })
}

/// Linearized root models used to extend one accurate root along the other
/// parameter direction.
///
/// For the `t`-root as a function of `φ` the bivariate model is
/// `t₀ᴸ(φ) = t* - b/2c + i √(4ac - b²) / 2c` with `q = r + ∂_φγ Δφ`,
/// `a = |q|²`, `b = 2 q·∂_tγ`, `c = |∂_tγ|²`. The `φ`-root model swaps the
/// roles of the two directions. The accurate root is matched at the center:
/// `t̃₀(φ) = t₀* - t₀ᴸ(φ*) + t₀ᴸ(φ)`.
///
/// The tracking variant takes `q` and `∂_tγ` from the surface at the real
/// point `(t*, φ)` instead of extrapolating them linearly, so only the complex
/// direction is linearized.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearRootModel {
    variable: RootVariable,
    t_star: f64,
    phi_star: f64,
    x: [f64; 3],
    r: [f64; 3],
    g_t: [f64; 3],
    g_phi: [f64; 3],
    root_star: C,
    offset: C,
    track: Option<SurfaceParam>,
}

/// Which linearization a [`LinearRootModel`] uses away from its center.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum RootModelKind {
    Bivariate,
    #[default]
    Tracking,
}

impl LinearRootModel {
    /// Bivariate model. `variable` is [`RootVariable::T`] for `t̃₀(φ)` or
    /// [`RootVariable::Phi`] for `φ̃₀(t)`.
    pub fn new(
        surface: &SurfaceParam,
        t_star: f64,
        phi_star: f64,
        x: [f64; 3],
        variable: RootVariable,
        root_star: C,
    ) -> Result<Self> {
        Self::build(
            surface,
            t_star,
            phi_star,
            x,
            variable,
            root_star,
            RootModelKind::Bivariate,
        )
    }

    pub fn with_kind(
        surface: &SurfaceParam,
        t_star: f64,
        phi_star: f64,
        x: [f64; 3],
        variable: RootVariable,
        root_star: C,
        kind: RootModelKind,
    ) -> Result<Self> {
        Self::build(surface, t_star, phi_star, x, variable, root_star, kind)
    }

    fn build(
        surface: &SurfaceParam,
        t_star: f64,
        phi_star: f64,
        x: [f64; 3],
        variable: RootVariable,
        root_star: C,
        kind: RootModelKind,
    ) -> Result<Self> {
        if variable == RootVariable::Theta {
            return Err(Error::InvalidArgument(
                "linear root model is built in t or phi".into(),
            ));
        }
        let jet = surface.eval_t_real(t_star, phi_star);
        let mut m = Self {
            variable,
            t_star,
            phi_star,
            x,
            r: vec3::sub(&jet.real_point(), &x),
            g_t: jet.real_d_polar(),
            g_phi: jet.real_d_phi(),
            root_star,
            offset: C::from(0.0),
            track: match kind {
                RootModelKind::Bivariate => None,
                RootModelKind::Tracking => Some(surface.clone()),
            },
        };
        let linear_star = m.linear(0.0)?;
        m.offset = root_star - linear_star;
        Ok(m)
    }

    /// Root of the unmatched model as a function of the offset in the other
    /// variable.
    pub fn linear(&self, delta: f64) -> Result<C> {
        let center = match self.variable {
            RootVariable::Phi => self.phi_star,
            _ => self.t_star,
        };
        if let (Some(surface), true) = (&self.track, delta != 0.0) {
            let (t, phi) = match self.variable {
                RootVariable::Phi => (self.t_star + delta, self.phi_star),
                _ => (self.t_star, self.phi_star + delta),
            };
            if !(t.abs() < 1.0) {
                return Err(Error::DegenerateModel);
            }
            let jet = surface.eval_t_real(t, phi);
            let q = vec3::sub(&jet.real_point(), &self.x);
            let g = match self.variable {
                RootVariable::Phi => jet.real_d_phi(),
                _ => jet.real_d_polar(),
            };
            return quadratic_root(&q, &g, center);
        }
        let (root_dir, shift_dir) = match self.variable {
            RootVariable::Phi => (&self.g_phi, &self.g_t),
            _ => (&self.g_t, &self.g_phi),
        };
        let q = [0, 1, 2].map(|i| self.r[i] + shift_dir[i] * delta);
        quadratic_root(&q, root_dir, center)
    }

    /// Matched model value at the other coordinate `v` (`φ` for the `t`-root,
    /// `t` for the `φ`-root).
    pub fn eval(&self, v: f64) -> Result<C> {
        let center = match self.variable {
            RootVariable::Phi => self.t_star,
            _ => self.phi_star,
        };
        if v == center {
            return Ok(self.root_star);
        }
        Ok(self.offset + self.linear(v - center)?)
    }

    pub fn root_star(&self) -> C {
        self.root_star
    }

    pub fn variable(&self) -> RootVariable {
        self.variable
    }

    pub fn kind(&self) -> RootModelKind {
        if self.track.is_some() {
            RootModelKind::Tracking
        } else {
            RootModelKind::Bivariate
        }
    }
}

/// Root with non-negative imaginary part of `|q + g s|² = 0` in `s`, shifted
/// by `center`.
fn quadratic_root(q: &[f64; 3], g: &[f64; 3], center: f64) -> Result<C> {
    let a = vec3::dot(q, q);
    let b = 2.0 * vec3::dot(q, g);
    let c = vec3::dot(g, g);
    if !(c > 0.0) {
        return Err(Error::DegenerateModel);
    }
    // 4ac - b² ≥ 0 by Cauchy-Schwarz; tiny negatives are rounding
    let disc = 4.0 * a * c - b * b;
    if disc < -1e-12 * 4.0 * a * c {
        return Err(Error::DegenerateModel);
    }
    Ok(C::new(
        center - b / (2.0 * c),
        disc.max(0.0).sqrt() / (2.0 * c),
    ))
}

/// Default Newton initial guess in `θ` or `φ` from a real grid parameter.
pub fn default_initial(center: f64) -> C {
    C::new(center, NEWTON_LADDER[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, LN_2, PI};

    #[test]
    fn circle_examples() {
        let r = circle_root(1.0, [2.0, 0.0, 0.0]).unwrap();
        assert!((r.value - C::new(0.0, LN_2)).norm() < 1e-15);
        assert_eq!(r.lambda, Some(1.25));
        assert!(r.residual < 1e-12);
        let r = circle_root(1.0, [0.0, 3.0, 0.0]).unwrap();
        assert!((r.value - C::new(FRAC_PI_2, 3f64.ln())).norm() < 1e-14);
        assert!(r.residual < 1e-12);
        assert!(matches!(
            circle_root(1.0, [0.0, 0.0, 1.0]),
            Err(Error::NoRootExists(_))
        ));
    }

    #[test]
    fn axisym_examples() {
        let s = SurfaceParam::sphere(1.0, ThetaMap::Cosine);
        let r = axisym_phi_root(&s, FRAC_PI_2, [2.0, 0.0, 0.0]).unwrap();
        assert!((r.value - C::new(0.0, LN_2)).norm() < 1e-15);
        let sp = SurfaceParam::spheroid(1.0, 3.0, ThetaMap::Cosine);
        let r = axisym_phi_root(&sp, FRAC_PI_2, [0.0, 2.0, 0.0]).unwrap();
        assert!((r.value - C::new(FRAC_PI_2, LN_2)).norm() < 1e-15);
        assert!(r.residual < 1e-12);
        assert!(axisym_phi_root(&sp, 0.0, [1.0, 2.0, 0.0]).is_err());
        assert!(axisym_phi_root(&sp, PI, [1.0, 2.0, 0.0]).is_err());
        assert!(
            axisym_phi_root(&SurfaceParam::blob(ThetaMap::Cosine), 1.0, [2.0, 0.0, 0.0]).is_err()
        );
    }

    #[test]
    fn sphere_theta_examples() {
        for phi in [0.0, 1.3, 4.0] {
            let r = sphere_theta_root(1.0, phi, [0.0, 0.0, 2.0]).unwrap();
            assert!((r.value - C::new(0.0, LN_2)).norm() < 1e-15);
            let r = sphere_theta_root(1.0, phi, [0.0, 0.0, 0.5]).unwrap();
            assert!((r.value - C::new(0.0, LN_2)).norm() < 1e-15);
        }
        let r = sphere_theta_root(1.0, 0.0, [2.0, 0.0, 0.0]).unwrap();
        assert!((r.value - C::new(FRAC_PI_2, LN_2)).norm() < 1e-15);
        assert!(r.residual < 1e-12);
        assert!(sphere_theta_root(1.0, 0.0, [0.0, 2.0, 0.0]).is_err());
    }

    #[test]
    fn newton_matches_corollary() {
        let s = Shape::Sphere { radius: 1.0 };
        let r = newton_root(
            RootSource::Surface(&s),
            RootVariable::Theta,
            0.0,
            [0.0, 0.0, 2.0],
            C::new(0.0, 0.1),
            1.0,
        )
        .unwrap();
        assert!((r.value - C::new(0.0, LN_2)).norm() < 1e-10);
        assert_eq!(r.method, RootMethod::Newton);
    }

    #[test]
    fn newton_phi_on_spheroid() {
        let sp = SurfaceParam::spheroid(1.0, 3.0, ThetaMap::Cosine);
        let x = [0.0, 2.0, 0.0];
        let exact = axisym_phi_root(&sp, FRAC_PI_2, x).unwrap();
        let r = newton_root(
            RootSource::Surface(&sp),
            RootVariable::Phi,
            FRAC_PI_2,
            x,
            default_initial(FRAC_PI_2),
            3.0,
        )
        .unwrap();
        assert!((r.value - exact.value).norm() < 1e-10);
    }

    #[test]
    fn map_to_t() {
        let r = sphere_theta_root(1.0, 0.0, [0.0, 0.0, 2.0]).unwrap();
        let t = r.to_t(ThetaMap::Cosine).unwrap();
        // -cos(i ln 2) = -(2 + 1/2)/2
        assert!((t.value - C::from(-1.25)).norm() < 1e-15);
        let r = sphere_theta_root(1.0, 0.0, [1.1, 0.0, 0.0]).unwrap();
        let t = r.to_t(ThetaMap::Cosine).unwrap();
        assert!(t.value.im > 0.0);
        assert!(t.value.re.abs() < 1e-15);
    }

    #[test]
    fn linear_model_matches_star() {
        let s = SurfaceParam::spheroid(1.0, 3.0, ThetaMap::Cosine);
        let x = [1.1, 0.2, 0.5];
        let root = C::new(0.1, 0.07);
        let m = LinearRootModel::new(&s, 0.15, 0.2, x, RootVariable::T, root).unwrap();
        assert_eq!(m.eval(0.2).unwrap(), root);
        let m = LinearRootModel::new(&s, 0.15, 0.2, x, RootVariable::Phi, root).unwrap();
        assert_eq!(m.eval(0.15).unwrap(), root);
    }

    #[test]
    fn linear_model_normal_distance() {
        let s = SurfaceParam::sphere(1.0, ThetaMap::Cosine);
        for d in [0.05, 0.1, 0.2] {
            let (t, phi) = (0.3, 0.7);
            let p = s.eval_t_real(t, phi).real_point();
            let n = s.normal(t, phi);
            let x = [0, 1, 2].map(|i| p[i] + d * n[i]);
            let m = LinearRootModel::new(&s, t, phi, x, RootVariable::T, C::from(0.0)).unwrap();
            let lin = m.linear(0.0).unwrap();
            let g = crate::vec3::norm(&s.eval_t_real(t, phi).real_d_polar());
            assert!((lin.im - d / g).abs() < 1e-12);
            let exact = sphere_theta_root(1.0, phi, x)
                .unwrap()
                .to_t(ThetaMap::Cosine)
                .unwrap();
            assert!((lin.im - exact.value.im).abs() < 0.1 * exact.value.im);
        }
    }
}
