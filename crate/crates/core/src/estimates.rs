//! A-priori estimates of the tensor-product quadrature error.
//!
//! The error splits into a trapezoidal part `E^TZ` (azimuthal rule) and a
//! Gauss-Legendre part `E^GL` (polar rule). Each is an integral along the
//! surface of `|f G^p|` times an error kernel that decays exponentially with
//! the imaginary part of the complex root of `R²`. The slowly varying factor
//! `|f G^p|` is frozen at the root through the nearest grid node, and the
//! kernel integral is evaluated with Gauss-Laguerre quadrature after scaling
//! by its decay length.
//!
//! All kernels are evaluated in log space so that totals far below the
//! smallest normal double still come out as clean zeros instead of NaNs.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::potentials::{
    integrand_f_at_theta, DensitySpec, Discretization, KernelSpec, NearestNode, PotentialEvaluator,
};
use crate::quadrature::{gauss_laguerre, gauss_legendre, QuadratureGrid};
use crate::roots::{
    axisym_phi_root, default_initial, newton_root, sphere_theta_root, LinearRootModel, RootMethod,
    RootModelKind, RootSource, RootVariable,
};
use crate::special::{double_factorial_ratio, HalfInteger};
use crate::surfaces::{Shape, SurfaceParam, TaylorSurrogate, TAYLOR_DEFAULT_ORDER};
use crate::vec3;

type C = Complex64;

/// A tail shorter than this many decay lengths is integrated over its finite
/// span instead of being extended to infinity.
const TRUNCATION_DECAYS: f64 = 30.0;

/// Cone parameters: the trapezoidal contribution is dropped when
/// `ρ / A < (K_c π / n_t) · d_min`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConeParams {
    pub a: f64,
    pub k_c: f64,
}

impl Default for ConeParams {
    fn default() -> Self {
        Self { a: 1.0, k_c: 10.0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EstimateOptions {
    pub cone: ConeParams,
    /// Gauss-Laguerre nodes per tail integral.
    pub laguerre_nodes: usize,
    /// Order of the Taylor surrogate used for non-axisymmetric surfaces.
    pub taylor_order: usize,
    /// The trapezoidal term is skipped when `|G₂| > 1 / (skip_eps · scale)`.
    pub skip_eps: f64,
    /// How roots are extended away from the nearest grid node.
    pub root_model: RootModelKind,
}

impl Default for EstimateOptions {
    fn default() -> Self {
        Self {
            cone: ConeParams::default(),
            laguerre_nodes: 8,
            taylor_order: TAYLOR_DEFAULT_ORDER,
            skip_eps: 1e-12,
            root_model: RootModelKind::default(),
        }
    }
}

/// Why the trapezoidal contribution was not computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TzSkip {
    Cone,
    NoRoot,
    LargeGeometryFactor,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EstimateBreakdown {
    pub e_tz: f64,
    pub e_gl: f64,
    pub total: f64,
    pub tz_skipped_by_cone: bool,
    pub tz_skip: Option<TzSkip>,
    /// `φ₀(t*, x)`, absent when the trapezoidal term was skipped.
    pub phi0_star: Option<C>,
    /// `t₀(φ*, x)`.
    pub t0_star: C,
    pub t_root_method: RootMethod,
    pub closest_grid: (f64, f64),
    pub distance_to_grid: f64,
}

/// `est^TZ(φ₀, n, p) = 4π/Γ(p) n^{p-1} e^{-n|Im φ₀|}`.
pub fn est_tz(phi0: C, n: usize, p: HalfInteger) -> f64 {
    ln_est_tz(phi0, n, p).exp()
}

pub fn ln_est_tz(phi0: C, n: usize, p: HalfInteger) -> f64 {
    let n = n as f64;
    (4.0 * PI).ln() - p.ln_gamma() + (p.value() - 1.0) * n.ln() - n * phi0.im.abs()
}

/// `est^GL(t₀, n, p) = 4π/Γ(p) |(2n+1)/√(t₀²-1)|^{p-1} |t₀ + √(t₀²-1)|^{-(2n+1)}`
/// with `√(t₀²-1) = √(t₀+1) √(t₀-1)` on principal branches.
pub fn est_gl(t0: C, n: usize, p: HalfInteger) -> Result<f64> {
    Ok(ln_est_gl(t0, n, p)?.exp())
}

pub fn ln_est_gl(t0: C, n: usize, p: HalfInteger) -> Result<f64> {
    let s = (t0 + 1.0).sqrt() * (t0 - 1.0).sqrt();
    let m = (t0 + s).norm();
    if !(m > 1.0) || s.norm() == 0.0 {
        return Err(Error::SingularEstimate);
    }
    let k = (2 * n + 1) as f64;
    Ok((4.0 * PI).ln() - p.ln_gamma() + (p.value() - 1.0) * (k.ln() - s.norm().ln()) - k * m.ln())
}

/// Cone criterion; always `false` for surfaces without rotational symmetry.
pub fn cone_test(
    x: [f64; 3],
    surface: &SurfaceParam,
    disc: &Discretization,
    cone: ConeParams,
) -> bool {
    if !surface.is_axisymmetric() {
        return false;
    }
    let rho = x[0].hypot(x[1]);
    let n_t = disc.grid().n_t() as f64;
    rho / cone.a < cone.k_c * PI / n_t * disc.min_distance(&x)
}

fn inverse_derivative(r: &[C; 3], d: &[C; 3]) -> Result<C> {
    let der = vec3::dot(r, d) * 2.0;
    let size = 2.0
        * (vec3::dot(r, &r.map(|z| z.conj())).re * vec3::dot(d, &d.map(|z| z.conj())).re).sqrt();
    if !(der.norm() > 1e-14 * size) {
        return Err(Error::InfiniteGeometryFactor);
    }
    Ok(der.inv())
}

/// `G₁ = (∂_t R²)⁻¹` at complex `t` and real `φ`.
pub fn geometry_factor_1(surface: &SurfaceParam, t: C, phi: f64, x: [f64; 3]) -> Result<C> {
    geometry_factor_1_at_theta(surface, surface.theta_map.theta_c(t), phi, x)
}

/// [`geometry_factor_1`] with the polar angle given directly.
pub fn geometry_factor_1_at_theta(
    surface: &SurfaceParam,
    theta: C,
    phi: f64,
    x: [f64; 3],
) -> Result<C> {
    let jet = surface.eval_t_at_theta(theta, C::from(phi));
    inverse_derivative(&vec3::sub(&jet.point, &x.map(C::from)), &jet.d_polar)
}

/// `G₂ = (∂_φ R²)⁻¹` at real `t` and complex `φ`.
pub fn geometry_factor_2(surface: &SurfaceParam, t: f64, phi: C, x: [f64; 3]) -> Result<C> {
    let theta = surface.theta_map.theta(t);
    let jet = surface.eval(C::from(theta), phi);
    inverse_derivative(&vec3::sub(&jet.point, &x.map(C::from)), &jet.d_phi)
}

/// `E_fac^TZ(x, θ)` for an axisymmetric surface:
/// `D^{-p} (λ/√(λ²-1))^p (λ + √(λ²-1))^{-n_φ}` with
/// `D = ã² + ρ² + (b̃ - z)²`.
pub fn e_fac_tz_analytic(
    surface: &SurfaceParam,
    x: [f64; 3],
    theta: f64,
    n_phi: usize,
    p: HalfInteger,
) -> Result<f64> {
    Ok(ln_e_fac_tz_analytic(surface, x, theta, n_phi, p)?.exp())
}

pub fn ln_e_fac_tz_analytic(
    surface: &SurfaceParam,
    x: [f64; 3],
    theta: f64,
    n_phi: usize,
    p: HalfInteger,
) -> Result<f64> {
    let root = axisym_phi_root(surface, theta, x)?;
    let lambda = root.lambda.expect("closed-form root carries lambda");
    let (a, b) = surface.shape.profile_values(C::from(theta));
    let at = a.re * theta.sin();
    let bt = b.re * theta.cos();
    let rho = x[0].hypot(x[1]);
    let d = at * at + rho * rho + (bt - x[2]).powi(2);
    let pv = p.value();
    let sq = (lambda * lambda - 1.0).sqrt();
    Ok(-pv * d.ln() + pv * (lambda / sq).ln() - n_phi as f64 * lambda.acosh())
}

/// Simplified sphere estimate
/// `8π/Γ(p) n^{p-1} n!!/(n+1)!! a²/|ζ²-a²|^p δ^{-n}` for an even `n`
/// (`n_φ = n`, `n_t = n/2`, cosine map).
pub fn sphere_simplified(zeta: f64, a: f64, p: HalfInteger, n: usize) -> Result<f64> {
    if n < 2 || n % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "n must be even and >= 2, got {n}"
        )));
    }
    if !(a > 0.0) || !(zeta >= 0.0) {
        return Err(Error::InvalidArgument(
            "radius and distance must be positive".into(),
        ));
    }
    if zeta == a {
        return Err(Error::SingularEstimate);
    }
    let delta = if zeta > a { zeta / a } else { a / zeta };
    let nf = n as f64;
    let pv = p.value();
    let ln = (8.0 * PI).ln() - p.ln_gamma()
        + (pv - 1.0) * nf.ln()
        + double_factorial_ratio(n as u32).ln()
        + 2.0 * a.ln()
        - pv * (zeta * zeta - a * a).abs().ln()
        - nf * delta.ln();
    Ok(ln.exp())
}

/// `ln ∫ e^{g(s)} ds` over `[-span_lo, span_hi]` for a kernel peaked at
/// `s = 0` that decays on the length `decay`.
fn ln_tail_integral<F>(
    ln_kernel: F,
    decay: f64,
    span_lo: f64,
    span_hi: f64,
    nodes: usize,
) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut terms = Vec::with_capacity(6 * nodes);
    for (sign, span) in [(-1.0, span_lo), (1.0, span_hi)] {
        if !(span > 0.0) {
            continue;
        }
        if span >= TRUNCATION_DECAYS * decay {
            let rule = gauss_laguerre(nodes);
            for (xi, wi) in rule.iter() {
                // the surface ends at the span; nodes past it contribute nothing
                if xi * decay >= span {
                    continue;
                }
                terms.push(wi.ln() + xi + decay.ln() + ln_kernel(sign * xi * decay)?);
            }
        } else {
            let rule = gauss_legendre(3 * nodes);
            let half = 0.5 * span;
            for (si, wi) in rule.iter() {
                terms.push((wi * half).ln() + ln_kernel(sign * half * (1.0 + si))?);
            }
        }
    }
    Ok(log_sum_exp(&terms))
}

fn log_sum_exp(terms: &[f64]) -> f64 {
    let m = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return m;
    }
    m + terms.iter().map(|v| (v - m).exp()).sum::<f64>().ln()
}

/// Root of `R²` in `t` at the nearest grid node, with `ln|f G₁^p|` there.
struct TRoot {
    t0: C,
    ln_prefactor: f64,
    method: RootMethod,
}

/// Root of `R²` in `φ`, with `ln|f G₂^p|` there.
struct PhiRoot {
    phi0: C,
    ln_prefactor: f64,
}

/// Quadrature error estimator for one surface, kernel, density and grid.
#[derive(Clone, Debug)]
pub struct Estimator {
    surface: SurfaceParam,
    kernel: KernelSpec,
    density: DensitySpec,
    disc: Discretization,
    options: EstimateOptions,
}

impl Estimator {
    pub fn new(
        surface: &SurfaceParam,
        kernel: KernelSpec,
        density: DensitySpec,
        n_t: usize,
        n_phi: usize,
        options: EstimateOptions,
    ) -> Result<Self> {
        kernel.validate()?;
        surface.shape.validate()?;
        Self::check_options(&options)?;
        let grid = QuadratureGrid::new(n_t, n_phi)?;
        Ok(Self {
            surface: surface.clone(),
            kernel,
            density,
            disc: Discretization::new(surface, density, grid),
            options,
        })
    }

    /// Estimator sharing the surface, kernel, density and base grid of an
    /// evaluator.
    pub fn for_evaluator(eval: &PotentialEvaluator, options: EstimateOptions) -> Result<Self> {
        Self::check_options(&options)?;
        Ok(Self {
            surface: eval.surface().clone(),
            kernel: eval.kernel(),
            density: eval.density(),
            disc: eval.discretization().clone(),
            options,
        })
    }

    fn check_options(o: &EstimateOptions) -> Result<()> {
        if o.laguerre_nodes == 0 || o.taylor_order == 0 {
            return Err(Error::InvalidArgument(
                "Laguerre node count and Taylor order must be positive".into(),
            ));
        }
        if !(o.cone.a > 0.0 && o.cone.k_c > 0.0 && o.skip_eps > 0.0) {
            return Err(Error::InvalidArgument(
                "cone parameters must be positive".into(),
            ));
        }
        Ok(())
    }

    pub fn with_options(&self, options: EstimateOptions) -> Result<Self> {
        Self::check_options(&options)?;
        Ok(Self {
            options,
            ..self.clone()
        })
    }

    pub fn options(&self) -> &EstimateOptions {
        &self.options
    }

    pub fn discretization(&self) -> &Discretization {
        &self.disc
    }

    fn p(&self) -> HalfInteger {
        self.kernel.p()
    }

    fn ln_f(&self, theta: C, phi: C, x: [f64; 3]) -> f64 {
        integrand_f_at_theta(&self.surface, self.kernel, self.density, theta, phi, x)
            .norm()
            .ln()
    }

    /// Full estimate `E^TZ + E^GL` at an off-surface point.
    pub fn estimate(&self, x: [f64; 3]) -> Result<EstimateBreakdown> {
        let near = self.disc.nearest(&x);
        if near.distance < 1e-14 * self.disc.scale().max(1.0) {
            return Err(Error::SingularEvaluation {
                index: near.index,
                distance: near.distance,
            });
        }
        let kappa = self.surface.grid_anisotropy(near.t, near.phi)?;

        let troot = self.t_root(&near, x)?;
        let e_gl = self.gl_contribution(&near, x, &troot, kappa)?;

        let (e_tz, phi0_star, tz_skip) = match self.phi_root(&near, x) {
            Ok(root) => (
                self.tz_contribution(&near, x, &root, kappa)?,
                Some(root.phi0),
                None,
            ),
            Err(skip) => (0.0, None, Some(skip)),
        };

        Ok(EstimateBreakdown {
            e_tz,
            e_gl,
            total: e_tz + e_gl,
            tz_skipped_by_cone: tz_skip == Some(TzSkip::Cone),
            tz_skip,
            phi0_star,
            t0_star: troot.t0,
            t_root_method: troot.method,
            closest_grid: (near.t, near.phi),
            distance_to_grid: near.distance,
        })
    }

    fn t_root(&self, near: &NearestNode, x: [f64; 3]) -> Result<TRoot> {
        let map = self.surface.theta_map;
        let theta_star = map.theta(near.t);
        let scale = self.disc.scale();
        let p = self.p().value();
        let phi = C::from(near.phi);

        let surrogate;
        let (source, theta_root) = match &self.surface.shape {
            Shape::Sphere { radius } => (
                RootSource::Surface(&self.surface.shape),
                sphere_theta_root(*radius, near.phi, x),
            ),
            Shape::Axisymmetric { .. } => {
                let src = RootSource::Surface(&self.surface.shape);
                let r = newton_root(
                    src,
                    RootVariable::Theta,
                    near.phi,
                    x,
                    default_initial(theta_star),
                    scale,
                );
                (src, r)
            }
            Shape::Blob => {
                surrogate = TaylorSurrogate::new(
                    &self.surface.shape,
                    theta_star,
                    near.phi,
                    self.options.taylor_order,
                )?;
                let src = RootSource::Surrogate(&surrogate);
                let r = newton_root(
                    src,
                    RootVariable::Theta,
                    near.phi,
                    x,
                    default_initial(theta_star),
                    scale,
                );
                (src, r)
            }
        };

        match theta_root {
            Ok(root) => {
                let theta0 = root.value;
                let g1 = source_g1(source, near.phi, theta0, x, map.dtheta_dt_at_theta(theta0))?;
                Ok(TRoot {
                    t0: root.to_t(map)?.value,
                    ln_prefactor: self.ln_f(theta0, phi, x) + p * g1.norm().ln(),
                    method: root.method,
                })
            }
            Err(Error::NonConvergence { .. }) | Err(Error::NoRootExists(_)) => {
                let model = LinearRootModel::new(
                    &self.surface,
                    near.t,
                    near.phi,
                    x,
                    RootVariable::T,
                    C::from(0.0),
                )?;
                let t0 = model.linear(0.0)?;
                let theta0 = map.theta_c(t0);
                let g1 = geometry_factor_1_at_theta(&self.surface, theta0, near.phi, x)?;
                Ok(TRoot {
                    t0,
                    ln_prefactor: self.ln_f(theta0, phi, x) + p * g1.norm().ln(),
                    method: RootMethod::LinearModel,
                })
            }
            Err(e) => Err(e),
        }
    }

    fn phi_root(&self, near: &NearestNode, x: [f64; 3]) -> std::result::Result<PhiRoot, TzSkip> {
        let theta_star = self.surface.theta_map.theta(near.t);
        let theta = C::from(theta_star);
        let p = self.p().value();
        if self.surface.is_axisymmetric() {
            if cone_test(x, &self.surface, &self.disc, self.options.cone) {
                return Err(TzSkip::Cone);
            }
            let root = axisym_phi_root(&self.surface, theta_star, x).map_err(|_| TzSkip::NoRoot)?;
            let g2 = geometry_factor_2(&self.surface, near.t, root.value, x)
                .map_err(|_| TzSkip::LargeGeometryFactor)?;
            return Ok(PhiRoot {
                phi0: root.value,
                ln_prefactor: self.ln_f(theta, root.value, x) + p * g2.norm().ln(),
            });
        }
        let surrogate = TaylorSurrogate::new(
            &self.surface.shape,
            theta_star,
            near.phi,
            self.options.taylor_order,
        )
        .map_err(|_| TzSkip::NoRoot)?;
        let src = RootSource::Surrogate(&surrogate);
        let root = newton_root(
            src,
            RootVariable::Phi,
            theta_star,
            x,
            default_initial(near.phi),
            self.disc.scale(),
        )
        .map_err(|_| TzSkip::NoRoot)?;
        let (point, d_phi) = surrogate.eval_phi(root.value);
        let g2 = inverse_derivative(&vec3::sub(&point, &x.map(C::from)), &d_phi)
            .map_err(|_| TzSkip::LargeGeometryFactor)?;
        if g2.norm() > 1.0 / (self.options.skip_eps * self.disc.scale()) {
            return Err(TzSkip::LargeGeometryFactor);
        }
        Ok(PhiRoot {
            phi0: root.value,
            ln_prefactor: self.ln_f(theta, root.value, x) + p * g2.norm().ln(),
        })
    }

    fn gl_contribution(
        &self,
        near: &NearestNode,
        x: [f64; 3],
        root: &TRoot,
        kappa: f64,
    ) -> Result<f64> {
        let n_t = self.disc.grid().n_t();
        let n_phi = self.disc.grid().n_phi();
        let p = self.p();
        let model = LinearRootModel::with_kind(
            &self.surface,
            near.t,
            near.phi,
            x,
            RootVariable::T,
            root.t0,
            self.options.root_model,
        );
        let ln_int = match model {
            Ok(m) => ln_tail_integral(
                |s| ln_est_gl(m.eval(near.phi + s)?, n_t, p),
                kappa / (2.0 * n_t as f64),
                PI,
                PI,
                self.options.laguerre_nodes,
            )?,
            Err(Error::DegenerateModel) => {
                ln_est_gl(root.t0, n_t, p)? + (2.0 * PI / n_phi as f64).ln()
            }
            Err(e) => return Err(e),
        };
        Ok((root.ln_prefactor + ln_int).exp())
    }

    fn tz_contribution(
        &self,
        near: &NearestNode,
        x: [f64; 3],
        root: &PhiRoot,
        kappa: f64,
    ) -> Result<f64> {
        let n_t = self.disc.grid().n_t();
        let n_phi = self.disc.grid().n_phi();
        let p = self.p();
        let model = LinearRootModel::with_kind(
            &self.surface,
            near.t,
            near.phi,
            x,
            RootVariable::Phi,
            root.phi0,
            self.options.root_model,
        );
        let ln_int = match model {
            Ok(m) => ln_tail_integral(
                |s| Ok(ln_est_tz(m.eval(near.t + s)?, n_phi, p)),
                1.0 / (n_phi as f64 * kappa),
                1.0 + near.t,
                1.0 - near.t,
                self.options.laguerre_nodes,
            )?,
            Err(Error::DegenerateModel) => ln_est_tz(root.phi0, n_phi, p) + (2.0 / n_t as f64).ln(),
            Err(e) => return Err(e),
        };
        Ok((root.ln_prefactor + ln_int).exp())
    }
}

/// `G₁` from whichever evaluator produced the polar root; `dθ/dt` converts
/// the `θ`-derivative to a `t`-derivative.
fn source_g1(source: RootSource<'_>, phi: f64, theta: C, x: [f64; 3], dtheta_dt: C) -> Result<C> {
    let (point, d_theta) = match source {
        RootSource::Surface(s) => {
            let j = s.eval(theta, C::from(phi));
            (j.point, j.d_polar)
        }
        RootSource::Surrogate(m) => m.eval_theta(theta),
    };
    let d_t = vec3::scale(&d_theta, dtheta_dt);
    inverse_derivative(&vec3::sub(&point, &x.map(C::from)), &d_t)
}
