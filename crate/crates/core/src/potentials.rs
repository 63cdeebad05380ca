//! Layer-potential kernels, densities and the tensor-product evaluator.
//!
//! A layer potential is `u(x) = ∫ k(x, y) σ(y) / ‖y - x‖^{2p} dS(y)`. After
//! parametrization the smooth part `f = k σ ‖∂_t γ × ∂_φ γ‖` is integrated
//! against `1 / R^{2p}` with `R² = Σ (γ_i - x_i)²`.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::{CompensatedSum, QuadratureGrid};
use crate::special::HalfInteger;
use crate::surfaces::{Jet, SurfaceParam};
use crate::vec3::{self, V3};

type C = Complex64;

/// Upsampling factor of the reference grid in both directions.
pub const REFERENCE_UPSAMPLING: usize = 5;

/// Distance (relative to the surface scale) below which a node is treated as
/// coinciding with the target.
const SINGULAR_DISTANCE: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum KernelSpec {
    /// `1 / ‖y - x‖`.
    HarmonicSingle,
    /// `n_y · (y - x) / ‖y - x‖³` with the outward normal.
    HarmonicDouble,
    /// `e^{-ω‖y - x‖} / ‖y - x‖`.
    ModHelmholtzSingle { omega: f64 },
}

impl KernelSpec {
    pub fn p(&self) -> HalfInteger {
        match self {
            KernelSpec::HarmonicDouble => HalfInteger::THREE_HALVES,
            _ => HalfInteger::HALF,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            KernelSpec::HarmonicSingle => "harmonic-single",
            KernelSpec::HarmonicDouble => "harmonic-double",
            KernelSpec::ModHelmholtzSingle { .. } => "mod-helmholtz-single",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            KernelSpec::ModHelmholtzSingle { omega } if !(*omega > 0.0 && omega.is_finite()) => {
                Err(Error::InvalidArgument(format!(
                    "modified Helmholtz parameter must be positive, got {omega}"
                )))
            }
            _ => Ok(()),
        }
    }

    /// `k · ‖∂_t γ × ∂_φ γ‖` for a `t`-level jet, continued analytically.
    fn numerator_area(&self, jet: &Jet, x: &[f64; 3]) -> C {
        match self {
            KernelSpec::HarmonicSingle => jet.area_element(),
            KernelSpec::HarmonicDouble => {
                let r = vec3::sub(&jet.point, &x.map(C::from));
                vec3::dot(&jet.cross(), &r)
            }
            KernelSpec::ModHelmholtzSingle { omega } => {
                let r2 = squared_distance(&jet.point, x);
                (-r2.sqrt() * *omega).exp() * jet.area_element()
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum DensitySpec {
    #[default]
    Unit,
    /// `σ(θ, φ) = 1 + sin(6φ + θ) sin²θ`.
    Oscillatory,
}

impl DensitySpec {
    pub fn value(self, theta: C, phi: C) -> C {
        match self {
            DensitySpec::Unit => C::from(1.0),
            DensitySpec::Oscillatory => {
                let s = theta.sin();
                (phi * 6.0 + theta).sin() * s * s + 1.0
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            DensitySpec::Unit => "unit",
            DensitySpec::Oscillatory => "oscillatory",
        }
    }
}

/// `R² = Σ (γ_i - x_i)²` without conjugation.
pub fn squared_distance(point: &V3<C>, x: &[f64; 3]) -> C {
    let r = vec3::sub(point, &x.map(C::from));
    vec3::dot(&r, &r)
}

/// Smooth factor `f(t, φ) = k σ ‖∂_t γ × ∂_φ γ‖` at a possibly complex
/// parameter point.
pub fn integrand_f(
    surface: &SurfaceParam,
    kernel: KernelSpec,
    density: DensitySpec,
    t: C,
    phi: C,
    x: [f64; 3],
) -> C {
    let theta = surface.theta_map.theta_c(t);
    integrand_f_at_theta(surface, kernel, density, theta, phi, x)
}

/// [`integrand_f`] with the polar angle given directly; `f` is still the
/// `t`-level quantity.
pub fn integrand_f_at_theta(
    surface: &SurfaceParam,
    kernel: KernelSpec,
    density: DensitySpec,
    theta: C,
    phi: C,
    x: [f64; 3],
) -> C {
    let jet = surface.eval_t_at_theta(theta, phi);
    kernel.numerator_area(&jet, &x) * density.value(theta, phi)
}

/// Nearest grid node to a target point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NearestNode {
    pub index: usize,
    pub k: usize,
    pub l: usize,
    pub t: f64,
    pub phi: f64,
    pub distance: f64,
}

/// Surface data sampled on a tensor grid.
#[derive(Clone, Debug)]
pub struct Discretization {
    grid: QuadratureGrid,
    points: Vec<[f64; 3]>,
    /// `∂_t γ × ∂_φ γ`, pointing outward.
    cross: Vec<[f64; 3]>,
    area: Vec<f64>,
    sigma: Vec<f64>,
    weights: Vec<f64>,
    scale: f64,
}

impl Discretization {
    pub fn new(surface: &SurfaceParam, density: DensitySpec, grid: QuadratureGrid) -> Self {
        let len = grid.len();
        let mut points = Vec::with_capacity(len);
        let mut cross = Vec::with_capacity(len);
        let mut area = Vec::with_capacity(len);
        let mut sigma = Vec::with_capacity(len);
        let mut weights = Vec::with_capacity(len);
        let mut scale: f64 = 0.0;
        for node in grid.nodes() {
            let jet = surface.eval_t_real(node.t, node.phi);
            let p = jet.real_point();
            let c = jet.cross().map(|z| z.re);
            let theta = surface.theta_map.theta(node.t);
            scale = scale.max(vec3::norm(&p));
            points.push(p);
            area.push(vec3::norm(&c));
            cross.push(c);
            sigma.push(density.value(C::from(theta), C::from(node.phi)).re);
            weights.push(node.weight);
        }
        Self {
            grid,
            points,
            cross,
            area,
            sigma,
            weights,
            scale,
        }
    }

    pub fn grid(&self) -> &QuadratureGrid {
        &self.grid
    }

    pub fn points(&self) -> &[[f64; 3]] {
        &self.points
    }

    /// Largest `‖γ‖` over the grid nodes.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Exhaustive nearest-node search.
    pub fn nearest(&self, x: &[f64; 3]) -> NearestNode {
        let (index, d2) = self
            .points
            .iter()
            .map(|p| {
                let r = vec3::sub(p, x);
                vec3::dot(&r, &r)
            })
            .enumerate()
            .fold(
                (0, f64::INFINITY),
                |best, (i, d)| if d < best.1 { (i, d) } else { best },
            );
        let n_phi = self.grid.n_phi();
        let (k, l) = (index / n_phi, index % n_phi);
        NearestNode {
            index,
            k,
            l,
            t: self.grid.t_rule().nodes()[k],
            phi: self.grid.phi_rule().nodes()[l],
            distance: d2.sqrt(),
        }
    }

    pub fn min_distance(&self, x: &[f64; 3]) -> f64 {
        self.nearest(x).distance
    }

    /// Tensor quadrature of `f / R^{2p}`.
    pub fn evaluate(&self, kernel: KernelSpec, x: &[f64; 3]) -> Result<f64> {
        let mut sum = CompensatedSum::new();
        let tol = SINGULAR_DISTANCE * self.scale.max(1.0);
        for i in 0..self.points.len() {
            let r = vec3::sub(&self.points[i], x);
            let r2 = vec3::dot(&r, &r);
            let dist = r2.sqrt();
            if dist < tol {
                return Err(Error::SingularEvaluation {
                    index: i,
                    distance: dist,
                });
            }
            let ws = self.weights[i] * self.sigma[i];
            let v = match kernel {
                KernelSpec::HarmonicSingle => ws * self.area[i] / dist,
                KernelSpec::HarmonicDouble => ws * vec3::dot(&self.cross[i], &r) / (r2 * dist),
                KernelSpec::ModHelmholtzSingle { omega } => {
                    ws * self.area[i] * (-omega * dist).exp() / dist
                }
            };
            sum.add(v);
        }
        let v = sum.value();
        if !v.is_finite() {
            let n_phi = self.grid.n_phi();
            let i = self.nearest(x).index;
            let (k, l) = (i / n_phi, i % n_phi);
            return Err(Error::NonFiniteIntegrand {
                k,
                l,
                t: self.grid.t_rule().nodes()[k],
                phi: self.grid.phi_rule().nodes()[l],
            });
        }
        Ok(v)
    }
}

/// Evaluates one layer potential on a base grid and on its upsampled
/// reference grid. The reference discretization is built on first use.
#[derive(Debug)]
pub struct PotentialEvaluator {
    surface: SurfaceParam,
    kernel: KernelSpec,
    density: DensitySpec,
    base: Discretization,
    reference: OnceLock<Discretization>,
}

impl PotentialEvaluator {
    pub fn new(
        surface: &SurfaceParam,
        kernel: KernelSpec,
        density: DensitySpec,
        n_t: usize,
        n_phi: usize,
    ) -> Result<Self> {
        Self::with_grid(surface, kernel, density, QuadratureGrid::new(n_t, n_phi)?)
    }

    pub fn with_grid(
        surface: &SurfaceParam,
        kernel: KernelSpec,
        density: DensitySpec,
        grid: QuadratureGrid,
    ) -> Result<Self> {
        kernel.validate()?;
        surface.shape.validate()?;
        Ok(Self {
            surface: surface.clone(),
            kernel,
            density,
            base: Discretization::new(surface, density, grid),
            reference: OnceLock::new(),
        })
    }

    pub fn surface(&self) -> &SurfaceParam {
        &self.surface
    }

    pub fn kernel(&self) -> KernelSpec {
        self.kernel
    }

    pub fn density(&self) -> DensitySpec {
        self.density
    }

    pub fn grid(&self) -> &QuadratureGrid {
        self.base.grid()
    }

    pub fn discretization(&self) -> &Discretization {
        &self.base
    }

    pub fn reference_discretization(&self) -> &Discretization {
        self.reference.get_or_init(|| {
            let grid = self
                .base
                .grid()
                .upsampled(REFERENCE_UPSAMPLING)
                .expect("upsampling a valid grid");
            Discretization::new(&self.surface, self.density, grid)
        })
    }

    pub fn potential(&self, x: [f64; 3]) -> Result<f64> {
        self.base.evaluate(self.kernel, &x)
    }

    pub fn reference(&self, x: [f64; 3]) -> Result<f64> {
        self.reference_discretization().evaluate(self.kernel, &x)
    }

    /// `E^Q = |u_base - u_reference|`.
    pub fn measured_error(&self, x: [f64; 3]) -> Result<f64> {
        Ok((self.potential(x)? - self.reference(x)?).abs())
    }
}

pub fn potential_quadrature(
    surface: &SurfaceParam,
    kernel: KernelSpec,
    density: DensitySpec,
    grid: &QuadratureGrid,
    x: [f64; 3],
) -> Result<f64> {
    kernel.validate()?;
    Discretization::new(surface, density, grid.clone()).evaluate(kernel, &x)
}

pub fn reference_potential(
    surface: &SurfaceParam,
    kernel: KernelSpec,
    density: DensitySpec,
    grid: &QuadratureGrid,
    x: [f64; 3],
) -> Result<f64> {
    let fine = grid.upsampled(REFERENCE_UPSAMPLING)?;
    potential_quadrature(surface, kernel, density, &fine, x)
}

pub fn measured_error(
    surface: &SurfaceParam,
    kernel: KernelSpec,
    density: DensitySpec,
    grid: &QuadratureGrid,
    x: [f64; 3],
) -> Result<f64> {
    let base = potential_quadrature(surface, kernel, density, grid, x)?;
    let reference = reference_potential(surface, kernel, density, grid, x)?;
    Ok((base - reference).abs())
}
