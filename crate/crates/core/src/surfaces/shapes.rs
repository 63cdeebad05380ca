use std::f64::consts::PI;

use num_complex::Complex64;

use super::{cauchy_derivatives, Jet, Parametrization};
use crate::error::{Error, Result};

type C = Complex64;

/// Smooth profile `a(θ) = Σ_k c_k cos(kθ)`; even in `θ` so the surface closes
/// smoothly at the poles.
#[derive(Clone, Debug, PartialEq)]
pub struct Profile {
    coeffs: Vec<f64>,
}

impl Profile {
    pub fn constant(c: f64) -> Self {
        Self { coeffs: vec![c] }
    }

    /// Cosine series; rejects profiles that are not positive on `[0, π]`.
    pub fn cosine_series(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() || coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument(
                "profile needs at least one finite coefficient".into(),
            ));
        }
        let p = Self { coeffs };
        let min = (0..=512)
            .map(|i| p.value(PI * i as f64 / 512.0))
            .fold(f64::INFINITY, f64::min);
        if !(min > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "profile is not positive on [0, pi] (min {min})"
            )));
        }
        Ok(p)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn value(&self, theta: f64) -> f64 {
        self.derivative(C::from(theta), 0).re
    }

    /// `d^j a / dθ^j` at a complex angle.
    pub fn derivative(&self, theta: C, j: usize) -> C {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, &c)| {
                let kf = k as f64;
                c * kf.powi(j as i32) * cos_deriv(theta * kf, j)
            })
            .fold(C::from(0.0), |a, b| a + b)
    }
}

/// `d^j/dx^j cos(x)`.
fn cos_deriv(x: C, j: usize) -> C {
    match j % 4 {
        0 => x.cos(),
        1 => -x.sin(),
        2 => -x.cos(),
        _ => x.sin(),
    }
}

/// `d^j/dx^j sin(x)`.
fn sin_deriv(x: C, j: usize) -> C {
    match j % 4 {
        0 => x.sin(),
        1 => x.cos(),
        2 => -x.sin(),
        _ => -x.cos(),
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `1/4 √(105 / 2π)`, normalization of `Re Y₃²`.
const Y32_NORM: f64 = 1.021_985_476_433_282_6;

/// The surface families.
#[derive(Clone, Debug, PartialEq)]
pub enum Shape {
    Sphere {
        radius: f64,
    },
    /// `(a(θ) sinθ cosφ, a(θ) sinθ sinφ, b(θ) cosθ)`.
    Axisymmetric {
        a: Profile,
        b: Profile,
    },
    /// `ρ(θ, φ) (cosφ sinθ, sinφ sinθ, cosθ)` with
    /// `ρ = 0.8 + 0.2 exp(-3 Re Y₃²(θ, φ))`.
    Blob,
}

impl Shape {
    pub fn is_axisymmetric(&self) -> bool {
        !matches!(self, Shape::Blob)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Shape::Sphere { radius } if !(*radius > 0.0 && radius.is_finite()) => Err(
                Error::InvalidArgument(format!("sphere radius must be positive, got {radius}")),
            ),
            Shape::Axisymmetric { a, b } => {
                for p in [a, b] {
                    Profile::cosine_series(p.coeffs.clone())?;
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Profiles `(a, b)`; `None` for the blob.
    pub fn profiles(&self) -> Option<(Profile, Profile)> {
        match self {
            Shape::Sphere { radius } => {
                Some((Profile::constant(*radius), Profile::constant(*radius)))
            }
            Shape::Axisymmetric { a, b } => Some((a.clone(), b.clone())),
            Shape::Blob => None,
        }
    }

    /// `(a(θ), b(θ))` at a complex angle; panics for the blob.
    pub(crate) fn profile_values(&self, theta: C) -> (C, C) {
        match self {
            Shape::Sphere { radius } => (C::from(*radius), C::from(*radius)),
            Shape::Axisymmetric { a, b } => (a.derivative(theta, 0), b.derivative(theta, 0)),
            Shape::Blob => panic!("blob has no axisymmetric profile"),
        }
    }

    /// Blob radius `ρ` with `∂_θρ`, `∂_φρ`.
    pub fn blob_radius(theta: C, phi: C) -> (C, C, C) {
        let (st, ct) = (theta.sin(), theta.cos());
        let (c2, s2) = ((phi * 2.0).cos(), (phi * 2.0).sin());
        let y = c2 * st * st * ct * Y32_NORM;
        let y_t = c2 * (st * ct * ct * 2.0 - st * st * st) * Y32_NORM;
        let y_p = s2 * st * st * ct * (-2.0 * Y32_NORM);
        let e = (y * -3.0).exp();
        (e * 0.2 + 0.8, e * y_t * -0.6, e * y_p * -0.6)
    }

    /// Largest `‖γ°‖` over a fine sample of the parameter domain.
    pub fn bounding_radius(&self) -> f64 {
        match self {
            Shape::Sphere { radius } => *radius,
            _ => {
                let mut m: f64 = 0.0;
                for i in 0..=96 {
                    let th = PI * i as f64 / 96.0;
                    for j in 0..96 {
                        let ph = 2.0 * PI * j as f64 / 96.0;
                        let p = self.eval(C::from(th), C::from(ph)).real_point();
                        m = m.max(crate::vec3::norm(&p));
                    }
                }
                m
            }
        }
    }

    fn axisym_polar_derivs(a: &Profile, b: &Profile, theta: C, j: usize) -> (C, C) {
        // Leibniz rule for A = a sinθ and B = b cosθ
        let mut da = C::from(0.0);
        let mut db = C::from(0.0);
        for i in 0..=j {
            let w = binomial(j, i);
            da += a.derivative(theta, i) * sin_deriv(theta, j - i) * w;
            db += b.derivative(theta, i) * cos_deriv(theta, j - i) * w;
        }
        (da, db)
    }
}

impl Parametrization for Shape {
    fn eval(&self, theta: C, phi: C) -> Jet {
        let (cp, sp) = (phi.cos(), phi.sin());
        match self {
            Shape::Blob => {
                let (st, ct) = (theta.sin(), theta.cos());
                let (rho, rho_t, rho_p) = Shape::blob_radius(theta, phi);
                let u = [cp * st, sp * st, ct];
                let u_t = [cp * ct, sp * ct, -st];
                let u_p = [-sp * st, cp * st, C::from(0.0)];
                Jet {
                    point: u.map(|c| c * rho),
                    d_polar: [0, 1, 2].map(|i| u[i] * rho_t + u_t[i] * rho),
                    d_phi: [0, 1, 2].map(|i| u[i] * rho_p + u_p[i] * rho),
                }
            }
            _ => {
                let (a, b) = match self {
                    Shape::Sphere { radius } => {
                        let r = Profile::constant(*radius);
                        (r.clone(), r)
                    }
                    Shape::Axisymmetric { a, b } => (a.clone(), b.clone()),
                    Shape::Blob => unreachable!(),
                };
                let (aa, bb) = Shape::axisym_polar_derivs(&a, &b, theta, 0);
                let (da, db) = Shape::axisym_polar_derivs(&a, &b, theta, 1);
                Jet {
                    point: [aa * cp, aa * sp, bb],
                    d_polar: [da * cp, da * sp, db],
                    d_phi: [-aa * sp, aa * cp, C::from(0.0)],
                }
            }
        }
    }

    fn theta_derivatives(&self, theta: f64, phi: f64, order: usize) -> Vec<[f64; 3]> {
        let Some((a, b)) = self.profiles() else {
            return cauchy_derivatives(|z| self.eval(z, C::from(phi)).point, theta, order);
        };
        let (cp, sp) = (phi.cos(), phi.sin());
        (0..=order)
            .map(|j| {
                let (da, db) = Shape::axisym_polar_derivs(&a, &b, C::from(theta), j);
                [da.re * cp, da.re * sp, db.re]
            })
            .collect()
    }

    fn phi_derivatives(&self, theta: f64, phi: f64, order: usize) -> Vec<[f64; 3]> {
        let Some((a, b)) = self.profiles() else {
            return cauchy_derivatives(|z| self.eval(C::from(theta), z).point, phi, order);
        };
        let th = C::from(theta);
        let aa = (a.derivative(th, 0) * th.sin()).re;
        let bb = (b.derivative(th, 0) * th.cos()).re;
        let ph = C::from(phi);
        (0..=order)
            .map(|j| {
                [
                    aa * cos_deriv(ph, j).re,
                    aa * sin_deriv(ph, j).re,
                    if j == 0 { bb } else { 0.0 },
                ]
            })
            .collect()
    }
}
