use num_complex::Complex64;

use super::Parametrization;
use crate::error::{Error, Result};
use crate::vec3::V3;

type C = Complex64;

/// One-variable Taylor models of `γ°` around a real center `(θ*, φ*)`: one in
/// `θ` with `φ = φ*` held fixed and one in `φ` with `θ = θ*` held fixed.
#[derive(Clone, Debug, PartialEq)]
pub struct TaylorSurrogate {
    center: (f64, f64),
    order: usize,
    /// `∂_θ^j γ° / j!` for `j = 0..=order`.
    coeffs_theta: Vec<[f64; 3]>,
    /// `∂_φ^j γ° / j!` for `j = 0..=order`.
    coeffs_phi: Vec<[f64; 3]>,
}

pub const DEFAULT_ORDER: usize = 4;

impl TaylorSurrogate {
    pub fn new<P: Parametrization + ?Sized>(
        surface: &P,
        theta: f64,
        phi: f64,
        order: usize,
    ) -> Result<Self> {
        if order == 0 || !theta.is_finite() || !phi.is_finite() {
            return Err(Error::InvalidArgument(
                "Taylor surrogate needs order >= 1 and a finite center".into(),
            ));
        }
        let normalize = |mut d: Vec<[f64; 3]>| {
            let mut fact = 1.0;
            for (j, c) in d.iter_mut().enumerate() {
                if j > 0 {
                    fact *= j as f64;
                }
                *c = c.map(|v| v / fact);
            }
            d
        };
        let mut coeffs_theta = normalize(surface.theta_derivatives(theta, phi, order));
        let mut coeffs_phi = normalize(surface.phi_derivatives(theta, phi, order));
        // the constant term is the exact point in both models
        let p = surface.eval(C::from(theta), C::from(phi)).real_point();
        coeffs_theta[0] = p;
        coeffs_phi[0] = p;
        Ok(Self {
            center: (theta, phi),
            order,
            coeffs_theta,
            coeffs_phi,
        })
    }

    pub fn center(&self) -> (f64, f64) {
        self.center
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs_theta(&self) -> &[[f64; 3]] {
        &self.coeffs_theta
    }

    pub fn coeffs_phi(&self) -> &[[f64; 3]] {
        &self.coeffs_phi
    }

    /// Model of `γ°(θ, φ*)` and `∂_θ γ°(θ, φ*)`.
    pub fn eval_theta(&self, theta: C) -> (V3<C>, V3<C>) {
        horner(&self.coeffs_theta, theta - self.center.0)
    }

    /// Model of `γ°(θ*, φ)` and `∂_φ γ°(θ*, φ)`.
    pub fn eval_phi(&self, phi: C) -> (V3<C>, V3<C>) {
        horner(&self.coeffs_phi, phi - self.center.1)
    }
}

fn horner(coeffs: &[[f64; 3]], h: C) -> (V3<C>, V3<C>) {
    let zero = C::from(0.0);
    let mut val = [zero; 3];
    let mut der = [zero; 3];
    for c in coeffs.iter().rev() {
        for i in 0..3 {
            der[i] = der[i] * h + val[i];
            val[i] = val[i] * h + c[i];
        }
    }
    (val, der)
}
