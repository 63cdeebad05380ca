//! Gauss-Legendre, trapezoidal and Gauss-Laguerre rules, and the
//! tensor-product applicator used for the surface quadrature.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RuleKind {
    /// On `[-1, 1]`, weight function 1.
    GaussLegendre,
    /// On `[0, 2π)`, periodic integrands.
    Trapezoidal,
    /// On `[0, ∞)`, weight function `e^{-x}`.
    GaussLaguerre,
}

/// A one-dimensional quadrature rule. Immutable once built.
#[derive(Clone, Debug, PartialEq)]
pub struct Rule1D {
    kind: RuleKind,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl Rule1D {
    pub fn kind(&self) -> RuleKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    /// `Σ w_i f(x_i)`. For Gauss-Laguerre the weight `e^{-x}` is implied.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.iter().map(|(x, w)| w * f(x)).sum()
    }
}

type CacheKey = (RuleKind, usize);

fn cache() -> &'static Mutex<HashMap<CacheKey, Arc<Rule1D>>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, Arc<Rule1D>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn cached(kind: RuleKind, n: usize, build: fn(usize) -> Rule1D) -> Arc<Rule1D> {
    assert!(n >= 1, "quadrature rules need at least one node");
    if let Some(rule) = cache().lock().unwrap().get(&(kind, n)) {
        return Arc::clone(rule);
    }
    // built outside the lock; a concurrent duplicate build is harmless
    let rule = Arc::new(build(n));
    let mut map = cache().lock().unwrap();
    Arc::clone(map.entry((kind, n)).or_insert(rule))
}

/// The `n`-point Gauss-Legendre rule on `[-1, 1]`, exact for polynomials of
/// degree `≤ 2n - 1`.
///
/// # Panics
/// If `n == 0`.
pub fn gauss_legendre(n: usize) -> Arc<Rule1D> {
    cached(RuleKind::GaussLegendre, n, build_gauss_legendre)
}

/// The `n`-point trapezoidal rule on `[0, 2π)`: `φ_l = 2π l / n`, `w = 2π / n`.
///
/// # Panics
/// If `n == 0`.
pub fn trapezoidal(n: usize) -> Arc<Rule1D> {
    cached(RuleKind::Trapezoidal, n, build_trapezoidal)
}

/// The `n`-point Gauss-Laguerre rule for `∫₀^∞ h(x) e^{-x} dx`.
///
/// # Panics
/// If `n == 0`.
pub fn gauss_laguerre(n: usize) -> Arc<Rule1D> {
    cached(RuleKind::GaussLaguerre, n, build_gauss_laguerre)
}

/// Legendre `P_n(x)` and `P_{n-1}(x)` via the three-term recurrence.
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    (p1, p0)
}

fn build_gauss_legendre(n: usize) -> Rule1D {
    let nf = n as f64;
    let half = n.div_ceil(2);
    let mut pos = Vec::with_capacity(half);
    for i in 1..=half {
        // Chebyshev-angle initial guess, i-th largest root
        let mut x = (PI * (i as f64 - 0.25) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, pm1) = legendre_pair(n, x);
            dp = nf * (x * p - pm1) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                let (p, pm1) = legendre_pair(n, x);
                dp = nf * (x * p - pm1) / (x * x - 1.0);
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        pos.push((x, w));
    }
    if n % 2 == 1 {
        // middle root is exactly zero
        let last = pos.len() - 1;
        let (_, pm1) = legendre_pair(n, 0.0);
        let dp = nf * (-pm1) / (-1.0);
        pos[last] = (0.0, 2.0 / (dp * dp));
    }
    let mut paired: Vec<(f64, f64)> = pos
        .iter()
        .filter(|(x, _)| *x != 0.0)
        .map(|&(x, w)| (-x, w))
        .chain(pos.iter().copied())
        .collect();
    paired.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (nodes, weights) = paired.into_iter().unzip();
    Rule1D {
        kind: RuleKind::GaussLegendre,
        nodes,
        weights,
    }
}

fn build_trapezoidal(n: usize) -> Rule1D {
    let h = 2.0 * PI / n as f64;
    Rule1D {
        kind: RuleKind::Trapezoidal,
        nodes: (0..n).map(|l| 2.0 * PI * l as f64 / n as f64).collect(),
        weights: vec![h; n],
    }
}

fn build_gauss_laguerre(n: usize) -> Rule1D {
    let nf = n as f64;
    let mut nodes: Vec<f64> = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    let mut z = 0.0;
    for i in 0..n {
        z = match i {
            0 => 3.0 / (1.0 + 2.4 * nf),
            1 => z + 15.0 / (1.0 + 2.5 * nf),
            _ => {
                let ai = (i - 1) as f64;
                z + (1.0 + 2.55 * ai) / (1.9 * ai) * (z - nodes[i - 2])
            }
        };
        let mut deriv = 0.0;
        let mut prev = 0.0;
        for _ in 0..200 {
            // L_n(z) and L_{n-1}(z)
            let (mut p1, mut p2) = (1.0, 0.0);
            for j in 1..=n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = ((2.0 * jf - 1.0 - z) * p2 - (jf - 1.0) * p3) / jf;
            }
            deriv = nf * (p1 - p2) / z;
            prev = p2;
            let dz = p1 / deriv;
            z -= dz;
            if dz.abs() <= 1e-15 * z.max(1.0) {
                break;
            }
        }
        nodes.push(z);
        weights.push(-1.0 / (deriv * nf * prev));
    }
    Rule1D {
        kind: RuleKind::GaussLaguerre,
        nodes,
        weights,
    }
}

/// Scalar types the tensor applicator accepts.
pub trait GridScalar:
    Copy
    + std::ops::Add<Output = Self>
    + std::ops::Sub<Output = Self>
    + std::ops::Mul<f64, Output = Self>
{
    fn zero() -> Self;
    fn is_finite_value(&self) -> bool;
}

impl GridScalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
}

impl GridScalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
}

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// `n_t × n_φ` tensor grid: Gauss-Legendre in `t`, trapezoidal in `φ`.
#[derive(Clone, Debug)]
pub struct QuadratureGrid {
    t_rule: Arc<Rule1D>,
    phi_rule: Arc<Rule1D>,
}

impl QuadratureGrid {
    pub fn new(n_t: usize, n_phi: usize) -> Result<Self> {
        if n_t == 0 || n_phi == 0 {
            return Err(Error::InvalidArgument(format!(
                "grid sizes must be positive (n_t={n_t}, n_phi={n_phi})"
            )));
        }
        Ok(Self {
            t_rule: gauss_legendre(n_t),
            phi_rule: trapezoidal(n_phi),
        })
    }

    pub fn n_t(&self) -> usize {
        self.t_rule.n()
    }

    pub fn n_phi(&self) -> usize {
        self.phi_rule.n()
    }

    pub fn len(&self) -> usize {
        self.n_t() * self.n_phi()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn t_rule(&self) -> &Rule1D {
        &self.t_rule
    }

    pub fn phi_rule(&self) -> &Rule1D {
        &self.phi_rule
    }

    /// Same grid with both point counts multiplied by `factor`.
    pub fn upsampled(&self, factor: usize) -> Result<Self> {
        Self::new(self.n_t() * factor, self.n_phi() * factor)
    }

    /// Nodes in `(k, l)` order, `k` the `t` index (outer) and `l` the `φ` index.
    pub fn nodes(&self) -> impl Iterator<Item = GridNode> + '_ {
        self.t_rule
            .iter()
            .enumerate()
            .flat_map(move |(k, (t, wt))| {
                self.phi_rule
                    .iter()
                    .enumerate()
                    .map(move |(l, (phi, wp))| GridNode {
                        k,
                        l,
                        t,
                        phi,
                        weight: wt * wp,
                    })
            })
    }

    /// `Σ_l Σ_k f(t_k, φ_l) w_l w_k`, failing on the first non-finite value.
    pub fn tensor_apply<T, F>(&self, mut f: F) -> Result<T>
    where
        T: GridScalar,
        F: FnMut(f64, f64) -> T,
    {
        let mut total = T::zero();
        for (k, (t, wt)) in self.t_rule.iter().enumerate() {
            let mut row = T::zero();
            for (l, (phi, wp)) in self.phi_rule.iter().enumerate() {
                let v = f(t, phi);
                if !v.is_finite_value() {
                    return Err(Error::NonFiniteIntegrand { k, l, t, phi });
                }
                row = row + v * wp;
            }
            total = total + row * wt;
        }
        Ok(total)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridNode {
    pub k: usize,
    pub l: usize,
    pub t: f64,
    pub phi: f64,
    pub weight: f64,
}
