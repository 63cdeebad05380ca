//! Small fixed-size vector helpers shared by the real and complex paths.
//!
//! Dot products never conjugate: the squared distance `Σ (γ_i - x_i)^2` has to
//! stay complex-analytic in the parameters.

use std::ops::{Add, Mul, Sub};

pub type V3<T> = [T; 3];

#[inline]
pub fn dot<T>(a: &V3<T>, b: &V3<T>) -> T
where
    T: Copy + Add<Output = T> + Mul<Output = T>,
{
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub fn sub<T>(a: &V3<T>, b: &V3<T>) -> V3<T>
where
    T: Copy + Sub<Output = T>,
{
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
pub fn cross<T>(a: &V3<T>, b: &V3<T>) -> V3<T>
where
    T: Copy + Sub<Output = T> + Mul<Output = T>,
{
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[inline]
pub fn scale<T>(a: &V3<T>, s: T) -> V3<T>
where
    T: Copy + Mul<Output = T>,
{
    [a[0] * s, a[1] * s, a[2] * s]
}

#[inline]
pub fn norm(a: &V3<f64>) -> f64 {
    dot(a, a).sqrt()
}

#[inline]
pub fn dist(a: &V3<f64>, b: &V3<f64>) -> f64 {
    norm(&sub(a, b))
}
