//! Gamma function at half-integers and the double-factorial ratio.

use std::f64::consts::PI;
use std::fmt;

/// A positive half-integer power `p` (so `2p ∈ Z⁺`), stored as `2p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInteger(u32);

impl HalfInteger {
    pub const HALF: Self = Self(1);
    pub const ONE: Self = Self(2);
    pub const THREE_HALVES: Self = Self(3);

    /// `p = twice / 2`; `None` for zero.
    pub fn from_twice(twice: u32) -> Option<Self> {
        (twice > 0).then_some(Self(twice))
    }

    /// Accepts values within 1e-12 of a positive half-integer.
    pub fn from_f64(p: f64) -> Option<Self> {
        let twice = (2.0 * p).round();
        if twice >= 1.0 && (2.0 * p - twice).abs() < 1e-12 {
            Some(Self(twice as u32))
        } else {
            None
        }
    }

    pub fn twice(self) -> u32 {
        self.0
    }

    pub fn value(self) -> f64 {
        f64::from(self.0) * 0.5
    }

    /// Γ(p), exact recurrence from Γ(1) = 1 or Γ(1/2) = √π.
    pub fn gamma(self) -> f64 {
        self.ln_gamma().exp()
    }

    pub fn ln_gamma(self) -> f64 {
        let (mut acc, mut z) = if self.0 % 2 == 0 {
            (0.0, 1.0)
        } else {
            (0.5 * PI.ln(), 0.5)
        };
        while z < self.value() {
            acc += z.ln();
            z += 1.0;
        }
        acc
    }
}

impl fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// `n!! / (n+1)!!` computed as a running product, stable for large `n`.
pub fn double_factorial_ratio(n: u32) -> f64 {
    let mut ratio = 1.0;
    let mut k = n;
    // pair n with n+1, n-2 with n-1, ...
    while k >= 1 {
        ratio *= f64::from(k) / f64::from(k + 1);
        if k < 2 {
            break;
        }
        k -= 2;
    }
    ratio
}
