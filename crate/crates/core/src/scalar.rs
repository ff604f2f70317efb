//! Numeric abstraction shared by plain `f64` evaluation and [`Jet`](crate::Jet)
//! differentiation, so every geometric formula is written once.

use core::fmt::Debug;
use core::ops::{Add, Div, Mul, Neg, Sub};

pub trait Scalar:
    Clone + Debug + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self> + Neg<Output = Self>
{
    fn constant(v: f64) -> Self;
    fn value(&self) -> f64;
    fn sqrt(&self) -> Self;
    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
    /// `atan2(self, x)` with `self` as the ordinate.
    fn atan2(&self, x: &Self) -> Self;

    fn zero() -> Self {
        Self::constant(0.0)
    }

    fn scale(&self, k: f64) -> Self {
        self.clone() * Self::constant(k)
    }

    fn square(&self) -> Self {
        self.clone() * self.clone()
    }
}

impl Scalar for f64 {
    fn constant(v: f64) -> Self {
        v
    }
    fn value(&self) -> f64 {
        *self
    }
    fn sqrt(&self) -> Self {
        libm::sqrt(*self)
    }
    fn sin(&self) -> Self {
        libm::sin(*self)
    }
    fn cos(&self) -> Self {
        libm::cos(*self)
    }
    fn atan2(&self, x: &Self) -> Self {
        libm::atan2(*self, *x)
    }
}

/// Plain-float helpers; `f64` methods like `sqrt` live in `std` only.
pub(crate) mod fmath {
    pub fn sqrt(x: f64) -> f64 {
        libm::sqrt(x)
    }
    pub fn abs(x: f64) -> f64 {
        libm::fabs(x)
    }
    pub fn ln(x: f64) -> f64 {
        libm::log(x)
    }
    pub fn exp(x: f64) -> f64 {
        libm::exp(x)
    }
    pub fn atan2(y: f64, x: f64) -> f64 {
        libm::atan2(y, x)
    }
    pub fn sin(x: f64) -> f64 {
        libm::sin(x)
    }
    pub fn cos(x: f64) -> f64 {
        libm::cos(x)
    }
}
