//! First-order forward-mode jets.
//!
//! A [`Jet`] carries a value and its gradient with respect to a list of
//! independent variables declared by the caller. Constants carry an empty
//! gradient; missing trailing entries are treated as zero so constants never
//! allocate.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Div, Mul, Neg, Sub};

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    value: f64,
    grad: Vec<f64>,
}

impl Jet {
    pub fn new(value: f64, grad: Vec<f64>) -> Self {
        Self { value, grad }
    }

    /// Independent variable number `index` out of `count`.
    pub fn variable(value: f64, index: usize, count: usize) -> Self {
        assert!(index < count, "variable index {index} out of {count}");
        let mut grad = vec![0.0; count];
        grad[index] = 1.0;
        Self { value, grad }
    }

    pub fn grad(&self) -> &[f64] {
        &self.grad
    }

    /// Derivative with respect to variable `index` (zero when not tracked).
    pub fn partial(&self, index: usize) -> f64 {
        self.grad.get(index).copied().unwrap_or(0.0)
    }

    fn combine(a: &[f64], ka: f64, b: &[f64], kb: f64) -> Vec<f64> {
        let n = a.len().max(b.len());
        (0..n)
            .map(|i| ka * a.get(i).copied().unwrap_or(0.0) + kb * b.get(i).copied().unwrap_or(0.0))
            .collect()
    }

    fn chain(&self, value: f64, slope: f64) -> Self {
        Self {
            value,
            grad: self.grad.iter().map(|g| g * slope).collect(),
        }
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        Jet {
            value: self.value + rhs.value,
            grad: Jet::combine(&self.grad, 1.0, &rhs.grad, 1.0),
        }
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        Jet {
            value: self.value - rhs.value,
            grad: Jet::combine(&self.grad, 1.0, &rhs.grad, -1.0),
        }
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        Jet {
            value: self.value * rhs.value,
            grad: Jet::combine(&self.grad, rhs.value, &rhs.grad, self.value),
        }
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, rhs: Jet) -> Jet {
        let q = self.value / rhs.value;
        let inv = 1.0 / rhs.value;
        Jet {
            value: q,
            grad: Jet::combine(&self.grad, inv, &rhs.grad, -q * inv),
        }
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.chain(-self.value, -1.0)
    }
}

impl Scalar for Jet {
    fn constant(v: f64) -> Self {
        Jet {
            value: v,
            grad: Vec::new(),
        }
    }

    fn value(&self) -> f64 {
        self.value
    }

    fn sqrt(&self) -> Self {
        let r = libm::sqrt(self.value);
        self.chain(r, 0.5 / r)
    }

    fn sin(&self) -> Self {
        self.chain(libm::sin(self.value), libm::cos(self.value))
    }

    fn cos(&self) -> Self {
        self.chain(libm::cos(self.value), -libm::sin(self.value))
    }

    fn atan2(&self, x: &Self) -> Self {
        let (y0, x0) = (self.value, x.value);
        let r2 = x0 * x0 + y0 * y0;
        Jet {
            value: libm::atan2(y0, x0),
            grad: Jet::combine(&self.grad, x0 / r2, &x.grad, -y0 / r2),
        }
    }

    fn scale(&self, k: f64) -> Self {
        self.chain(self.value * k, k)
    }
}
