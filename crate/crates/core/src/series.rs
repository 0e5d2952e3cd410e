//! Truncated formal power series in `z` with complex coefficients.
//!
//! A series of order `N` stores the coefficients of `z^0 .. z^{N-1}`; every
//! operation discards terms of degree `N` and above. Binary operations on
//! operands of different order truncate to the smaller one.

use std::ops::{Add, Mul, Neg, Sub};

use crate::coin::ComplexAmp;
use crate::error::{Error, Result};

/// Smallest constant-term modulus accepted by series division.
pub const DIVISION_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    coeffs: Vec<ComplexAmp>,
}

impl Series {
    pub fn zeros(order: usize) -> Self {
        Series { coeffs: vec![ComplexAmp::new(0.0, 0.0); order] }
    }

    pub fn constant(value: ComplexAmp, order: usize) -> Self {
        let mut s = Self::zeros(order);
        if order > 0 {
            s.coeffs[0] = value;
        }
        s
    }

    pub fn one(order: usize) -> Self {
        Self::constant(ComplexAmp::new(1.0, 0.0), order)
    }

    /// `coefficient · z^degree`.
    pub fn monomial(coefficient: ComplexAmp, degree: usize, order: usize) -> Self {
        let mut s = Self::zeros(order);
        if degree < order {
            s.coeffs[degree] = coefficient;
        }
        s
    }

    pub fn from_coeffs(coeffs: Vec<ComplexAmp>) -> Result<Self> {
        if let Some(k) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(Error::Domain(format!("series coefficient {k} is not finite")));
        }
        Ok(Series { coeffs })
    }

    /// Truncation order (number of stored coefficients).
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[ComplexAmp] {
        &self.coeffs
    }

    /// Coefficient of `z^k`; zero at or beyond the truncation order.
    pub fn coeff(&self, k: usize) -> ComplexAmp {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.truncate(order);
        Series { coeffs }
    }

    pub fn scale(&self, s: ComplexAmp) -> Self {
        Series { coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    /// Multiplication by `z`; the top coefficient falls off.
    pub fn mul_z(&self) -> Self {
        let n = self.order();
        let mut out = Self::zeros(n);
        if n > 1 {
            out.coeffs[1..].copy_from_slice(&self.coeffs[..n - 1]);
        }
        out
    }

    /// Exact division by `z`. The constant term must vanish (`|c_0| <= tol`);
    /// the result has order one less than `self`.
    pub fn div_z(&self, tol: f64) -> Result<Self> {
        match self.coeffs.first() {
            None => Ok(self.clone()),
            Some(c0) if c0.norm() > tol => Err(Error::Singularity(format!(
                "cannot divide by z: constant term {c0} is nonzero"
            ))),
            Some(_) => Ok(Series { coeffs: self.coeffs[1..].to_vec() }),
        }
    }

    /// Multiplicative inverse, defined when the constant term is nonzero.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.order();
        let c0 = self.coeff(0);
        if n == 0 {
            return Ok(self.clone());
        }
        if c0.norm() < DIVISION_FLOOR {
            return Err(Error::Singularity(format!(
                "series inverse needs a nonzero constant term, got {c0}"
            )));
        }
        let inv0 = c0.inv();
        let mut out = Self::zeros(n);
        out.coeffs[0] = inv0;
        for k in 1..n {
            let mut acc = ComplexAmp::new(0.0, 0.0);
            for j in 1..=k {
                acc += self.coeffs[j] * out.coeffs[k - j];
            }
            out.coeffs[k] = -acc * inv0;
        }
        Ok(out)
    }

    pub fn div(&self, rhs: &Series) -> Result<Self> {
        let order = self.order().min(rhs.order());
        Ok(&self.truncate(order) * &rhs.truncate(order).inverse()?)
    }

    /// `self^exp` by repeated squaring.
    pub fn pow(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Series::one(self.order());
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Partial sum at a point (Horner).
    pub fn eval(&self, z: ComplexAmp) -> ComplexAmp {
        self.coeffs
            .iter()
            .rev()
            .fold(ComplexAmp::new(0.0, 0.0), |acc, c| acc * z + c)
    }

    /// Largest coefficient distance to `other` over the common order.
    pub fn max_abs_diff(&self, other: &Series) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }
}

impl Add for &Series {
    type Output = Series;
    fn add(self, rhs: &Series) -> Series {
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(x, y)| x + y).collect();
        Series { coeffs }
    }
}

impl Sub for &Series {
    type Output = Series;
    fn sub(self, rhs: &Series) -> Series {
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(x, y)| x - y).collect();
        Series { coeffs }
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        Series { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &Series {
    type Output = Series;
    fn mul(self, rhs: &Series) -> Series {
        let n = self.order().min(rhs.order());
        let mut out = Series::zeros(n);
        for (i, x) in self.coeffs[..n].iter().enumerate() {
            if *x == ComplexAmp::new(0.0, 0.0) {
                continue;
            }
            for (o, y) in out.coeffs[i..].iter_mut().zip(&rhs.coeffs) {
                *o += x * y;
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for Series {
            type Output = Series;
            fn $method(self, rhs: Series) -> Series {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
