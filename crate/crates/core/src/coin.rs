//! Transfer matrices at the level anticrossings.
//!
//! A bulk coin `U = [[a, b], [c, d]]` acts at every anticrossing above the
//! ground state; the boundary coin `Ũ` acts only on departures from site 0.
//! Rows of a coin split into the PQRS basis: `P` keeps the first row (down
//! move, outputs an L component), `Q` keeps the second row (up move, outputs an
//! R component), and `R`, `S` are the row-swapped partners. For a unitary coin
//! the four matrices are orthonormal under `<A|B> = Tr(A^† B)`.

use std::f64::consts::PI;
use std::ops::{Add, AddAssign, Mul, Sub};

use crate::error::{Error, Result};

pub type ComplexAmp = num_complex::Complex64;

const ZERO: ComplexAmp = ComplexAmp::new(0.0, 0.0);
const ONE: ComplexAmp = ComplexAmp::new(1.0, 0.0);

/// Tolerance for the unitarity and determinant checks on constructed coins.
pub const UNITARITY_TOL: f64 = 1e-12;

/// Dense 2x2 complex matrix, row major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[ComplexAmp; 2]; 2]);

impl Mat2 {
    pub const ZERO: Mat2 = Mat2([[ZERO, ZERO], [ZERO, ZERO]]);
    pub const IDENTITY: Mat2 = Mat2([[ONE, ZERO], [ZERO, ONE]]);

    pub fn new(a: ComplexAmp, b: ComplexAmp, c: ComplexAmp, d: ComplexAmp) -> Self {
        Mat2([[a, b], [c, d]])
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Mat2([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    pub fn trace(&self) -> ComplexAmp {
        self.0[0][0] + self.0[1][1]
    }

    pub fn det(&self) -> ComplexAmp {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    /// Hilbert-Schmidt inner product `Tr(self^† other)`.
    pub fn inner(&self, other: &Mat2) -> ComplexAmp {
        let (x, y) = (&self.0, &other.0);
        let mut acc = ZERO;
        for i in 0..2 {
            for j in 0..2 {
                acc += x[i][j].conj() * y[i][j];
            }
        }
        acc
    }

    pub fn scale(&self, s: ComplexAmp) -> Self {
        let m = &self.0;
        Mat2([[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]])
    }

    pub fn apply(&self, v: [ComplexAmp; 2]) -> [ComplexAmp; 2] {
        let m = &self.0;
        [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|z| z.is_finite())
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, rhs: Mat2) -> Mat2 {
        let mut out = self;
        out += rhs;
        out
    }
}

impl AddAssign for Mat2 {
    fn add_assign(&mut self, rhs: Mat2) {
        for i in 0..2 {
            for j in 0..2 {
                self.0[i][j] += rhs.0[i][j];
            }
        }
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: Mat2) -> Mat2 {
        self + rhs.scale(-ONE)
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        let (x, y) = (&self.0, &rhs.0);
        let mut out = Mat2::ZERO;
        for i in 0..2 {
            for j in 0..2 {
                out.0[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
            }
        }
        out
    }
}

/// A validated 2x2 unitary transfer matrix `[[a, b], [c, d]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coin {
    pub a: ComplexAmp,
    pub b: ComplexAmp,
    pub c: ComplexAmp,
    pub d: ComplexAmp,
}

/// The four PQRS basis matrices of a coin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pqrs {
    pub p: Mat2,
    pub q: Mat2,
    pub r: Mat2,
    pub s: Mat2,
}

impl Pqrs {
    pub fn as_array(&self) -> [Mat2; 4] {
        [self.p, self.q, self.r, self.s]
    }

    /// Coefficients of `x` along `P, Q, R, S`, via `Tr(B^† x)`.
    pub fn components(&self, x: &Mat2) -> [ComplexAmp; 4] {
        self.as_array().map(|basis| basis.inner(x))
    }
}

impl Coin {
    /// Wraps arbitrary entries after checking finiteness and unitarity.
    pub fn from_entries(a: ComplexAmp, b: ComplexAmp, c: ComplexAmp, d: ComplexAmp) -> Result<Self> {
        let coin = Coin { a, b, c, d };
        if !coin.matrix().is_finite() {
            return Err(Error::Domain("coin entries must be finite".into()));
        }
        let defect = coin.unitarity_defect();
        if defect >= 1e-10 {
            return Err(Error::Domain(format!(
                "coin is not unitary: max |U^dag U - I| = {defect:e}"
            )));
        }
        Ok(coin)
    }

    pub fn matrix(&self) -> Mat2 {
        Mat2::new(self.a, self.b, self.c, self.d)
    }

    /// `Δ = ad - bc`.
    pub fn det(&self) -> ComplexAmp {
        self.a * self.d - self.b * self.c
    }

    /// `max |U^† U - I|` entrywise.
    pub fn unitarity_defect(&self) -> f64 {
        let u = self.matrix();
        (u.adjoint() * u - Mat2::IDENTITY).max_abs()
    }

    pub fn pqrs(&self) -> Pqrs {
        pqrs_decompose(self)
    }

    /// Down move `P = [[a, b], [0, 0]]`.
    pub fn p(&self) -> Mat2 {
        Mat2::new(self.a, self.b, ZERO, ZERO)
    }

    /// Up move `Q = [[0, 0], [c, d]]`.
    pub fn q(&self) -> Mat2 {
        Mat2::new(ZERO, ZERO, self.c, self.d)
    }
}

fn check_phase(name: &str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be finite, got {value}")))
    }
}

/// Bulk Landau-Zener coin
/// `[[√p e^{iβ}, √(1-p) e^{iγ}], [-√(1-p) e^{-iγ}, √p e^{-iβ}]]`.
///
/// `p = 1` is the ballistic limit; `p = 0` is rejected.
pub fn make_bulk_coin(p: f64, beta: f64, gamma: f64) -> Result<Coin> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::Domain(format!(
            "tunneling probability p must lie in (0, 1], got {p}"
        )));
    }
    check_phase("beta", beta)?;
    check_phase("gamma", gamma)?;
    let sp = p.sqrt();
    let sq = (1.0 - p).sqrt();
    Ok(Coin {
        a: ComplexAmp::from_polar(sp, beta),
        b: ComplexAmp::from_polar(sq, gamma),
        c: -ComplexAmp::from_polar(sq, -gamma),
        d: ComplexAmp::from_polar(sp, -beta),
    })
}

/// Fully reflecting boundary coin `[[0, e^{iγ̃}], [-e^{-iγ̃}, 0]]`.
pub fn make_boundary_coin(gamma_tilde: f64) -> Result<Coin> {
    check_phase("gamma_tilde", gamma_tilde)?;
    Ok(Coin {
        a: ZERO,
        b: ComplexAmp::from_polar(1.0, gamma_tilde),
        c: -ComplexAmp::from_polar(1.0, -gamma_tilde),
        d: ZERO,
    })
}

pub fn pqrs_decompose(coin: &Coin) -> Pqrs {
    let Coin { a, b, c, d } = *coin;
    Pqrs {
        p: Mat2::new(a, b, ZERO, ZERO),
        q: Mat2::new(ZERO, ZERO, c, d),
        r: Mat2::new(c, d, ZERO, ZERO),
        s: Mat2::new(ZERO, ZERO, a, b),
    }
}

/// Reduces an angle to the half-open interval `(-π, π]`.
pub fn reduce_angle(theta: f64) -> f64 {
    let mut t = theta.rem_euclid(2.0 * PI);
    if t > PI {
        t -= 2.0 * PI;
    }
    t
}

/// Physical parameters of a run. `p` and `θ` are always derived.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Electric field `F`. `+∞` encodes the ballistic limit `p = 1`.
    pub field: f64,
    /// Zener threshold field `F̄`.
    pub fbar: f64,
    pub beta: f64,
    pub gamma: f64,
    pub gamma_tilde: f64,
    /// System length entering the quasi-energy `ε = L (F / 2π) arg z²_pole`.
    pub length: f64,
    pub j0: f64,
    pub e0: f64,
}

impl ModelParams {
    pub fn new(field: f64, fbar: f64, beta: f64, gamma: f64, gamma_tilde: f64) -> Result<Self> {
        if !(fbar > 0.0 && fbar.is_finite()) {
            return Err(Error::Domain(format!("Fbar must be positive and finite, got {fbar}")));
        }
        if !(field > 0.0) || field.is_nan() {
            return Err(Error::Domain(format!("field F must be positive, got {field}")));
        }
        check_phase("beta", beta)?;
        check_phase("gamma", gamma)?;
        check_phase("gamma_tilde", gamma_tilde)?;
        Ok(ModelParams {
            field,
            fbar,
            beta,
            gamma,
            gamma_tilde,
            length: 1.0,
            j0: 1.0,
            e0: 1.0,
        })
    }

    /// Builds parameters from a tunneling probability, reporting `F = -π F̄ / ln p`.
    pub fn from_probability(p: f64, fbar: f64, beta: f64, gamma: f64, gamma_tilde: f64) -> Result<Self> {
        Self::new(field_for_probability(p, fbar)?, fbar, beta, gamma, gamma_tilde)
    }

    pub fn with_units(mut self, length: f64, j0: f64, e0: f64) -> Result<Self> {
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::Domain(format!("length L must be positive, got {length}")));
        }
        if !j0.is_finite() || !e0.is_finite() {
            return Err(Error::Domain("j0 and E0 must be finite".into()));
        }
        self.length = length;
        self.j0 = j0;
        self.e0 = e0;
        Ok(self)
    }

    /// Landau-Zener tunneling probability `p = exp(-π F̄ / F)`.
    pub fn p(&self) -> f64 {
        tunneling_probability(self.field, self.fbar)
    }

    /// Bulk/boundary phase difference `θ = γ - γ̃` in `(-π, π]`.
    pub fn theta(&self) -> f64 {
        reduce_angle(self.gamma - self.gamma_tilde)
    }

    pub fn bulk_coin(&self) -> Result<Coin> {
        make_bulk_coin(self.p(), self.beta, self.gamma)
    }

    pub fn boundary_coin(&self) -> Result<Coin> {
        make_boundary_coin(self.gamma_tilde)
    }
}

pub fn tunneling_probability(field: f64, fbar: f64) -> f64 {
    (-PI * fbar / field).exp()
}

/// Inverse of [`tunneling_probability`]; `p = 1` maps to `F = +∞`.
pub fn field_for_probability(p: f64, fbar: f64) -> Result<f64> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::Domain(format!(
            "tunneling probability p must lie in (0, 1], got {p}"
        )));
    }
    if p == 1.0 {
        return Ok(f64::INFINITY);
    }
    Ok(-PI * fbar / p.ln())
}
