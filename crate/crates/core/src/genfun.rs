//! Closed-form generating functions of the bounded walk.
//!
//! Everything is built on `λ_+(z)`, the root of
//!
//! ```text
//! d² z λ² - d (Δ z² + 1) λ + Δ |a|² z = 0
//! ```
//!
//! that vanishes at `z = 0`. From it follow the absorbing return function
//! `A^r(0→0; z) = (d λ_+ - Δ z) z / c`, the unbounded-walk coefficient
//! functions `B^q, B^r`, and the bounded-walk amplitudes
//!
//! ```text
//! Ψ^L(0→n; z) = (d λ_+/a)^{n-1} (c̃ d / a c) (λ_+ - a z) / (1 - c̃ A^r)
//! Ψ^R(0→n; z) = (d λ_+/a)^{n-1} c̃ z / (1 - c̃ A^r)
//! ```
//!
//! for `n >= 1`, with site 0 fed by `Ψ(0, τ+1) = P Ψ(1, τ)`. Each quantity is
//! available both as a truncated [`Series`] and as a pointwise value.

use crate::coin::{Coin, ComplexAmp};
use crate::error::{Error, Result};
use crate::series::{Series, DIVISION_FLOOR};

pub const DEFAULT_ORDER: usize = 1024;

/// Relative root-modulus gap below which pointwise branch selection is ambiguous.
pub const BRANCH_GAP: f64 = 1e-9;

/// `|1 - c̃ A^r|` below which pointwise evaluation reports a pole.
pub const POLE_TOL: f64 = 1e-12;

const ONE: ComplexAmp = ComplexAmp::new(1.0, 0.0);

fn nonzero(x: ComplexAmp, what: &str) -> Result<ComplexAmp> {
    if x.norm() < DIVISION_FLOOR {
        Err(Error::Singularity(format!("coin entry {what} vanishes")))
    } else {
        Ok(x)
    }
}

fn z_series(order: usize) -> Series {
    Series::monomial(ONE, 1, order)
}

/// Left-hand side of the defining quadratic at `(z, λ)`.
pub fn lambda_quadratic_residual(coin: &Coin, z: ComplexAmp, lambda: ComplexAmp) -> ComplexAmp {
    let (a, d, delta) = (coin.a, coin.d, coin.det());
    d * d * z * lambda * lambda - d * (delta * z * z + 1.0) * lambda + delta * a.norm_sqr() * z
}

/// Taylor coefficients of `λ_+` up to `z^{order-1}`.
///
/// `λ_1 = Δ|a|²/d`, and for `k >= 2`
/// `λ_k = d [λ²]_{k-1} - Δ λ_{k-2}`, which only involves `λ_j` with `j <= k-2`.
/// Even coefficients vanish identically.
pub fn lambda_plus_series(coin: &Coin, order: usize) -> Result<Series> {
    if order < 2 {
        return Err(Error::Domain(format!("lambda series needs order >= 2, got {order}")));
    }
    let d = nonzero(coin.d, "d")?;
    let delta = coin.det();
    let mut lam = vec![ComplexAmp::default(); order];
    lam[1] = delta * coin.a.norm_sqr() / d;
    for k in (3..order).step_by(2) {
        // [λ²]_{k-1}: pairs of odd indices summing to k - 1
        let mut sq = ComplexAmp::default();
        for i in (1..k - 1).step_by(2) {
            sq += lam[i] * lam[k - 1 - i];
        }
        lam[k] = d * sq - delta * lam[k - 2];
    }
    Series::from_coeffs(lam)
}

fn quadratic_roots(coin: &Coin, z: ComplexAmp) -> (ComplexAmp, ComplexAmp) {
    let (d, delta) = (coin.d, coin.det());
    let qa = d * d * z;
    let qb = -d * (delta * z * z + 1.0);
    let qc = delta * coin.a.norm_sqr() * z;
    let disc = (qb * qb - 4.0 * qa * qc).sqrt();
    // cancellation-free pair: q = -(b ± √disc)/2 with the sign matching b
    let q = if (qb.conj() * disc).re >= 0.0 { -(qb + disc) / 2.0 } else { -(qb - disc) / 2.0 };
    (q / qa, qc / q)
}

/// Number of Taylor terms needed to sum a radius-one series at `|z|` to
/// double precision.
fn terms_for_radius(r: f64) -> usize {
    let needed = (40.0 / -r.ln()).ceil();
    (needed as usize).clamp(64, 1 << 16)
}

/// `λ_+(z)` at a point, on the branch continuously connected to `λ_+(0) = 0`.
///
/// The smaller-modulus root is taken. When the two moduli agree to within
/// [`BRANCH_GAP`] the Taylor series is summed instead (only possible for
/// `|z| < 1`).
pub fn lambda_plus_eval(coin: &Coin, z: ComplexAmp) -> Result<ComplexAmp> {
    if z.norm() == 0.0 {
        return Err(Error::Domain("lambda_plus_eval needs z != 0".into()));
    }
    nonzero(coin.d, "d")?;
    let (r1, r2) = quadratic_roots(coin, z);
    let (m1, m2) = (r1.norm(), r2.norm());
    if (m1 - m2).abs() > BRANCH_GAP * m1.max(m2) {
        return Ok(if m1 < m2 { r1 } else { r2 });
    }
    if z.norm() < 1.0 {
        let series = lambda_plus_series(coin, terms_for_radius(z.norm()))?;
        return Ok(series.eval(z));
    }
    Err(Error::BranchAmbiguity { re: z.re, im: z.im })
}

/// `dλ_+/dz` at a point where `λ` is a root, by implicit differentiation.
pub fn lambda_plus_derivative(coin: &Coin, z: ComplexAmp, lambda: ComplexAmp) -> ComplexAmp {
    let (a, d, delta) = (coin.a, coin.d, coin.det());
    let f_z = d * d * lambda * lambda - 2.0 * d * delta * z * lambda + delta * a.norm_sqr();
    let f_lambda = 2.0 * d * d * z * lambda - d * (delta * z * z + 1.0);
    -f_z / f_lambda
}

/// `A^r(0→0; z)` as a series.
pub fn absorbing_series(coin: &Coin, order: usize) -> Result<Series> {
    let c = nonzero(coin.c, "c")?;
    let lam = lambda_plus_series(coin, order.max(2))?.truncate(order);
    let inner = &lam.scale(coin.d) - &z_series(order).scale(coin.det());
    Ok(inner.mul_z().scale(c.inv()))
}

pub fn absorbing_from_lambda(coin: &Coin, z: ComplexAmp, lambda: ComplexAmp) -> Result<ComplexAmp> {
    let c = nonzero(coin.c, "c")?;
    Ok((coin.d * lambda - coin.det() * z) * z / c)
}

/// `A^r(0→0; z)` at a point.
pub fn absorbing_at(coin: &Coin, z: ComplexAmp) -> Result<ComplexAmp> {
    nonzero(coin.c, "c")?;
    absorbing_from_lambda(coin, z, lambda_plus_eval(coin, z)?)
}

fn check_nondegenerate(coin: &Coin) -> Result<()> {
    nonzero(coin.a, "a")?;
    nonzero(coin.c, "c")?;
    nonzero(coin.d, "d")?;
    Ok(())
}

/// `(B^q(0→n; z), B^r(0→n; z))` for the walk with `Ũ = U`, as series.
///
/// `B^q = (dλ_+/a)^n / d` and `B^r = (dλ_+/a)^n (λ_+ - a z) / (a c z)`.
pub fn b_closed_series(coin: &Coin, n: u32, order: usize) -> Result<(Series, Series)> {
    check_nondegenerate(coin)?;
    let (a, c, d) = (coin.a, coin.c, coin.d);
    let lam = lambda_plus_series(coin, (order + 1).max(2))?;
    let power = lam.truncate(order).scale(d / a).pow(n);
    let bq = power.scale(d.inv());
    let numerator = &lam - &z_series(order + 1).scale(a);
    let tail = numerator.div_z(1e-14)?.truncate(order).scale((a * c).inv());
    Ok((bq, &power * &tail))
}

/// `(B^q, B^r)` at a point.
pub fn b_closed_at(coin: &Coin, n: u32, z: ComplexAmp) -> Result<(ComplexAmp, ComplexAmp)> {
    check_nondegenerate(coin)?;
    let (a, c, d) = (coin.a, coin.c, coin.d);
    let lam = lambda_plus_eval(coin, z)?;
    let power = (d * lam / a).powu(n);
    Ok((power / d, power * (lam - a * z) / (a * c * z)))
}

/// Series expansions of the bounded-walk generating functions for one coin
/// pair, sharing `λ_+` and the common denominator across sites.
#[derive(Debug, Clone)]
pub struct BoundedWalkSeries {
    bulk: Coin,
    order: usize,
    base: Series,
    left: Series,
    right: Series,
    denominator: Series,
}

impl BoundedWalkSeries {
    pub fn new(bulk: &Coin, boundary: &Coin, order: usize) -> Result<Self> {
        check_nondegenerate(bulk)?;
        let (a, c, d) = (bulk.a, bulk.c, bulk.d);
        let ct = boundary.c;
        let lam = lambda_plus_series(bulk, order.max(2))?.truncate(order);
        let ar = absorbing_series(bulk, order)?;
        let denominator = &Series::one(order) - &ar.scale(ct);
        // A^r has no constant term, so the denominator starts with exactly 1.
        debug_assert!(order == 0 || denominator.coeff(0) == ONE);
        let inv = denominator.inverse()?;
        let z = z_series(order);
        let left = &(&lam - &z.scale(a)).scale(ct * d / (a * c)) * &inv;
        let right = &z.scale(ct) * &inv;
        Ok(BoundedWalkSeries {
            bulk: *bulk,
            order,
            base: lam.scale(d / a),
            left,
            right,
            denominator,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `1 - c̃ A^r(0→0; z)`.
    pub fn denominator(&self) -> &Series {
        &self.denominator
    }

    /// `(Ψ^L(0→n), Ψ^R(0→n))` for `n >= 1`.
    pub fn site(&self, n: usize) -> Result<(Series, Series)> {
        if n == 0 {
            return Err(Error::Domain("site() needs n >= 1; use site0() for the boundary".into()));
        }
        let exp = u32::try_from(n - 1).map_err(|_| Error::Domain(format!("site index {n} too large")))?;
        let power = self.base.pow(exp);
        Ok((&power * &self.left, &power * &self.right))
    }

    /// `Ψ^L(0→0; z) = 1 + z [a Ψ^L(0→1) + b Ψ^R(0→1)]`.
    pub fn site0(&self) -> Series {
        let combo = &self.left.scale(self.bulk.a) + &self.right.scale(self.bulk.b);
        &Series::one(self.order) + &combo.mul_z()
    }

    /// All sites `0..=n_max` as `(Ψ^L, Ψ^R)`, building the powers incrementally.
    pub fn sites(&self, n_max: usize) -> Vec<(Series, Series)> {
        let mut out = Vec::with_capacity(n_max + 1);
        out.push((self.site0(), Series::zeros(self.order)));
        let mut power = Series::one(self.order);
        for n in 1..=n_max {
            if n > 1 {
                power = &power * &self.base;
            }
            out.push((&power * &self.left, &power * &self.right));
        }
        out
    }
}

/// `(Ψ^L(0→n; z), Ψ^R(0→n; z))` as series, `n >= 1`.
pub fn bounded_series(bulk: &Coin, boundary: &Coin, n: usize, order: usize) -> Result<(Series, Series)> {
    BoundedWalkSeries::new(bulk, boundary, order)?.site(n)
}

/// `Ψ^L(0→0; z)` as a series.
pub fn site0_series(bulk: &Coin, boundary: &Coin, order: usize) -> Result<Series> {
    Ok(BoundedWalkSeries::new(bulk, boundary, order)?.site0())
}

/// Pointwise values of the `n`-independent parts of the closed forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointFactors {
    pub z: ComplexAmp,
    pub lambda: ComplexAmp,
    /// `d λ_+ / a`
    pub base: ComplexAmp,
    /// `(c̃ d / a c)(λ_+ - a z)`
    pub left_numerator: ComplexAmp,
    /// `c̃ z`
    pub right_numerator: ComplexAmp,
    /// `1 - c̃ A^r(0→0; z)`
    pub denominator: ComplexAmp,
}

impl PointFactors {
    pub fn new(bulk: &Coin, boundary: &Coin, z: ComplexAmp) -> Result<Self> {
        check_nondegenerate(bulk)?;
        let lambda = lambda_plus_eval(bulk, z)?;
        Self::with_lambda(bulk, boundary, z, lambda)
    }

    pub fn with_lambda(bulk: &Coin, boundary: &Coin, z: ComplexAmp, lambda: ComplexAmp) -> Result<Self> {
        check_nondegenerate(bulk)?;
        let (a, c, d) = (bulk.a, bulk.c, bulk.d);
        let ct = boundary.c;
        let ar = absorbing_from_lambda(bulk, z, lambda)?;
        Ok(PointFactors {
            z,
            lambda,
            base: d * lambda / a,
            left_numerator: ct * d / (a * c) * (lambda - a * z),
            right_numerator: ct * z,
            denominator: 1.0 - ct * ar,
        })
    }
}

/// `(Ψ^L(0→n; z), Ψ^R(0→n; z))` at a point, `n >= 1`.
pub fn bounded_at(bulk: &Coin, boundary: &Coin, n: usize, z: ComplexAmp) -> Result<(ComplexAmp, ComplexAmp)> {
    if n == 0 {
        return Err(Error::Domain("bounded_at needs n >= 1; use site0_at for the boundary".into()));
    }
    let f = PointFactors::new(bulk, boundary, z)?;
    if f.denominator.norm() < POLE_TOL {
        return Err(Error::Pole { re: z.re, im: z.im });
    }
    let power = f.base.powu((n - 1) as u32);
    Ok((power * f.left_numerator / f.denominator, power * f.right_numerator / f.denominator))
}

/// `Ψ^L(0→0; z)` at a point.
pub fn site0_at(bulk: &Coin, boundary: &Coin, z: ComplexAmp) -> Result<ComplexAmp> {
    let (l, r) = bounded_at(bulk, boundary, 1, z)?;
    Ok(1.0 + z * (bulk.a * l + bulk.b * r))
}
