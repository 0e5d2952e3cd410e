//! Brute-force transition amplitudes by explicit path enumeration.
//!
//! A path from site 0 to site `n` in `τ` steps is a word in the moves `P`
//! (down), `Q` (up from a bulk site) and `Q̃` (up from site 0). Its matrix is
//! the time-ordered product with the latest move leftmost, so the printed word
//! `QPQQ̃` is the path `0 → 1 → 2 → 1 → 2`. The transition amplitude
//! `Ξ(0 → n; τ)` is the sum of these products over all paths. Cost grows
//! exponentially in `τ`, so enumeration is capped at [`MAX_PATH_STEPS`].

use std::fmt;

use crate::coin::{pqrs_decompose, Coin, ComplexAmp, Mat2};
use crate::error::{Error, Result};
use crate::series::Series;

/// Largest `τ` accepted by the enumerator.
pub const MAX_PATH_STEPS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Move {
    /// `P`: one level down.
    Down,
    /// `Q`: one level up from a bulk site.
    Up,
    /// `Q̃`: from the ground state to the first excited level.
    BoundaryUp,
}

impl Move {
    fn symbol(self) -> &'static str {
        match self {
            Move::Down => "P",
            Move::Up => "Q",
            Move::BoundaryUp => "Q\u{303}",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Boundary {
    Reflecting,
    /// Site 0 may appear only at the start of a path (and at its end when the
    /// target is 0): first-passage paths.
    Absorbing,
}

/// A lattice path from site 0, stored in time order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PathWord {
    moves: Vec<Move>,
}

impl PathWord {
    /// Validates a time-ordered move sequence starting at site 0.
    pub fn new(moves: Vec<Move>) -> Result<Self> {
        let mut x = 0usize;
        for (t, m) in moves.iter().enumerate() {
            x = match (m, x) {
                (Move::BoundaryUp, 0) => 1,
                (Move::Up, x) if x > 0 => x + 1,
                (Move::Down, x) if x > 0 => x - 1,
                _ => {
                    return Err(Error::Domain(format!(
                        "move {} at step {t} is not allowed from site {x}",
                        m.symbol()
                    )))
                }
            };
        }
        Ok(PathWord { moves })
    }

    pub fn moves(&self) -> &[Move] {
        &self.moves
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    /// Sites visited, starting with 0.
    pub fn positions(&self) -> Vec<usize> {
        let mut x = 0;
        let mut out = vec![0];
        for m in &self.moves {
            x = if *m == Move::Down { x - 1 } else { x + 1 };
            out.push(x);
        }
        out
    }

    pub fn end(&self) -> usize {
        *self.positions().last().unwrap()
    }

    /// Time-ordered matrix product, latest move leftmost.
    pub fn matrix(&self, bulk: &Coin, boundary: &Coin) -> Mat2 {
        let (p, q, qt) = (bulk.p(), bulk.q(), boundary.q());
        self.moves.iter().fold(Mat2::IDENTITY, |acc, m| {
            let step = match m {
                Move::Down => p,
                Move::Up => q,
                Move::BoundaryUp => qt,
            };
            step * acc
        })
    }
}

impl fmt::Display for PathWord {
    /// Right-to-left word with repeated moves written as powers, e.g. `PQ²Q̃`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const SUPERSCRIPTS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
        if self.moves.is_empty() {
            return f.write_str("I");
        }
        let mut iter = self.moves.iter().rev().peekable();
        while let Some(m) = iter.next() {
            let mut run = 1;
            while iter.peek() == Some(&m) {
                iter.next();
                run += 1;
            }
            f.write_str(m.symbol())?;
            if run > 1 {
                for digit in run.to_string().bytes() {
                    write!(f, "{}", SUPERSCRIPTS[(digit - b'0') as usize])?;
                }
            }
        }
        Ok(())
    }
}

/// All paths `0 → n` in `τ` steps staying on `n >= 0`, in lexicographic order
/// of their time-ordered moves (`P < Q < Q̃`).
pub fn enumerate_paths(n: usize, tau: usize, boundary: Boundary) -> Result<Vec<PathWord>> {
    if tau > MAX_PATH_STEPS {
        return Err(Error::Resource { what: "path steps", requested: tau, limit: MAX_PATH_STEPS });
    }
    if n > tau {
        return Err(Error::Domain(format!("site {n} is outside the light cone at tau = {tau}")));
    }
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(tau);
    extend_paths(0, n, tau, boundary, &mut prefix, &mut out);
    Ok(out)
}

fn extend_paths(x: usize, target: usize, remaining: usize, boundary: Boundary, prefix: &mut Vec<Move>, out: &mut Vec<PathWord>) {
    if remaining == 0 {
        if x == target {
            out.push(PathWord { moves: prefix.clone() });
        }
        return;
    }
    if x.abs_diff(target) > remaining {
        return;
    }
    if x > 0 {
        let lands_on_zero = x == 1;
        let allowed = match boundary {
            Boundary::Reflecting => true,
            Boundary::Absorbing => !lands_on_zero || (remaining == 1 && target == 0),
        };
        if allowed {
            prefix.push(Move::Down);
            extend_paths(x - 1, target, remaining - 1, boundary, prefix, out);
            prefix.pop();
        }
    }
    prefix.push(if x == 0 { Move::BoundaryUp } else { Move::Up });
    extend_paths(x + 1, target, remaining - 1, boundary, prefix, out);
    prefix.pop();
}

/// `Ξ(0 → n; τ)` for a given boundary kind.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionAmplitude {
    pub matrix: Mat2,
    pub n: usize,
    pub tau: usize,
    pub boundary: Boundary,
}

impl TransitionAmplitude {
    /// Image of the initial vector `(1, 0)`.
    pub fn apply_to_ground(&self) -> [ComplexAmp; 2] {
        self.matrix.apply([ComplexAmp::new(1.0, 0.0), ComplexAmp::new(0.0, 0.0)])
    }
}

pub fn transition_amplitude(n: usize, tau: usize, bulk: &Coin, boundary_coin: &Coin, boundary: Boundary) -> Result<TransitionAmplitude> {
    let matrix = enumerate_paths(n, tau, boundary)?
        .iter()
        .fold(Mat2::ZERO, |acc, path| acc + path.matrix(bulk, boundary_coin));
    Ok(TransitionAmplitude { matrix, n, tau, boundary })
}

/// Expansion of an amplitude along `Q̃` and `R̃`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PqrsCoefficients {
    pub q: ComplexAmp,
    pub r: ComplexAmp,
    /// `max |Ξ - b_q Q̃ - b_r R̃|` entrywise.
    pub residual: f64,
}

pub fn pqrs_coefficients(t: &TransitionAmplitude, boundary_coin: &Coin) -> PqrsCoefficients {
    let basis = pqrs_decompose(boundary_coin);
    let q = basis.q.inner(&t.matrix);
    let r = basis.r.inner(&t.matrix);
    let rebuilt = basis.q.scale(q) + basis.r.scale(r);
    PqrsCoefficients { q, r, residual: (t.matrix - rebuilt).max_abs() }
}

/// Components along `P̃` and `S̃`, which vanish for every path that starts with `Q̃`.
pub fn off_basis_components(t: &TransitionAmplitude, boundary_coin: &Coin) -> (ComplexAmp, ComplexAmp) {
    let basis = pqrs_decompose(boundary_coin);
    (basis.p.inner(&t.matrix), basis.s.inner(&t.matrix))
}

/// Truncated generating series `Σ_τ b^{q,r}(0 → n; τ) z^τ` for `τ <= tau_max`.
///
/// The empty path (`n = 0`, `τ = 0`) is the identity, which has no expansion
/// on `Q̃, R̃`; its term is left at zero.
pub fn pqrs_series(n: usize, tau_max: usize, bulk: &Coin, boundary_coin: &Coin, boundary: Boundary) -> Result<(Series, Series)> {
    if tau_max > MAX_PATH_STEPS {
        return Err(Error::Resource { what: "path steps", requested: tau_max, limit: MAX_PATH_STEPS });
    }
    let mut bq = vec![ComplexAmp::default(); tau_max + 1];
    let mut br = bq.clone();
    for tau in n.max(1)..=tau_max {
        let t = transition_amplitude(n, tau, bulk, boundary_coin, boundary)?;
        let c = pqrs_coefficients(&t, boundary_coin);
        bq[tau] = c.q;
        br[tau] = c.r;
    }
    Ok((Series::from_coeffs(bq)?, Series::from_coeffs(br)?))
}

/// Largest deviation from the last-exit decomposition
///
/// ```text
/// B̃^q̃(0→n) = [1 + c̃ B̃^r̃(0→0)] d z B^q(0→n-1)
/// B̃^r̃(0→n) = [1 + c̃ B̃^r̃(0→0)] d z B^r(0→n-1)
/// ```
///
/// over `1 <= n <= n_max`, `τ <= tau_max`. The `B` series belong to the walk
/// with `Ũ = U`. Its empty path (`n - 1 = 0`, `τ = 0`) enters with
/// `B^q = 1/d`, `B^r = 0`, since `Q Q̃ = d Q̃`.
pub fn last_exit_residual(n_max: usize, tau_max: usize, bulk: &Coin, boundary_coin: &Coin) -> Result<f64> {
    let (_, returns) = pqrs_series(0, tau_max, bulk, boundary_coin, Boundary::Reflecting)?;
    let prefix = &Series::one(tau_max + 1) + &returns.scale(boundary_coin.c);
    let mut worst = 0.0f64;
    for n in 1..=n_max {
        let (lhs_q, lhs_r) = pqrs_series(n, tau_max, bulk, boundary_coin, Boundary::Reflecting)?;
        let (mut bq, br) = pqrs_series(n - 1, tau_max, bulk, bulk, Boundary::Reflecting)?;
        if n == 1 {
            let mut c = bq.coeffs().to_vec();
            c[0] = bulk.d.inv();
            bq = Series::from_coeffs(c)?;
        }
        let rhs_q = (&prefix * &bq).scale(bulk.d).mul_z();
        let rhs_r = (&prefix * &br).scale(bulk.d).mul_z();
        worst = worst.max(lhs_q.max_abs_diff(&rhs_q)).max(lhs_r.max_abs_diff(&rhs_r));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coin::{make_boundary_coin, make_bulk_coin};
    use std::collections::HashSet;

    fn words(n: usize, tau: usize, b: Boundary) -> Vec<String> {
        enumerate_paths(n, tau, b).unwrap().iter().map(|p| p.to_string()).collect()
    }

    #[test]
    fn reflecting_paths_to_two_in_four_steps() {
        let got: HashSet<String> = words(2, 4, Boundary::Reflecting).into_iter().collect();
        let want: HashSet<String> = ["QPQQ\u{303}", "PQ²Q\u{303}", "QQ\u{303}PQ\u{303}"].iter().map(|s| s.to_string()).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn absorbing_drops_the_returning_path() {
        let got: HashSet<String> = words(2, 4, Boundary::Absorbing).into_iter().collect();
        let want: HashSet<String> = ["QPQQ\u{303}", "PQ²Q\u{303}"].iter().map(|s| s.to_string()).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn enumeration_is_lexicographic_and_deterministic() {
        let paths = enumerate_paths(2, 8, Boundary::Reflecting).unwrap();
        for pair in paths.windows(2) {
            assert!(pair[0].moves() < pair[1].moves());
        }
        assert_eq!(paths, enumerate_paths(2, 8, Boundary::Reflecting).unwrap());
    }

    #[test]
    fn parity_forbids() {
        assert!(enumerate_paths(0, 1, Boundary::Reflecting).unwrap().is_empty());
        assert!(enumerate_paths(1, 4, Boundary::Reflecting).unwrap().is_empty());
    }

    #[test]
    fn caps_and_domain() {
        assert!(matches!(enumerate_paths(0, 17, Boundary::Reflecting), Err(Error::Resource { .. })));
        assert!(matches!(enumerate_paths(5, 4, Boundary::Reflecting), Err(Error::Domain(_))));
        assert_eq!(enumerate_paths(16, 16, Boundary::Reflecting).unwrap().len(), 1);
    }

    #[test]
    fn paths_stay_on_half_line() {
        for tau in 0..=12 {
            for n in 0..=tau {
                for b in [Boundary::Reflecting, Boundary::Absorbing] {
                    for p in enumerate_paths(n, tau, b).unwrap() {
                        let pos = p.positions();
                        assert_eq!(pos.len(), tau + 1);
                        assert_eq!(*pos.last().unwrap(), n);
                        assert!(PathWord::new(p.moves().to_vec()).is_ok());
                        if b == Boundary::Absorbing && tau > 0 {
                            assert!(pos[1..tau].iter().all(|&x| x > 0));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn invalid_words_rejected() {
        assert!(PathWord::new(vec![Move::Up]).is_err());
        assert!(PathWord::new(vec![Move::Down]).is_err());
        assert!(PathWord::new(vec![Move::BoundaryUp, Move::BoundaryUp]).is_err());
        assert!(PathWord::new(vec![Move::BoundaryUp, Move::Down, Move::BoundaryUp]).is_ok());
    }

    #[test]
    fn first_returns_are_catalan() {
        let catalan = [1usize, 1, 2, 5, 14, 42, 132, 429];
        for m in 1..=8 {
            let count = enumerate_paths(0, 2 * m, Boundary::Absorbing).unwrap().len();
            assert_eq!(count, catalan[m - 1], "m = {m}");
        }
    }

    #[test]
    fn single_step_is_boundary_coin() {
        let u = make_bulk_coin(0.3, 0.2, 0.5).unwrap();
        let ut = make_boundary_coin(0.7).unwrap();
        let t = transition_amplitude(1, 1, &u, &ut, Boundary::Reflecting).unwrap();
        assert_eq!(t.matrix, ut.q());
        let c = pqrs_coefficients(&t, &ut);
        assert!((c.q - ComplexAmp::new(1.0, 0.0)).norm() < 1e-15);
        assert!(c.r.norm() < 1e-15);
    }

    #[test]
    fn light_cone_edge_is_single_monotone_path() {
        let u = make_bulk_coin(0.3, 0.2, 0.5).unwrap();
        let ut = make_boundary_coin(0.7).unwrap();
        for tau in 1..=10 {
            let t = transition_amplitude(tau, tau, &u, &ut, Boundary::Reflecting).unwrap();
            let v = t.apply_to_ground();
            let expect = u.d.powu(tau as u32 - 1) * ut.c;
            assert!(v[0].norm() < 1e-15);
            assert!((v[1] - expect).norm() < 1e-14);
        }
    }

    #[test]
    fn site_zero_has_no_q_component() {
        let u = make_bulk_coin(0.4, 0.1, 1.1).unwrap();
        let ut = make_boundary_coin(-0.3).unwrap();
        for tau in (2..=12).step_by(2) {
            let t = transition_amplitude(0, tau, &u, &ut, Boundary::Reflecting).unwrap();
            let c = pqrs_coefficients(&t, &ut);
            assert!(c.q.norm() < 1e-15);
            assert!(c.residual < 1e-12);
        }
    }

    #[test]
    fn difference_of_kinds_is_the_returning_paths() {
        let u = make_bulk_coin(0.4, 0.1, 1.1).unwrap();
        let ut = make_boundary_coin(-0.3).unwrap();
        for tau in 1..=10 {
            for n in 0..=tau {
                let refl = enumerate_paths(n, tau, Boundary::Reflecting).unwrap();
                let abs = enumerate_paths(n, tau, Boundary::Absorbing).unwrap();
                let abs_set: HashSet<_> = abs.iter().cloned().collect();
                assert!(abs.iter().all(|p| refl.contains(p)));
                let returning = refl
                    .iter()
                    .filter(|p| !abs_set.contains(*p))
                    .fold(Mat2::ZERO, |acc, p| acc + p.matrix(&u, &ut));
                let diff = transition_amplitude(n, tau, &u, &ut, Boundary::Reflecting).unwrap().matrix
                    - transition_amplitude(n, tau, &u, &ut, Boundary::Absorbing).unwrap().matrix;
                assert!((diff - returning).max_abs() < 1e-14);
            }
        }
    }

    #[test]
    fn last_exit_decomposition() {
        for (p, beta, gamma, gt) in [(0.2, 0.0, 0.8, 0.0), (0.5, 0.7, -1.2, 0.4), (0.8, -2.0, 2.5, -1.0)] {
            let u = make_bulk_coin(p, beta, gamma).unwrap();
            let ut = make_boundary_coin(gt).unwrap();
            assert!(last_exit_residual(6, 12, &u, &ut).unwrap() < 1e-12);
        }
    }
}
