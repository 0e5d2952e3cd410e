//! The boundary-localized Floquet mode and its field dependence.
//!
//! For the Landau-Zener coin pair, the generating functions share a simple
//! pole in `z²` at
//!
//! ```text
//! z²_pole = (1 - e^{-iθ} √(1-p)) / (1 - e^{iθ} √(1-p))
//! ```
//!
//! whose residues give the edge mode. Its probabilities form a geometric
//! series with ratio `r = p / (2 - p - 2 cos θ √(1-p))`, so a normalizable edge
//! state exists exactly when `r < 1`.

use std::f64::consts::PI;

use crate::coin::{make_boundary_coin, make_bulk_coin, reduce_angle, Coin, ComplexAmp, ModelParams};
use crate::error::{Error, Result};
use crate::fit::{linear_fit, unwrap_phases};
use crate::genfun::{lambda_plus_derivative, lambda_plus_eval, PointFactors};
use crate::walk::{evolve_observe, MAX_STEPS};

/// Half-width of the band around `r = 1` reported as critical.
pub const CRITICAL_BAND: f64 = 1e-9;

/// Relative tail bound at which observable sums stop.
const SUM_TAIL: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeStatus {
    Localized,
    Critical,
    Delocalized,
}

impl EdgeStatus {
    pub fn classify(r: f64) -> Self {
        if r < 1.0 - CRITICAL_BAND {
            EdgeStatus::Localized
        } else if r <= 1.0 + CRITICAL_BAND {
            EdgeStatus::Critical
        } else {
            EdgeStatus::Delocalized
        }
    }
}

fn check_open_probability(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("p must lie in (0, 1), got {p}")))
    }
}

/// Decay ratio `r = p / (2 - p - 2 cos θ √(1-p))`.
pub fn decay_ratio(p: f64, theta: f64) -> Result<f64> {
    check_open_probability(p)?;
    let s = (1.0 - p).sqrt();
    let denom = 2.0 - p - 2.0 * theta.cos() * s;
    // (1 - s)² + 2 s (1 - cos θ) > 0 for p in (0, 1)
    assert!(denom > 0.0, "decay-ratio denominator {denom} not positive");
    Ok(p / denom)
}

/// `z²_pole`, a unit-modulus ratio of complex conjugates.
pub fn pole(p: f64, theta: f64) -> Result<ComplexAmp> {
    check_open_probability(p)?;
    let s = (1.0 - p).sqrt();
    let num = 1.0 - ComplexAmp::from_polar(s, -theta);
    let den = 1.0 - ComplexAmp::from_polar(s, theta);
    Ok(num / den)
}

/// `ξ = 1 / |ln r|`; infinite at `r = 1`.
pub fn localization_length(p: f64, theta: f64) -> Result<f64> {
    let r = decay_ratio(p, theta)?;
    Ok(1.0 / r.ln().abs())
}

/// Delocalization thresholds in probability and field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    pub p_c: f64,
    pub f_c: f64,
    /// False when no edge state exists at any field (`θ = 0`).
    pub edge_possible: bool,
}

/// `p_c = sin²θ`, `F_c = -π F̄ / (2 ln |sin θ|)`.
///
/// For `|θ| >= π/2` the decay ratio stays below one for every `p < 1`, so the
/// threshold is reported as `p_c = 1`, `F_c = ∞`.
pub fn thresholds(theta: f64, fbar: f64) -> Result<Thresholds> {
    if !(fbar > 0.0 && fbar.is_finite()) {
        return Err(Error::Domain(format!("Fbar must be positive, got {fbar}")));
    }
    let theta = reduce_angle(theta);
    if theta == 0.0 {
        return Ok(Thresholds { p_c: 0.0, f_c: 0.0, edge_possible: false });
    }
    if theta.abs() >= PI / 2.0 {
        return Ok(Thresholds { p_c: 1.0, f_c: f64::INFINITY, edge_possible: true });
    }
    let sin = theta.sin().abs();
    let f_c = if sin == 1.0 { f64::INFINITY } else { -PI * fbar / (2.0 * sin.ln()) };
    Ok(Thresholds { p_c: sin * sin, f_c, edge_possible: true })
}

/// Residues of the bounded-walk generating functions at `z²_pole`, on even sites.
#[derive(Debug, Clone, PartialEq)]
pub struct FloquetMode {
    /// Even sites `0, 2, …, n_max`.
    pub sites: Vec<usize>,
    pub phi_l: Vec<ComplexAmp>,
    pub phi_r: Vec<ComplexAmp>,
    pub r: f64,
    pub z_pole_sq: ComplexAmp,
    /// `|1 - c̃ A^r|` at the pole on the physical branch.
    pub denominator_at_pole: f64,
}

impl FloquetMode {
    pub fn weights(&self) -> impl Iterator<Item = (usize, f64, f64)> + '_ {
        self.sites
            .iter()
            .zip(self.phi_l.iter().zip(&self.phi_r))
            .map(|(&n, (l, r))| (n, l.norm_sqr(), r.norm_sqr()))
    }

    /// `Σ_n |φ_L(n)|² + |φ_R(n)|²` over the stored sites.
    pub fn total_weight(&self) -> f64 {
        self.weights().map(|(_, l, r)| l + r).sum()
    }
}

/// Edge mode of the standard Landau-Zener pair `U(p, β=0, γ=θ)`, `Ũ(γ̃=0)`.
pub fn floquet_mode(p: f64, theta: f64, n_max: usize) -> Result<FloquetMode> {
    check_open_probability(p)?;
    floquet_mode_for(&make_bulk_coin(p, 0.0, theta)?, &make_boundary_coin(0.0)?, n_max)
}

/// Edge mode for a Landau-Zener shaped coin pair: `p = |a|²` and
/// `θ = arg b - arg b̃`.
pub fn floquet_mode_for(bulk: &Coin, boundary: &Coin, n_max: usize) -> Result<FloquetMode> {
    let p = bulk.a.norm_sqr();
    let theta = reduce_angle(bulk.b.arg() - boundary.b.arg());
    let r = decay_ratio(p, theta)?;
    if EdgeStatus::classify(r) != EdgeStatus::Localized {
        return Err(Error::Delocalized { r });
    }
    let w = pole(p, theta)?;
    let z = w.sqrt();
    let lambda = lambda_plus_eval(bulk, z)?;
    let f = PointFactors::with_lambda(bulk, boundary, z, lambda)?;

    // Ψ = K(z) / D(z) with D(z_pole) = 0, so
    // lim (1 - z²/w) Ψ = K · (-1/w) / (dD/d(z²)), dD/d(z²) = -c̃ A'(z) / 2z.
    let lambda_prime = lambda_plus_derivative(bulk, z, lambda);
    let ar_prime = (bulk.d * lambda_prime * z + bulk.d * lambda - 2.0 * bulk.det() * z) / bulk.c;
    let d_denominator = -boundary.c * ar_prime / (2.0 * z);
    let scale = -w.inv() / d_denominator;

    let mut sites = Vec::new();
    let mut phi_l = Vec::new();
    let mut phi_r = Vec::new();
    let site1 = [f.left_numerator * scale, f.right_numerator * scale];
    // site 0 is fed only through P: Ψ(0, τ+1) = P Ψ(1, τ)
    let site0 = bulk.p().apply(site1).map(|x| x * z);
    sites.push(0);
    phi_l.push(site0[0]);
    phi_r.push(site0[1]);
    let mut power = f.base;
    for n in (2..=n_max).step_by(2) {
        sites.push(n);
        phi_l.push(power * site1[0]);
        phi_r.push(power * site1[1]);
        power *= f.base * f.base;
    }
    Ok(FloquetMode {
        sites,
        phi_l,
        phi_r,
        r,
        z_pole_sq: w,
        denominator_at_pole: f.denominator.norm(),
    })
}

/// Floquet quasi-energy `ε = L (F / 2π) arg z²_pole` (ħ = 1).
pub fn quasi_energy(params: &ModelParams) -> Result<f64> {
    let (p, theta) = (params.p(), params.theta());
    let r = decay_ratio(p, theta)?;
    if EdgeStatus::classify(r) != EdgeStatus::Localized {
        return Err(Error::Delocalized { r });
    }
    Ok(params.length * params.field / (2.0 * PI) * pole(p, theta)?.arg())
}

/// Momentum and energy of the edge component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observables {
    /// Direct sum of `±j₀ n |φ_{R,L}(n)|²` over even sites, normalized by `1 - r`.
    pub j_direct: f64,
    /// `j₀ p (2 - p - 2 cos θ √(1-p)) / [2 √(1-p) (√(1-p) cos θ - 1)²]`.
    pub j_paper_form: f64,
    /// Direct sum of `E₀ n² (|φ_L(n)|² + |φ_R(n)|²)`, normalized by `1 - r`.
    pub e_direct: f64,
}

pub fn observables(p: f64, theta: f64, j0: f64, e0: f64) -> Result<Observables> {
    let r = decay_ratio(p, theta)?;
    if EdgeStatus::classify(r) != EdgeStatus::Localized {
        return Err(Error::Delocalized { r });
    }
    let weight = 1.0 - r;
    let norm0 = weight * weight;
    let (mut j_sum, mut e_sum) = (0.0, 0.0);
    // n = 0 carries neither momentum nor energy; start at n = 2 with r^{n-1}, r^n
    let mut r_odd = r;
    let peak = 2.0 / -r.ln();
    let mut n = 2.0f64;
    loop {
        let w_r = r_odd * norm0;
        let w_l = r_odd * r * norm0;
        j_sum += n * (w_r - w_l);
        let e_term = n * n * (w_r + w_l);
        e_sum += e_term;
        if n > peak {
            let ratio = r * r * ((n + 2.0) / n).powi(2);
            if ratio < 1.0 && e_term * ratio / (1.0 - ratio) <= SUM_TAIL * e_sum {
                break;
            }
        }
        if e_term == 0.0 {
            break;
        }
        r_odd *= r * r;
        n += 2.0;
    }
    let s = (1.0 - p).sqrt();
    let c = theta.cos();
    let j_paper_form = j0 * p * (2.0 - p - 2.0 * c * s) / (2.0 * s * (s * c - 1.0).powi(2));
    Ok(Observables {
        j_direct: j0 * j_sum / weight,
        j_paper_form,
        e_direct: e0 * e_sum / weight,
    })
}

/// Full analytic characterization at one parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeReport {
    pub p: f64,
    pub theta: f64,
    pub r: f64,
    pub status: EdgeStatus,
    /// `1/|ln r|`, present only when localized.
    pub xi: Option<f64>,
    /// `1 - r` when localized, else 0.
    pub weight: f64,
    pub z_pole_sq: ComplexAmp,
    pub quasi_energy: Option<f64>,
    pub thresholds: Thresholds,
    pub observables: Option<Observables>,
}

impl EdgeReport {
    pub fn localized(&self) -> bool {
        self.status == EdgeStatus::Localized
    }

    pub fn analyze(params: &ModelParams) -> Result<Self> {
        let (p, theta) = (params.p(), params.theta());
        let thresholds = thresholds(theta, params.fbar)?;
        if p >= 1.0 {
            // ballistic limit: no backscattering, no edge state
            return Ok(EdgeReport {
                p,
                theta,
                r: 1.0,
                status: EdgeStatus::Critical,
                xi: None,
                weight: 0.0,
                z_pole_sq: ComplexAmp::new(1.0, 0.0),
                quasi_energy: None,
                thresholds,
                observables: None,
            });
        }
        let r = decay_ratio(p, theta)?;
        let status = EdgeStatus::classify(r);
        let z_pole_sq = pole(p, theta)?;
        let localized = status == EdgeStatus::Localized;
        Ok(EdgeReport {
            p,
            theta,
            r,
            status,
            xi: localized.then(|| 1.0 / r.ln().abs()),
            weight: if localized { 1.0 - r } else { 0.0 },
            z_pole_sq,
            quasi_energy: if localized { Some(quasi_energy(params)?) } else { None },
            thresholds,
            observables: if localized { Some(observables(p, theta, params.j0, params.e0)?) } else { None },
        })
    }
}

/// Time-averaged site probabilities `|ψ_L(n)|² + |ψ_R(n)|²`, `n <= n_max`,
/// over even `τ` in `[tau_lo, tau_hi]`.
pub fn time_averaged_profile(bulk: &Coin, boundary: &Coin, n_max: usize, tau_lo: usize, tau_hi: usize) -> Result<Vec<f64>> {
    let mut acc = vec![0.0; n_max + 1];
    let mut count = 0usize;
    evolve_observe(bulk, boundary, tau_hi, MAX_STEPS, |s| {
        if s.tau() >= tau_lo && s.tau() % 2 == 0 {
            for (n, slot) in acc.iter_mut().enumerate() {
                *slot += s.amplitude(n).iter().map(|z| z.norm_sqr()).sum::<f64>();
            }
            count += 1;
        }
    })?;
    if count == 0 {
        return Err(Error::Domain(format!("no even tau in [{tau_lo}, {tau_hi}]")));
    }
    Ok(acc.into_iter().map(|x| x / count as f64).collect())
}

/// Phase advance per step of the return amplitude `<Ψ_0|Ψ(τ)>`, i.e. minus
/// the fitted slope of its unwrapped phase over even `τ` in `[tau_lo, tau_hi]`.
pub fn return_phase_rate(bulk: &Coin, boundary: &Coin, tau_lo: usize, tau_hi: usize) -> Result<f64> {
    let mut taus = Vec::new();
    let mut phases = Vec::new();
    evolve_observe(bulk, boundary, tau_hi, MAX_STEPS, |s| {
        if s.tau() >= tau_lo && s.tau() % 2 == 0 {
            taus.push(s.tau() as f64);
            phases.push(s.return_amplitude().arg());
        }
    })?;
    let fit = linear_fit(&taus, &unwrap_phases(&phases))
        .ok_or_else(|| Error::Domain(format!("need two even tau in [{tau_lo}, {tau_hi}]")))?;
    Ok(-fit.slope)
}
