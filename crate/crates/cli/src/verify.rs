//! Cross-engine checks run by `lzwalk verify`, in a fixed order.

use std::f64::consts::PI;

use lzwalk::edge::{decay_ratio, floquet_mode, pole, return_phase_rate, time_averaged_profile};
use lzwalk::genfun::{absorbing_series, BoundedWalkSeries};
use lzwalk::pathsum::{last_exit_residual, off_basis_components, pqrs_series, transition_amplitude};
use lzwalk::walk::{evolve_observe, WalkState, MAX_STEPS};
use lzwalk::{make_boundary_coin, make_bulk_coin, Boundary, Coin};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::Table;

pub const EQUIVALENCE_TOL: f64 = 1e-10;
pub const OFF_BASIS_TOL: f64 = 1e-12;
pub const PROFILE_REL_TOL: f64 = 0.03;
pub const PHASE_RATE_TOL: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    fn new(name: &'static str, residual: f64, tolerance: f64) -> Self {
        Check { name, residual, tolerance, passed: residual < tolerance }
    }
}

/// `p ∈ {0.2, 0.5, 0.8}`, `θ ∈ {π/6, π/4, π/3}`, `β ∈ {0, 0.7}`, `γ̃ = 0`.
pub fn coin_grid() -> Vec<(Coin, Coin)> {
    let boundary = make_boundary_coin(0.0).expect("finite phase");
    let mut out = Vec::new();
    for p in [0.2, 0.5, 0.8] {
        for theta in [PI / 6.0, PI / 4.0, PI / 3.0] {
            for beta in [0.0, 0.7] {
                out.push((make_bulk_coin(p, beta, theta).expect("valid coin"), boundary));
            }
        }
    }
    out
}

fn history(bulk: &Coin, boundary: &Coin, steps: usize) -> Result<Vec<WalkState>, CliError> {
    let mut states = Vec::with_capacity(steps + 1);
    evolve_observe(bulk, boundary, steps, MAX_STEPS, |s| states.push(s.clone()))?;
    Ok(states)
}

fn walk_vs_pathsum(grid: &[(Coin, Coin)], tau_max: usize) -> Result<f64, CliError> {
    let mut worst = 0.0f64;
    for (u, ut) in grid {
        for (tau, s) in history(u, ut, tau_max)?.iter().enumerate() {
            for n in 0..=tau {
                let [l, r] = transition_amplitude(n, tau, u, ut, Boundary::Reflecting)?.apply_to_ground();
                let [wl, wr] = s.amplitude(n);
                worst = worst.max((l - wl).norm()).max((r - wr).norm());
            }
        }
    }
    Ok(worst)
}

fn walk_vs_genfun(grid: &[(Coin, Coin)], order: usize, sites: usize) -> Result<f64, CliError> {
    let mut worst = 0.0f64;
    for (u, ut) in grid {
        let states = history(u, ut, order)?;
        let gf = BoundedWalkSeries::new(u, ut, order + 1)?;
        for (n, (sl, sr)) in gf.sites(sites).iter().enumerate() {
            for (tau, s) in states.iter().enumerate() {
                let [wl, wr] = s.amplitude(n);
                worst = worst.max((sl.coeff(tau) - wl).norm()).max((sr.coeff(tau) - wr).norm());
            }
        }
    }
    Ok(worst)
}

fn parseval(grid: &[(Coin, Coin)], order: usize) -> Result<f64, CliError> {
    let mut worst = 0.0f64;
    for (u, ut) in grid {
        let sites = BoundedWalkSeries::new(u, ut, order + 1)?.sites(order);
        for tau in 0..=order {
            let total: f64 = sites.iter().map(|(l, r)| l.coeff(tau).norm_sqr() + r.coeff(tau).norm_sqr()).sum();
            worst = worst.max((total - 1.0).abs());
        }
    }
    Ok(worst)
}

fn norm_drift(grid: &[(Coin, Coin)], steps: usize) -> Result<f64, CliError> {
    let mut worst = 0.0f64;
    for (u, ut) in grid {
        evolve_observe(u, ut, steps, MAX_STEPS, |s| worst = worst.max((s.norm_sqr() - 1.0).abs()))?;
    }
    Ok(worst)
}

fn off_basis(grid: &[(Coin, Coin)], tau_max: usize) -> Result<f64, CliError> {
    let mut worst = 0.0f64;
    for (u, ut) in grid {
        for tau in 1..=tau_max {
            for n in (tau % 2..=tau).step_by(2) {
                for kind in [Boundary::Reflecting, Boundary::Absorbing] {
                    let (pt, st) = off_basis_components(&transition_amplitude(n, tau, u, ut, kind)?, ut);
                    worst = worst.max(pt.norm()).max(st.norm());
                }
            }
        }
    }
    Ok(worst)
}

fn last_exit(grid: &[(Coin, Coin)], tau_max: usize, sites: usize) -> Result<f64, CliError> {
    let mut worst = 0.0f64;
    for (u, ut) in grid {
        worst = worst.max(last_exit_residual(sites.max(1), tau_max, u, ut)?);
    }
    Ok(worst)
}

fn absorbing_vs_pathsum(grid: &[(Coin, Coin)], tau_max: usize) -> Result<f64, CliError> {
    let mut worst = 0.0f64;
    for (u, ut) in grid {
        let ar = absorbing_series(u, tau_max + 1)?;
        let (_, br) = pqrs_series(0, tau_max, u, ut, Boundary::Absorbing)?;
        worst = worst.max(ar.max_abs_diff(&br));
    }
    Ok(worst)
}

/// Residue weights against `|φ_L(n)|² = r^n (1-r)²`, `|φ_R(n)|² = r^{n-1} (1-r)²`
/// and the total weight against `1 - r`, at `p = 0.2`, `θ = π/4`.
fn residue_geometric() -> Result<f64, CliError> {
    let (p, theta) = (0.2, PI / 4.0);
    let r = decay_ratio(p, theta)?;
    let mode = floquet_mode(p, theta, 20)?;
    let norm = (1.0 - r).powi(2);
    let mut worst = 0.0f64;
    for (n, wl, wr) in mode.weights() {
        let want_r = if n == 0 { 0.0 } else { r.powi(n as i32 - 1) * norm };
        worst = worst.max((wl - r.powi(n as i32) * norm).abs()).max((wr - want_r).abs());
    }
    let long = floquet_mode(p, theta, 400)?;
    Ok(worst.max((long.total_weight() - (1.0 - r)).abs()))
}

/// Largest relative gap between the time-averaged walk and the Floquet
/// profile on even `n <= 6`, `τ ∈ [300, 400]`.
fn simulation_vs_floquet() -> Result<f64, CliError> {
    let (p, theta) = (0.2, PI / 4.0);
    let (u, ut) = (make_bulk_coin(p, 0.0, theta)?, make_boundary_coin(0.0)?);
    let profile = time_averaged_profile(&u, &ut, 6, 300, 400)?;
    let mode = floquet_mode(p, theta, 6)?;
    Ok(mode
        .weights()
        .map(|(n, wl, wr)| ((profile[n] - (wl + wr)) / (wl + wr)).abs())
        .fold(0.0, f64::max))
}

fn phase_rate() -> Result<f64, CliError> {
    let (p, theta) = (0.2, PI / 4.0);
    let (u, ut) = (make_bulk_coin(p, 0.0, theta)?, make_boundary_coin(0.0)?);
    let rate = return_phase_rate(&u, &ut, 300, 400)?;
    Ok((rate - pole(p, theta)?.arg() / 2.0).abs())
}

pub fn run_all(cfg: &RunConfig) -> Result<Vec<Check>, CliError> {
    let grid = coin_grid();
    Ok(vec![
        Check::new("walk_vs_pathsum", walk_vs_pathsum(&grid, cfg.tau_max)?, EQUIVALENCE_TOL),
        Check::new("walk_vs_genfun", walk_vs_genfun(&grid, cfg.order, cfg.sites)?, EQUIVALENCE_TOL),
        Check::new("parseval_series", parseval(&grid, cfg.order)?, EQUIVALENCE_TOL),
        Check::new("unitarity", norm_drift(&grid, cfg.steps)?, cfg.unitarity_tol),
        Check::new("pqrs_off_basis", off_basis(&grid, cfg.tau_max)?, OFF_BASIS_TOL),
        Check::new("last_exit_recursion", last_exit(&grid, cfg.tau_max, cfg.sites)?, EQUIVALENCE_TOL),
        Check::new("absorbing_vs_pathsum", absorbing_vs_pathsum(&grid, cfg.tau_max)?, EQUIVALENCE_TOL),
        Check::new("residue_geometric", residue_geometric()?, EQUIVALENCE_TOL),
        Check::new("simulation_vs_floquet", simulation_vs_floquet()?, PROFILE_REL_TOL),
        Check::new("quasi_energy_rate", phase_rate()?, PHASE_RATE_TOL),
    ])
}

pub fn to_table(checks: &[Check]) -> Table {
    let mut table = Table::new(&["check", "residual", "tolerance", "pass"]);
    for c in checks {
        table.push(vec![c.name.into(), c.residual.into(), c.tolerance.into(), c.passed.into()]);
    }
    table
}
