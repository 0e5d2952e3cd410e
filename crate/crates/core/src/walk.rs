//! Direct time evolution on the half line with a reflecting boundary.
//!
//! One step maps `Ψ(·, τ)` to `Ψ(·, τ+1)`:
//!
//! ```text
//! Ψ(n, τ+1) = P Ψ(n+1, τ) + Q Ψ(n-1, τ)     n >= 2
//! Ψ(1, τ+1) = P Ψ(2, τ)   + Q̃ Ψ(0, τ)
//! Ψ(0, τ+1) = P Ψ(1, τ)
//! ```
//!
//! The walker starts in the ground state, `Ψ(0, 0) = (1, 0)`. Amplitudes are
//! stored densely over the light cone `0..=τ`.

use crate::coin::{Coin, ComplexAmp};
use crate::error::{Error, Result};

/// Default cap on the number of steps accepted by [`evolve`].
pub const MAX_STEPS: usize = 1 << 20;

const ZERO: ComplexAmp = ComplexAmp::new(0.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct WalkState {
    tau: usize,
    psi_l: Vec<ComplexAmp>,
    psi_r: Vec<ComplexAmp>,
}

/// Per-site occupation probabilities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SiteProbability {
    pub n: usize,
    pub prob_l: f64,
    pub prob_r: f64,
}

impl WalkState {
    /// Ground state at `τ = 0`.
    pub fn initial() -> Self {
        WalkState {
            tau: 0,
            psi_l: vec![ComplexAmp::new(1.0, 0.0)],
            psi_r: vec![ZERO],
        }
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    pub fn psi_l(&self) -> &[ComplexAmp] {
        &self.psi_l
    }

    pub fn psi_r(&self) -> &[ComplexAmp] {
        &self.psi_r
    }

    /// `(ψ_L(n), ψ_R(n))`, zero outside the light cone.
    pub fn amplitude(&self, n: usize) -> [ComplexAmp; 2] {
        match (self.psi_l.get(n), self.psi_r.get(n)) {
            (Some(l), Some(r)) => [*l, *r],
            _ => [ZERO, ZERO],
        }
    }

    /// Return amplitude `<Ψ_0|Ψ(τ)> = ψ_L(0, τ)`.
    pub fn return_amplitude(&self) -> ComplexAmp {
        self.psi_l[0]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.psi_l
            .iter()
            .chain(&self.psi_r)
            .map(|z| z.norm_sqr())
            .sum()
    }

    /// Largest modulus found on a site of the wrong parity (should be exactly 0).
    pub fn parity_defect(&self) -> f64 {
        (0..=self.tau)
            .filter(|n| (n + self.tau) % 2 == 1)
            .map(|n| self.psi_l[n].norm().max(self.psi_r[n].norm()))
            .fold(0.0, f64::max)
    }

    /// Applies one step of the bounded walk. Each site sums its `P` term first,
    /// then its `Q` term.
    pub fn step(&self, bulk: &Coin, boundary: &Coin) -> WalkState {
        let tau = self.tau;
        let size = tau + 2;
        let mut psi_l = vec![ZERO; size];
        let mut psi_r = vec![ZERO; size];
        for n in 0..size {
            // P: down move from n + 1, lands in the L component.
            if n < tau {
                let (l, r) = (self.psi_l[n + 1], self.psi_r[n + 1]);
                psi_l[n] = bulk.a * l + bulk.b * r;
            }
            // Q / Q̃: up move from n - 1, lands in the R component.
            if n >= 1 {
                let (l, r) = (self.psi_l[n - 1], self.psi_r[n - 1]);
                let up = if n == 1 { boundary } else { bulk };
                psi_r[n] = up.c * l + up.d * r;
            }
        }
        WalkState { tau: tau + 1, psi_l, psi_r }
    }

    /// Occupation probabilities on the sites of matching parity `n ≡ τ (mod 2)`.
    pub fn distribution(&self) -> Vec<SiteProbability> {
        (0..=self.tau)
            .filter(|n| (n + self.tau) % 2 == 0)
            .map(|n| SiteProbability {
                n,
                prob_l: self.psi_l[n].norm_sqr(),
                prob_r: self.psi_r[n].norm_sqr(),
            })
            .collect()
    }

    /// Total probability on sites `0..=n_max`.
    pub fn mass_within(&self, n_max: usize) -> f64 {
        let end = n_max.min(self.tau) + 1;
        self.psi_l[..end]
            .iter()
            .chain(&self.psi_r[..end])
            .map(|z| z.norm_sqr())
            .sum()
    }
}

pub fn initial_state() -> WalkState {
    WalkState::initial()
}

/// `steps` applications of [`WalkState::step`] to the ground state.
pub fn evolve(bulk: &Coin, boundary: &Coin, steps: usize) -> Result<WalkState> {
    evolve_with_limit(bulk, boundary, steps, MAX_STEPS)
}

pub fn evolve_with_limit(bulk: &Coin, boundary: &Coin, steps: usize, limit: usize) -> Result<WalkState> {
    let mut last = None;
    evolve_observe(bulk, boundary, steps, limit, |s| {
        if s.tau() == steps {
            last = Some(s.clone());
        }
    })?;
    Ok(last.expect("final state observed"))
}

/// Runs the walk for `steps` steps, handing every state (including `τ = 0`)
/// to `observe`.
pub fn evolve_observe<F>(bulk: &Coin, boundary: &Coin, steps: usize, limit: usize, mut observe: F) -> Result<()>
where
    F: FnMut(&WalkState),
{
    if steps > limit {
        return Err(Error::Resource { what: "steps", requested: steps, limit });
    }
    let mut state = WalkState::initial();
    observe(&state);
    for _ in 0..steps {
        state = state.step(bulk, boundary);
        observe(&state);
    }
    Ok(())
}
