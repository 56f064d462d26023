//! Momentum diffusion from the double-commutator generator
//! `dρ/dt = −i[H, ρ] − Σₙ ξₙ [q̂ₙ, [q̂ₙ, ρ]]`.
//!
//! Second moments: `d⟨p̂ₙ²⟩/dt = −ξₙ ⟨[q̂ₙ, [q̂ₙ, p̂ₙ²]]⟩ = 2ξₙ`, because
//! `[q̂, p̂²] = 2i p̂` and `[q̂, 2i p̂] = −2`.  Positions and mixed moments are
//! untouched.  With `γ = 2⟨·⟩` (so the vacuum is `γ = 1`) the dissipator adds
//! `4ξₙ dt` to `γ_{pₙpₙ}` per unit time.  The Hamiltonian part is exact, and
//! the two are combined by Strang splitting.

use nalgebra::DMatrix;

use crate::dynamics::propagator::Propagator;
use crate::error::{Error, Result};
use crate::gaussian::{symmetrize, GaussianState};

/// Default upper bound on the splitting substep.
pub const MAX_SUBSTEP: f64 = 0.05;

/// Add `4ξₙ dt` to every `γ_{pₙpₙ}`.
pub fn momentum_diffusion_step(state: &GaussianState, xi: &[f64], dt: f64) -> Result<GaussianState> {
    let mut g = state.gamma().clone();
    add_diffusion(&mut g, xi, dt)?;
    GaussianState::from_matrix(g)
}

fn add_diffusion(g: &mut DMatrix<f64>, xi: &[f64], dt: f64) -> Result<()> {
    let n = g.nrows() / 2;
    if xi.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: xi.len() });
    }
    if !(dt >= 0.0) || xi.iter().any(|&x| !(x >= 0.0)) {
        return Err(Error::invalid("diffusion rates and time steps must be ≥ 0"));
    }
    for (i, &x) in xi.iter().enumerate() {
        g[(n + i, n + i)] += 4.0 * x * dt;
    }
    Ok(())
}

/// Hamiltonian evolution interleaved with momentum diffusion.
#[derive(Debug, Clone)]
pub struct DiffusiveEvolution<'a> {
    propagator: &'a Propagator,
    xi: Vec<f64>,
    max_substep: f64,
}

impl<'a> DiffusiveEvolution<'a> {
    pub fn new(propagator: &'a Propagator, xi: Vec<f64>, max_substep: f64) -> Result<Self> {
        if xi.len() != propagator.mode_count() {
            return Err(Error::DimensionMismatch { expected: propagator.mode_count(), found: xi.len() });
        }
        if xi.iter().any(|&x| !(x >= 0.0)) {
            return Err(Error::invalid("diffusion rates must be ≥ 0"));
        }
        if !(max_substep > 0.0) {
            return Err(Error::invalid("substep must be positive"));
        }
        Ok(Self { propagator, xi, max_substep })
    }

    /// Advance `state` by `t ≥ 0` with Strang splitting
    /// `D(h/2) · U(h) · D(h/2)` per substep.
    pub fn advance(&self, state: &GaussianState, t: f64) -> Result<GaussianState> {
        if !(t >= 0.0) {
            return Err(Error::invalid("evolution time must be ≥ 0"));
        }
        if t == 0.0 {
            return Ok(state.clone());
        }
        let steps = (t / self.max_substep).ceil().max(1.0) as usize;
        let h = t / steps as f64;
        let s = self.propagator.matrix(h);
        let st = s.transpose();
        let mut g = state.gamma().clone();
        for _ in 0..steps {
            add_diffusion(&mut g, &self.xi, 0.5 * h)?;
            g = &s * &g * &st;
            add_diffusion(&mut g, &self.xi, 0.5 * h)?;
        }
        GaussianState::from_matrix(symmetrize(&g))
    }

    /// States at each of the increasing `times` (starting from time 0).
    pub fn series(&self, state: &GaussianState, times: &[f64]) -> Result<Vec<GaussianState>> {
        let mut out = Vec::with_capacity(times.len());
        let mut cur = state.clone();
        let mut now = 0.0;
        for &t in times {
            if t < now {
                return Err(Error::invalid("time grid must be nondecreasing and start at ≥ 0"));
            }
            cur = self.advance(&cur, t - now)?;
            now = t;
            out.push(cur.clone());
        }
        Ok(out)
    }
}
