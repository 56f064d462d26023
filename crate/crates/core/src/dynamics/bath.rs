//! Explicit Ohmic baths of auxiliary oscillators.
//!
//! Each damped site `s` gets `m` private bath oscillators with frequencies
//! `ω_j = jΛ/m` (`j = 1..=m`, `Λ` the cutoff) and bilinear position coupling
//! `g·ξ_j q_s q_j` with the ladder `ξ_j = jΛ/m`.  A coupling linear in `ω_j`
//! on an evenly spaced ladder gives a spectral density growing linearly in
//! frequency up to the cutoff, i.e. an Ohmic bath.  The usual counterterm
//! `g² Σ_j ξ_j²/ω_j² = g² m` is added to the site's potential so the bath
//! damps the oscillator without shifting its bare frequency; with it the
//! augmented `V` is positive definite for every `g`.
//!
//! The overall scale `g` is calibrated from a quality factor `Q`: a single
//! unit-frequency oscillator coupled to such a bath must lose excess energy
//! at the rate `1/Q` (energy `e`-folds after `Q/(2π)` periods).  Because a
//! finite bath has a recurrence time `2πm/Λ`, the rate is matched at
//! `t_w = 0.6 · 2πm/Λ`, before any recurrence, by bisection on `g`.

use nalgebra::DMatrix;

use crate::dynamics::propagator::Propagator;
use crate::error::{Error, Result};
use crate::gaussian::GaussianState;
use crate::network::QuadraticHamiltonian;

pub const DEFAULT_BATH_SIZE: usize = 50;
pub const DEFAULT_CUTOFF: f64 = 5.0;

/// Ladder of bath frequencies `jΛ/m`.
pub fn ohmic_frequencies(m: usize, cutoff: f64) -> Vec<f64> {
    (1..=m).map(|j| j as f64 * cutoff / m as f64).collect()
}

fn check_bath(m: usize, cutoff: f64) -> Result<()> {
    if m == 0 || !(cutoff > 0.0) {
        return Err(Error::invalid(format!("bath needs m ≥ 1 and Λ > 0 (got m = {m}, Λ = {cutoff})")));
    }
    Ok(())
}

/// Append `m` bath oscillators to every site in `sites`, coupled with overall
/// scale `g`.  Bath modes of site `sites[a]` occupy indices
/// `n + a·m .. n + (a+1)·m`.
pub fn augment_hamiltonian(
    h: &QuadraticHamiltonian,
    sites: &[usize],
    m: usize,
    cutoff: f64,
    g: f64,
) -> Result<QuadraticHamiltonian> {
    check_bath(m, cutoff)?;
    let n = h.mode_count();
    if sites.iter().any(|&s| s >= n) {
        return Err(Error::invalid("bath attached to a site outside the network"));
    }
    if !(g >= 0.0) {
        return Err(Error::invalid(format!("bath coupling scale {g} must be ≥ 0")));
    }
    let total = n + sites.len() * m;
    let omega = ohmic_frequencies(m, cutoff);
    let mut v = DMatrix::zeros(total, total);
    let mut t = DMatrix::zeros(total, total);
    v.view_mut((0, 0), (n, n)).copy_from(h.v());
    t.view_mut((0, 0), (n, n)).copy_from(h.t());
    for (a, &s) in sites.iter().enumerate() {
        for (j, &w) in omega.iter().enumerate() {
            let b = n + a * m + j;
            v[(b, b)] = w * w;
            t[(b, b)] = 1.0;
            v[(s, b)] = -g * w;
            v[(b, s)] = -g * w;
        }
        v[(s, s)] += g * g * m as f64;
    }
    QuadraticHamiltonian::new(v, t, h.model()).map_err(|e| match e {
        Error::NotPositiveDefinite { what, min_eigenvalue } => Error::NotPositiveDefinite {
            what: format!("{what} with bath coupling scale g = {g}"),
            min_eigenvalue,
        },
        other => other,
    })
}

/// Extend a system state with every bath in its own ground state
/// `diag(1/ω_j, ω_j)`, uncorrelated with the system.
pub fn augment_state(state: &GaussianState, sites: usize, m: usize, cutoff: f64) -> Result<GaussianState> {
    check_bath(m, cutoff)?;
    let n = state.mode_count();
    let total = n + sites * m;
    let g0 = state.gamma();
    let mut g = DMatrix::zeros(2 * total, 2 * total);
    for (bi, bo) in [(0, 0), (n, total)] {
        for (ci, co) in [(0, 0), (n, total)] {
            g.view_mut((bo, co), (n, n)).copy_from(&g0.view((bi, ci), (n, n)));
        }
    }
    let omega = ohmic_frequencies(m, cutoff);
    for a in 0..sites {
        for (j, &w) in omega.iter().enumerate() {
            let b = n + a * m + j;
            g[(b, b)] = 1.0 / w;
            g[(total + b, total + b)] = w;
        }
    }
    GaussianState::from_matrix(g)
}

/// Window over which the energy decay rate is matched.
pub fn calibration_window(m: usize, cutoff: f64) -> f64 {
    0.6 * 2.0 * std::f64::consts::PI * m as f64 / cutoff
}

/// Remaining fraction of the initial excess energy of a unit-frequency
/// oscillator (initially thermal with `z = 3`) after time `t`, when coupled
/// with scale `g` to an `m`-mode Ohmic bath.
pub fn excess_energy_fraction(m: usize, cutoff: f64, g: f64, t: f64) -> Result<f64> {
    let single = QuadraticHamiltonian::new(
        DMatrix::identity(1, 1),
        DMatrix::identity(1, 1),
        crate::network::Model::Spring,
    )?;
    let h = augment_hamiltonian(&single, &[0], m, cutoff, g)?;
    let z = 3.0;
    let s0 = augment_state(&GaussianState::from_matrix(DMatrix::identity(2, 2) * z)?, 1, m, cutoff)?;
    let s = Propagator::new(&h)?.evolve_reduced(&s0, &[0], t)?;
    // Energy of the bare unit oscillator: (γ_qq + γ_pp)/4; ground state ½.
    let excess = 0.25 * (s.gamma()[(0, 0)] + s.gamma()[(1, 1)]) - 0.5;
    let initial = 0.5 * z - 0.5;
    Ok(excess / initial)
}

/// Bisection for the coupling scale that yields quality factor `q`.
pub fn calibrate_coupling(m: usize, cutoff: f64, q: f64) -> Result<f64> {
    check_bath(m, cutoff)?;
    if !(q > 0.0) {
        return Err(Error::invalid(format!("quality factor {q} must be positive")));
    }
    if q.is_infinite() {
        return Ok(0.0);
    }
    let tw = calibration_window(m, cutoff);
    let target = (-tw / q).exp();
    let mut lo = 0.0;
    let mut hi = 1e-3;
    while excess_energy_fraction(m, cutoff, hi, tw)? > target {
        lo = hi;
        hi *= 2.0;
        if hi > 1e3 {
            return Err(Error::numerical(format!("no bath coupling reaches Q = {q}")));
        }
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if excess_energy_fraction(m, cutoff, mid, tw)? > target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-12 * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Attach calibrated Ohmic baths to `sites`; returns the augmented
/// Hamiltonian and the coupling scale used.
pub fn ohmic_bath_augment(
    h: &QuadraticHamiltonian,
    sites: &[usize],
    m: usize,
    cutoff: f64,
    q: f64,
) -> Result<(QuadraticHamiltonian, f64)> {
    let g = calibrate_coupling(m, cutoff, q)?;
    Ok((augment_hamiltonian(h, sites, m, cutoff, g)?, g))
}
