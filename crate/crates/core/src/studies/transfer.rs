//! Perfect state transfer: the engineered RWA chain and the two-site swap.

use nalgebra::SymmetricEigen;

use super::{check_physical, check_positive, checked_negativity, StudyResult};
use crate::dynamics::ring::ring_kernels;
use crate::dynamics::Propagator;
use crate::error::{Error, Result};
use crate::gaussian::GaussianState;
use crate::network::{chain, engineered_transfer_chain, Boundary, Model};
use crate::studies::formulas::initial_negativity;

/// `|(e^{iV_I t})_{1M}|` of the engineered chain of `m` sites, with
/// `V_I = V − 1`, from the eigendecomposition of `V_I`.
pub fn perfect_transfer_amplitude(m: usize, c: f64, times: &[f64]) -> Result<Vec<f64>> {
    let h = engineered_transfer_chain(m, c, false)?.hamiltonian()?;
    let vi = h.v() - nalgebra::DMatrix::identity(m, m);
    let eig = SymmetricEigen::try_new(vi, f64::EPSILON, 0)
        .ok_or_else(|| Error::numerical("eigendecomposition of V_I did not converge"))?;
    let u = &eig.eigenvectors;
    Ok(times
        .iter()
        .map(|&t| {
            let (mut re, mut im) = (0.0, 0.0);
            for k in 0..m {
                let w = u[(0, k)] * u[(m - 1, k)];
                let phase = eig.eigenvalues[k] * t;
                re += w * phase.cos();
                im += w * phase.sin();
            }
            re.hypot(im)
        })
        .collect())
}

/// Engineered chain of `m` sites next to a decoupled site 0 that starts
/// entangled with site 1.
///
/// Columns: `t`, the transfer amplitude, the law `|sin(ct/2)|^{M−1}` and
/// `N(0, M)`.  Derived: `N_transfer` at `t = π/c`, `N_i`, and the largest
/// deviation of the amplitude from the law.
pub fn perfect_transfer_check(m: usize, c: f64, r: f64, times: &[f64]) -> Result<StudyResult> {
    check_positive("c", c)?;
    if m < 2 {
        return Err(Error::invalid("engineered chain needs at least two sites"));
    }
    let amp = perfect_transfer_amplitude(m, c, times)?;
    let h = engineered_transfer_chain(m, c, true)?.hamiltonian()?;
    let prop = Propagator::new(&h)?;
    let s0 = GaussianState::vacuum(m + 1)?.embed_two_mode_squeezed(0, 1, r)?;
    let negativity_at = |t: f64| checked_negativity(prop.evolve_reduced(&s0, &[0, m], t)?.gamma(), &[1]);
    let mut res = StudyResult::new("perfect_transfer", &["t", "amplitude", "amplitude_law", "N"])
        .param("sites", m)
        .param("c", c)
        .param("r", r);
    let mut worst: f64 = 0.0;
    let mut nu = f64::INFINITY;
    for (&t, &a) in times.iter().zip(&amp) {
        let law = (0.5 * c * t).sin().abs().powi(m as i32 - 1);
        worst = worst.max((a - law).abs());
        let (n, v) = negativity_at(t)?;
        nu = nu.min(v);
        res.rows.push(vec![t, a, law, n]);
    }
    let t_transfer = std::f64::consts::PI / c;
    let (n_transfer, v) = negativity_at(t_transfer)?;
    res.set("t_transfer", t_transfer);
    res.set("N_transfer", n_transfer);
    res.set("N_i", initial_negativity(r));
    res.set("max_amplitude_error", worst);
    res.set("min_symplectic_eigenvalue", nu.min(v));
    Ok(res)
}

/// Coupling `((2k+1)²/l² − 1)/4` and time `lπ` at which two coupled sites
/// exchange their states.
pub fn swap_parameters(k: u32, l: u32) -> Result<(f64, f64)> {
    if l == 0 {
        return Err(Error::invalid("l must be a positive integer"));
    }
    let c = (((2 * k + 1) as f64 / l as f64).powi(2) - 1.0) / 4.0;
    if !(c > 0.0) {
        return Err(Error::invalid(format!("(k, l) = ({k}, {l}) gives a non-positive coupling {c}")));
    }
    Ok((c, l as f64 * std::f64::consts::PI))
}

/// Swap of a two-site Spring ring: site 0 is decoupled and entangled with
/// site 1; after `t = lπ` the entanglement must sit on site 2.
///
/// Columns: `t`, `N(0,1)`, `N(0,2)` over `[0, lπ]`.  Derived: `c`, `t_swap`,
/// the kernels `f1`, `f1_dot`, `g1`, `N_initial`, `N_final` and
/// `max_cross_covariance` of site 1 with sites 0 and 2 at `t_swap`.
pub fn two_node_swap(k: u32, l: u32, r: f64) -> Result<StudyResult> {
    let (c, t_swap) = swap_parameters(k, l)?;
    let h = chain(2, c, Boundary::Periodic, Model::Spring, true)?.hamiltonian()?;
    let prop = Propagator::new(&h)?;
    let s0 = GaussianState::vacuum(3)?.embed_two_mode_squeezed(0, 1, r)?;
    let mut res = StudyResult::new("swap", &["t", "N01", "N02"]).param("k", k).param("l", l).param("r", r);
    let steps = 200;
    let mut nu = f64::INFINITY;
    for i in 0..=steps {
        let t = t_swap * i as f64 / steps as f64;
        let state = prop.evolve(&s0, t)?;
        nu = nu.min(check_physical(state.gamma())?);
        let n01 = state.reduce(&[0, 1])?.log_negativity(&[1])?;
        let n02 = state.reduce(&[0, 2])?.log_negativity(&[1])?;
        res.rows.push(vec![t, n01, n02]);
    }
    let kern = ring_kernels(2, c, Model::Spring, t_swap)?;
    let end = prop.evolve(&s0, t_swap)?;
    let g = end.gamma();
    let mut cross: f64 = 0.0;
    for a in [1, 4] {
        for b in [0, 2, 3, 5] {
            cross = cross.max(g[(a, b)].abs());
        }
    }
    res.set("c", c);
    res.set("t_swap", t_swap);
    res.set("f1", kern.f[1]);
    res.set("f1_dot", kern.f_dot[1]);
    res.set("g1", kern.g[1]);
    res.set("N_initial", s0.reduce(&[0, 1])?.log_negativity(&[1])?);
    res.set("N_final", end.reduce(&[0, 2])?.log_negativity(&[1])?);
    res.set("max_cross_covariance", cross);
    res.set("min_symplectic_eigenvalue", nu);
    Ok(res)
}
