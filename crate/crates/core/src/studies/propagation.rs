//! Propagation of two-mode squeezed entanglement along rings and chains.
//!
//! Site 0 is decoupled and initially entangled with site 1; everything else
//! starts in the vacuum.  The runners track the negativity between site 0
//! and a distant site `n` (or a block of sites around it).

use rayon::prelude::*;

use super::{
    check_nonnegative, check_physical, default_dt, finish_series, first_maximum, pair_series, propagator_pair_series, smoothing_width,
    time_grid, StudyResult, PEAK_THRESHOLD,
};
use crate::dynamics::infinite::InfiniteChainKernel;
use crate::dynamics::ring::Ring;
use crate::dynamics::Propagator;
use crate::error::{Error, Result};
use crate::gaussian::{log_negativity, GaussianState};
use crate::network::{chain, Boundary, Model};
use crate::studies::formulas::{arrival_time, initial_negativity, saturation_value};

/// Parameters of a propagation run.
#[derive(Debug, Clone, PartialEq)]
pub struct PropagationParams {
    /// Number of coupled sites `M` (sites `1..=M`).
    pub sites: usize,
    /// Receiving site `n ∈ 1..M`.
    pub n: usize,
    pub c: f64,
    pub r: f64,
    pub model: Model,
    /// Periodic rings use the normal-mode solution, open chains the
    /// propagator.
    pub boundary: Boundary,
    pub t_max: f64,
    pub dt: f64,
}

impl PropagationParams {
    /// Ring of `⌊8n/3⌋` sites (at least `n + 2`), sampled with the default
    /// step up to 1.6 times the predicted arrival time.
    pub fn new(n: usize, c: f64, r: f64, model: Model) -> Self {
        let sites = (8 * n / 3).max(n + 2);
        let t_max = arrival_time(n.max(2), c, model).map(|t| 1.6 * t).unwrap_or(100.0);
        Self { sites, n, c, r, model, boundary: Boundary::Periodic, t_max, dt: default_dt(c) }
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 || self.n >= self.sites {
            return Err(Error::invalid(format!(
                "receiving site n = {} must lie in 1..{} (the number of sites)",
                self.n, self.sites
            )));
        }
        check_nonnegative("c", self.c)?;
        check_nonnegative("r", self.r.abs())?;
        Ok(())
    }

    fn result(&self, scenario: &'static str, columns: &[&str]) -> StudyResult {
        StudyResult::new(scenario, columns)
            .param("sites", self.sites)
            .param("n", self.n)
            .param("c", self.c)
            .param("r", self.r)
            .param("model", self.model.name())
            .param("boundary", self.boundary.name())
            .param("t_max", self.t_max)
            .param("dt", self.dt)
    }

    /// Reduced covariance of `(0, n)` at each time, by the route matching
    /// the boundary condition.
    fn pair_negativities(&self, times: &[f64]) -> Result<(Vec<f64>, f64)> {
        match self.boundary {
            Boundary::Periodic => {
                let ring = Ring::new(self.sites, self.c, self.model)?;
                pair_series(times, |t| ring.two_site_state(self.r, self.n, t))
            }
            Boundary::Open => {
                let h = chain(self.sites, self.c, Boundary::Open, self.model, true)?.hamiltonian()?;
                let prop = Propagator::new(&h)?;
                let s0 = GaussianState::vacuum(self.sites + 1)?.embed_two_mode_squeezed(0, 1, self.r)?;
                propagator_pair_series(&prop, &s0, 0, self.n, times)
            }
        }
    }
}

/// Negativity between site 0 and site `n` over time, with first-peak
/// detection, efficiency and the closed-form predictions.
pub fn propagation_study(p: &PropagationParams) -> Result<StudyResult> {
    p.validate()?;
    let times = time_grid(p.t_max, p.dt)?;
    let (values, nu) = p.pair_negativities(&times)?;
    let mut res = p.result("propagation", &["t", "N"]);
    finish_series(&mut res, &times, &values, smoothing_width(p.model, p.c), nu);
    let n_i = initial_negativity(p.r);
    res.set("N_i", n_i);
    if let Some(peak) = res.peak {
        if n_i > 0.0 {
            res.set("T_eff", peak.value / n_i);
        }
    }
    if p.n >= 2 && p.c > 0.0 {
        res.set("t_predicted", arrival_time(p.n, p.c, p.model)?);
        res.set("N_sat", saturation_value(p.n, p.c, p.model)?);
    }
    Ok(res)
}

/// Exact ring dynamics next to the infinite-chain Bessel closed forms.
///
/// Columns: `t`, exact `N`, closed-form `N`.  Derived: peak time and height
/// of both curves.
pub fn bessel_comparison_study(p: &PropagationParams) -> Result<StudyResult> {
    p.validate()?;
    let times = time_grid(p.t_max, p.dt)?;
    let (exact, nu) = p.pair_negativities(&times)?;
    let kernel = InfiniteChainKernel::new(p.n, p.c, p.model)?;
    let closed: Vec<f64> = times.par_iter().map(|&t| kernel.negativity(p.r, t)).collect::<Result<_>>()?;
    let mut res = p.result("bessel", &["t", "N_exact", "N_closed_form"]);
    res.rows = times.iter().zip(exact.iter().zip(&closed)).map(|(&t, (&a, &b))| vec![t, a, b]).collect();
    res.set("min_symplectic_eigenvalue", nu);
    res.peak = first_maximum(&times, &exact, smoothing_width(p.model, p.c), PEAK_THRESHOLD);
    if let Some(pk) = res.peak {
        res.set("t_peak", pk.time);
        res.set("N_f", pk.value);
    }
    // The closed forms carry no carrier ripple, so they need no smoothing.
    if let Some(pk) = first_maximum(&times, &closed, 0.0, PEAK_THRESHOLD) {
        res.set("t_peak_closed_form", pk.time);
        res.set("N_f_closed_form", pk.value);
    }
    Ok(res)
}

/// First-peak negativity and efficiency `T_eff = N_f/N_i` for each squeezing
/// in `rs`; all other parameters come from `base`.
///
/// Columns: `r`, `N_f`, `T_eff`, `t_peak` (`NaN` when nothing arrives).
pub fn transfer_efficiency_sweep(base: &PropagationParams, rs: &[f64]) -> Result<StudyResult> {
    if rs.is_empty() || rs.iter().any(|&r| !(r > 0.0)) {
        return Err(Error::invalid("squeezing grid must be nonempty and positive"));
    }
    let runs: Vec<StudyResult> = rs
        .par_iter()
        .map(|&r| propagation_study(&PropagationParams { r, ..base.clone() }))
        .collect::<Result<_>>()?;
    let mut res = base.result("efficiency", &["r", "N_f", "T_eff", "t_peak"]);
    let mut nu = f64::INFINITY;
    for (run, &r) in runs.iter().zip(rs) {
        let (nf, tp) = run.peak.map_or((0.0, f64::NAN), |p| (p.value, p.time));
        res.rows.push(vec![r, nf, nf / initial_negativity(r), tp]);
        nu = nu.min(run.derived("min_symplectic_eigenvalue").unwrap_or(f64::INFINITY));
    }
    let best = res
        .rows
        .iter()
        .enumerate()
        .max_by(|a, b| a.1[2].total_cmp(&b.1[2]).then(b.0.cmp(&a.0)))
        .map(|(i, _)| i)
        .unwrap_or(0);
    res.set("argmax_r", rs[best]);
    res.set("argmax_index", best as f64);
    res.set("min_symplectic_eigenvalue", nu);
    if base.n >= 2 && base.c > 0.0 {
        res.set("N_sat", saturation_value(base.n, base.c, base.model)?);
    }
    Ok(res)
}

/// Sites of an odd-width block centred on `center` of a ring `1..=m`.
fn ring_block(center: usize, width: usize, m: usize) -> Vec<usize> {
    let half = (width / 2) as isize;
    (-half..=half)
        .map(|d| ((center as isize - 1 + d).rem_euclid(m as isize) + 1) as usize)
        .collect()
}

/// Negativity between site 0 and blocks of `widths` sites centred on
/// `n_center`, all evaluated at the first-peak time of the single site.
///
/// Columns: `width`, `N`.  Derived: `t_star`.
pub fn block_entanglement_study(p: &PropagationParams, n_center: usize, widths: &[usize]) -> Result<StudyResult> {
    let single = PropagationParams { n: n_center, boundary: Boundary::Periodic, ..p.clone() };
    single.validate()?;
    for &w in widths {
        if w % 2 == 0 || w == 0 {
            return Err(Error::invalid(format!("block width {w} must be odd (the centre is otherwise ambiguous)")));
        }
        if w > p.sites {
            return Err(Error::invalid(format!("block width {w} exceeds the {} ring sites", p.sites)));
        }
    }
    let t_star = propagation_study(&single)?
        .peak
        .ok_or_else(|| Error::numerical("no entanglement arrived at the block centre within t_max"))?
        .time;
    let h = chain(p.sites, p.c, Boundary::Periodic, p.model, true)?.hamiltonian()?;
    let s0 = GaussianState::vacuum(p.sites + 1)?.embed_two_mode_squeezed(0, 1, p.r)?;
    let state = Propagator::new(&h)?.evolve(&s0, t_star)?;
    let mut res = single.result("block", &["width", "N"]).param("n_center", n_center);
    let mut nu = f64::INFINITY;
    for &w in widths {
        let mut modes = vec![0];
        modes.extend(ring_block(n_center, w, p.sites));
        let reduced = state.reduce(&modes)?;
        nu = nu.min(check_physical(reduced.gamma())?);
        let b: Vec<usize> = (1..modes.len()).collect();
        res.rows.push(vec![w as f64, log_negativity(reduced.gamma(), &b)?]);
    }
    res.set("t_star", t_star);
    res.set("min_symplectic_eigenvalue", nu);
    Ok(res)
}
