//! Robustness of entanglement transport against random coupling errors.
//!
//! Every coupling of an open chain is shifted by `δ ~ N(0, σc)`; the first
//! peak of the end-to-end negativity is compared with the ideal chain.
//! Realization `i` of grid point `g` draws from its own random stream
//! `(seed, g·2³² + i)`, so results do not depend on scheduling.

use rayon::prelude::*;

use super::{check_positive, default_dt, first_maximum, propagator_pair_series, smoothing_width, StudyResult, PEAK_THRESHOLD};
use crate::dynamics::Propagator;
use crate::error::{Error, Result};
use crate::gaussian::GaussianState;
use crate::network::{chain, perturb_couplings, realization_rng, Boundary, Model, OscillatorNetwork};
use crate::studies::fit::fit_perturbation_cubic;
use crate::studies::formulas::arrival_time;

/// Parameters of a Monte Carlo robustness run.
#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloParams {
    /// Coupled chain length `L`; entanglement travels from site 1 to `L`.
    pub length: usize,
    pub c: f64,
    pub r: f64,
    pub model: Model,
    /// Relative disorder strengths `Δc/c`.
    pub relative_sigma: Vec<f64>,
    pub realizations: usize,
    pub seed: u64,
    pub dt: f64,
}

impl MonteCarloParams {
    pub fn new(length: usize, c: f64, r: f64, model: Model) -> Self {
        Self {
            length,
            c,
            r,
            model,
            relative_sigma: vec![0.0, 0.05, 0.1, 0.15, 0.2, 0.25],
            realizations: 200,
            seed: 1,
            dt: default_dt(c),
        }
    }

    /// Sampling window `[0.4, 1.6] × predicted arrival`.
    fn window(&self) -> Result<Vec<f64>> {
        let t = arrival_time(self.length, self.c, self.model)?;
        let (lo, hi) = (0.4 * t, 1.6 * t);
        let steps = ((hi - lo) / self.dt).ceil() as usize;
        Ok((0..=steps).map(|i| lo + i as f64 * self.dt).collect())
    }
}

struct Outcome {
    peak: Option<f64>,
    nu: f64,
    clamped: usize,
}

fn first_peak(net: &OscillatorNetwork, p: &MonteCarloParams, times: &[f64]) -> Result<Outcome> {
    let prop = Propagator::new(&net.hamiltonian()?)?;
    let s0 = GaussianState::vacuum(p.length + 1)?.embed_two_mode_squeezed(0, 1, p.r)?;
    let (values, nu) = propagator_pair_series(&prop, &s0, 0, p.length, times)?;
    let peak = first_maximum(times, &values, smoothing_width(p.model, p.c), PEAK_THRESHOLD).map(|pk| pk.value);
    Ok(Outcome { peak, nu, clamped: net.clamped_couplings() })
}

/// Mean first-peak ratio (perturbed over ideal) per disorder strength.
///
/// Columns: `relative_sigma`, `mean_ratio`, `std_error`, `clamped`,
/// `no_arrival`.  Derived: the ideal peak `N_f_ideal`, and the cubic fit
/// coefficients `fit_a`, `fit_b`, `fit_c` of `1 + a x + b x² + c x³` when
/// the grid allows one.
pub fn perturbation_monte_carlo(p: &MonteCarloParams) -> Result<StudyResult> {
    if p.length < 2 {
        return Err(Error::invalid("chain length must be at least 2"));
    }
    check_positive("c", p.c)?;
    check_positive("dt", p.dt)?;
    if p.realizations == 0 {
        return Err(Error::invalid("realizations must be ≥ 1"));
    }
    if p.relative_sigma.is_empty() || p.relative_sigma.iter().any(|&s| !(s >= 0.0)) {
        return Err(Error::invalid("disorder grid must be nonempty and ≥ 0"));
    }
    let times = p.window()?;
    let ideal_net = chain(p.length, p.c, Boundary::Open, p.model, true)?;
    let ideal = first_peak(&ideal_net, p, &times)?;
    let ideal_peak = ideal
        .peak
        .ok_or_else(|| Error::numerical("the unperturbed chain shows no entanglement arrival in the window"))?;
    let mut res = StudyResult::new("perturbation", &["relative_sigma", "mean_ratio", "std_error", "clamped", "no_arrival"])
        .param("length", p.length)
        .param("c", p.c)
        .param("r", p.r)
        .param("model", p.model.name())
        .param("realizations", p.realizations)
        .param("seed", p.seed)
        .param("dt", p.dt);
    let mut nu = ideal.nu;
    for (g, &sigma) in p.relative_sigma.iter().enumerate() {
        let outcomes: Vec<Outcome> = (0..p.realizations)
            .into_par_iter()
            .map(|i| {
                let mut rng = realization_rng(p.seed, ((g as u64) << 32) | i as u64);
                first_peak(&perturb_couplings(&ideal_net, sigma, &mut rng)?, p, &times)
            })
            .collect::<Result<_>>()?;
        let ratios: Vec<f64> = outcomes.iter().map(|o| o.peak.unwrap_or(0.0) / ideal_peak).collect();
        let k = ratios.len() as f64;
        let mean = ratios.iter().sum::<f64>() / k;
        let var = if ratios.len() > 1 {
            ratios.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0)
        } else {
            0.0
        };
        let clamped: usize = outcomes.iter().map(|o| o.clamped).sum();
        let missing = outcomes.iter().filter(|o| o.peak.is_none()).count();
        nu = outcomes.iter().map(|o| o.nu).fold(nu, f64::min);
        res.rows.push(vec![sigma, mean, (var / k).sqrt(), clamped as f64, missing as f64]);
    }
    res.set("N_f_ideal", ideal_peak);
    res.set("min_symplectic_eigenvalue", nu);
    let xs = res.abscissae();
    let ys = res.column("mean_ratio").unwrap_or_default();
    if let Some([a, b, c]) = fit_perturbation_cubic(&xs, &ys) {
        res.set("fit_a", a);
        res.set("fit_b", b);
        res.set("fit_c", c);
    }
    Ok(res)
}
