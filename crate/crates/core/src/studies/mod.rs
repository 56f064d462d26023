//! Scenario runners: entanglement propagation, spontaneous creation,
//! state transfer, robustness and small devices.
//!
//! Every runner returns a [`StudyResult`]: a table whose first column is the
//! abscissa (time or a swept parameter), the detected first peak where it
//! makes sense, and named derived quantities (predictions, efficiencies, fit
//! coefficients).  All reduced states visited along the way are checked for
//! physicality; the smallest symplectic eigenvalue seen is reported as
//! `min_symplectic_eigenvalue`.

mod devices;
mod fit;
mod formulas;
mod peaks;
mod perturbation;
mod propagation;
mod spontaneous;
mod transfer;

use nalgebra::DMatrix;
use rayon::prelude::*;

pub use devices::{
    fringe_maxima, interferometer_sweep, junction_switch_sweep, y_shape_study, InterferometerParams,
    JunctionParameter, YShapeParams,
};
pub use fit::{fit_lorentzian, fit_perturbation_cubic, Lorentzian};
pub use formulas::{
    arrival_time, initial_negativity, j_max, propagation_speed, saturation_value, spontaneous_arrival,
    BESSEL_PEAK_OFFSET, J_MAX_PREFACTOR,
};
pub use peaks::{first_maximum, moving_average, Peak};
pub use perturbation::{perturbation_monte_carlo, MonteCarloParams};
pub use propagation::{
    bessel_comparison_study, block_entanglement_study, propagation_study, transfer_efficiency_sweep, PropagationParams};
pub use spontaneous::{endpoint_vs_bulk, spontaneous_creation_study, Decoherence, SpontaneousParams};
pub use transfer::{perfect_transfer_amplitude, perfect_transfer_check, swap_parameters, two_node_swap};

use crate::dynamics::Propagator;
use crate::error::{Error, Result};
use crate::gaussian::{GaussianState, log_negativity, symplectic_eigenvalues, PHYSICALITY_TOLERANCE};
use crate::network::Model;

/// Threshold above which a local maximum counts as an entanglement arrival.
pub const PEAK_THRESHOLD: f64 = 1e-6;

/// Tabulated outcome of one scenario run.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyResult {
    /// Scenario identifier, e.g. `"propagation"`.
    pub scenario: &'static str,
    /// Resolved parameters as `(name, value)` text pairs.
    pub parameters: Vec<(String, String)>,
    /// Column names; the first is the abscissa.
    pub columns: Vec<String>,
    /// Rows of equal length matching `columns`.
    pub rows: Vec<Vec<f64>>,
    /// First maximum of the `N` column, if one was searched for and found.
    pub peak: Option<Peak>,
    /// Named scalar results.
    pub derived: Vec<(String, f64)>,
}

impl StudyResult {
    fn new(scenario: &'static str, columns: &[&str]) -> Self {
        Self {
            scenario,
            parameters: Vec::new(),
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
            peak: None,
            derived: Vec::new(),
        }
    }

    fn param(mut self, name: &str, value: impl ToString) -> Self {
        self.parameters.push((name.to_string(), value.to_string()));
        self
    }

    fn set(&mut self, name: &str, value: f64) {
        match self.derived.iter_mut().find(|(k, _)| k == name) {
            Some(slot) => slot.1 = value,
            None => self.derived.push((name.to_string(), value)),
        }
    }

    /// Derived quantity by name.
    pub fn derived(&self, name: &str) -> Option<f64> {
        self.derived.iter().find(|(k, _)| k == name).map(|(_, v)| *v)
    }

    /// A whole column by name.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }

    /// The abscissa column.
    pub fn abscissae(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r[0]).collect()
    }

    /// CSV rendering with the shared number format.
    pub fn to_csv(&self) -> String {
        let header: Vec<&str> = self.columns.iter().map(String::as_str).collect();
        crate::io::csv_string(&header, &self.rows)
    }
}

/// Default sampling step `min(0.1, 0.05/c)`.
pub fn default_dt(c: f64) -> f64 {
    if c > 0.0 {
        (0.05 / c).min(0.1)
    } else {
        0.1
    }
}

/// Uniform grid `0, dt, …` up to and including `t_max` (to rounding).
pub fn time_grid(t_max: f64, dt: f64) -> Result<Vec<f64>> {
    if !(dt > 0.0) || !(t_max >= 0.0) || !t_max.is_finite() {
        return Err(Error::invalid(format!("time grid needs dt > 0 and t_max ≥ 0 (got dt = {dt}, t_max = {t_max})")));
    }
    let steps = (t_max / dt + 1e-9).floor() as usize;
    if steps > 50_000_000 {
        return Err(Error::invalid("time grid is too large"));
    }
    Ok((0..=steps).map(|i| i as f64 * dt).collect())
}

/// Moving-average width used before first-peak detection: half a carrier
/// period `π/Ω` for the Spring model, whose curves carry fast ripples, and
/// none for the RWA model.
pub fn smoothing_width(model: Model, c: f64) -> f64 {
    match model {
        Model::Spring => std::f64::consts::PI / (1.0 + 2.0 * c).sqrt(),
        Model::Rwa => 0.0,
    }
}

/// Smallest symplectic eigenvalue of `gamma`, failing if the state is not
/// physical.
pub(crate) fn check_physical(gamma: &DMatrix<f64>) -> Result<f64> {
    let nu = symplectic_eigenvalues(gamma)?[0];
    if nu < 1.0 - PHYSICALITY_TOLERANCE {
        return Err(Error::numerical(format!("evolved state is unphysical: symplectic eigenvalue {nu}")));
    }
    Ok(nu)
}

/// Negativity between the first `k` modes and the rest of a reduced state,
/// with a physicality check.  Returns `(N, ν_min)`.
pub(crate) fn checked_negativity(gamma: &DMatrix<f64>, b: &[usize]) -> Result<(f64, f64)> {
    let nu = check_physical(gamma)?;
    Ok((log_negativity(gamma, b)?, nu))
}

/// Evaluate `state_at(t)` (a two-mode reduced covariance) on every time in
/// parallel and return `(N(t), smallest ν over the run)`.
pub(crate) fn pair_series<F>(times: &[f64], state_at: F) -> Result<(Vec<f64>, f64)>
where
    F: Fn(f64) -> Result<DMatrix<f64>> + Sync,
{
    let pairs: Vec<(f64, f64)> = times
        .par_iter()
        .map(|&t| checked_negativity(&state_at(t)?, &[1]))
        .collect::<Result<_>>()?;
    let nu = pairs.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    Ok((pairs.into_iter().map(|p| p.0).collect(), nu))
}

/// Negativity between modes `a` and `b` of `state` evolved by `prop`,
/// evaluated in parallel chunks of times.
pub(crate) fn propagator_pair_series(
    prop: &Propagator,
    state: &GaussianState,
    a: usize,
    b: usize,
    times: &[f64],
) -> Result<(Vec<f64>, f64)> {
    let chunks: Vec<Vec<(f64, f64)>> = times
        .par_chunks(64)
        .map(|chunk| {
            prop.evolve_reduced_series(state, &[a, b], chunk)?
                .iter()
                .map(|s| checked_negativity(s.gamma(), &[1]))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let pairs: Vec<(f64, f64)> = chunks.into_iter().flatten().collect();
    let nu = pairs.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    Ok((pairs.into_iter().map(|p| p.0).collect(), nu))
}

/// Fill a time-series result: rows `(t, N)`, the first peak and the
/// physicality record.
pub(crate) fn finish_series(result: &mut StudyResult, times: &[f64], values: &[f64], width: f64, nu: f64) {
    result.rows = times.iter().zip(values).map(|(&t, &n)| vec![t, n]).collect();
    result.peak = first_maximum(times, values, width, PEAK_THRESHOLD);
    if let Some(p) = result.peak {
        result.set("t_peak", p.time);
        result.set("N_f", p.value);
    }
    result.set("N_max", values.iter().copied().fold(0.0, f64::max));
    result.set("min_symplectic_eigenvalue", nu);
}

fn check_positive(name: &str, x: f64) -> Result<()> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::invalid(format!("{name} = {x} must be positive and finite")));
    }
    Ok(())
}

fn check_nonnegative(name: &str, x: f64) -> Result<()> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::invalid(format!("{name} = {x} must be finite and ≥ 0")));
    }
    Ok(())
}
