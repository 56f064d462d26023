//! Small devices: the Y-shaped splitter, its switchable junction and the
//! two-arm interferometer.

use rayon::prelude::*;

use super::{check_positive, default_dt, finish_series, propagator_pair_series, smoothing_width, time_grid, StudyResult};
use crate::dynamics::Propagator;
use crate::error::{Error, Result};
use crate::gaussian::{Excitation, GaussianState};
use crate::network::{interferometer, y_shape, Model};
use crate::studies::fit::fit_lorentzian;

/// Parameters of a Y-shape run.  The first base site is excited; the
/// negativity between the two arm ends is tracked.
#[derive(Debug, Clone, PartialEq)]
pub struct YShapeParams {
    pub m_in: usize,
    pub m_out: usize,
    pub c: f64,
    pub model: Model,
    pub input: Excitation,
    /// Squeezing (`γ_qq = z`, `γ_pp = 1/z`) or thermal (`z·1`) strength.
    pub z: f64,
    pub t_max: f64,
    pub dt: f64,
    /// Coupling of the three junction edges, if different from `c`.
    pub junction_coupling: Option<f64>,
    /// Eigenfrequency of the junction site, if different from 1.
    pub junction_frequency: Option<f64>,
    /// Mass of the junction site, if different from 1.
    pub junction_mass: Option<f64>,
}

impl YShapeParams {
    /// RWA splitter with a squeezed `z = 10` input, sampled up to
    /// `2(m_in + m_out)/c`.
    pub fn new(m_in: usize, m_out: usize, c: f64) -> Self {
        Self {
            m_in,
            m_out,
            c,
            model: Model::Rwa,
            input: Excitation::Squeezed,
            z: 10.0,
            t_max: if c > 0.0 { 2.0 * (m_in + m_out) as f64 / c } else { 100.0 },
            dt: default_dt(c),
            junction_coupling: None,
            junction_frequency: None,
            junction_mass: None,
        }
    }

    fn result(&self, scenario: &'static str, columns: &[&str]) -> StudyResult {
        let opt = |x: Option<f64>| x.map_or("default".to_string(), |v| v.to_string());
        StudyResult::new(scenario, columns)
            .param("m_in", self.m_in)
            .param("m_out", self.m_out)
            .param("c", self.c)
            .param("model", self.model.name())
            .param("input", format!("{:?}", self.input).to_lowercase())
            .param("z", self.z)
            .param("t_max", self.t_max)
            .param("dt", self.dt)
            .param("junction_coupling", opt(self.junction_coupling))
            .param("junction_frequency", opt(self.junction_frequency))
            .param("junction_mass", opt(self.junction_mass))
    }

    fn series(&self) -> Result<(Vec<f64>, Vec<f64>, f64)> {
        let mut y = y_shape(self.m_in, self.m_out, self.c, self.model, false)?;
        if let Some(cj) = self.junction_coupling {
            for &e in &y.junction_edges {
                y.network.set_coupling(e, cj)?;
            }
        }
        if self.junction_frequency.is_some() || self.junction_mass.is_some() {
            y.network.set_site(y.junction, self.junction_frequency.unwrap_or(1.0), self.junction_mass.unwrap_or(1.0))?;
        }
        let h = y.network.hamiltonian()?;
        let s0 = GaussianState::vacuum(h.mode_count())?.excite_site(y.base_start, self.input, self.z)?;
        let times = time_grid(self.t_max, self.dt)?;
        let (values, nu) = propagator_pair_series(&Propagator::new(&h)?, &s0, y.arm1_end, y.arm2_end, &times)?;
        Ok((times, values, nu))
    }
}

/// Negativity between the two arm ends of a Y-shaped network over time.
pub fn y_shape_study(p: &YShapeParams) -> Result<StudyResult> {
    let (times, values, nu) = p.series()?;
    let mut res = p.result("y_shape", &["t", "N"]);
    finish_series(&mut res, &times, &values, smoothing_width(p.model, p.c), nu);
    Ok(res)
}

/// Junction property varied by [`junction_switch_sweep`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JunctionParameter {
    Coupling,
    Frequency,
    Mass,
}

impl std::str::FromStr for JunctionParameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "coupling" | "junction_coupling" => Ok(Self::Coupling),
            "frequency" | "junction_frequency" => Ok(Self::Frequency),
            "mass" | "junction_mass" => Ok(Self::Mass),
            other => Err(Error::invalid(format!(
                "unknown junction parameter '{other}' (expected coupling, frequency or mass)"
            ))),
        }
    }
}

/// First-peak arm-end negativity as one junction property is varied.
///
/// Columns: `value`, `N_f`, `ratio` (to the unmodified junction).  Derived:
/// `baseline`; for frequency sweeps also a Lorentzian fit
/// (`lorentz_amplitude`, `lorentz_center`, `lorentz_width`,
/// `lorentz_relative_rms`).
pub fn junction_switch_sweep(base: &YShapeParams, parameter: JunctionParameter, grid: &[f64]) -> Result<StudyResult> {
    if grid.is_empty() {
        return Err(Error::invalid("junction sweep grid is empty"));
    }
    let plain = YShapeParams { junction_coupling: None, junction_frequency: None, junction_mass: None, ..base.clone() };
    let baseline = y_shape_study(&plain)?;
    let base_nf = baseline
        .peak
        .ok_or_else(|| Error::numerical("no entanglement reaches the arm ends for the unmodified junction"))?
        .value;
    let runs: Vec<StudyResult> = grid
        .par_iter()
        .map(|&v| {
            let mut q = plain.clone();
            match parameter {
                JunctionParameter::Coupling => q.junction_coupling = Some(v),
                JunctionParameter::Frequency => q.junction_frequency = Some(v),
                JunctionParameter::Mass => q.junction_mass = Some(v),
            }
            y_shape_study(&q)
        })
        .collect::<Result<_>>()?;
    let name = match parameter {
        JunctionParameter::Coupling => "junction_coupling",
        JunctionParameter::Frequency => "junction_frequency",
        JunctionParameter::Mass => "junction_mass",
    };
    let mut res = plain.result("switch", &[name, "N_f", "ratio"]).param("parameter", name);
    let mut nu = baseline.derived("min_symplectic_eigenvalue").unwrap_or(f64::INFINITY);
    for (run, &v) in runs.iter().zip(grid) {
        let nf = run.peak.map_or(0.0, |p| p.value);
        res.rows.push(vec![v, nf, nf / base_nf]);
        nu = nu.min(run.derived("min_symplectic_eigenvalue").unwrap_or(f64::INFINITY));
    }
    res.set("baseline", base_nf);
    res.set("min_symplectic_eigenvalue", nu);
    if parameter == JunctionParameter::Frequency {
        let nf = res.column("N_f").unwrap_or_default();
        if let Some(fit) = fit_lorentzian(grid, &nf) {
            res.set("lorentz_amplitude", fit.amplitude);
            res.set("lorentz_center", fit.center);
            res.set("lorentz_width", fit.width);
            res.set("lorentz_relative_rms", fit.relative_rms);
        }
    }
    Ok(res)
}

/// Parameters of an interferometer sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct InterferometerParams {
    pub m_l: usize,
    pub m_u: usize,
    pub m_d: usize,
    pub m_r: usize,
    pub c: f64,
    pub model: Model,
    pub r: f64,
    pub t_probe: f64,
}

impl Default for InterferometerParams {
    fn default() -> Self {
        Self { m_l: 9, m_u: 30, m_d: 30, m_r: 10, c: 0.2, model: Model::Rwa, r: 0.8, t_probe: 250.0 }
    }
}

/// Indices of strict local maxima of the 3-point moving average of `values`.
pub fn fringe_maxima(values: &[f64]) -> Vec<usize> {
    let n = values.len();
    if n < 3 {
        return Vec::new();
    }
    let mut s = values.to_vec();
    for i in 1..n - 1 {
        s[i] = (values[i - 1] + values[i] + values[i + 1]) / 3.0;
    }
    (1..n - 1).filter(|&i| s[i] > s[i - 1] && s[i] > s[i + 1]).collect()
}

/// Negativity at `t_probe` between the decoupled site 0 (initially entangled
/// with the first left-chain site) and the last right-chain site, for each
/// upper-arm frequency in `omegas`.
///
/// Columns: `omega`, `N`.  Derived: `fringes` (count of smoothed strict
/// maxima) and `envelope_nonincreasing` (1 if successive maxima never grow).
pub fn interferometer_sweep(p: &InterferometerParams, omegas: &[f64]) -> Result<StudyResult> {
    check_positive("t_probe", p.t_probe)?;
    if omegas.is_empty() {
        return Err(Error::invalid("frequency grid is empty"));
    }
    let rows: Vec<(f64, f64)> = omegas
        .par_iter()
        .map(|&w| {
            let dev = interferometer(p.m_l, p.m_u, p.m_d, p.m_r, p.c, p.model, Some(w), true)?;
            let h = dev.network.hamiltonian()?;
            let s0 = GaussianState::vacuum(h.mode_count())?.embed_two_mode_squeezed(0, dev.left_start, p.r)?;
            let prop = Propagator::new(&h)?;
            let (n, nu) = propagator_pair_series(&prop, &s0, 0, dev.right_end, &[p.t_probe])?;
            Ok((n[0], nu))
        })
        .collect::<Result<_>>()?;
    let mut res = StudyResult::new("interferometer", &["omega", "N"])
        .param("m_l", p.m_l)
        .param("m_u", p.m_u)
        .param("m_d", p.m_d)
        .param("m_r", p.m_r)
        .param("c", p.c)
        .param("model", p.model.name())
        .param("r", p.r)
        .param("t_probe", p.t_probe);
    res.rows = omegas.iter().zip(&rows).map(|(&w, &(n, _))| vec![w, n]).collect();
    let values: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let maxima = fringe_maxima(&values);
    let heights: Vec<f64> = maxima.iter().map(|&i| values[i]).collect();
    res.set("fringes", maxima.len() as f64);
    res.set("envelope_nonincreasing", f64::from(u8::from(heights.windows(2).all(|w| w[1] <= w[0]))));
    res.set("min_symplectic_eigenvalue", rows.iter().map(|r| r.1).fold(f64::INFINITY, f64::min));
    Ok(res)
}
