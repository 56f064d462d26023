//! Entanglement created spontaneously by switching on the couplings of an
//! open chain whose sites start in a product of vacuum or thermal states.

use super::{
    check_nonnegative, check_positive, checked_negativity, default_dt, finish_series, first_maximum,
    propagator_pair_series, smoothing_width, time_grid, StudyResult, PEAK_THRESHOLD,
};
use crate::dynamics::bath::{augment_state, ohmic_bath_augment, DEFAULT_BATH_SIZE, DEFAULT_CUTOFF};
use crate::dynamics::decoherence::{DiffusiveEvolution, MAX_SUBSTEP};
use crate::dynamics::Propagator;
use crate::error::{Error, Result};
use crate::gaussian::{thermal_z, GaussianState};
use crate::network::{build_chain, Boundary, Model};
use crate::studies::formulas::spontaneous_arrival;

/// Environment acting on every chain site.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Decoherence {
    None,
    /// Momentum diffusion at rate `xi` on every site.
    Diffusion { xi: f64 },
    /// A private Ohmic bath of `bath_size` oscillators (cutoff `cutoff`) on
    /// every site, calibrated to quality factor `q`.
    Ohmic { q: f64, bath_size: usize, cutoff: f64 },
}

impl Decoherence {
    /// Ohmic bath with the default size and cutoff.
    pub fn ohmic(q: f64) -> Self {
        Decoherence::Ohmic { q, bath_size: DEFAULT_BATH_SIZE, cutoff: DEFAULT_CUTOFF }
    }

    fn describe(&self) -> String {
        match self {
            Decoherence::None => "none".into(),
            Decoherence::Diffusion { xi } => format!("diffusion(xi={xi})"),
            Decoherence::Ohmic { q, bath_size, cutoff } => format!("ohmic(Q={q}, m={bath_size}, cutoff={cutoff})"),
        }
    }
}

/// Parameters of a spontaneous-creation run.
#[derive(Debug, Clone, PartialEq)]
pub struct SpontaneousParams {
    /// Chain length `M`; entanglement is tracked between its two ends.
    pub sites: usize,
    pub c: f64,
    pub model: Model,
    pub t_max: f64,
    pub dt: f64,
    /// Inverse temperature `x = ω/T` of the initial product state; `None`
    /// is the vacuum.
    pub temperature: Option<f64>,
    pub decoherence: Decoherence,
}

impl SpontaneousParams {
    /// Spring chain in the vacuum, sampled up to 1.6 times `t₀`.
    pub fn new(sites: usize, c: f64) -> Self {
        let t_max = spontaneous_arrival(sites.max(2), c).map(|t| 1.6 * t).unwrap_or(100.0);
        Self {
            sites,
            c,
            model: Model::Spring,
            t_max,
            dt: default_dt(c),
            temperature: None,
            decoherence: Decoherence::None,
        }
    }

    fn result(&self, scenario: &'static str, columns: &[&str]) -> StudyResult {
        StudyResult::new(scenario, columns)
            .param("sites", self.sites)
            .param("c", self.c)
            .param("model", self.model.name())
            .param("t_max", self.t_max)
            .param("dt", self.dt)
            .param("temperature", self.temperature.map_or("none".to_string(), |x| x.to_string()))
            .param("decoherence", self.decoherence.describe())
    }
}

/// Negativity between the two ends of an open chain after the couplings are
/// switched on at `t = 0`.
pub fn spontaneous_creation_study(p: &SpontaneousParams) -> Result<StudyResult> {
    if p.sites < 2 {
        return Err(Error::invalid("spontaneous creation needs a chain of at least two sites"));
    }
    check_nonnegative("c", p.c)?;
    let z = match p.temperature {
        Some(x) => thermal_z(x)?,
        None => 1.0,
    };
    let times = time_grid(p.t_max, p.dt)?;
    let h = build_chain(p.sites, p.c, Boundary::Open, p.model, false)?;
    let s0 = GaussianState::vacuum(p.sites)?.scaled(z);
    let (a, b) = (0, p.sites - 1);
    let mut res = p.result("spontaneous", &["t", "N"]);
    let (values, nu) = match p.decoherence {
        Decoherence::None => propagator_pair_series(&Propagator::new(&h)?, &s0, a, b, &times)?,
        Decoherence::Diffusion { xi } => {
            check_nonnegative("xi", xi)?;
            let prop = Propagator::new(&h)?;
            let ev = DiffusiveEvolution::new(&prop, vec![xi; p.sites], MAX_SUBSTEP)?;
            let mut values = Vec::with_capacity(times.len());
            let mut nu = f64::INFINITY;
            for s in ev.series(&s0, &times)? {
                let (n, v) = checked_negativity(s.reduce(&[a, b])?.gamma(), &[1])?;
                values.push(n);
                nu = nu.min(v);
            }
            (values, nu)
        }
        Decoherence::Ohmic { q, bath_size, cutoff } => {
            check_positive("Q", q)?;
            let sites: Vec<usize> = (0..p.sites).collect();
            let (aug, g) = ohmic_bath_augment(&h, &sites, bath_size, cutoff, q)?;
            res.set("bath_coupling", g);
            let big = augment_state(&s0, p.sites, bath_size, cutoff)?;
            propagator_pair_series(&Propagator::new(&aug)?, &big, a, b, &times)?
        }
    };
    finish_series(&mut res, &times, &values, smoothing_width(p.model, p.c), nu);
    if p.c > 0.0 {
        res.set("t0", spontaneous_arrival(p.sites, p.c)?);
    }
    Ok(res)
}

/// First-peak spontaneous entanglement of the two ends of a chain of
/// `separation + 1` sites versus a pair at the same separation in the middle
/// of a chain of `sites_large` sites (Spring model, vacuum).
///
/// Columns: `t`, `N_endpoint`, `N_bulk`.  Derived: both peaks and `ratio`.
pub fn endpoint_vs_bulk(sites_large: usize, separation: usize, c: f64, t_max: f64, dt: f64) -> Result<StudyResult> {
    if separation == 0 || sites_large < separation + 1 {
        return Err(Error::invalid(format!(
            "need separation ≥ 1 and a large chain of at least separation + 1 sites (got {separation}, {sites_large})"
        )));
    }
    let times = time_grid(t_max, dt)?;
    let series = |m: usize, a: usize| -> Result<(Vec<f64>, f64)> {
        let h = build_chain(m, c, Boundary::Open, Model::Spring, false)?;
        propagator_pair_series(&Propagator::new(&h)?, &GaussianState::vacuum(m)?, a, a + separation, &times)
    };
    let (end, nu1) = series(separation + 1, 0)?;
    let start = (sites_large - separation - 1) / 2;
    let (bulk, nu2) = series(sites_large, start)?;
    let width = smoothing_width(Model::Spring, c);
    let mut res = StudyResult::new("endpoint_bulk", &["t", "N_endpoint", "N_bulk"])
        .param("sites_large", sites_large)
        .param("separation", separation)
        .param("c", c)
        .param("t_max", t_max)
        .param("dt", dt);
    res.rows = times.iter().zip(end.iter().zip(&bulk)).map(|(&t, (&x, &y))| vec![t, x, y]).collect();
    let pe = first_maximum(&times, &end, width, PEAK_THRESHOLD);
    let pb = first_maximum(&times, &bulk, width, PEAK_THRESHOLD);
    res.peak = pe;
    if let Some(p) = pe {
        res.set("t_peak_endpoint", p.time);
        res.set("N_f_endpoint", p.value);
    }
    if let Some(p) = pb {
        res.set("t_peak_bulk", p.time);
        res.set("N_f_bulk", p.value);
    }
    if let (Some(e), Some(b)) = (pe, pb) {
        res.set("ratio", e.value / b.value);
    }
    res.set("min_symplectic_eigenvalue", nu1.min(nu2));
    Ok(res)
}
