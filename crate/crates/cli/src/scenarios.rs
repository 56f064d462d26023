//! Catalogue of runnable scenarios and their config schemas.
//!
//! Each scenario resolves its parameters from a [`Reader`] into a
//! [`Plan`]: a closure that performs the study.  Resolution touches no
//! numerics, so every key is validated before any computation starts.

use oscnet::gaussian::Excitation;
use oscnet::network::{Boundary, Model};
use oscnet::studies::{
    bessel_comparison_study, block_entanglement_study, default_dt, endpoint_vs_bulk, interferometer_sweep,
    junction_switch_sweep, perfect_transfer_check, perturbation_monte_carlo, propagation_study, spontaneous_arrival,
    spontaneous_creation_study, time_grid, transfer_efficiency_sweep, two_node_swap, y_shape_study, Decoherence,
    InterferometerParams, JunctionParameter, MonteCarloParams, PropagationParams, SpontaneousParams, StudyResult,
    YShapeParams,
};

use crate::config::{CliError, CliResult, Reader};

/// Deferred study run.
pub type Plan = Box<dyn FnOnce() -> oscnet::Result<StudyResult> + Send>;

/// A registered scenario.
pub struct Scenario {
    pub name: &'static str,
    /// The result the scenario reproduces.
    pub reproduces: &'static str,
    pub summary: &'static str,
    pub resolve: fn(&mut Reader) -> CliResult<Plan>,
}

/// All scenarios, alphabetized.
pub const CATALOG: &[Scenario] = &[
    Scenario {
        name: "bessel",
        reproduces: "exact vs Bessel closed-form propagation curves",
        summary: "ring dynamics next to the infinite-chain closed forms for sites (0, n)",
        resolve: bessel,
    },
    Scenario {
        name: "block",
        reproduces: "block entanglement at the single-site peak time",
        summary: "negativity between site 0 and odd blocks centred on site n",
        resolve: block,
    },
    Scenario {
        name: "efficiency",
        reproduces: "transfer efficiency vs squeezing",
        summary: "first-peak negativity and T_eff = N_f/N_i over a squeezing grid",
        resolve: efficiency,
    },
    Scenario {
        name: "endpoint",
        reproduces: "spontaneous entanglement: chain ends vs bulk pair",
        summary: "end-to-end vs mid-chain pair at equal separation (Spring, vacuum)",
        resolve: endpoint,
    },
    Scenario {
        name: "interferometer",
        reproduces: "interference fringes vs upper-arm frequency",
        summary: "negativity at t_probe across the two-arm device as the arm frequency varies",
        resolve: interferometer,
    },
    Scenario {
        name: "perfect_transfer",
        reproduces: "perfect transfer on the engineered RWA chain",
        summary: "transfer amplitude and end-to-end negativity of the engineered chain",
        resolve: perfect_transfer,
    },
    Scenario {
        name: "perturbation",
        reproduces: "robustness against random coupling errors",
        summary: "Monte Carlo mean first-peak ratio vs relative coupling disorder",
        resolve: perturbation,
    },
    Scenario {
        name: "propagation",
        reproduces: "squeezed-state entanglement propagation",
        summary: "negativity between site 0 and site n over time with first-peak detection",
        resolve: propagation,
    },
    Scenario {
        name: "spontaneous",
        reproduces: "spontaneous creation between chain ends (with thermal states and decoherence)",
        summary: "end-to-end negativity after switching on the couplings of an open chain",
        resolve: spontaneous,
    },
    Scenario {
        name: "swap",
        reproduces: "two-site state swap",
        summary: "entanglement moves from site 1 to site 2 at t = lπ",
        resolve: swap,
    },
    Scenario {
        name: "switch",
        reproduces: "junction switching of the Y-shaped splitter",
        summary: "first-peak arm-end negativity vs junction coupling, frequency or mass",
        resolve: switch,
    },
    Scenario {
        name: "y_shape",
        reproduces: "Y-shaped splitter with squeezed or thermal input",
        summary: "negativity between the two arm ends of a Y-shaped RWA network",
        resolve: y_shape,
    },
];

/// Look up a scenario by name, suggesting the closest one otherwise.
pub fn find(name: &str) -> CliResult<&'static Scenario> {
    CATALOG.iter().find(|s| s.name == name).ok_or_else(|| {
        let best = CATALOG.iter().min_by_key(|s| strsim::levenshtein(name, s.name)).map(|s| s.name).unwrap_or("");
        CliError::Validation(format!("unknown scenario '{name}' (did you mean '{best}'?)"))
    })
}

fn model(r: &mut Reader, default: &str) -> CliResult<Model> {
    r.parsed("network", "model", default, |m: &Model| m.name().to_string())
}

fn propagation_params(r: &mut Reader) -> CliResult<PropagationParams> {
    let n = r.count("network", "n", 30)?;
    let c = r.float("network", "coupling", 0.1)?;
    let model = model(r, "spring")?;
    let sq = r.float("state", "r", 0.8)?;
    let d = PropagationParams::new(n, c, sq, model);
    Ok(PropagationParams {
        sites: r.count("network", "sites", d.sites)?,
        boundary: r.parsed("network", "boundary", d.boundary.name(), |b: &Boundary| b.name().to_string())?,
        t_max: r.float("time", "t_max", d.t_max)?,
        dt: r.float("time", "dt", d.dt)?,
        ..d
    })
}

fn propagation(r: &mut Reader) -> CliResult<Plan> {
    let p = propagation_params(r)?;
    Ok(Box::new(move || propagation_study(&p)))
}

fn bessel(r: &mut Reader) -> CliResult<Plan> {
    let p = propagation_params(r)?;
    Ok(Box::new(move || bessel_comparison_study(&p)))
}

fn efficiency(r: &mut Reader) -> CliResult<Plan> {
    let p = propagation_params(r)?;
    let default: Vec<f64> = (1..=30).map(|i| i as f64 / 10.0).collect();
    let rs = r.float_list("sweep", "r_values", &default)?;
    Ok(Box::new(move || transfer_efficiency_sweep(&p, &rs)))
}

fn block(r: &mut Reader) -> CliResult<Plan> {
    let p = propagation_params(r)?;
    let widths = r.count_list("sweep", "widths", &[1, 3, 5, 7, 9])?;
    let center = p.n;
    Ok(Box::new(move || block_entanglement_study(&p, center, &widths)))
}

fn spontaneous(r: &mut Reader) -> CliResult<Plan> {
    let sites = r.count("network", "sites", 30)?;
    let c = r.float("network", "coupling", 0.1)?;
    let d = SpontaneousParams::new(sites, c);
    let model = model(r, d.model.name())?;
    let temperature = r.opt_float("state", "x")?;
    let kind = r.string("decoherence", "kind", "none")?;
    let decoherence = match kind.as_str() {
        "none" => Decoherence::None,
        "diffusion" => Decoherence::Diffusion { xi: r.float("decoherence", "xi", 1e-3)? },
        "ohmic" => {
            let Decoherence::Ohmic { q, bath_size, cutoff } = Decoherence::ohmic(1000.0) else { unreachable!() };
            Decoherence::Ohmic {
                q: r.float("decoherence", "q", q)?,
                bath_size: r.count("decoherence", "bath_size", bath_size)?,
                cutoff: r.float("decoherence", "cutoff", cutoff)?,
            }
        }
        other => {
            return Err(CliError::Validation(format!(
                "key 'decoherence.kind': unknown kind '{other}' (expected none, diffusion or ohmic)"
            )))
        }
    };
    let p = SpontaneousParams {
        model,
        temperature,
        decoherence,
        t_max: r.float("time", "t_max", d.t_max)?,
        dt: r.float("time", "dt", d.dt)?,
        ..d
    };
    Ok(Box::new(move || spontaneous_creation_study(&p)))
}

fn endpoint(r: &mut Reader) -> CliResult<Plan> {
    let sites = r.count("network", "sites", 60)?;
    let separation = r.count("network", "separation", 29)?;
    let c = r.float("network", "coupling", 0.1)?;
    let t_default = spontaneous_arrival((separation + 1).max(2), c).map(|t| 1.6 * t).unwrap_or(100.0);
    let t_max = r.float("time", "t_max", t_default)?;
    let dt = r.float("time", "dt", default_dt(c))?;
    Ok(Box::new(move || endpoint_vs_bulk(sites, separation, c, t_max, dt)))
}

fn perturbation(r: &mut Reader) -> CliResult<Plan> {
    let length = r.count("network", "length", 30)?;
    let c = r.float("network", "coupling", 0.1)?;
    let model = model(r, "spring")?;
    let sq = r.float("state", "r", 0.8)?;
    let d = MonteCarloParams::new(length, c, sq, model);
    let p = MonteCarloParams {
        relative_sigma: r.float_list("monte_carlo", "relative_sigma", &d.relative_sigma)?,
        realizations: r.count("monte_carlo", "realizations", d.realizations)?,
        seed: r.count("monte_carlo", "seed", d.seed as usize)? as u64,
        dt: r.float("time", "dt", d.dt)?,
        ..d
    };
    Ok(Box::new(move || perturbation_monte_carlo(&p)))
}

fn perfect_transfer(r: &mut Reader) -> CliResult<Plan> {
    let sites = r.count("network", "sites", 10)?;
    let c = r.float("network", "coupling", 0.02)?;
    let sq = r.float("state", "r", 0.8)?;
    let t_default = if c > 0.0 { 2.0 * std::f64::consts::PI / c } else { 100.0 };
    let t_max = r.float("time", "t_max", t_default)?;
    let dt = r.float("time", "dt", default_dt(c))?;
    Ok(Box::new(move || {
        let times = time_grid(t_max, dt)?;
        perfect_transfer_check(sites, c, sq, &times)
    }))
}

fn swap(r: &mut Reader) -> CliResult<Plan> {
    let k = r.count("swap", "k", 1)?;
    let l = r.count("swap", "l", 2)?;
    let sq = r.float("state", "r", 0.8)?;
    let k = u32::try_from(k).map_err(|_| CliError::Validation("key 'swap.k' is too large".into()))?;
    let l = u32::try_from(l).map_err(|_| CliError::Validation("key 'swap.l' is too large".into()))?;
    Ok(Box::new(move || two_node_swap(k, l, sq)))
}

fn y_shape_params(r: &mut Reader) -> CliResult<YShapeParams> {
    let m_in = r.count("network", "m_in", 10)?;
    let m_out = r.count("network", "m_out", 30)?;
    let c = r.float("network", "coupling", 0.2)?;
    let d = YShapeParams::new(m_in, m_out, c);
    let canonical = |e: &Excitation| format!("{e:?}").to_lowercase();
    Ok(YShapeParams {
        model: model(r, d.model.name())?,
        input: r.parsed("state", "input", &canonical(&d.input), canonical)?,
        z: r.float("state", "z", d.z)?,
        junction_coupling: r.opt_float("junction", "coupling")?,
        junction_frequency: r.opt_float("junction", "frequency")?,
        junction_mass: r.opt_float("junction", "mass")?,
        t_max: r.float("time", "t_max", d.t_max)?,
        dt: r.float("time", "dt", d.dt)?,
        ..d
    })
}

fn y_shape(r: &mut Reader) -> CliResult<Plan> {
    let p = y_shape_params(r)?;
    Ok(Box::new(move || y_shape_study(&p)))
}

fn switch(r: &mut Reader) -> CliResult<Plan> {
    let p = y_shape_params(r)?;
    let canonical = |j: &JunctionParameter| format!("{j:?}").to_lowercase();
    let parameter = r.parsed("sweep", "parameter", "frequency", canonical)?;
    let default: Vec<f64> = (0..=8).map(|i| 1.0 + 0.25 * i as f64).collect();
    let grid = r.float_list("sweep", "values", &default)?;
    Ok(Box::new(move || junction_switch_sweep(&p, parameter, &grid)))
}

fn interferometer(r: &mut Reader) -> CliResult<Plan> {
    let d = InterferometerParams::default();
    let p = InterferometerParams {
        m_l: r.count("network", "m_l", d.m_l)?,
        m_u: r.count("network", "m_u", d.m_u)?,
        m_d: r.count("network", "m_d", d.m_d)?,
        m_r: r.count("network", "m_r", d.m_r)?,
        c: r.float("network", "coupling", d.c)?,
        model: model(r, d.model.name())?,
        r: r.float("state", "r", d.r)?,
        t_probe: r.float("time", "t_probe", d.t_probe)?,
    };
    let lo = r.float("sweep", "omega_min", 1.0)?;
    let hi = r.float("sweep", "omega_max", 2.0)?;
    let step = r.float("sweep", "omega_step", 0.01)?;
    if !(step > 0.0) || hi < lo {
        return Err(CliError::Validation("sweep needs omega_step > 0 and omega_max ≥ omega_min".into()));
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize;
    let omegas: Vec<f64> = (0..=count).map(|i| lo + i as f64 * step).collect();
    Ok(Box::new(move || interferometer_sweep(&p, &omegas)))
}
