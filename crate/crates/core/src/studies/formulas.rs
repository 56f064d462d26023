//! Closed-form predictions: arrival times, speeds and saturation values.
//!
//! The first maximum of `J_m(x)` sits at `x ≈ m + 0.8086165 m^{1/3}` with
//! height `≈ 0.6748851 m^{−1/3}` for large `m`.  Since the transmitted
//! entanglement between sites `0` and `n` is governed by `J_{n−1}(ζΩt)`
//! (Spring) or `J_{n−1}(ct)` (RWA), these asymptotics give arrival times and
//! the large-squeezing saturation of the first peak.

use std::f64::consts::LN_2;

use crate::error::{Error, Result};
use crate::network::Model;

/// Offset coefficient of the first Bessel maximum.
pub const BESSEL_PEAK_OFFSET: f64 = 0.8086165;
/// Height coefficient of the first Bessel maximum.
pub const J_MAX_PREFACTOR: f64 = 0.6748851;

fn check(n: usize, c: f64) -> Result<()> {
    if n < 2 {
        return Err(Error::invalid(format!("site index n = {n} must be ≥ 2")));
    }
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::invalid(format!("coupling c = {c} must be positive")));
    }
    Ok(())
}

/// Rate at which the Bessel argument grows: `ζΩ = c/√(1+2c)` or `c`.
fn bessel_rate(c: f64, model: Model) -> f64 {
    match model {
        Model::Spring => c / (1.0 + 2.0 * c).sqrt(),
        Model::Rwa => c,
    }
}

/// Predicted first-peak time of the entanglement between sites `0` and `n`.
pub fn arrival_time(n: usize, c: f64, model: Model) -> Result<f64> {
    check(n, c)?;
    let m = (n - 1) as f64;
    Ok((m + BESSEL_PEAK_OFFSET * m.cbrt()) / bessel_rate(c, model))
}

/// Mean propagation speed `(n−1)/t_arrival`.
pub fn propagation_speed(n: usize, c: f64, model: Model) -> Result<f64> {
    Ok((n - 1) as f64 / arrival_time(n, c, model)?)
}

/// Rough arrival time `n/(2Ωζ)` of spontaneously created entanglement
/// between the ends of an open Spring chain of `n` sites.
pub fn spontaneous_arrival(n: usize, c: f64) -> Result<f64> {
    check(n, c)?;
    Ok(n as f64 / (2.0 * bessel_rate(c, Model::Spring)))
}

/// Asymptotic height `0.6748851 (n−1)^{−1/3}` of the first maximum of `J_{n−1}`.
pub fn j_max(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::invalid(format!("site index n = {n} must be ≥ 2")));
    }
    Ok(J_MAX_PREFACTOR * ((n - 1) as f64).cbrt().recip())
}

/// Large-squeezing limit of the first-peak negativity between sites `0`
/// and `n`.
pub fn saturation_value(n: usize, c: f64, model: Model) -> Result<f64> {
    check(n, c)?;
    let j2 = j_max(n)?.powi(2);
    let eta = match model {
        Model::Spring => {
            let kappa = 1.0 / (1.0 + 4.0 * c).sqrt();
            ((-2.0 * j2 + kappa + 1.0) * (-j2 + c + 1.0) / (2.0 * (j2 + 1.0).powi(2))).sqrt()
        }
        Model::Rwa => (1.0 - j2) / (1.0 + j2),
    };
    Ok(-eta.min(1.0).log2())
}

/// Logarithmic negativity `r/ln 2` of the two-mode squeezed state with
/// `cosh r` diagonal and `sinh r` cross terms.
pub fn initial_negativity(r: f64) -> f64 {
    r.abs() / LN_2
}
