//! Closed forms for an infinitely long chain.
//!
//! Taking `M → ∞` turns the ring kernels into Bessel functions.  For the RWA
//! model this is exact: `F_k(t) = J_k(ct) cos(Ω²t − πk/2)` and
//! `G_k(t) = J_k(ct) sin(Ω²t − πk/2)` with `Ω² = 1 + c`.  For the Spring model
//! the kernel integrals are expanded to first order in `ζ = c/(1+2c)` and the
//! non-oscillating parts of the diagonal are replaced by their time averages,
//! which leaves
//!
//! ```text
//! A = cosh r · 1
//! B = diag((cosh r − 1)J² + ½ + ½(1+4c)^{−1/2},  (cosh r − 1)J² + 1 + c)
//! D = sinh r · J · [[cos Φ, −sin Φ], [−sin Φ, −cos Φ]]
//! ```
//!
//! with `J = J_{n−1}(ζΩt)`, `Ω = √(1+2c)` and `Φ = Ωt − π(n−1)/2` (rows of `D`
//! are `(q₀, p₀)`, columns `(qₙ, pₙ)`).  The RWA matrix has the same shape with
//! `J = J_{n−1}(ct)`, `Φ = (1+c)t − π(n−1)/2` and `B = ((cosh r − 1)J² + 1) · 1`.
//!
//! All matrices here are in the frame where site 0 does not rotate.

use std::f64::consts::FRAC_PI_2;

use nalgebra::DMatrix;

use crate::dynamics::bessel::bessel_j;
use crate::error::{Error, Result};
use crate::gaussian::negativity_from_spectrum;
use crate::network::Model;

/// Tolerance on negative radicands in the symplectic-eigenvalue polynomials.
const RADICAND_TOLERANCE: f64 = 1e-12;

/// Parameters of the closed forms for sites `0` and `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InfiniteChainKernel {
    pub n: usize,
    pub c: f64,
    pub model: Model,
}

impl InfiniteChainKernel {
    pub fn new(n: usize, c: f64, model: Model) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("site index n must be ≥ 1"));
        }
        if !(c >= 0.0) {
            return Err(Error::invalid(format!("coupling {c} must be ≥ 0")));
        }
        Ok(Self { n, c, model })
    }

    /// `ζ`: `c/(1+2c)` (Spring) or `c/(1+c)` (RWA).
    pub fn zeta(&self) -> f64 {
        match self.model {
            Model::Spring => self.c / (1.0 + 2.0 * self.c),
            Model::Rwa => self.c / (1.0 + self.c),
        }
    }

    /// `Ω`: `√(1+2c)` (Spring) or `√(1+c)` (RWA).
    pub fn omega(&self) -> f64 {
        match self.model {
            Model::Spring => (1.0 + 2.0 * self.c).sqrt(),
            Model::Rwa => (1.0 + self.c).sqrt(),
        }
    }

    /// Argument of the Bessel function per unit time (`ζΩ` or `c`).
    pub fn bessel_rate(&self) -> f64 {
        match self.model {
            Model::Spring => self.zeta() * self.omega(),
            Model::Rwa => self.c,
        }
    }

    pub fn j(&self, t: f64) -> f64 {
        bessel_j((self.n - 1) as u32, self.bessel_rate() * t)
    }

    pub fn phi(&self, t: f64) -> f64 {
        let carrier = match self.model {
            Model::Spring => self.omega() * t,
            Model::Rwa => (1.0 + self.c) * t,
        };
        carrier - FRAC_PI_2 * (self.n - 1) as f64
    }

    /// Reduced covariance in canonical ordering `(q₀, qₙ, p₀, pₙ)`.
    pub fn two_mode(&self, r: f64, t: f64) -> DMatrix<f64> {
        let (ch, sh) = (r.cosh(), r.sinh());
        let j = self.j(t);
        let phi = self.phi(t);
        let (bq, bp) = match self.model {
            Model::Spring => {
                let kappa = 1.0 / (1.0 + 4.0 * self.c).sqrt();
                ((ch - 1.0) * j * j + 0.5 + 0.5 * kappa, (ch - 1.0) * j * j + 1.0 + self.c)
            }
            Model::Rwa => {
                let b = (ch - 1.0) * j * j + 1.0;
                (b, b)
            }
        };
        let (dc, ds) = (sh * j * phi.cos(), sh * j * phi.sin());
        let mut g = DMatrix::zeros(4, 4);
        g[(0, 0)] = ch;
        g[(2, 2)] = ch;
        g[(1, 1)] = bq;
        g[(3, 3)] = bp;
        let cross = [((0, 1), dc), ((0, 3), -ds), ((2, 1), -ds), ((2, 3), -dc)];
        for ((a, b), v) in cross {
            g[(a, b)] = v;
            g[(b, a)] = v;
        }
        g
    }

    /// Smaller partially-transposed symplectic eigenvalue from the closed-form
    /// polynomials in `J` and `r`.
    pub fn eta(&self, r: f64, t: f64) -> Result<f64> {
        let j2 = self.j(t).powi(2);
        let (ch, sh) = (r.cosh(), r.sinh());
        let eta2 = match self.model {
            Model::Spring => {
                let c = self.c;
                let kappa = 1.0 / (1.0 + 4.0 * c).sqrt();
                let y1 = 2.0 + c + (1.0 + c) * kappa - (5.0 + 2.0 * c + kappa) * j2
                    + 3.0 * j2 * j2
                    + j2 * (3.0 + 2.0 * c + kappa - 4.0 * j2) * ch
                    + (1.0 + j2).powi(2) * (2.0 * r).cosh();
                let w = -8.0
                    * (2.0 * j2 + (1.0 + kappa - 2.0 * j2) * ch)
                    * (j2 + (1.0 + c - j2) * ch);
                // (y₁ − √(y₁² + w))/4, written without the cancellation that
                // ruins it at large r.
                -w / (4.0 * (y1 + checked_sqrt(w + y1 * y1)?))
            }
            Model::Rwa => {
                let z1 = (1.0 + j2 * j2) * ch * ch
                    + 2.0 * j2 * sh * sh
                    + 2.0 * j2 * (1.0 - j2) * ch
                    + (1.0 - j2).powi(2);
                let v = -4.0 * ((1.0 - j2) * ch + j2).powi(2);
                -v / (2.0 * (z1 + checked_sqrt(v + z1 * z1)?))
            }
        };
        Ok(checked_sqrt(eta2)?)
    }

    /// `N = −log₂ min(η, 1)` from [`Self::eta`].
    pub fn negativity(&self, r: f64, t: f64) -> Result<f64> {
        Ok(negativity_from_spectrum(&[self.eta(r, t)?]))
    }
}

fn checked_sqrt(x: f64) -> Result<f64> {
    if x < -RADICAND_TOLERANCE * x.abs().max(1.0) {
        return Err(Error::numerical(format!("negative radicand {x:.3e} in closed-form negativity")));
    }
    Ok(x.max(0.0).sqrt())
}

/// Closed-form reduced covariance of sites `(0, n)`; see the module docs.
pub fn infinite_chain_two_mode(n: usize, c: f64, r: f64, t: f64, model: Model) -> Result<DMatrix<f64>> {
    Ok(InfiniteChainKernel::new(n, c, model)?.two_mode(r, t))
}

/// Closed-form logarithmic negativity between sites `0` and `n`.
pub fn analytic_negativity(n: usize, c: f64, r: f64, t: f64, model: Model) -> Result<f64> {
    InfiniteChainKernel::new(n, c, model)?.negativity(r, t)
}
