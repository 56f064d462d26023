//! Normal-mode solution of a translation-invariant ring of `M` sites.
//!
//! On a ring every Heisenberg operator is a circular convolution of the
//! initial operators with a handful of kernels:
//!
//! * Spring, `ω_m² = 1 + 4c sin²(πm/M)`:
//!   `f_k = (1/M) Σ_m cos(2πmk/M) cos(ω_m t)`, `g_k` with `sin(ω_m t)/ω_m`, and
//!   `ḟ_k = df_k/dt`, so that `q_j(t) = Σ_l f_{j−l} q_l + g_{j−l} p_l` and
//!   `p_j(t) = Σ_l ḟ_{j−l} q_l + f_{j−l} p_l`.
//! * RWA, `Ω_m² = 1 + 2c sin²(πm/M)`:
//!   `F_k = (1/M) Σ_m cos(2πmk/M) cos(Ω_m² t)` and `G_k` with `sin`, so that
//!   `q_j(t) = Σ_l F q_l + G p_l` and `p_j(t) = Σ_l −G q_l + F p_l`.
//!
//! The kernels are built from cosine sums only, so they are real by
//! construction.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::network::Model;

/// Kernels of one ring at one time, indexed by site offset `k ∈ 0..M`.
///
/// For the RWA model `f`, `g` hold `F_k`, `G_k` and `f_dot` holds `dF_k/dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct RingKernels {
    pub model: Model,
    pub f: Vec<f64>,
    pub g: Vec<f64>,
    pub f_dot: Vec<f64>,
}

impl RingKernels {
    /// Coefficients `[[a, b], [c, d]]` with `q_{l+k}(t) ∋ a q_l + b p_l` and
    /// `p_{l+k}(t) ∋ c q_l + d p_l`.
    pub fn transfer(&self, k: usize) -> [[f64; 2]; 2] {
        let k = k % self.f.len();
        match self.model {
            Model::Spring => [[self.f[k], self.g[k]], [self.f_dot[k], self.f[k]]],
            Model::Rwa => [[self.f[k], self.g[k]], [-self.g[k], self.f[k]]],
        }
    }
}

/// Precomputed ring geometry; evaluates kernels at any time.
#[derive(Debug, Clone)]
pub struct Ring {
    m: usize,
    c: f64,
    model: Model,
    /// Angular frequency of normal mode `s`: `ω_s` (Spring) or `Ω_s²` (RWA).
    freq: Vec<f64>,
    /// `cos(2π s k / M)`, row `k`, column `s`.
    phase: DMatrix<f64>,
}

impl Ring {
    pub fn new(m: usize, c: f64, model: Model) -> Result<Self> {
        if m == 0 {
            return Err(Error::invalid("ring needs at least one site"));
        }
        if !(c >= 0.0) {
            return Err(Error::invalid(format!("coupling {c} must be ≥ 0")));
        }
        let mf = m as f64;
        let freq = (0..m)
            .map(|s| {
                let s2 = (std::f64::consts::PI * s as f64 / mf).sin().powi(2);
                match model {
                    Model::Spring => (1.0 + 4.0 * c * s2).sqrt(),
                    Model::Rwa => 1.0 + 2.0 * c * s2,
                }
            })
            .collect();
        let phase = DMatrix::from_fn(m, m, |k, s| {
            // Reduce the integer product first to keep the argument small.
            let ks = (k * s) % m;
            (2.0 * std::f64::consts::PI * ks as f64 / mf).cos()
        });
        Ok(Self { m, c, model, freq, phase })
    }

    pub fn size(&self) -> usize {
        self.m
    }

    pub fn coupling(&self) -> f64 {
        self.c
    }

    pub fn model(&self) -> Model {
        self.model
    }

    /// Normal-mode angular frequencies.
    pub fn frequencies(&self) -> &[f64] {
        &self.freq
    }

    pub fn kernels(&self, t: f64) -> RingKernels {
        let m = self.m;
        let cos: Vec<f64> = self.freq.iter().map(|w| (w * t).cos()).collect();
        let sin: Vec<f64> = self.freq.iter().map(|w| (w * t).sin()).collect();
        let mut f = vec![0.0; m];
        let mut g = vec![0.0; m];
        let mut f_dot = vec![0.0; m];
        for k in 0..m {
            let (mut a, mut b, mut d) = (0.0, 0.0, 0.0);
            for s in 0..m {
                let ph = self.phase[(k, s)];
                let w = self.freq[s];
                a += ph * cos[s];
                b += ph * match self.model {
                    Model::Spring => sin[s] / w,
                    Model::Rwa => sin[s],
                };
                d -= ph * w * sin[s];
            }
            f[k] = a / m as f64;
            g[k] = b / m as f64;
            f_dot[k] = d / m as f64;
        }
        RingKernels { model: self.model, f, g, f_dot }
    }

    /// Exact reduced covariance of sites `(0, n)` at time `t` for a ring on
    /// sites `1..=M` next to a decoupled site 0, starting from a two-mode
    /// squeezed state with parameter `r` on `(0, 1)` and vacuum elsewhere.
    ///
    /// The result is in the lab frame (site 0 rotates freely at unit
    /// frequency, as it does under the full propagator) and uses canonical
    /// ordering `(q₀, qₙ, p₀, pₙ)`.
    pub fn two_site_state(&self, r: f64, n: usize, t: f64) -> Result<DMatrix<f64>> {
        if n == 0 || n > self.m {
            return Err(Error::invalid(format!("site {n} is not on a ring of {} sites", self.m)));
        }
        let kern = self.kernels(t);
        let (ch, sh) = (r.cosh(), r.sinh());
        let (mut qq, mut qp, mut pp) = (0.0, 0.0, 0.0);
        for k in 0..self.m {
            let [[a, b], [c, d]] = kern.transfer(k);
            qq += a * a + b * b;
            qp += a * c + b * d;
            pp += c * c + d * d;
        }
        let [[a, b], [c, d]] = kern.transfer(n - 1);
        qq += (ch - 1.0) * (a * a + b * b);
        qp += (ch - 1.0) * (a * c + b * d);
        pp += (ch - 1.0) * (c * c + d * d);
        // Site 0 frozen: ⟨q₀ q₁⟩ = sinh r, ⟨p₀ p₁⟩ = −sinh r.
        let (q0qn, q0pn, p0qn, p0pn) = (sh * a, sh * c, -sh * b, -sh * d);
        let mut g = DMatrix::zeros(4, 4);
        g[(0, 0)] = ch;
        g[(2, 2)] = ch;
        g[(1, 1)] = qq;
        g[(3, 3)] = pp;
        g[(1, 3)] = qp;
        g[(3, 1)] = qp;
        g[(0, 1)] = q0qn;
        g[(0, 3)] = q0pn;
        g[(2, 1)] = p0qn;
        g[(2, 3)] = p0pn;
        g[(1, 0)] = q0qn;
        g[(3, 0)] = q0pn;
        g[(1, 2)] = p0qn;
        g[(3, 2)] = p0pn;
        Ok(rotate_site_zero(&g, t))
    }
}

/// Kernels of an `M`-ring at time `t`.
pub fn ring_kernels(m: usize, c: f64, model: Model, t: f64) -> Result<RingKernels> {
    Ok(Ring::new(m, c, model)?.kernels(t))
}

/// Reduced `(0, n)` covariance from the ring kernels; see [`Ring::two_site_state`].
pub fn evolve_ring_analytic(m: usize, c: f64, model: Model, r: f64, n: usize, t: f64) -> Result<DMatrix<f64>> {
    Ring::new(m, c, model)?.two_site_state(r, n, t)
}

/// Apply site 0's free unit-frequency rotation over time `t` to a two-site
/// covariance in ordering `(q₀, qₙ, p₀, pₙ)`.
pub fn rotate_site_zero(gamma: &DMatrix<f64>, t: f64) -> DMatrix<f64> {
    let (c, s) = (t.cos(), t.sin());
    let mut rot = DMatrix::identity(4, 4);
    rot[(0, 0)] = c;
    rot[(0, 2)] = s;
    rot[(2, 0)] = -s;
    rot[(2, 2)] = c;
    &rot * gamma * rot.transpose()
}

/// Undo site 0's free rotation, giving the frame in which the infinite-chain
/// closed forms are written.
pub fn to_rotating_frame(gamma: &DMatrix<f64>, t: f64) -> DMatrix<f64> {
    rotate_site_zero(gamma, -t)
}
