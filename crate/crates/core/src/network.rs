//! Oscillator networks and their quadratic Hamiltonians.
//!
//! A network is a weighted interaction graph over `n` sites together with
//! per-site frequency and mass overrides.  It is turned into the potential
//! matrix `V` and kinetic matrix `T` of `H = ½ R (V ⊕ T) Rᵀ` for one of two
//! coupling models:
//!
//! * **Spring**: Hooke's-law coupling in position only.  `T = diag(1/mᵢ)` and
//!   `V = diag(ωᵢ²) + L(c)` where `L(c)` is the weighted graph Laplacian.
//! * **RWA**: excitation-number-conserving coupling, symmetric in position and
//!   momentum.  `V = diag(ωᵢ²) + L(c)/2` and `T = diag(ωᵢ²/mᵢ) + L(c)/2`, so
//!   that `T = V` whenever all masses are one.
//!
//! Site overrides only touch the site term `ωᵢ²`; coupling contributions to the
//! diagonal are always rebuilt from the edge list.

use nalgebra::{Cholesky, DMatrix, SymmetricEigen};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};

/// Tolerance on the smallest eigenvalue of `V` and `T`.
pub const PD_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Model {
    Spring,
    Rwa,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::Spring => "spring",
            Model::Rwa => "rwa",
        }
    }
}

impl std::str::FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "spring" => Ok(Model::Spring),
            "rwa" => Ok(Model::Rwa),
            other => Err(Error::invalid(format!(
                "unknown model '{other}' (expected 'spring' or 'rwa')"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Boundary {
    Open,
    Periodic,
}

impl Boundary {
    pub fn name(self) -> &'static str {
        match self {
            Boundary::Open => "open",
            Boundary::Periodic => "periodic",
        }
    }
}

impl std::str::FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "open" => Ok(Boundary::Open),
            "periodic" | "ring" => Ok(Boundary::Periodic),
            other => Err(Error::invalid(format!(
                "unknown boundary '{other}' (expected 'open' or 'periodic')"
            ))),
        }
    }
}

/// An undirected weighted edge `i — j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub coupling: f64,
}

/// Weighted interaction graph with per-site overrides.
#[derive(Debug, Clone, PartialEq)]
pub struct OscillatorNetwork {
    model: Model,
    edges: Vec<Edge>,
    site_term: Vec<f64>,
    mass: Vec<f64>,
    decoupled_site: bool,
    clamped: usize,
}

impl OscillatorNetwork {
    /// `n` uncoupled unit-frequency, unit-mass sites.
    pub fn new(n: usize, model: Model) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("a network needs at least one site"));
        }
        Ok(Self {
            model,
            edges: Vec::new(),
            site_term: vec![1.0; n],
            mass: vec![1.0; n],
            decoupled_site: false,
            clamped: 0,
        })
    }

    /// Mark site 0 as the decoupled reference oscillator.  It may never carry
    /// an edge afterwards.
    pub fn with_decoupled_site(mut self) -> Result<Self> {
        if self.edges.iter().any(|e| e.i == 0 || e.j == 0) {
            return Err(Error::invalid("site 0 already has couplings"));
        }
        self.decoupled_site = true;
        Ok(self)
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn site_count(&self) -> usize {
        self.site_term.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn has_decoupled_site(&self) -> bool {
        self.decoupled_site
    }

    /// Number of couplings that were clamped to zero by [`perturb_couplings`].
    pub fn clamped_couplings(&self) -> usize {
        self.clamped
    }

    /// Site term `ωᵢ²` of site `i`.
    pub fn site_term(&self, i: usize) -> f64 {
        self.site_term[i]
    }

    pub fn mass(&self, i: usize) -> f64 {
        self.mass[i]
    }

    /// Number of edges incident on site `i`.
    pub fn degree(&self, i: usize) -> usize {
        self.edges.iter().filter(|e| e.i == i || e.j == i).count()
    }

    pub fn add_edge(&mut self, i: usize, j: usize, coupling: f64) -> Result<()> {
        let n = self.site_count();
        if i >= n || j >= n {
            return Err(Error::invalid(format!("edge ({i}, {j}) out of range for {n} sites")));
        }
        if i == j {
            return Err(Error::invalid(format!("self-edge on site {i}")));
        }
        if !(coupling >= 0.0) || !coupling.is_finite() {
            return Err(Error::invalid(format!("coupling {coupling} must be finite and ≥ 0")));
        }
        if self.decoupled_site && (i == 0 || j == 0) {
            return Err(Error::invalid("the decoupled site 0 cannot carry couplings"));
        }
        if self.edges.iter().any(|e| (e.i, e.j) == (i, j) || (e.i, e.j) == (j, i)) {
            return Err(Error::invalid(format!("duplicate edge ({i}, {j})")));
        }
        self.edges.push(Edge { i, j, coupling });
        Ok(())
    }

    /// Change the coupling of edge `index` (an index into [`Self::edges`]).
    pub fn set_coupling(&mut self, index: usize, coupling: f64) -> Result<()> {
        if !(coupling >= 0.0) || !coupling.is_finite() {
            return Err(Error::invalid(format!("coupling {coupling} must be finite and ≥ 0")));
        }
        let edge = self
            .edges
            .get_mut(index)
            .ok_or_else(|| Error::invalid(format!("edge {index} out of range")))?;
        edge.coupling = coupling;
        Ok(())
    }

    /// Override the eigenfrequency and mass of one site.  The frequency
    /// replaces the site potential term `ω²q²/2`; couplings are untouched.
    pub fn set_site(&mut self, index: usize, frequency: f64, mass: f64) -> Result<()> {
        if !(frequency > 0.0) || !(mass > 0.0) {
            return Err(Error::invalid(format!(
                "site frequency ({frequency}) and mass ({mass}) must be positive"
            )));
        }
        self.set_site_term(index, frequency * frequency)?;
        self.mass[index] = mass;
        Ok(())
    }

    /// Set the raw site term `ωᵢ²` directly (used by engineered chains whose
    /// site terms compensate the coupling contributions).
    pub fn set_site_term(&mut self, index: usize, value: f64) -> Result<()> {
        if index >= self.site_count() {
            return Err(Error::invalid(format!("site {index} out of range")));
        }
        if !value.is_finite() {
            return Err(Error::invalid("site term must be finite"));
        }
        self.site_term[index] = value;
        Ok(())
    }

    /// Relabel sites: site `i` becomes site `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = self.site_count();
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::invalid("relabeling is not a permutation of the sites"));
        }
        let mut out = self.clone();
        out.decoupled_site = false;
        for i in 0..n {
            out.site_term[perm[i]] = self.site_term[i];
            out.mass[perm[i]] = self.mass[i];
        }
        for e in &mut out.edges {
            e.i = perm[e.i];
            e.j = perm[e.j];
        }
        Ok(out)
    }

    /// Assemble and validate `V` and `T`.
    pub fn hamiltonian(&self) -> Result<QuadraticHamiltonian> {
        let n = self.site_count();
        let scale = match self.model {
            Model::Spring => 1.0,
            Model::Rwa => 0.5,
        };
        let mut coupling = DMatrix::<f64>::zeros(n, n);
        for e in &self.edges {
            let w = scale * e.coupling;
            coupling[(e.i, e.i)] += w;
            coupling[(e.j, e.j)] += w;
            coupling[(e.i, e.j)] -= w;
            coupling[(e.j, e.i)] -= w;
        }
        let mut v = coupling.clone();
        for i in 0..n {
            v[(i, i)] += self.site_term[i];
        }
        let t = match self.model {
            Model::Spring => DMatrix::from_fn(n, n, |i, j| if i == j { 1.0 / self.mass[i] } else { 0.0 }),
            Model::Rwa => {
                let mut t = coupling;
                for i in 0..n {
                    t[(i, i)] += self.site_term[i] / self.mass[i];
                }
                t
            }
        };
        QuadraticHamiltonian::new(v, t, self.model)
    }
}

/// `H = ½ R (V ⊕ T) Rᵀ` with `R = (q₁…qₙ, p₁…pₙ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticHamiltonian {
    v: DMatrix<f64>,
    t: DMatrix<f64>,
    model: Model,
}

impl QuadraticHamiltonian {
    /// Validate symmetry and positive definiteness of both matrices.
    pub fn new(v: DMatrix<f64>, t: DMatrix<f64>, model: Model) -> Result<Self> {
        if !v.is_square() || v.shape() != t.shape() {
            return Err(Error::DimensionMismatch { expected: v.nrows(), found: t.nrows() });
        }
        check_symmetric_pd(&v, "potential matrix V")?;
        check_symmetric_pd(&t, "kinetic matrix T")?;
        Ok(Self { v, t, model })
    }

    pub fn v(&self) -> &DMatrix<f64> {
        &self.v
    }

    pub fn t(&self) -> &DMatrix<f64> {
        &self.t
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn mode_count(&self) -> usize {
        self.v.nrows()
    }
}

fn check_symmetric_pd(m: &DMatrix<f64>, what: &str) -> Result<()> {
    let scale = m.amax().max(1.0);
    for i in 0..m.nrows() {
        for j in 0..i {
            if (m[(i, j)] - m[(j, i)]).abs() > 1e-12 * scale {
                return Err(Error::invalid(format!("{what} is not symmetric at ({i}, {j})")));
            }
        }
    }
    // Cholesky is a cheap PD certificate; only compute the spectrum to report
    // the offending eigenvalue (and to enforce the tolerance near the boundary).
    let shifted = m - DMatrix::identity(m.nrows(), m.nrows()) * PD_TOLERANCE;
    if Cholesky::new(shifted).is_none() {
        let min = SymmetricEigen::new(m.clone()).eigenvalues.min();
        return Err(Error::NotPositiveDefinite { what: what.to_string(), min_eigenvalue: min });
    }
    Ok(())
}

/// Uniform chain of `m` sites.  With `decoupled`, site 0 is the reference
/// oscillator and the chain occupies sites `1..=m`; otherwise `0..m`.
///
/// A periodic chain of two sites couples them "both ways round", i.e. with a
/// single edge of weight `2c`, which reproduces the ring normal modes.
pub fn chain(
    m: usize,
    c: f64,
    boundary: Boundary,
    model: Model,
    decoupled: bool,
) -> Result<OscillatorNetwork> {
    if m == 0 {
        return Err(Error::invalid("chain length must be at least 1"));
    }
    if !(c >= 0.0) {
        return Err(Error::invalid(format!("coupling {c} must be ≥ 0")));
    }
    let offset = usize::from(decoupled);
    let mut net = OscillatorNetwork::new(m + offset, model)?;
    if decoupled {
        net = net.with_decoupled_site()?;
    }
    for k in 0..m.saturating_sub(1) {
        let w = if boundary == Boundary::Periodic && m == 2 { 2.0 * c } else { c };
        net.add_edge(offset + k, offset + k + 1, w)?;
    }
    if boundary == Boundary::Periodic && m > 2 {
        net.add_edge(offset + m - 1, offset, c)?;
    }
    Ok(net)
}

/// Convenience wrapper returning the Hamiltonian of [`chain`].
pub fn build_chain(
    m: usize,
    c: f64,
    boundary: Boundary,
    model: Model,
    decoupled: bool,
) -> Result<QuadraticHamiltonian> {
    chain(m, c, boundary, model, decoupled)?.hamiltonian()
}

/// Labeled sites of a Y-shaped network.
#[derive(Debug, Clone, PartialEq)]
pub struct YShape {
    pub network: OscillatorNetwork,
    pub base_start: usize,
    pub junction: usize,
    pub arm1_end: usize,
    pub arm2_end: usize,
    /// Edges incident on the junction, as indices into `edges()`.
    pub junction_edges: Vec<usize>,
}

/// Base chain of `m_in` sites whose last site (the junction) feeds two open
/// arms of `m_out` sites each.  Sites are numbered base, arm 1, arm 2; a
/// decoupled site 0 shifts everything by one.
pub fn y_shape(m_in: usize, m_out: usize, c: f64, model: Model, decoupled: bool) -> Result<YShape> {
    if m_in == 0 || m_out == 0 {
        return Err(Error::invalid("Y-shape segments need at least one site each"));
    }
    let o = usize::from(decoupled);
    let mut net = OscillatorNetwork::new(o + m_in + 2 * m_out, model)?;
    if decoupled {
        net = net.with_decoupled_site()?;
    }
    let junction = o + m_in - 1;
    for k in 0..m_in - 1 {
        net.add_edge(o + k, o + k + 1, c)?;
    }
    let mut junction_edges = Vec::with_capacity(3);
    if m_in > 1 {
        junction_edges.push(net.edges().len() - 1);
    }
    let mut arm_ends = [0; 2];
    for (a, end) in arm_ends.iter_mut().enumerate() {
        let start = o + m_in + a * m_out;
        net.add_edge(junction, start, c)?;
        junction_edges.push(net.edges().len() - 1);
        for k in 0..m_out - 1 {
            net.add_edge(start + k, start + k + 1, c)?;
        }
        *end = start + m_out - 1;
    }
    Ok(YShape {
        network: net,
        base_start: o,
        junction,
        arm1_end: arm_ends[0],
        arm2_end: arm_ends[1],
        junction_edges,
    })
}

/// Labeled sites of an interferometer network.
#[derive(Debug, Clone, PartialEq)]
pub struct Interferometer {
    pub network: OscillatorNetwork,
    pub left_start: usize,
    pub left_junction: usize,
    pub upper_arm: Vec<usize>,
    pub lower_arm: Vec<usize>,
    pub right_junction: usize,
    pub right_end: usize,
}

/// Frequency of upper-arm site `i` (1-based) under the smooth profile that
/// ramps linearly from 1 at the arm ends to `omega` at its middle.
pub fn arm_profile(i: usize, m_u: usize, omega: f64) -> f64 {
    let d = i.min(m_u + 1 - i) as f64;
    1.0 + (omega - 1.0) * d / (m_u as f64 / 2.0)
}

/// Left chain → (upper arm ∥ lower arm) → right chain.  The left junction is
/// the last left-chain site, the right junction the first right-chain site;
/// both arms attach with coupling `c`.  With `arm_frequency`, the upper arm
/// carries the profile of [`arm_profile`].
#[allow(clippy::too_many_arguments)]
pub fn interferometer(
    m_l: usize,
    m_u: usize,
    m_d: usize,
    m_r: usize,
    c: f64,
    model: Model,
    arm_frequency: Option<f64>,
    decoupled: bool,
) -> Result<Interferometer> {
    if m_l == 0 || m_u == 0 || m_d == 0 || m_r == 0 {
        return Err(Error::invalid("interferometer segments need at least one site each"));
    }
    let o = usize::from(decoupled);
    let mut net = OscillatorNetwork::new(o + m_l + m_u + m_d + m_r, model)?;
    if decoupled {
        net = net.with_decoupled_site()?;
    }
    let left: Vec<usize> = (o..o + m_l).collect();
    let upper: Vec<usize> = (o + m_l..o + m_l + m_u).collect();
    let lower: Vec<usize> = (o + m_l + m_u..o + m_l + m_u + m_d).collect();
    let right: Vec<usize> = (o + m_l + m_u + m_d..o + m_l + m_u + m_d + m_r).collect();
    let path = |net: &mut OscillatorNetwork, sites: &[usize]| -> Result<()> {
        for w in sites.windows(2) {
            net.add_edge(w[0], w[1], c)?;
        }
        Ok(())
    };
    path(&mut net, &left)?;
    let lj = *left.last().unwrap();
    let rj = right[0];
    for arm in [&upper, &lower] {
        net.add_edge(lj, arm[0], c)?;
        path(&mut net, arm)?;
        net.add_edge(*arm.last().unwrap(), rj, c)?;
    }
    path(&mut net, &right)?;
    if let Some(omega) = arm_frequency {
        if !(omega > 0.0) {
            return Err(Error::invalid(format!("arm frequency {omega} must be positive")));
        }
        for (k, &s) in upper.iter().enumerate() {
            net.set_site(s, arm_profile(k + 1, m_u, omega), 1.0)?;
        }
    }
    Ok(Interferometer {
        network: net,
        left_start: left[0],
        left_junction: lj,
        upper_arm: upper,
        lower_arm: lower,
        right_junction: rj,
        right_end: *right.last().unwrap(),
    })
}

/// Coupling between sites `n` and `n+1` (1-based) of the engineered chain.
pub fn engineered_coupling(n: usize, m: usize, c: f64) -> f64 {
    c * ((n * (m - n)) as f64).sqrt()
}

/// RWA chain with couplings `cₙ = c√(n(M−n))` and unit diagonal.
///
/// The couplings enter like every other RWA coupling (off-diagonals `−cₙ/2`),
/// so the hopping part of `V − 1` is `c·Jₓ` and the end-to-end amplitude is
/// `sin(ct/2)^{M−1}`.  The site terms are lowered by half the incident
/// couplings so that the diagonal stays exactly 1.
pub fn engineered_transfer_chain(m: usize, c: f64, decoupled: bool) -> Result<OscillatorNetwork> {
    if m == 0 {
        return Err(Error::invalid("chain length must be at least 1"));
    }
    if !(c >= 0.0) {
        return Err(Error::invalid(format!("coupling {c} must be ≥ 0")));
    }
    let o = usize::from(decoupled);
    let mut net = OscillatorNetwork::new(m + o, Model::Rwa)?;
    if decoupled {
        net = net.with_decoupled_site()?;
    }
    for n in 1..m {
        net.add_edge(o + n - 1, o + n, engineered_coupling(n, m, c))?;
    }
    for n in 1..=m {
        let left = if n > 1 { engineered_coupling(n - 1, m, c) } else { 0.0 };
        let right = if n < m { engineered_coupling(n, m, c) } else { 0.0 };
        net.set_site_term(o + n - 1, 1.0 - 0.5 * (left + right))?;
    }
    // Surface a non-PD V here rather than at first use.
    net.hamiltonian()?;
    Ok(net)
}

/// Random stream for realization `stream` of a run seeded with `seed`.
/// Streams are independent of scheduling, so parallel runs stay reproducible.
pub fn realization_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Replace every coupling `c` by `c + δ`, `δ ~ N(0, σ·c)`.  Negative results
/// are clamped to zero and counted in [`OscillatorNetwork::clamped_couplings`].
pub fn perturb_couplings<R: Rng + ?Sized>(
    net: &OscillatorNetwork,
    relative_sigma: f64,
    rng: &mut R,
) -> Result<OscillatorNetwork> {
    if !(relative_sigma >= 0.0) {
        return Err(Error::invalid(format!("relative σ {relative_sigma} must be ≥ 0")));
    }
    let mut out = net.clone();
    if relative_sigma == 0.0 {
        return Ok(out);
    }
    for e in &mut out.edges {
        let normal = Normal::new(0.0, relative_sigma * e.coupling)
            .map_err(|err| Error::invalid(err.to_string()))?;
        let perturbed = e.coupling + normal.sample(rng);
        if perturbed < 0.0 {
            out.clamped += 1;
            e.coupling = 0.0;
        } else {
            e.coupling = perturbed;
        }
    }
    Ok(out)
}
