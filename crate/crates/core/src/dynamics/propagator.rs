//! Exact symplectic propagators `S(t) = exp([[0, T], [−V, 0]] t)`.
//!
//! With `K = T^{1/2} V T^{1/2} = U diag(ω²) Uᵀ` the blocks are
//!
//! ```text
//! S_qq = T^{1/2}  U cos(ωt)      Uᵀ T^{−1/2}
//! S_qp = T^{1/2}  U sin(ωt)/ω    Uᵀ T^{1/2}
//! S_pq = −T^{−1/2} U ω sin(ωt)   Uᵀ T^{−1/2}
//! S_pp = T^{−1/2} U cos(ωt)      Uᵀ T^{1/2}
//! ```
//!
//! which reduces to the familiar `cos(√V t)` form for `T = 1` and to
//! `cos(Vt)`, `sin(Vt)` blocks for `T = V`.  One spectral decomposition serves
//! every time point.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::gaussian::{sqrt_and_inverse_sqrt, symmetrize, GaussianState};
use crate::network::QuadraticHamiltonian;

/// Spectral data of a Hamiltonian, reusable for any time.
#[derive(Debug, Clone)]
pub struct Propagator {
    n: usize,
    omega: DVector<f64>,
    /// `T^{1/2} U`
    left_q: DMatrix<f64>,
    /// `T^{−1/2} U`
    left_p: DMatrix<f64>,
    /// `Uᵀ T^{−1/2}`
    right_q: DMatrix<f64>,
    /// `Uᵀ T^{1/2}`
    right_p: DMatrix<f64>,
}

impl Propagator {
    pub fn new(h: &QuadraticHamiltonian) -> Result<Self> {
        let n = h.mode_count();
        let (t_half, t_inv_half) = sqrt_and_inverse_sqrt(h.t())?;
        let k = symmetrize(&(&t_half * h.v() * &t_half));
        let eig = SymmetricEigen::try_new(k, f64::EPSILON, 0)
            .ok_or_else(|| Error::numerical("symmetric eigendecomposition did not converge"))?;
        let min = eig.eigenvalues.min();
        if min <= 0.0 {
            return Err(Error::NotPositiveDefinite { what: "T^{1/2} V T^{1/2}".into(), min_eigenvalue: min });
        }
        let u = eig.eigenvectors;
        Ok(Self {
            n,
            omega: eig.eigenvalues.map(f64::sqrt),
            left_q: &t_half * &u,
            left_p: &t_inv_half * &u,
            right_q: u.transpose() * &t_inv_half,
            right_p: u.transpose() * &t_half,
        })
    }

    pub fn mode_count(&self) -> usize {
        self.n
    }

    /// Normal-mode frequencies in ascending order.
    pub fn frequencies(&self) -> &DVector<f64> {
        &self.omega
    }

    /// Full `2n×2n` propagator.
    pub fn matrix(&self, t: f64) -> DMatrix<f64> {
        let all: Vec<usize> = (0..self.n).collect();
        self.rows(&all, t)
    }

    /// Rows of `S(t)` belonging to `sites`, ordered `(q_sites, p_sites)`.
    pub fn rows(&self, sites: &[usize], t: f64) -> DMatrix<f64> {
        let k = sites.len();
        let n = self.n;
        let cos = self.omega.map(|w| (w * t).cos());
        let sin_over = self.omega.map(|w| if w * t == 0.0 { t } else { (w * t).sin() / w });
        let sin_times = self.omega.map(|w| (w * t).sin() * w);
        let lq = self.left_q.select_rows(sites);
        let lp = self.left_p.select_rows(sites);
        let mut out = DMatrix::zeros(2 * k, 2 * n);
        out.view_mut((0, 0), (k, n)).copy_from(&(scale_columns(&lq, &cos) * &self.right_q));
        out.view_mut((0, n), (k, n)).copy_from(&(scale_columns(&lq, &sin_over) * &self.right_p));
        out.view_mut((k, 0), (k, n)).copy_from(&(-scale_columns(&lp, &sin_times) * &self.right_q));
        out.view_mut((k, n), (k, n)).copy_from(&(scale_columns(&lp, &cos) * &self.right_p));
        out
    }

    fn check(&self, state: &GaussianState) -> Result<()> {
        if state.mode_count() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: state.mode_count() });
        }
        Ok(())
    }

    /// `γ(t) = S(t) γ S(t)ᵀ`.
    pub fn evolve(&self, state: &GaussianState, t: f64) -> Result<GaussianState> {
        self.check(state)?;
        let s = self.matrix(t);
        GaussianState::from_matrix(symmetrize(&(&s * state.gamma() * s.transpose())))
    }

    /// Reduced state of `sites` at time `t`, computed from the relevant rows
    /// of the propagator only.
    pub fn evolve_reduced(&self, state: &GaussianState, sites: &[usize], t: f64) -> Result<GaussianState> {
        self.check(state)?;
        if sites.is_empty() || sites.iter().any(|&s| s >= self.n) {
            return Err(Error::invalid("reduced evolution needs valid, nonempty sites"));
        }
        let r = self.rows(sites, t);
        GaussianState::from_matrix(symmetrize(&(&r * state.gamma() * r.transpose())))
    }

    /// Reduced states of `sites` at each of `times`.  Diagonal initial
    /// covariances (product vacuum or thermal states, possibly with baths)
    /// take a fast path that never forms the full quadratic form.
    pub fn evolve_reduced_series(
        &self,
        state: &GaussianState,
        sites: &[usize],
        times: &[f64],
    ) -> Result<Vec<GaussianState>> {
        self.check(state)?;
        if sites.is_empty() || sites.iter().any(|&s| s >= self.n) {
            return Err(Error::invalid("reduced evolution needs valid, nonempty sites"));
        }
        let g = state.gamma();
        let diagonal = (0..g.ncols()).all(|j| (0..g.nrows()).all(|i| i == j || g[(i, j)] == 0.0));
        if !diagonal {
            return times.iter().map(|&t| self.evolve_reduced(state, sites, t)).collect();
        }
        let d = g.diagonal();
        times
            .iter()
            .map(|&t| {
                let r = self.rows(sites, t);
                let rd = scale_columns(&r, &d);
                GaussianState::from_matrix(symmetrize(&(rd * r.transpose())))
            })
            .collect()
    }

    pub fn evolve_series(&self, state: &GaussianState, times: &[f64]) -> Result<Vec<GaussianState>> {
        times.iter().map(|&t| self.evolve(state, t)).collect()
    }
}

fn scale_columns(m: &DMatrix<f64>, d: &DVector<f64>) -> DMatrix<f64> {
    let mut out = m.clone();
    for (j, mut col) in out.column_iter_mut().enumerate() {
        col *= d[j];
    }
    out
}

/// `S(t)` for a single time.
pub fn propagator(h: &QuadraticHamiltonian, t: f64) -> Result<DMatrix<f64>> {
    Ok(Propagator::new(h)?.matrix(t))
}
