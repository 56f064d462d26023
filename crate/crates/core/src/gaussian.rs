//! Gaussian states as covariance matrices, and their entanglement.
//!
//! All matrices use the canonical ordering `(q₁…qₙ, p₁…pₙ)`.  The vacuum has
//! `γ = 1`, so a single mode in a thermal state has `γ = z·1` with
//! `z = coth(x/2) = 1 + 2/(eˣ − 1)` for `x = ω/T`.
//!
//! Entanglement is quantified by the logarithmic negativity of a bipartition,
//! computed from the symplectic spectrum of the partially transposed
//! covariance matrix.

use nalgebra::{Cholesky, DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::network::QuadraticHamiltonian;

/// Relative tolerance for the two-fold degeneracy of the spectrum of `−σγσγ`.
pub const PAIRING_TOLERANCE: f64 = 1e-8;
/// Symplectic eigenvalues in `[1 − NEGATIVITY_CLAMP, 1]` count as 1.
pub const NEGATIVITY_CLAMP: f64 = 1e-9;
/// Tolerance used by [`GaussianState::is_physical`].
pub const PHYSICALITY_TOLERANCE: f64 = 1e-7;

/// How a single mode is excited by [`GaussianState::excite_site`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Excitation {
    /// `γ_qq = z`, `γ_pp = 1/z`.
    Squeezed,
    /// `γ_qq = γ_pp = z`.
    Thermal,
}

impl std::str::FromStr for Excitation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "squeezed" => Ok(Excitation::Squeezed),
            "thermal" => Ok(Excitation::Thermal),
            other => Err(Error::invalid(format!(
                "unknown excitation '{other}' (expected 'squeezed' or 'thermal')"
            ))),
        }
    }
}

/// Covariance matrix of an `n`-mode Gaussian state (first moments ignored).
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    gamma: DMatrix<f64>,
}

impl GaussianState {
    /// Wrap a covariance matrix after checking shape and symmetry.
    pub fn from_matrix(gamma: DMatrix<f64>) -> Result<Self> {
        check_shape(&gamma)?;
        check_symmetric(&gamma)?;
        Ok(Self { gamma })
    }

    pub fn vacuum(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("a state needs at least one mode"));
        }
        Ok(Self { gamma: DMatrix::identity(2 * n, 2 * n) })
    }

    /// Product of `n` identical thermal modes at `x = ω/T`.
    pub fn thermal(n: usize, x: f64) -> Result<Self> {
        let z = thermal_z(x)?;
        Ok(Self { gamma: DMatrix::identity(2 * n, 2 * n) * z }.checked_nonempty()?)
    }

    fn checked_nonempty(self) -> Result<Self> {
        if self.gamma.nrows() == 0 {
            return Err(Error::invalid("a state needs at least one mode"));
        }
        Ok(self)
    }

    pub fn gamma(&self) -> &DMatrix<f64> {
        &self.gamma
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.gamma
    }

    pub fn mode_count(&self) -> usize {
        self.gamma.nrows() / 2
    }

    /// Multiply every entry by `z` (e.g. turning an evolved vacuum into the
    /// evolved thermal state of the same network).
    pub fn scaled(&self, z: f64) -> Self {
        Self { gamma: &self.gamma * z }
    }

    fn check_mode(&self, i: usize) -> Result<()> {
        if i >= self.mode_count() {
            return Err(Error::invalid(format!(
                "mode {i} out of range for a {}-mode state",
                self.mode_count()
            )));
        }
        Ok(())
    }

    fn clear_mode(&mut self, i: usize) {
        let n = self.mode_count();
        for idx in [i, n + i] {
            self.gamma.row_mut(idx).fill(0.0);
            self.gamma.column_mut(idx).fill(0.0);
        }
    }

    /// Put modes `i` and `j` into a two-mode squeezed state with parameter
    /// `r`, discarding their previous correlations with everything else.
    pub fn embed_two_mode_squeezed(&self, i: usize, j: usize, r: f64) -> Result<Self> {
        self.check_mode(i)?;
        self.check_mode(j)?;
        if i == j {
            return Err(Error::invalid("two-mode squeezing needs two distinct modes"));
        }
        if !r.is_finite() {
            return Err(Error::invalid("squeezing parameter must be finite"));
        }
        let n = self.mode_count();
        let mut out = self.clone();
        out.clear_mode(i);
        out.clear_mode(j);
        let (ch, sh) = (r.cosh(), r.sinh());
        let g = &mut out.gamma;
        for a in [i, j] {
            g[(a, a)] = ch;
            g[(n + a, n + a)] = ch;
        }
        g[(i, j)] = sh;
        g[(j, i)] = sh;
        g[(n + i, n + j)] = -sh;
        g[(n + j, n + i)] = -sh;
        Ok(out)
    }

    /// Replace mode `i` by a squeezed or thermal single-mode state.
    pub fn excite_site(&self, i: usize, kind: Excitation, z: f64) -> Result<Self> {
        self.check_mode(i)?;
        let (qq, pp) = match kind {
            Excitation::Squeezed if z > 0.0 && z.is_finite() => (z, 1.0 / z),
            Excitation::Thermal if z >= 1.0 && z.is_finite() => (z, z),
            _ => return Err(Error::invalid(format!("invalid z = {z} for {kind:?} excitation"))),
        };
        let n = self.mode_count();
        let mut out = self.clone();
        out.clear_mode(i);
        out.gamma[(i, i)] = qq;
        out.gamma[(n + i, n + i)] = pp;
        Ok(out)
    }

    /// Reduced state of the listed modes (in the given order).
    pub fn reduce(&self, subset: &[usize]) -> Result<Self> {
        if subset.is_empty() {
            return Err(Error::invalid("cannot reduce to an empty set of modes"));
        }
        for &s in subset {
            self.check_mode(s)?;
        }
        let n = self.mode_count();
        let idx: Vec<usize> = subset.iter().copied().chain(subset.iter().map(|&s| n + s)).collect();
        Ok(Self { gamma: self.gamma.select_rows(&idx).select_columns(&idx) })
    }

    pub fn symplectic_eigenvalues(&self) -> Result<Vec<f64>> {
        symplectic_eigenvalues(&self.gamma)
    }

    pub fn min_symplectic_eigenvalue(&self) -> Result<f64> {
        Ok(self.symplectic_eigenvalues()?[0])
    }

    /// All symplectic eigenvalues ≥ 1 − [`PHYSICALITY_TOLERANCE`].
    pub fn is_physical(&self) -> Result<bool> {
        Ok(self.min_symplectic_eigenvalue()? >= 1.0 - PHYSICALITY_TOLERANCE)
    }

    /// Logarithmic negativity between `b` and the remaining modes.
    pub fn log_negativity(&self, b: &[usize]) -> Result<f64> {
        log_negativity(&self.gamma, b)
    }
}

/// `z = 1 + 2/(eˣ − 1)` for a mode with `x = ω/T`.
pub fn thermal_z(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::invalid(format!("temperature ratio x = {x} must be positive")));
    }
    Ok(1.0 + 2.0 / x.exp_m1())
}

/// `σ = [[0, 1], [−1, 0]]` for `n` modes.
pub fn symplectic_form(n: usize) -> DMatrix<f64> {
    let mut s = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        s[(i, n + i)] = 1.0;
        s[(n + i, i)] = -1.0;
    }
    s
}

/// Ground state of `H`.
///
/// With `K = T^{1/2} V T^{1/2}`, the ground state is
/// `γ_qq = T^{1/2} K^{−1/2} T^{1/2}` and `γ_pp = T^{−1/2} K^{1/2} T^{−1/2}`,
/// which equals `√(TV⁻¹) ⊕ √(VT⁻¹)` whenever `T` and `V` commute (in
/// particular for `T = 1` and for `T = V`).
pub fn ground_state(h: &QuadraticHamiltonian) -> Result<GaussianState> {
    let n = h.mode_count();
    let (t_half, t_inv_half) = sqrt_and_inverse_sqrt(h.t())?;
    let k = symmetrize(&(&t_half * h.v() * &t_half));
    let eig = SymmetricEigen::new(k);
    if eig.eigenvalues.min() <= 0.0 {
        return Err(Error::NotPositiveDefinite {
            what: "T^{1/2} V T^{1/2}".into(),
            min_eigenvalue: eig.eigenvalues.min(),
        });
    }
    let u = &eig.eigenvectors;
    let k_inv_half = u * DMatrix::from_diagonal(&eig.eigenvalues.map(|w| w.powf(-0.5))) * u.transpose();
    let k_half = u * DMatrix::from_diagonal(&eig.eigenvalues.map(|w| w.powf(0.5))) * u.transpose();
    let gq = symmetrize(&(&t_half * k_inv_half * &t_half));
    let gp = symmetrize(&(&t_inv_half * k_half * &t_inv_half));
    let mut gamma = DMatrix::zeros(2 * n, 2 * n);
    gamma.view_mut((0, 0), (n, n)).copy_from(&gq);
    gamma.view_mut((n, n), (n, n)).copy_from(&gp);
    Ok(GaussianState { gamma })
}

/// `(M^{1/2}, M^{−1/2})` of a symmetric positive-definite matrix, with a fast
/// path for diagonal input.
pub(crate) fn sqrt_and_inverse_sqrt(m: &DMatrix<f64>) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let n = m.nrows();
    let diagonal = (0..n).all(|i| (0..n).all(|j| i == j || m[(i, j)] == 0.0));
    if diagonal {
        let d = m.diagonal();
        if d.min() <= 0.0 {
            return Err(Error::NotPositiveDefinite { what: "matrix".into(), min_eigenvalue: d.min() });
        }
        return Ok((
            DMatrix::from_diagonal(&d.map(f64::sqrt)),
            DMatrix::from_diagonal(&d.map(|x| 1.0 / x.sqrt())),
        ));
    }
    let eig = SymmetricEigen::new(symmetrize(m));
    if eig.eigenvalues.min() <= 0.0 {
        return Err(Error::NotPositiveDefinite { what: "matrix".into(), min_eigenvalue: eig.eigenvalues.min() });
    }
    let u = &eig.eigenvectors;
    let half = u * DMatrix::from_diagonal(&eig.eigenvalues.map(f64::sqrt)) * u.transpose();
    let inv_half = u * DMatrix::from_diagonal(&eig.eigenvalues.map(|x| 1.0 / x.sqrt())) * u.transpose();
    Ok((symmetrize(&half), symmetrize(&inv_half)))
}

pub(crate) fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

fn check_shape(gamma: &DMatrix<f64>) -> Result<()> {
    if !gamma.is_square() || gamma.nrows() % 2 != 0 || gamma.nrows() == 0 {
        return Err(Error::invalid(format!(
            "covariance matrix must be 2n×2n, got {}×{}",
            gamma.nrows(),
            gamma.ncols()
        )));
    }
    Ok(())
}

fn check_symmetric(gamma: &DMatrix<f64>) -> Result<()> {
    let scale = gamma.amax().max(1.0);
    for i in 0..gamma.nrows() {
        for j in 0..i {
            if (gamma[(i, j)] - gamma[(j, i)]).abs() > 1e-9 * scale {
                return Err(Error::invalid(format!("covariance matrix not symmetric at ({i}, {j})")));
            }
        }
    }
    Ok(())
}

fn check_partition(n: usize, b: &[usize]) -> Result<()> {
    if b.is_empty() || b.len() >= n {
        return Err(Error::invalid("partition must be a nonempty proper subset of the modes"));
    }
    let mut seen = vec![false; n];
    for &m in b {
        if m >= n || std::mem::replace(&mut seen[m], true) {
            return Err(Error::invalid(format!("invalid or repeated mode {m} in partition")));
        }
    }
    Ok(())
}

/// `PγP` where `P` flips the momenta of the modes in `b`.
pub fn partial_transpose(gamma: &DMatrix<f64>, b: &[usize]) -> Result<DMatrix<f64>> {
    check_shape(gamma)?;
    let n = gamma.nrows() / 2;
    check_partition(n, b)?;
    let mut out = gamma.clone();
    for &m in b {
        let idx = n + m;
        out.row_mut(idx).scale_mut(-1.0);
        out.column_mut(idx).scale_mut(-1.0);
    }
    Ok(out)
}

/// Sorted symplectic eigenvalues: positive square roots of the (doubly
/// degenerate) eigenvalues of `−σγσγ`.
///
/// For positive-definite input the spectrum is taken from the similar
/// symmetric matrix `Lᵀ σᵀγσ L` with `γ = LLᵀ`; otherwise the general
/// nonsymmetric eigenvalue problem is solved.  Failure of the eigenvalues to
/// pair signals that the input is not a covariance matrix.
pub fn symplectic_eigenvalues(gamma: &DMatrix<f64>) -> Result<Vec<f64>> {
    check_shape(gamma)?;
    check_symmetric(gamma)?;
    let n = gamma.nrows() / 2;
    let g = symmetrize(gamma);
    let sigma = symplectic_form(n);
    let a = sigma.transpose() * &g * &sigma;
    let mut ev: Vec<f64> = match Cholesky::new(g.clone()) {
        Some(chol) => {
            let l = chol.l();
            let m = symmetrize(&(l.transpose() * a * l));
            SymmetricEigen::new(m).eigenvalues.iter().copied().collect()
        }
        None => (a * &g).complex_eigenvalues().iter().map(|z| z.re).collect(),
    };
    ev.sort_by(f64::total_cmp);
    let scale = ev.iter().fold(1.0f64, |acc, x| acc.max(x.abs()));
    let mut out = Vec::with_capacity(n);
    for pair in ev.chunks(2) {
        if (pair[1] - pair[0]).abs() > PAIRING_TOLERANCE * scale {
            return Err(Error::numerical(format!(
                "eigenvalues of −σγσγ do not pair ({:.6e} vs {:.6e}): not a covariance matrix",
                pair[0], pair[1]
            )));
        }
        let mean = 0.5 * (pair[0] + pair[1]);
        if mean < -PAIRING_TOLERANCE * scale {
            return Err(Error::numerical(format!(
                "negative eigenvalue {mean:.6e} of −σγσγ: not a covariance matrix"
            )));
        }
        out.push(if mean.abs() < 1e-12 { 0.0 } else { mean.abs().sqrt() });
    }
    Ok(out)
}

/// `N = −Σ log₂ min(1, νⱼ)` for a symplectic spectrum.
pub fn negativity_from_spectrum(nus: &[f64]) -> f64 {
    nus.iter()
        .filter(|&&nu| nu < 1.0 - NEGATIVITY_CLAMP)
        .map(|&nu| -nu.log2())
        .fold(0.0, |acc, x| acc + x) // not `sum`, which yields −0 when empty
}

/// Logarithmic negativity between the modes in `b` and the rest.
pub fn log_negativity(gamma: &DMatrix<f64>, b: &[usize]) -> Result<f64> {
    let pt = partial_transpose(gamma, b)?;
    Ok(negativity_from_spectrum(&symplectic_eigenvalues(&pt)?))
}

/// Two-mode logarithmic negativity from the quartic `η⁴ − Δ̃η² + det γ = 0`
/// with `Δ̃ = det A + det B − 2 det C`, for `γ` in canonical ordering
/// `(q_a, q_b, p_a, p_b)`.
pub fn two_mode_log_negativity(gamma: &DMatrix<f64>) -> Result<f64> {
    if gamma.shape() != (4, 4) {
        return Err(Error::invalid("two-mode negativity needs a 4×4 covariance matrix"));
    }
    let g = |i: usize, j: usize| gamma[(i, j)];
    // Local blocks in (q, p) order per mode: a = (0, 2), b = (1, 3).
    let det_a = g(0, 0) * g(2, 2) - g(0, 2) * g(2, 0);
    let det_b = g(1, 1) * g(3, 3) - g(1, 3) * g(3, 1);
    let det_c = g(0, 1) * g(2, 3) - g(0, 3) * g(2, 1);
    let det = gamma.determinant();
    let delta = det_a + det_b - 2.0 * det_c;
    let disc = (delta * delta - 4.0 * det).max(0.0);
    let nu2 = 0.5 * (delta - disc.sqrt());
    Ok(negativity_from_spectrum(&[nu2.max(0.0).sqrt()]))
}
