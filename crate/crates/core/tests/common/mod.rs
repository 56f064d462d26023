//! Random Hamiltonians and physical states shared by the integration tests.

#![allow(dead_code)]

use nalgebra::DMatrix;
use oscnet::dynamics::propagator::propagator;
use oscnet::gaussian::GaussianState;
use oscnet::network::{Model, QuadraticHamiltonian};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_pd<R: Rng>(rng: &mut R, n: usize) -> DMatrix<f64> {
    let a = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
    &a * a.transpose() + DMatrix::identity(n, n) * 0.2
}

/// Quadratic Hamiltonian with random positive-definite `V` and `T`.
pub fn random_hamiltonian<R: Rng>(rng: &mut R, n: usize) -> QuadraticHamiltonian {
    QuadraticHamiltonian::new(random_pd(rng, n), random_pd(rng, n), Model::Spring).unwrap()
}

/// `S · diag(ν, ν) · Sᵀ` with random symplectic eigenvalues `ν ∈ [1, 1 + spread]`
/// and `S` a random propagator followed by local squeezers.
pub fn random_state<R: Rng>(rng: &mut R, n: usize, spread: f64) -> GaussianState {
    let nus: Vec<f64> = (0..n).map(|_| 1.0 + spread * rng.random::<f64>()).collect();
    let d = DMatrix::from_fn(2 * n, 2 * n, |i, j| if i == j { nus[i % n] } else { 0.0 });
    let h = random_hamiltonian(rng, n);
    let t = rng.random_range(0.0..5.0);
    let s = propagator(&h, t).unwrap();
    let mut sq = DMatrix::identity(2 * n, 2 * n);
    for i in 0..n {
        let x: f64 = rng.random_range(-1.0..1.0);
        sq[(i, i)] = x.exp();
        sq[(n + i, n + i)] = (-x).exp();
    }
    let total = &sq * &s;
    let g = &total * d * total.transpose();
    GaussianState::from_matrix((&g + g.transpose()) * 0.5).unwrap()
}
