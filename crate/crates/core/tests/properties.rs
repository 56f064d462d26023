//! Property tests for the invariants of Gaussian dynamics on oscillator
//! networks.

mod common;

use nalgebra::DMatrix;
use oscnet::dynamics::propagator::propagator;
use oscnet::dynamics::Propagator;
use oscnet::gaussian::{log_negativity, symplectic_eigenvalues, symplectic_form, two_mode_log_negativity, GaussianState};
use oscnet::network::{chain, Boundary, Model, OscillatorNetwork};
use proptest::prelude::*;

fn model() -> impl Strategy<Value = Model> {
    prop_oneof![Just(Model::Spring), Just(Model::Rwa)]
}

/// Local symplectic map on one mode: rotation by `theta` then squeezing `s`.
fn local_symplectic(n: usize, mode: usize, theta: f64, s: f64) -> DMatrix<f64> {
    let mut m = DMatrix::identity(2 * n, 2 * n);
    let (c, sn) = (theta.cos(), theta.sin());
    let (q, p) = (mode, n + mode);
    m[(q, q)] = s.exp() * c;
    m[(q, p)] = s.exp() * sn;
    m[(p, q)] = -(-s).exp() * sn;
    m[(p, p)] = (-s).exp() * c;
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn propagator_is_symplectic(seed in any::<u64>(), n in 1usize..7, t in 0.0f64..30.0) {
        let mut rng = common::rng(seed);
        let h = common::random_hamiltonian(&mut rng, n);
        let s = propagator(&h, t).unwrap();
        let sigma = symplectic_form(n);
        prop_assert!((&s * &sigma * s.transpose() - &sigma).amax() < 1e-10);
    }

    #[test]
    fn evolution_preserves_the_symplectic_spectrum(seed in any::<u64>(), n in 1usize..6, t in 0.0f64..20.0) {
        let mut rng = common::rng(seed);
        let h = common::random_hamiltonian(&mut rng, n);
        let state = common::random_state(&mut rng, n, 3.0);
        let evolved = Propagator::new(&h).unwrap().evolve(&state, t).unwrap();
        let a = symplectic_eigenvalues(state.gamma()).unwrap();
        let b = symplectic_eigenvalues(evolved.gamma()).unwrap();
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() <= 1e-8 * x.max(1.0));
        }
        prop_assert!(evolved.is_physical().unwrap());
    }

    #[test]
    fn negativity_is_invariant_under_local_symplectic_maps(
        seed in any::<u64>(),
        th0 in -3.0f64..3.0, s0 in -1.0f64..1.0,
        th1 in -3.0f64..3.0, s1 in -1.0f64..1.0,
    ) {
        let mut rng = common::rng(seed);
        let state = common::random_state(&mut rng, 2, 1.0);
        let l = local_symplectic(2, 0, th0, s0) * local_symplectic(2, 1, th1, s1);
        let moved = &l * state.gamma() * l.transpose();
        let before = log_negativity(state.gamma(), &[1]).unwrap();
        let after = log_negativity(&moved, &[1]).unwrap();
        prop_assert!((before - after).abs() < 1e-8);
    }

    #[test]
    fn polynomial_and_spectral_routes_agree(seed in any::<u64>(), spread in 0.0f64..4.0) {
        let mut rng = common::rng(seed);
        let state = common::random_state(&mut rng, 2, spread);
        let a = log_negativity(state.gamma(), &[1]).unwrap();
        let b = two_mode_log_negativity(state.gamma()).unwrap();
        prop_assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn relabeling_sites_does_not_change_pair_negativity(
        m in 3usize..9, c in 0.01f64..0.5, r in 0.1f64..1.5, t in 0.0f64..40.0,
        model in model(), perm_seed in any::<u64>(),
    ) {
        let net = chain(m, c, Boundary::Open, model, false).unwrap();
        let mut perm: Vec<usize> = (0..m).collect();
        let mut rng = common::rng(perm_seed);
        rand::seq::SliceRandom::shuffle(perm.as_mut_slice(), &mut rng);
        let relabeled = net.permuted(&perm).unwrap();

        let s0 = GaussianState::vacuum(m).unwrap().embed_two_mode_squeezed(0, 1, r).unwrap();
        let p0 = GaussianState::vacuum(m).unwrap().embed_two_mode_squeezed(perm[0], perm[1], r).unwrap();
        let a = Propagator::new(&net.hamiltonian().unwrap()).unwrap().evolve_reduced(&s0, &[0, m - 1], t).unwrap();
        let b = Propagator::new(&relabeled.hamiltonian().unwrap()).unwrap()
            .evolve_reduced(&p0, &[perm[0], perm[m - 1]], t).unwrap();
        prop_assert!((a.gamma() - b.gamma()).amax() < 1e-9);
    }

    #[test]
    fn heating_never_increases_negativity(seed in any::<u64>(), z in 1.0f64..5.0) {
        let mut rng = common::rng(seed);
        let state = common::random_state(&mut rng, 2, 0.5);
        let hot = state.scaled(z);
        prop_assert!(hot.is_physical().unwrap());
        let cold = state.log_negativity(&[1]).unwrap();
        let warm = hot.log_negativity(&[1]).unwrap();
        prop_assert!(warm <= cold + 1e-12);
        // The partially transposed spectrum scales linearly with z.
        if cold > 0.0 {
            prop_assert!((warm - (cold - z.log2()).max(0.0)).abs() < 1e-8);
        }
    }

    #[test]
    fn rwa_networks_never_entangle_classical_product_states(
        seed in any::<u64>(), m in 2usize..8, t in 0.0f64..200.0,
    ) {
        let mut rng = common::rng(seed);
        let mut net = OscillatorNetwork::new(m, Model::Rwa).unwrap();
        for i in 1..m {
            let j = rand::Rng::random_range(&mut rng, 0..i);
            net.add_edge(j, i, rand::Rng::random_range(&mut rng, 0.01..0.4)).unwrap();
        }
        for i in 0..m {
            net.set_site(i, rand::Rng::random_range(&mut rng, 1.0..2.0), 1.0).unwrap();
        }
        let zs: Vec<f64> = (0..m).map(|_| 1.0 + 4.0 * rand::Rng::random::<f64>(&mut rng)).collect();
        let g = DMatrix::from_fn(2 * m, 2 * m, |i, j| if i == j { zs[i % m] } else { 0.0 });
        let state = GaussianState::from_matrix(g).unwrap();
        let evolved = Propagator::new(&net.hamiltonian().unwrap()).unwrap().evolve(&state, t).unwrap();
        for i in 0..m {
            for j in i + 1..m {
                prop_assert!(evolved.reduce(&[i, j]).unwrap().log_negativity(&[1]).unwrap() <= 1e-9);
            }
        }
    }
}
