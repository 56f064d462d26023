//! Time evolution of covariance matrices.
//!
//! * [`propagator`]: exact symplectic propagators for arbitrary networks.
//! * [`ring`]: normal-mode kernels of translation-invariant rings and the
//!   exact two-site reduced state they imply.
//! * [`infinite`]: Bessel-function closed forms for the infinite chain.
//! * [`bessel`]: integer-order Bessel functions of the first kind.
//! * [`decoherence`]: momentum diffusion from a double-commutator generator.
//! * [`bath`]: explicit Ohmic baths of auxiliary oscillators.

pub mod bath;
pub mod bessel;
pub mod decoherence;
pub mod infinite;
pub mod propagator;
pub mod ring;

pub use bessel::bessel_j;
pub use propagator::Propagator;
