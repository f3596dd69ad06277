//! Discrete time-frequency analysis on periodic boxes.
//!
//! This crate provides the numerical core of `tfwave`:
//!
//! * [`grid`]: uniform periodic grids standing in for `R^d`, the Fourier
//!   transform with the `e^{-2πixξ}` convention, weighted Lebesgue norms.
//! * [`tfnorms`]: short-time Fourier transform, modulation and Wiener amalgam
//!   norms, and checkers for product, embedding and local `FL^p` estimates.
//! * [`multipliers`]: symbol library, cutoff splitting, FFT application of
//!   Fourier multipliers, symbol norms and randomized operator-norm estimates.
//! * [`nlw`]: wave propagators, Duhamel quadrature, the Picard contraction
//!   solver and an independent Runge-Kutta reference integrator.
//! * [`sampler`]: seeded random Gabor superpositions used as test functions.
//!
//! The crate is `no_std` and only needs `alloc`; IO, configuration and the
//! command line live in the `tfwave` crate.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

mod error;
pub mod fft;
pub mod grid;
pub mod multipliers;
pub mod nlw;
pub mod sampler;
pub mod tfnorms;

pub use error::{Error, Result};
pub use num_complex::Complex64;
