//! Lower bounds on the Holevo capacity of quantum channels by Riemannian
//! gradient descent.
//!
//! The search space is the product manifold
//! `Δ₊^{n−1} × (S^{d−1})^n` of ensemble probabilities and pure input
//! states. A point `m = (p, ψ₀, …, ψ_{n−1})` is scored with the Holevo cost
//!
//! ```text
//! f(m) = Σ p_i H(N(|ψ_i⟩⟨ψ_i|)) − H(N(Σ p_i |ψ_i⟩⟨ψ_i|))
//! ```
//!
//! and `−f` at any feasible point is a lower bound on `χ(N)`. All entropies
//! are in bits.
//!
//! The crate is `no_std` and only needs `alloc`. File formats and the
//! command-line front end live in the `holevo` crate.
//!
//! ```
//! use holevo_core::{channel::Channel, solver::{rgd, SolverConfig}};
//!
//! let channel = Channel::depolarizing(2, 1.0 / 3.0).unwrap();
//! let result = rgd(&channel, &SolverConfig::default()).unwrap();
//! assert!((result.chi_lower_bound - 0.349_978).abs() < 1e-5);
//! ```
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod channel;
mod error;
pub mod gradcheck;
pub mod holevo;
pub mod manifold;
mod math;
pub mod numerics;
pub mod random;
pub mod solver;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;

/// A state vector in `C^d`.
pub type StateVector = alloc::vec::Vec<C64>;
