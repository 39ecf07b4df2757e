//! Spectral, coupling, and resonance analysis of the driven Jaynes-Cummings
//! (JC) model.
//!
//! The JC Hamiltonian describes a two-level system coupled to a single
//! bosonic mode with co-rotating coupling only,
//!
//! ```text
//! H_JC = ω (a†a + 1/2) + (Ω/2) σ_z + (g/2) (a σ† + a† σ),
//! ```
//!
//! driven by two bosonic controls X⊗1 and P⊗1. Because the total excitation
//! number is conserved, the spectrum and eigenvectors are known in closed
//! form, and the values of the coupling `g` at which the driven system loses
//! approximate controllability form a countable singular set characterized by
//! explicit crossing and resonance equations.
//!
//! The crate provides:
//!
//! - [`model`]: exact spectrum, mixing angles, dressed-state coefficients,
//!   and the `f_n` frequency functions with their monotonicity properties;
//! - [`coupling`]: closed-form matrix elements of the controls in the
//!   dressed basis, selection rules, and the coupled-pair graph;
//! - [`resonance`]: the singular set — eigenvalue crossings and resonance
//!   roots found by monotone bracketing/bisection;
//! - [`chain`]: numerical certification of the non-resonant chain of
//!   connectedness underlying the controllability criterion;
//! - [`dynamics`]: a truncated Fock⊗spin matrix engine (Hamiltonian
//!   builders, piecewise-constant propagation, rotating-wave averaging) that
//!   doubles as the brute-force oracle for every closed form above;
//! - [`cli`]: the `jcctl` batch front-end with CSV/JSON output.

pub mod chain;
pub mod cli;
pub mod coupling;
pub mod dynamics;
pub mod error;
pub mod model;
pub mod resonance;

pub use error::{Error, Result};
