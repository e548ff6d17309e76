//! Numerical core for a small quantum-foundations laboratory.
//!
//! The crate is organized around six independent engines:
//!
//! - [`spin`] — finite-dimensional states and hermitian observables: Pauli
//!   algebra, Born-rule measurement with collapse, sequential measurement
//!   chains, EPR/Hardy two-particle states, von Neumann premeasurement and
//!   the finite-dimensional time-operator trace obstruction.
//! - [`bohmian`] — the 1D Schrödinger equation on a grid (Crank–Nicolson),
//!   polar (density/phase) decomposition, quantum potential, guidance-law
//!   trajectories and the two-particle nonlocality witness.
//! - [`relativistic`] — Klein-Gordon mode sums on a periodic box: conserved
//!   current, indefinite inner product, frequency splitting, the pointwise
//!   `j0 < 0` witness, plus Dirac gamma algebra and its positive density.
//! - [`fock`] — truncated Fock spaces: ladder operators, number operator,
//!   harmonic vs anharmonic spectra, multimode free-field Hamiltonian,
//!   bosonic symmetrization and fermionic anticommutators.
//! - [`bogoliubov`] — mode-basis changes: (alpha, beta) coefficients from
//!   Klein-Gordon inner products, the sudden mass-quench model, vacuum
//!   occupation numbers and the Unruh/Hawking thermal spectra.
//! - [`blackhole`] — Schwarzschild horizon geometry and the thermodynamic
//!   analogy: radius, area, surface gravity, temperature, entropy, the
//!   first law and the area theorem for mergers.
//!
//! All types are immutable values and all operations are pure functions;
//! Monte Carlo runs split a single 64-bit seed into per-run substreams so
//! results do not depend on thread count.

// `!(x > 0.0)` rejects NaN along with non-positive values; `x <= 0.0`
// would let NaN through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod blackhole;
pub mod bogoliubov;
pub mod bohmian;
pub mod error;
pub mod fock;
pub(crate) mod linalg;
pub mod relativistic;
pub mod spin;

pub use error::{Error, Result};
