//! Numerical toolkit for the free Dirac electron.
//!
//! The crate is organised bottom-up:
//!
//! * [`matrix`]: dense complex matrices with inverse, exponential and a
//!   Hermitian eigensolver.
//! * [`clifford`]: Pauli matrices, the two printed sets of Dirac generators
//!   and the Clifford relation check.
//! * [`spinor`]: four-component spinors, bispinor splitting, plane waves,
//!   residuals of the component equations and the `J_z` eigenvalue check.
//! * [`dynamics`]: momentum-space Hamiltonian, spectrum, velocity and `η`
//!   operators, Zitterbewegung closed form and its Heisenberg oracle.
//! * [`fields`]: kinematic momenta, self-consistent field operators, self
//!   potentials, rest energy and the anomalous moment ratio.
//! * [`lattice`]: central-difference minimal coupling on a 3D grid and the
//!   convergence study of the commutator-extracted field intensities.
//!
//! Every module that makes a checkable claim also exposes it as a list of
//! [`check::CheckRecord`]s so a front end can assemble a report.

// `!(err <= tol)` is used so that NaN fails; index loops mirror the tensor notation.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod check;
pub mod clifford;
pub mod constants;
pub mod dynamics;
pub mod error;
pub mod fields;
pub mod lattice;
pub mod matrix;
pub mod spinor;

pub use constants::PhysicalConstants;
pub use error::{DiracError, Result};
pub use matrix::ComplexMatrix;

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
