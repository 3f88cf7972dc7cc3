//! Dirac energy levels, gravitational redshift, and spectral-line splitting
//! of hydrogen-like atoms in the gauge-field description of gravity.
//!
//! The gravitational field of a classical point mass enters as a diagonal
//! rank-2 gauge field on flat Minkowski spacetime.  Its whole effect on a
//! hydrogen-like atom is captured by two constants built from the Newtonian
//! potential Phi0 at the atom,
//!
//! ```text
//! C1 = (1 - Phi0/c^2) / (1 - 2 Phi0/c^2),    C2 = 1 / (1 - 2 Phi0/c^2),
//! ```
//!
//! which rescale the Dirac Hamiltonian.  Every bound-state energy is the
//! flat-space Dirac energy times C1, giving the redshift z = 1/C1 - 1 =
//! u/(1+u) in terms of the compactness u = GM/(r0 c^2); the potential
//! gradient additionally breaks spherical symmetry and splits otherwise
//! degenerate lines.
//!
//! Quick tour:
//!
//! ```
//! use ugatom::atom::{energy, energy_flat, QuantumNumbers};
//! use ugatom::gravity::GravityEnvironment;
//! use ugatom::physcon::codata_constants;
//! use ugatom::spectra::redshift_report;
//!
//! let pc = codata_constants();
//! let env = GravityEnvironment::from_compactness(0.01, pc).unwrap();
//!
//! // hydrogen ground state, scaled by C1
//! let qn = QuantumNumbers::new(0, -1, 1).unwrap();
//! let e0 = energy_flat(&qn, 1, &pc).unwrap();
//! let e = energy(&qn, 1, &env).unwrap();
//! assert_eq!(e, env.c1() * e0);
//!
//! // redshift, exact and the two-term series
//! let report = redshift_report(&env).unwrap();
//! assert!((report.z_ug_exact - 0.01 / 1.01).abs() < 1e-15);
//! ```
//!
//! The accompanying book under `book/` walks through each piece; its code
//! snippets are compiled as doc-tests via the [`guide`] module.

// quadrature and Lanczos tables keep their full published precision
#![allow(clippy::excessive_precision)]

pub mod atom;
pub mod cli;
mod error;
pub mod gravity;
pub mod guide;
pub mod oracle;
pub mod perturbation;
pub mod physcon;
pub mod specfun;
pub mod spectra;
pub mod tensor;

pub use error::{Error, Result};
