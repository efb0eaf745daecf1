//! Simulator for two quantum harmonic modes coupled through angular momentum,
//! each carrying a Kerr anharmonicity β a†²a².
//!
//! The pipeline is exact diagonalization in a truncated two-mode Fock basis:
//! [`fockspace`] builds the basis and field operators, [`model`] assembles the
//! Hamiltonian and its normal-mode analysis, [`spectral`] diagonalizes with
//! verified certificates, [`dynamics`] prepares coherent product states and
//! evolves them spectrally, [`observables`] evaluates entanglement entropy,
//! non-gaussianity, photon statistics and squeezing, and [`shorttime`] carries
//! the second-order Heisenberg expansions and exact initial-rate identities
//! used as independent checks on the spectral evolution.

pub mod dynamics;
pub mod error;
pub mod fockspace;
pub mod model;
pub mod observables;
pub mod shorttime;
pub mod spectral;

pub use dynamics::{StateVector, TimeGrid};
pub use error::{Error, Result};
pub use fockspace::{FockBasis, Mode, Operator};
pub use model::{ModelParams, NormalModes};
pub use spectral::EigenSystem;
