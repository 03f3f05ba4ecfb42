//! Optical response of a quantum-plasmonic metamaterial built from
//! metal-nanoparticle / quantum-dot (MNP-QD) metamolecules arranged on
//! nanorings.
//!
//! The crate covers the full response chain at desk scale:
//!
//! - [`materials`] — Drude permittivity, LSP resonance and damping rates of a
//!   single MNP, and every closed-form coupling constant (g, χ, J, I, Q).
//! - [`metamolecule`] — Maxwell-Bloch steady state of one MNP-QD pair and its
//!   Fano-interference polarizability α(ω).
//! - [`nanoring`] — the N = 4 coupled-dipole ring (bare and QD-loaded), its
//!   magnetic dipole and polarizability α_m, and the Maxwell-Garnett
//!   effective permeability μ_eff(ω).
//! - [`liouville`] — the full Lindblad master equation on a truncated
//!   Fock ⊗ qubit space, steady-state solve L(ρ_SS) = 0, and the
//!   intensity-dependent (saturable) polarizability.
//!
//! Conventions: time dependence e^{-iωt}, retardation phases e^{+ikr};
//! all frequencies are angular (rad/s) and all quantities SI unless a
//! field name says otherwise.

pub mod constants;
pub mod error;
pub mod liouville;
pub mod materials;
pub mod metamolecule;
pub mod nanoring;
pub mod spectrum;

pub use error::{Error, Result};
pub use spectrum::ComplexSpectrum;
