//! Physical constants (SI, CODATA 2018).

/// Reduced Planck constant (J·s).
pub const HBAR: f64 = 1.054571817e-34;

/// Elementary charge (C).
pub const E_CHARGE: f64 = 1.602176634e-19;

/// Vacuum permittivity (F/m).
pub const EPS_0: f64 = 8.8541878128e-12;

/// Vacuum permeability (H/m).
pub const MU_0: f64 = 1.25663706212e-6;

/// Speed of light in vacuum (m/s).
pub const C_LIGHT: f64 = 299792458.0;

/// One electron-volt (J).
pub const EV: f64 = E_CHARGE;
