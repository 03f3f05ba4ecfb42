//! Material constants and closed-form derived quantities.
//!
//! Everything downstream consumes this module: the Drude permittivity of the
//! metal, the dipolar LSP resonance ω₀ fixed by the Fröhlich condition
//! Re ε_m(ω₀) = −2ε_b, the damping rates of the plasmonic mode, and the
//! coupling constants
//!
//! ```text
//! g  = (S μ / d³) √(3 η r³ / 4π ε₀ ℏ)          MNP-QD near-field coupling
//! χ  = −i ε_b √(12 η ε₀ π ℏ r³)                MNP-drive coupling
//! J₁,₂ = −12π ε₀ ε_b² r³ η Q₁,₂                 MNP-MNP ring coupling
//! I₁,₂ = (μ² / ℏ) Q₁,₂                          QD-QD ring coupling
//! ```
//!
//! where Q_jl is the azimuthal-azimuthal retarded dipole interaction between
//! two sites of a ring, derived from the standard dipolar electric field.
//! η = (γ²(2ε_b+ε_∞) + ω_p²)² / (2 (2ε_b+ε_∞)^{3/2} ω_p³) is the Lorentzian
//! oscillator strength of the LSP mode.

use num_complex::Complex64 as C64;

use crate::constants::{EPS_0, E_CHARGE, HBAR, MU_0};
use crate::error::{Error, Result};

const PI: f64 = std::f64::consts::PI;

/// Drude-metal and background-medium constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialParams {
    /// Plasma frequency ω_p (rad/s).
    pub omega_p: f64,
    /// Drude collision rate γ (rad/s).
    pub gamma: f64,
    /// UV permittivity limit ε_∞ (dimensionless).
    pub eps_inf: f64,
    /// Background relative permittivity ε_b (dimensionless).
    pub eps_b: f64,
    /// Background relative permeability μ_b (dimensionless).
    pub mu_b: f64,
}

impl MaterialParams {
    /// Silver in a dielectric host: ω_p = 1.37×10¹⁶ rad/s, γ = 2.7×10¹³ rad/s,
    /// ε_∞ = 5, ε_b = 2.2, μ_b = 1.
    pub fn silver_default() -> Self {
        Self {
            omega_p: 1.37e16,
            gamma: 2.7e13,
            eps_inf: 5.0,
            eps_b: 2.2,
            mu_b: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega_p > 0.0) || !self.omega_p.is_finite() {
            return Err(Error::domain(format!("omega_p must be positive, got {}", self.omega_p)));
        }
        if !(self.gamma >= 0.0) || !self.gamma.is_finite() {
            return Err(Error::domain(format!("gamma must be non-negative, got {}", self.gamma)));
        }
        if !(self.eps_inf > 0.0) {
            return Err(Error::domain(format!("eps_inf must be positive, got {}", self.eps_inf)));
        }
        if !(self.eps_b >= 1.0) {
            return Err(Error::domain(format!("eps_b must be >= 1, got {}", self.eps_b)));
        }
        if !(self.mu_b > 0.0) {
            return Err(Error::domain(format!("mu_b must be positive, got {}", self.mu_b)));
        }
        Ok(())
    }

    /// Dipolar LSP resonance from the Fröhlich condition:
    /// ω₀ = ω_p / √(ε_∞ + 2 ε_b).
    pub fn lsp_resonance(&self) -> f64 {
        self.omega_p / (self.eps_inf + 2.0 * self.eps_b).sqrt()
    }

    /// Wavenumber in the background medium, k = ω √(μ₀ μ_b ε₀ ε_b).
    pub fn wavenumber(&self, omega: f64) -> f64 {
        omega * (MU_0 * self.mu_b * EPS_0 * self.eps_b).sqrt()
    }

    /// Lorentzian oscillator strength η of the LSP mode (rad/s).
    pub fn eta(&self) -> f64 {
        let s = 2.0 * self.eps_b + self.eps_inf;
        let num = (self.gamma.powi(2) * s + self.omega_p.powi(2)).powi(2);
        num / (2.0 * s.powf(1.5) * self.omega_p.powi(3))
    }
}

/// Drude relative permittivity ε_m(ω) = ε_∞ − ω_p² / (ω² + iγω).
///
/// With the e^{-iωt} convention the imaginary part is positive (absorbing).
pub fn drude_permittivity(mat: &MaterialParams, omega: f64) -> Result<C64> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::domain(format!("omega must be positive, got {omega}")));
    }
    let denom = C64::new(omega * omega, mat.gamma * omega);
    Ok(C64::new(mat.eps_inf, 0.0) - mat.omega_p.powi(2) / denom)
}

/// Denominator convention for the cubic term of the Ohmic damping rate.
///
/// `OmegaPSquared` is the dimensionally consistent form
/// γ_nr = γ + γ³(2ε_b+ε_∞)/ω_p²; `OmegaP` keeps the /ω_p variant found in
/// some legacy parameter sets for auditing. The difference is below 1e-4
/// relative for silver-like parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OhmicCubicForm {
    #[default]
    OmegaPSquared,
    OmegaP,
}

/// Derived single-MNP parameters: resonance, oscillator strength, damping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MNPParams {
    /// Sphere radius r (m).
    pub radius: f64,
    /// Dipolar LSP resonance ω₀ (rad/s).
    pub omega_0: f64,
    /// Oscillator strength η (rad/s).
    pub eta: f64,
    /// Ohmic (non-radiative) damping γ_nr (rad/s).
    pub gamma_nr: f64,
    /// Radiative damping γ_r (rad/s).
    pub gamma_r: f64,
    /// Total LSP linewidth γ₀ = γ_nr + γ_r (rad/s).
    pub gamma_0: f64,
}

/// Populates [`MNPParams`] for a sphere of radius `radius`.
///
/// `omega_eval` sets the wavenumber inside the radiative rate
/// γ_r = 2 k³ ω₀ r³ / (ε_∞ + 2ε_b); γ₀ is treated as a constant Lorentzian
/// linewidth, so callers normally evaluate it at ω₀
/// (see [`derive_mnp_at_resonance`]).
pub fn derive_mnp(mat: &MaterialParams, radius: f64, omega_eval: f64) -> Result<MNPParams> {
    derive_mnp_with(mat, radius, omega_eval, OhmicCubicForm::default())
}

/// As [`derive_mnp`], with γ_r evaluated at the LSP resonance.
pub fn derive_mnp_at_resonance(mat: &MaterialParams, radius: f64) -> Result<MNPParams> {
    derive_mnp(mat, radius, mat.lsp_resonance())
}

pub fn derive_mnp_with(
    mat: &MaterialParams,
    radius: f64,
    omega_eval: f64,
    form: OhmicCubicForm,
) -> Result<MNPParams> {
    mat.validate()?;
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::domain(format!("MNP radius must be positive, got {radius}")));
    }
    if !(omega_eval > 0.0) || !omega_eval.is_finite() {
        return Err(Error::domain(format!("omega_eval must be positive, got {omega_eval}")));
    }
    let s = 2.0 * mat.eps_b + mat.eps_inf;
    let omega_0 = mat.lsp_resonance();
    let cubic = match form {
        OhmicCubicForm::OmegaPSquared => mat.gamma.powi(3) * s / mat.omega_p.powi(2),
        OhmicCubicForm::OmegaP => mat.gamma.powi(3) * s / mat.omega_p,
    };
    let gamma_nr = mat.gamma + cubic;
    let k = mat.wavenumber(omega_eval);
    let gamma_r = 2.0 * k.powi(3) * omega_0 * radius.powi(3) / s;
    Ok(MNPParams {
        radius,
        omega_0,
        eta: mat.eta(),
        gamma_nr,
        gamma_r,
        gamma_0: gamma_nr + gamma_r,
    })
}

/// Two-level quantum dot parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QDParams {
    /// Dipole-moment radius r₀ (m); μ = e·r₀.
    pub dipole_radius: f64,
    /// Transition dipole moment μ (C·m).
    pub mu: f64,
    /// Transition frequency ω_x (rad/s).
    pub omega_x: f64,
    /// Spontaneous emission rate γ_x (rad/s).
    pub gamma_x: f64,
}

impl QDParams {
    pub fn new(dipole_radius: f64, omega_x: f64, gamma_x: f64) -> Result<Self> {
        if !(dipole_radius >= 0.0) || !dipole_radius.is_finite() {
            return Err(Error::domain(format!("dipole radius must be non-negative, got {dipole_radius}")));
        }
        if !(omega_x > 0.0) {
            return Err(Error::domain(format!("omega_x must be positive, got {omega_x}")));
        }
        if !(gamma_x > 0.0) {
            return Err(Error::domain(format!("gamma_x must be positive, got {gamma_x}")));
        }
        Ok(Self {
            dipole_radius,
            mu: E_CHARGE * dipole_radius,
            omega_x,
            gamma_x,
        })
    }
}

/// Relative orientation of the drive field and the MNP-QD separation axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// Field parallel to the separation vector: S = 2.
    Parallel,
    /// Field perpendicular (transverse coupling): S = −1.
    Perpendicular,
}

impl Orientation {
    pub fn s_factor(self) -> f64 {
        match self {
            Orientation::Parallel => 2.0,
            Orientation::Perpendicular => -1.0,
        }
    }
}

/// MNP-QD coupling frequency g = (S μ / d³) √(3 η r³ / 4π ε₀ ℏ) (rad/s).
///
/// The background permittivity cancels between the dipolar field and χ*, so
/// g is independent of ε_b. Valid for d ≥ 2r (dipole approximation); that
/// range is enforced on the metamolecule parameter set, not here.
pub fn coupling_g(qd: &QDParams, mnp: &MNPParams, d: f64, orient: Orientation) -> Result<f64> {
    if !(d > 0.0) || !d.is_finite() {
        return Err(Error::domain(format!("separation d must be positive, got {d}")));
    }
    let root = (3.0 * mnp.eta * mnp.radius.powi(3) / (4.0 * PI * EPS_0 * HBAR)).sqrt();
    Ok(orient.s_factor() * qd.mu / d.powi(3) * root)
}

/// MNP-drive coupling χ = −i ε_b √(12 η ε₀ π ℏ r³) (C·m).
///
/// Purely imaginary with negative imaginary part; χE₀/ℏ has units rad/s.
pub fn coupling_chi(mnp: &MNPParams, mat: &MaterialParams) -> C64 {
    let modulus = mat.eps_b * (12.0 * mnp.eta * EPS_0 * PI * HBAR * mnp.radius.powi(3)).sqrt();
    C64::new(0.0, -modulus)
}

/// Azimuthal component of the retarded dipolar field at ring site `j` due to
/// a unit azimuthal dipole at site `l`, for sites on a ring of `radius`
/// with `n_sites` equally spaced positions (field per dipole, SI).
///
/// With Δφ = 2π(l−j)/N and r″ = 2R sin(|Δφ|/2):
///
/// ```text
/// Q_jl = e^{ikr″} / (4π ε₀ ε_b r″⁵)
///        · [ (kr″)² (2R²cosΔφ − R²cos²Δφ − R²)
///          + (3R² sin²Δφ − r″² cosΔφ)(1 − ikr″) ]
/// ```
///
/// Symmetric under j↔l. The interaction is hosted by the background medium,
/// hence the ε_b in the denominator.
pub fn q_general(
    radius: f64,
    n_sites: usize,
    j: usize,
    l: usize,
    k: f64,
    mat: &MaterialParams,
) -> Result<C64> {
    if n_sites < 2 {
        return Err(Error::domain(format!("ring needs at least 2 sites, got {n_sites}")));
    }
    if j >= n_sites || l >= n_sites {
        return Err(Error::domain(format!(
            "site index out of range: j={j}, l={l}, n_sites={n_sites}"
        )));
    }
    if j == l {
        return Err(Error::domain("self-interaction Q_jj is excluded"));
    }
    if !(radius > 0.0) {
        return Err(Error::domain(format!("ring radius must be positive, got {radius}")));
    }
    if !(k >= 0.0) || !k.is_finite() {
        return Err(Error::domain(format!("wavenumber must be non-negative, got {k}")));
    }
    let dphi = 2.0 * PI * (l as f64 - j as f64) / n_sites as f64;
    let rpp = 2.0 * radius * (dphi / 2.0).sin().abs();
    let (sin_d, cos_d) = dphi.sin_cos();
    let krpp = k * rpp;
    let far = krpp * krpp
        * (2.0 * radius * radius * cos_d
            - radius * radius * cos_d * cos_d
            - radius * radius);
    let near = (3.0 * radius * radius * sin_d * sin_d - rpp * rpp * cos_d)
        * C64::new(1.0, -krpp);
    let phase = C64::new(0.0, krpp).exp();
    Ok(phase / (4.0 * PI * EPS_0 * mat.eps_b * rpp.powi(5)) * (C64::new(far, 0.0) + near))
}

/// Closed-form nearest-neighbour interaction for an N = 4 ring
/// (separation √2·R):
/// Q₁ = e^{i√2kR} (−2k²R⁴ + 3R²(1 − i√2kR)) / (16√2 π ε₀ ε_b R⁵).
pub fn q1_closed_form(radius: f64, k: f64, mat: &MaterialParams) -> C64 {
    let kr = k * radius;
    let phase = C64::new(0.0, std::f64::consts::SQRT_2 * kr).exp();
    let bracket = C64::new(-2.0 * k * k * radius.powi(4), 0.0)
        + 3.0 * radius * radius * C64::new(1.0, -std::f64::consts::SQRT_2 * kr);
    phase / (16.0 * std::f64::consts::SQRT_2 * PI * EPS_0 * mat.eps_b * radius.powi(5)) * bracket
}

/// Closed-form next-nearest-neighbour interaction for an N = 4 ring
/// (separation 2·R):
/// Q₂ = e^{i2kR} (−16k²R⁴ + 4R²(1 − i2kR)) / (128 π ε₀ ε_b R⁵).
pub fn q2_closed_form(radius: f64, k: f64, mat: &MaterialParams) -> C64 {
    let kr = k * radius;
    let phase = C64::new(0.0, 2.0 * kr).exp();
    let bracket = C64::new(-16.0 * k * k * radius.powi(4), 0.0)
        + 4.0 * radius * radius * C64::new(1.0, -2.0 * kr);
    phase / (128.0 * PI * EPS_0 * mat.eps_b * radius.powi(5)) * bracket
}

/// MNP-MNP ring coupling J = −12π ε₀ ε_b² r³ η Q (rad/s, complex through the
/// retardation phase of Q).
pub fn coupling_j(mnp: &MNPParams, mat: &MaterialParams, q: C64) -> C64 {
    -12.0 * PI * EPS_0 * mat.eps_b * mat.eps_b * mnp.radius.powi(3) * mnp.eta * q
}

/// QD-QD ring coupling I = (μ²/ℏ) Q (rad/s).
pub fn coupling_i(qd: &QDParams, q: C64) -> C64 {
    qd.mu * qd.mu / HBAR * q
}
