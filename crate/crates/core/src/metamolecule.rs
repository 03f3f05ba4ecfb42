//! Linear response of a single MNP-QD metamolecule.
//!
//! In the frame rotating with the drive frequency ω, the weak-field
//! Maxwell-Bloch steady state solves the 2×2 system
//!
//! ```text
//! (iΔ₀ + γ₀/2)⟨â⟩ − g⟨σ̂⟩ = iχE₀/ℏ
//!  g⟨â⟩ + (iΔ_x + γ_x/2)⟨σ̂⟩ = iμE₀/ℏ
//! ```
//!
//! with Δ₀ = ω₀−ω and Δ_x = ω_x−ω, obtained by factoring ⟨âσ̂†σ̂⟩ and
//! dropping the excited-state population. The polarizability is
//! α(ω) = (χ*⟨â⟩ + μ⟨σ̂⟩)/E₀, with the closed form
//!
//! ```text
//! α = iμ² / ℏ(iΔ_x + γ_x/2 + g²/(iΔ₀ + γ₀/2))
//!   + i|χ|² / ℏ(iΔ₀ + γ₀/2 + g²/(iΔ_x + γ_x/2))
//!   + iμg(χ* − χ) / ℏ((iΔ_x + γ_x/2)(iΔ₀ + γ₀/2) + g²)
//! ```
//!
//! whose cross term carries the Fano interference: a dip in Im α at the QD
//! frequency, flanked by interference maxima.

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::constants::{EV, HBAR};
use crate::error::{Error, Result};
use crate::materials::{coupling_chi, coupling_g, MNPParams, MaterialParams, Orientation, QDParams};
use crate::spectrum::{validate_grid, ComplexSpectrum};

/// Drive strength, either as the coupling energy E₀μ (meV, the natural
/// experimental quote) or the bare field amplitude E₀ (V/m).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Drive {
    /// E₀μ in meV.
    EnergyMev(f64),
    /// E₀ in V/m.
    Field(f64),
}

impl Drive {
    /// Field amplitude E₀ in V/m for a QD of dipole moment `mu`.
    pub fn field_amplitude(&self, mu: f64) -> Result<f64> {
        match *self {
            Drive::Field(e0) => {
                if !(e0 >= 0.0) || !e0.is_finite() {
                    return Err(Error::domain(format!("field amplitude must be non-negative, got {e0}")));
                }
                Ok(e0)
            }
            Drive::EnergyMev(e_mev) => {
                if !(e_mev >= 0.0) || !e_mev.is_finite() {
                    return Err(Error::domain(format!("drive energy must be non-negative, got {e_mev}")));
                }
                if mu <= 0.0 {
                    return Err(Error::domain(
                        "energy drive needs a nonzero QD dipole moment; specify the field in V/m instead",
                    ));
                }
                Ok(e_mev * 1e-3 * EV / mu)
            }
        }
    }
}

/// One MNP-QD pair with its assembled coupling constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetamoleculeParams {
    pub mnp: MNPParams,
    pub qd: QDParams,
    /// Centre-to-centre separation d (m).
    pub separation: f64,
    pub orientation: Orientation,
    /// MNP-QD coupling g (rad/s), sign set by the orientation factor S.
    pub g: f64,
    /// MNP-drive coupling χ (C·m).
    pub chi: C64,
    pub drive: Drive,
}

impl MetamoleculeParams {
    /// Assembles the pair and validates the dipole-approximation range
    /// d ≥ 2r and the tunnelling exclusion d − r ≥ 1 nm.
    pub fn new(
        mat: &MaterialParams,
        mnp: MNPParams,
        qd: QDParams,
        separation: f64,
        orientation: Orientation,
        drive: Drive,
    ) -> Result<Self> {
        if separation < 2.0 * mnp.radius {
            return Err(Error::domain(format!(
                "separation d = {separation} m violates the dipole approximation d >= 2r = {} m",
                2.0 * mnp.radius
            )));
        }
        if separation - mnp.radius < 1e-9 {
            return Err(Error::domain(format!(
                "surface gap d - r = {} m is below the 1 nm tunnelling exclusion",
                separation - mnp.radius
            )));
        }
        let g = coupling_g(&qd, &mnp, separation, orientation)?;
        let chi = coupling_chi(&mnp, mat);
        Ok(Self { mnp, qd, separation, orientation, g, chi, drive })
    }

    pub fn field_amplitude(&self) -> Result<f64> {
        self.drive.field_amplitude(self.qd.mu)
    }

    /// (Δ₀, Δ_x) = (ω₀ − ω, ω_x − ω).
    pub fn detunings(&self, omega: f64) -> (f64, f64) {
        (self.mnp.omega_0 - omega, self.qd.omega_x - omega)
    }
}

/// Steady-state expectation values of the rotating-frame mode operators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyAmplitudes {
    /// ⟨â⟩.
    pub a: C64,
    /// ⟨σ̂⟩.
    pub sigma: C64,
    /// Drive frequency (rad/s).
    pub omega: f64,
    pub delta_0: f64,
    pub delta_x: f64,
}

impl SteadyAmplitudes {
    /// Excited-state population estimated from the linear solution, |⟨σ̂⟩|².
    pub fn qd_population_estimate(&self) -> f64 {
        self.sigma.norm_sqr()
    }
}

/// Weak-field population threshold above which the linear solution is
/// suspect and a warning is logged.
const WEAK_FIELD_POPULATION_LIMIT: f64 = 0.1;

/// Solves the weak-field Maxwell-Bloch steady state at drive frequency `omega`.
pub fn mb_steady_state(p: &MetamoleculeParams, omega: f64) -> Result<SteadyAmplitudes> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::domain(format!("omega must be positive, got {omega}")));
    }
    let e0 = p.field_amplitude()?;
    let (delta_0, delta_x) = p.detunings(omega);
    let d0 = C64::new(p.mnp.gamma_0 / 2.0, delta_0);
    let dx = C64::new(p.qd.gamma_x / 2.0, delta_x);
    let g = C64::new(p.g, 0.0);
    let det = d0 * dx + g * g;
    let scale = d0.norm().max(dx.norm()).max(p.g.abs());
    if det.norm() < 1e-14 * scale * scale {
        return Err(Error::singular(format!(
            "Maxwell-Bloch determinant |{det}| vanished at omega = {omega}; \
             damping rates gamma_0 = {}, gamma_x = {}",
            p.mnp.gamma_0, p.qd.gamma_x
        )));
    }
    let rhs_a = C64::i() * p.chi * e0 / HBAR;
    let rhs_s = C64::i() * p.qd.mu * e0 / HBAR;
    let a = (rhs_a * dx + g * rhs_s) / det;
    let sigma = (d0 * rhs_s - g * rhs_a) / det;
    let out = SteadyAmplitudes { a, sigma, omega, delta_0, delta_x };
    if out.qd_population_estimate() > WEAK_FIELD_POPULATION_LIMIT {
        log::warn!(
            "weak-field assumption strained: estimated QD population {:.3} > {WEAK_FIELD_POPULATION_LIMIT} \
             at omega = {omega:.6e}; consider the master-equation solver",
            out.qd_population_estimate()
        );
    }
    Ok(out)
}

/// Closed-form Fano polarizability α(ω) (C·m²/V).
pub fn analytic_polarizability(p: &MetamoleculeParams, omega: f64) -> Result<C64> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::domain(format!("omega must be positive, got {omega}")));
    }
    let (delta_0, delta_x) = p.detunings(omega);
    let d0 = C64::new(p.mnp.gamma_0 / 2.0, delta_0);
    let dx = C64::new(p.qd.gamma_x / 2.0, delta_x);
    let g2 = C64::new(p.g * p.g, 0.0);
    let mu = p.qd.mu;
    let i = C64::i();
    let t_qd = i * mu * mu / (HBAR * (dx + g2 / d0));
    let t_mnp = i * p.chi.norm_sqr() / (HBAR * (d0 + g2 / dx));
    let t_cross = i * mu * p.g * (p.chi.conj() - p.chi) / (HBAR * (dx * d0 + g2));
    Ok(t_qd + t_mnp + t_cross)
}

/// Evaluates [`analytic_polarizability`] over a strictly increasing grid.
pub fn polarizability_spectrum(p: &MetamoleculeParams, grid: &[f64]) -> Result<ComplexSpectrum> {
    validate_grid(grid)?;
    let values = grid
        .par_iter()
        .map(|&w| analytic_polarizability(p, w))
        .collect::<Result<Vec<_>>>()?;
    ComplexSpectrum::new(grid.to_vec(), values)
}
