//! TOML scenario configuration with reference defaults and validation.
//!
//! Unknown keys are rejected. All frequencies in the file are angular
//! (rad/s), as the field names state; the `--grid` command-line flag
//! additionally accepts a `THz` suffix (ordinary frequency) and converts.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use fanoring::liouville::HilbertConfig;
use fanoring::materials::{
    derive_mnp_at_resonance, MNPParams, MaterialParams, Orientation, QDParams,
};
use fanoring::metamolecule::{Drive, MetamoleculeParams};
use fanoring::nanoring::{RingGeometry, RingResponseParams};
use fanoring::spectrum::linear_grid;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
#[clap(rename_all = "kebab-case")]
pub enum Scenario {
    Metamolecule,
    BareRing,
    QdRing,
    Nonlinear,
}

impl Scenario {
    pub fn name(&self) -> &'static str {
        match self {
            Scenario::Metamolecule => "metamolecule",
            Scenario::BareRing => "bare-ring",
            Scenario::QdRing => "qd-ring",
            Scenario::Nonlinear => "nonlinear",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
#[clap(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MaterialSection {
    /// Plasma frequency (rad/s). The silver value consistent with the ring
    /// literature; see the README for the legacy alternative.
    pub omega_p_rad_s: f64,
    pub gamma_rad_s: f64,
    pub eps_inf: f64,
    pub eps_b: f64,
    pub mu_b: f64,
}

impl Default for MaterialSection {
    fn default() -> Self {
        let m = MaterialParams::silver_default();
        Self {
            omega_p_rad_s: m.omega_p,
            gamma_rad_s: m.gamma,
            eps_inf: m.eps_inf,
            eps_b: m.eps_b,
            mu_b: m.mu_b,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MnpSection {
    pub radius_m: f64,
    /// Use the legacy /ω_p form of the cubic Ohmic term (auditing only).
    pub legacy_ohmic_cubic: bool,
}

impl Default for MnpSection {
    fn default() -> Self {
        Self { radius_m: 16e-9, legacy_ohmic_cubic: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QdSection {
    /// Dipole-moment radius r₀ (m); μ = e·r₀. Zero removes the QDs entirely.
    pub dipole_radius_m: f64,
    pub gamma_x_rad_s: f64,
}

impl Default for QdSection {
    fn default() -> Self {
        Self { dipole_radius_m: 0.9e-9, gamma_x_rad_s: 80e9 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MetamoleculeSection {
    pub separation_m: f64,
    /// "perpendicular" (S = −1) or "parallel" (S = 2).
    pub orientation: OrientationName,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OrientationName {
    #[default]
    Perpendicular,
    Parallel,
}

impl From<OrientationName> for Orientation {
    fn from(o: OrientationName) -> Self {
        match o {
            OrientationName::Perpendicular => Orientation::Perpendicular,
            OrientationName::Parallel => Orientation::Parallel,
        }
    }
}

impl Default for MetamoleculeSection {
    fn default() -> Self {
        Self { separation_m: 32e-9, orientation: OrientationName::Perpendicular }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RingSection {
    pub n_sites: usize,
    pub r1_m: f64,
    pub r2_m: f64,
    /// Cubic cell edge a; the ring number density is N_d = a⁻³.
    pub cell_size_m: f64,
    /// Include the ik³/6π regular-array term in the mixing formula.
    pub lattice_correction: bool,
}

impl Default for RingSection {
    fn default() -> Self {
        Self {
            n_sites: 4,
            r1_m: 38e-9,
            r2_m: 6e-9,
            cell_size_m: 96e-9,
            lattice_correction: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DriveSection {
    /// E₀μ in meV (the conventional quote). Mutually exclusive with
    /// `field_v_per_m`.
    pub energy_mev: Option<f64>,
    /// Bare field amplitude E₀ in V/m.
    pub field_v_per_m: Option<f64>,
    /// Magnetic drive amplitude for the ring scenarios (A/m).
    pub h0_a_per_m: f64,
}

impl Default for DriveSection {
    fn default() -> Self {
        Self { energy_mev: Some(1e-4), field_v_per_m: None, h0_a_per_m: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct GridSection {
    /// Sweep start (rad/s); defaults depend on the scenario.
    pub start_rad_s: Option<f64>,
    pub stop_rad_s: Option<f64>,
    pub points: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NonlinearSection {
    /// Fock truncation of the LSP mode.
    pub fock_dim: usize,
}

impl Default for NonlinearSection {
    fn default() -> Self {
        Self { fock_dim: 15 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub path: Option<PathBuf>,
    pub format: Option<OutputFormat>,
}

/// A full scenario description. Every field has a reference default, so the
/// empty document is valid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    /// MNP-QD detuning Δ = ω₀ − ω_x (rad/s).
    pub detuning_rad_s: f64,
    pub material: MaterialSection,
    pub mnp: MnpSection,
    pub qd: QdSection,
    pub metamolecule: MetamoleculeSection,
    pub ring: RingSection,
    pub drive: DriveSection,
    pub grid: GridSection,
    pub nonlinear: NonlinearSection,
    pub output: OutputSection,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            scenario: Scenario::Metamolecule,
            detuning_rad_s: 0.195e15,
            material: MaterialSection::default(),
            mnp: MnpSection::default(),
            qd: QdSection::default(),
            metamolecule: MetamoleculeSection::default(),
            ring: RingSection::default(),
            drive: DriveSection::default(),
            grid: GridSection::default(),
            nonlinear: NonlinearSection::default(),
            output: OutputSection::default(),
        }
    }
}

/// Parses a TOML scenario document; the empty string yields all defaults.
pub fn parse_config(text: &str) -> Result<ScenarioConfig> {
    toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
}

pub fn serialize_config(cfg: &ScenarioConfig) -> Result<String> {
    toml::to_string_pretty(cfg).map_err(|e| Error::Config(e.to_string()))
}

/// Everything a scenario run needs, with defaults applied and inputs
/// validated against their physical domain.
#[derive(Debug, Clone)]
pub struct ResolvedConfig {
    pub scenario: Scenario,
    pub material: MaterialParams,
    pub mnp: MNPParams,
    pub qd: QDParams,
    pub orientation: Orientation,
    pub separation: f64,
    pub drive: Drive,
    pub h0: f64,
    pub ring: RingGeometry,
    pub number_density: f64,
    pub lattice_correction: bool,
    pub fock: HilbertConfig,
    pub grid: Vec<f64>,
    /// SHA-256 over the canonical serialized physics parameters.
    pub param_hash: String,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
}

impl ResolvedConfig {
    /// Metamolecule parameter set (metamolecule / nonlinear scenarios).
    pub fn metamolecule_params(&self) -> Result<MetamoleculeParams> {
        MetamoleculeParams::new(
            &self.material,
            self.mnp,
            self.qd,
            self.separation,
            self.orientation,
            self.drive,
        )
        .map_err(|e| Error::Config(e.to_string()))
    }

    /// Ring parameter set (bare-ring / qd-ring scenarios).
    pub fn ring_params(&self, loaded: bool) -> RingResponseParams {
        RingResponseParams {
            geometry: self.ring,
            mnp: self.mnp,
            qd: if loaded { Some(self.qd) } else { None },
            material: self.material,
            number_density: self.number_density,
            h0: self.h0,
            lattice_correction: self.lattice_correction,
        }
    }
}

fn config_err(e: fanoring::Error) -> Error {
    Error::Config(e.to_string())
}

/// Scenario-specific default sweep windows, centred on the derived
/// resonances.
fn default_grid(scenario: Scenario, omega_0: f64, omega_x: f64) -> (f64, f64, usize) {
    match scenario {
        Scenario::Metamolecule => (omega_x.min(omega_0) - 2e13, omega_x.max(omega_0) + 2e13, 401),
        Scenario::BareRing => (0.93 * omega_0, 1.01 * omega_0, 1201),
        Scenario::QdRing => (omega_x - 2.4e13, omega_x + 2.7e13, 10001),
        Scenario::Nonlinear => (omega_x - 2e12, omega_x + 2e12, 161),
    }
}

/// Validates the raw config and assembles the derived parameter sets.
pub fn resolve(cfg: &ScenarioConfig) -> Result<ResolvedConfig> {
    let material = MaterialParams {
        omega_p: cfg.material.omega_p_rad_s,
        gamma: cfg.material.gamma_rad_s,
        eps_inf: cfg.material.eps_inf,
        eps_b: cfg.material.eps_b,
        mu_b: cfg.material.mu_b,
    };
    material.validate().map_err(config_err)?;
    let mnp = if cfg.mnp.legacy_ohmic_cubic {
        fanoring::materials::derive_mnp_with(
            &material,
            cfg.mnp.radius_m,
            material.lsp_resonance(),
            fanoring::materials::OhmicCubicForm::OmegaP,
        )
    } else {
        derive_mnp_at_resonance(&material, cfg.mnp.radius_m)
    }
    .map_err(config_err)?;
    let omega_x = mnp.omega_0 - cfg.detuning_rad_s;
    if omega_x <= 0.0 {
        return Err(Error::Config(format!(
            "detuning_rad_s = {} pushes the QD frequency below zero (omega_0 = {:.6e})",
            cfg.detuning_rad_s, mnp.omega_0
        )));
    }
    let qd = QDParams::new(cfg.qd.dipole_radius_m, omega_x, cfg.qd.gamma_x_rad_s).map_err(config_err)?;

    let drive = match (cfg.drive.energy_mev, cfg.drive.field_v_per_m) {
        (Some(_), Some(_)) => {
            return Err(Error::Config(
                "drive.energy_mev and drive.field_v_per_m are mutually exclusive".to_string(),
            ))
        }
        (None, Some(f)) => Drive::Field(f),
        (Some(e), None) => Drive::EnergyMev(e),
        (None, None) => Drive::EnergyMev(1e-4),
    };

    // metamolecule-scenario constraints apply whenever the pair is used
    if matches!(cfg.scenario, Scenario::Metamolecule | Scenario::Nonlinear) {
        MetamoleculeParams::new(
            &material,
            mnp,
            qd,
            cfg.metamolecule.separation_m,
            cfg.metamolecule.orientation.into(),
            drive,
        )
        .map_err(config_err)?;
    }

    let ring = RingGeometry::new(cfg.ring.n_sites, cfg.ring.r1_m, cfg.ring.r2_m).map_err(config_err)?;
    if matches!(cfg.scenario, Scenario::QdRing) && cfg.ring.n_sites != 4 {
        return Err(Error::Config(format!(
            "the qd-ring scenario is defined for ring.n_sites = 4, got {}",
            cfg.ring.n_sites
        )));
    }
    if !(cfg.ring.cell_size_m > 0.0) {
        return Err(Error::Config(format!(
            "ring.cell_size_m must be positive, got {}",
            cfg.ring.cell_size_m
        )));
    }
    let number_density = cfg.ring.cell_size_m.powi(-3);
    if !(cfg.drive.h0_a_per_m > 0.0) {
        return Err(Error::Config(format!(
            "drive.h0_a_per_m must be positive, got {}",
            cfg.drive.h0_a_per_m
        )));
    }

    let fock = HilbertConfig::new(cfg.nonlinear.fock_dim).map_err(config_err)?;

    let (d_start, d_stop, d_points) = default_grid(cfg.scenario, mnp.omega_0, omega_x);
    let start = cfg.grid.start_rad_s.unwrap_or(d_start);
    let stop = cfg.grid.stop_rad_s.unwrap_or(d_stop);
    let points = cfg.grid.points.unwrap_or(d_points);
    let grid = linear_grid(start, stop, points).map_err(config_err)?;

    Ok(ResolvedConfig {
        scenario: cfg.scenario,
        material,
        mnp,
        qd,
        orientation: cfg.metamolecule.orientation.into(),
        separation: cfg.metamolecule.separation_m,
        drive,
        h0: cfg.drive.h0_a_per_m,
        ring,
        number_density,
        lattice_correction: cfg.ring.lattice_correction,
        fock,
        grid,
        param_hash: param_hash(cfg),
        out: cfg.output.path.clone(),
        format: cfg.output.format.unwrap_or_default(),
    })
}

/// Deterministic hash of the physics parameters (the output section does not
/// participate, so renaming files keeps the hash stable).
pub fn param_hash(cfg: &ScenarioConfig) -> String {
    let mut physics = cfg.clone();
    physics.output = OutputSection::default();
    let canonical = serde_json::to_string(&physics).expect("config serializes");
    let digest = Sha256::digest(canonical.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Parses one bound of a `--grid` spec: a bare number is rad/s, a `THz`
/// suffix (case-insensitive) is ordinary frequency and is converted by 2π.
pub fn parse_frequency(text: &str) -> Result<f64> {
    let t = text.trim();
    let lower = t.to_ascii_lowercase();
    let (num, factor) = if let Some(stripped) = lower.strip_suffix("thz") {
        (stripped.trim().to_string(), 2.0 * std::f64::consts::PI * 1e12)
    } else if let Some(stripped) = lower.strip_suffix("rad/s") {
        (stripped.trim().to_string(), 1.0)
    } else {
        (lower, 1.0)
    };
    num.parse::<f64>()
        .map(|v| v * factor)
        .map_err(|_| Error::Config(format!("cannot parse frequency '{text}' (rad/s or THz)")))
}

/// Parses `START:STOP:POINTS` into a grid override.
pub fn parse_grid_spec(text: &str) -> Result<GridSection> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::Config(format!(
            "grid spec '{text}' must be START:STOP:POINTS"
        )));
    }
    let start = parse_frequency(parts[0])?;
    let stop = parse_frequency(parts[1])?;
    let points: usize = parts[2]
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("cannot parse grid point count '{}'", parts[2])))?;
    Ok(GridSection {
        start_rad_s: Some(start),
        stop_rad_s: Some(stop),
        points: Some(points),
    })
}
