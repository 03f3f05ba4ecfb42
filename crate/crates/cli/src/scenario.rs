//! Scenario execution: dispatches a resolved configuration to the library
//! and collects the sweep into a result table.

use serde::{Deserialize, Serialize};

use fanoring::liouville::nonlinear_polarizability_spectrum;
use fanoring::metamolecule::polarizability_spectrum;
use fanoring::nanoring::permeability_spectrum;

use crate::config::{ResolvedConfig, Scenario};
use crate::Result;

pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableMeta {
    pub scenario: String,
    pub param_hash: String,
    /// What the re/im columns hold.
    pub value: String,
    pub code_version: String,
}

/// Sweep results: one `(omega_rad_s, re, im)` row per grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultTable {
    pub meta: TableMeta,
    pub rows: Vec<(f64, f64, f64)>,
}

impl ResultTable {
    pub fn new(meta: TableMeta, rows: Vec<(f64, f64, f64)>) -> Self {
        Self { meta, rows }
    }

    /// Index of the row nearest to `omega`.
    pub fn nearest_row(&self, omega: f64) -> Option<usize> {
        self.rows
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 .0 - omega).abs().total_cmp(&(b.1 .0 - omega).abs()))
            .map(|(i, _)| i)
    }
}

/// Runs the configured sweep. Deterministic: identical configurations give
/// identical tables.
pub fn run_scenario(cfg: &ResolvedConfig) -> Result<ResultTable> {
    let (value_label, rows) = match cfg.scenario {
        Scenario::Metamolecule => {
            let p = cfg.metamolecule_params()?;
            let spec = polarizability_spectrum(&p, &cfg.grid)?;
            ("polarizability_C_m2_per_V", spectrum_rows(&spec))
        }
        Scenario::Nonlinear => {
            let p = cfg.metamolecule_params()?;
            let spec = nonlinear_polarizability_spectrum(&p, &cfg.grid, &cfg.fock)?;
            ("polarizability_C_m2_per_V", spectrum_rows(&spec))
        }
        Scenario::BareRing | Scenario::QdRing => {
            let loaded = matches!(cfg.scenario, Scenario::QdRing);
            let points = permeability_spectrum(&cfg.ring_params(loaded), &cfg.grid)?;
            (
                "mu_eff_dimensionless",
                points.iter().map(|p| (p.omega, p.mu_eff.re, p.mu_eff.im)).collect(),
            )
        }
    };
    Ok(ResultTable::new(
        TableMeta {
            scenario: cfg.scenario.name().to_string(),
            param_hash: cfg.param_hash.clone(),
            value: value_label.to_string(),
            code_version: CODE_VERSION.to_string(),
        },
        rows,
    ))
}

fn spectrum_rows(spec: &fanoring::ComplexSpectrum) -> Vec<(f64, f64, f64)> {
    spec.iter().map(|(w, v)| (w, v.re, v.im)).collect()
}
