//! Frequency-resolved complex response data.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// A complex response sampled on a strictly increasing angular-frequency grid.
///
/// The value units depend on context: polarizability (C·m²/V) for
/// metamolecule sweeps, dimensionless μ_eff for permeability sweeps.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSpectrum {
    omegas: Vec<f64>,
    values: Vec<C64>,
}

impl ComplexSpectrum {
    pub fn new(omegas: Vec<f64>, values: Vec<C64>) -> Result<Self> {
        if omegas.len() != values.len() {
            return Err(Error::domain(format!(
                "grid/value length mismatch: {} vs {}",
                omegas.len(),
                values.len()
            )));
        }
        validate_grid(&omegas)?;
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::domain("spectrum contains non-finite values"));
        }
        Ok(Self { omegas, values })
    }

    pub fn omegas(&self) -> &[f64] {
        &self.omegas
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.omegas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omegas.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, C64)> + '_ {
        self.omegas.iter().copied().zip(self.values.iter().copied())
    }

    /// Index of the grid point nearest to `omega`.
    pub fn nearest_index(&self, omega: f64) -> Option<usize> {
        if self.omegas.is_empty() {
            return None;
        }
        let mut best = 0;
        let mut dist = f64::INFINITY;
        for (i, &w) in self.omegas.iter().enumerate() {
            let d = (w - omega).abs();
            if d < dist {
                dist = d;
                best = i;
            }
        }
        Some(best)
    }
}

/// Checks that a sweep grid is finite, strictly increasing, and all-positive.
pub fn validate_grid(omegas: &[f64]) -> Result<()> {
    for &w in omegas {
        if !w.is_finite() || w <= 0.0 {
            return Err(Error::domain(format!("grid frequency must be positive and finite, got {w}")));
        }
    }
    if omegas.windows(2).any(|p| p[1] <= p[0]) {
        return Err(Error::domain("frequency grid must be strictly increasing"));
    }
    Ok(())
}

/// Evenly spaced grid from `start` to `stop` inclusive.
pub fn linear_grid(start: f64, stop: f64, points: usize) -> Result<Vec<f64>> {
    if points == 0 {
        return Err(Error::domain("grid needs at least one point"));
    }
    if points == 1 {
        validate_grid(&[start])?;
        return Ok(vec![start]);
    }
    if stop <= start {
        return Err(Error::domain(format!("grid stop {stop} must exceed start {start}")));
    }
    let step = (stop - start) / (points - 1) as f64;
    let grid: Vec<f64> = (0..points).map(|i| start + step * i as f64).collect();
    validate_grid(&grid)?;
    Ok(grid)
}
