//! Parameter sweeps and their tabular output.
//!
//! Every sweep returns a [`Table`]: named columns of reals plus a metadata
//! map. Tables serialize to CSV (header row, LF line endings) or to JSON
//! objects `{meta, columns, rows}`; all numbers are rounded to 12
//! significant digits, so serializing a parsed table reproduces its input.
//! Grid points are evaluated in parallel and collected in grid order.

mod design;
mod fidelity;
mod msweep;
mod table;
mod tangles;

pub use design::{design_point, design_space, DesignPoint, DesignSpace, DEFAULT_DESIGN_THRESHOLD};
pub use fidelity::{fidelity_closed_form, fidelity_sweep, StateSpec, COMPARISON_PAIRS};
pub use msweep::{m_sweep, MSweep, DEFAULT_M_GRID, SATURATION_TOL};
pub use table::{curve_export, round_sig, ExportFormat, Table};
pub use tangles::{
    p2_zero_contour, protocol_threshold, tangle_sweep, SweepProtocol, TangleMetric, TangleSweep,
    ThresholdAxis,
};

use serde::Serialize;

use crate::{Error, Result};

/// Default step of the noise-parameter grid.
pub const DEFAULT_P_STEP: f64 = 0.005;

/// A named, strictly ascending list of parameter values.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepGrid {
    name: String,
    values: Vec<f64>,
}

impl SweepGrid {
    pub fn new(name: &str, values: Vec<f64>) -> Result<Self> {
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::domain("grid", *bad, "finite values"));
        }
        if values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Table(format!(
                "grid {name:?} is not strictly ascending"
            )));
        }
        Ok(SweepGrid {
            name: name.to_string(),
            values,
        })
    }

    /// `lo, lo + step, …, hi`; the endpoint is included when `hi − lo` is a
    /// whole number of steps (to 1e-9 relative).
    pub fn uniform(name: &str, lo: f64, hi: f64, step: f64) -> Result<Self> {
        if !(step > 0.0) || !(hi >= lo) {
            return Err(Error::domain("step", step, "step > 0 and hi >= lo"));
        }
        let steps = ((hi - lo) / step * (1.0 + 1e-9)).floor() as usize;
        let values = (0..=steps)
            .map(|i| (lo + i as f64 * step).min(hi))
            .collect();
        SweepGrid::new(name, values)
    }

    /// `[0, 1]` in steps of [`DEFAULT_P_STEP`]: 201 points.
    pub fn default_p() -> Self {
        SweepGrid::uniform("p", 0.0, 1.0, DEFAULT_P_STEP).expect("valid default grid")
    }

    /// Fails unless every value lies in `[lo, hi]`.
    pub fn check_bounds(&self, lo: f64, hi: f64) -> Result<()> {
        match self.values.iter().find(|v| !(lo..=hi).contains(*v)) {
            Some(&v) => Err(Error::domain(
                "grid",
                v,
                if lo == 0.0 && hi == 1.0 {
                    "values in [0, 1]"
                } else {
                    "values within bounds"
                },
            )),
            None => Ok(()),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_has_201_points() {
        let g = SweepGrid::default_p();
        assert_eq!(g.len(), 201);
        assert_eq!(g.values()[0], 0.0);
        assert_eq!(*g.values().last().unwrap(), 1.0);
        assert!((g.values()[43] - 0.215).abs() < 1e-15);
    }

    #[test]
    fn grid_rejects_unsorted() {
        assert!(SweepGrid::new("p", vec![0.1, 0.1]).is_err());
        assert!(SweepGrid::new("p", vec![0.2, 0.1]).is_err());
        assert!(SweepGrid::new("p", vec![0.0, 1.5])
            .unwrap()
            .check_bounds(0.0, 1.0)
            .is_err());
    }
}
