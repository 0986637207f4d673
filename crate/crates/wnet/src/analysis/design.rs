use serde::Serialize;
use serde_json::json;

use super::{SweepGrid, Table};
use crate::noise::{event_count, p_eff_distance};
use crate::{Error, Result};

/// Operative effective-noise threshold for the design map.
pub const DEFAULT_DESIGN_THRESHOLD: f64 = 0.407;

/// One chain configuration: `n` hops of `ell` km each.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DesignPoint {
    pub n: u32,
    pub ell: f64,
    pub p_eff: f64,
    /// `p_eff ≤ threshold`.
    pub feasible: bool,
}

fn check_threshold(t: f64) -> Result<()> {
    if !(0.0..1.0).contains(&t) {
        return Err(Error::domain("threshold", t, "0 <= threshold < 1"));
    }
    Ok(())
}

/// Effective noise of `n` hops of length `ell` and its feasibility.
pub fn design_point(n: u32, ell: f64, lambda: f64, threshold: f64) -> Result<DesignPoint> {
    check_threshold(threshold)?;
    let p_eff = p_eff_distance(n, n as f64 * ell, lambda)?.value();
    Ok(DesignPoint {
        n,
        ell,
        p_eff,
        feasible: p_eff <= threshold,
    })
}

/// Longest feasible hop, `ℓ_max = −ln(1 − t) / ((4n − 1) λ)`.
fn ell_max(n: u32, lambda: f64, t: f64) -> Result<f64> {
    let events = event_count(n)?.total as f64;
    Ok(-(-t).ln_1p() / (events * lambda))
}

/// Output of [`design_space`].
#[derive(Clone, Debug)]
pub struct DesignSpace {
    /// Columns `threshold, n, ell_max, L_max`.
    pub boundary: Table,
    /// Columns `n, ell, p_eff, feasible_<t>` (1 or 0) per threshold.
    pub grid: Table,
}

/// Feasibility map of `n` hops × hop length `ell` at attenuation `lambda`
/// (km⁻¹), with the boundary `ℓ_max(n)` and total reach `L_max = n ℓ_max`
/// for every threshold.
pub fn design_space(
    lambda: f64,
    thresholds: &[f64],
    n_range: (u32, u32),
    ell_grid: &SweepGrid,
) -> Result<DesignSpace> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::domain("lambda", lambda, "lambda > 0"));
    }
    for &t in thresholds {
        check_threshold(t)?;
    }
    let (n_lo, n_hi) = n_range;
    if n_lo < 1 || n_hi < n_lo {
        return Err(Error::domain("n", n_lo as f64, "1 <= n_min <= n_max"));
    }
    if let Some(&bad) = ell_grid.values().iter().find(|&&l| !(l > 0.0)) {
        return Err(Error::domain("ell", bad, "ell > 0"));
    }
    let meta = || {
        [
            ("sweep", json!("design_space")),
            ("lambda", json!(lambda)),
            ("thresholds", json!(thresholds)),
            ("n_range", json!([n_lo, n_hi])),
            (
                "grid",
                json!({"name": ell_grid.name(), "values": ell_grid.len()}),
            ),
        ]
    };

    let mut boundary = Table::new(vec![
        "threshold".into(),
        "n".into(),
        "ell_max".into(),
        "L_max".into(),
    ])
    .with_meta(meta());
    for &t in thresholds {
        for n in n_lo..=n_hi {
            let l = ell_max(n, lambda, t)?;
            boundary.push(vec![t, n as f64, l, n as f64 * l])?;
        }
    }

    let mut columns = vec!["n".to_string(), "ell".into(), "p_eff".into()];
    columns.extend(thresholds.iter().map(|t| format!("feasible_{t}")));
    let mut grid = Table::new(columns).with_meta(meta());
    for n in n_lo..=n_hi {
        for &ell in ell_grid.values() {
            let p_eff = p_eff_distance(n, n as f64 * ell, lambda)?.value();
            let mut row = vec![n as f64, ell, p_eff];
            row.extend(
                thresholds
                    .iter()
                    .map(|&t| if p_eff <= t { 1.0 } else { 0.0 }),
            );
            grid.push(row)?;
        }
    }
    Ok(DesignSpace { boundary, grid })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_values() {
        let l1 = ell_max(1, 0.046, 0.407).unwrap();
        assert!((l1 - 3.7867).abs() < 1e-3);
        assert!(design_point(1, 1.0, 0.046, 1.0).is_err());
    }
}
