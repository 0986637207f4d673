use rayon::prelude::*;
use serde_json::json;

use super::{fidelity_closed_form, SweepGrid, Table};
use crate::wfamily::{w_m, w_m_limit, w_mod, WmParams};
use crate::Result;

pub const DEFAULT_M_GRID: [f64; 10] = [1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0, 150.0, 200.0, 500.0];

/// Uniform-in-`p` distance to the `m → ∞` curve below which `W_m` counts as
/// saturated.
pub const SATURATION_TOL: f64 = 1e-3;

#[derive(Clone, Debug)]
pub struct MSweep {
    /// Columns `m, p, F, dF_m1, gap_limit`: the fidelity of `W_m` under
    /// uniform noise, its increment over `m = 1` and `|F − F_limit|`.
    pub table: Table,
    /// Columns `m, max_gap`: `max_p |F(p, m) − F_limit(p)|`.
    pub max_gap: Table,
    /// Smallest grid `m` with `max_gap < SATURATION_TOL`.
    pub m_star: Option<f64>,
}

/// Fidelity of `W_m` under uniform depolarizing noise for every `(m, p)`,
/// compared against `m = 1` and against the limit state `|0⟩|Ψ+⟩`.
pub fn m_sweep(m_grid: &SweepGrid, p_grid: &SweepGrid) -> Result<MSweep> {
    m_grid.check_bounds(0.0, f64::INFINITY)?;
    p_grid.check_bounds(0.0, 1.0)?;
    let base = w_mod();
    let limit = w_m_limit();
    let per_p: Vec<(f64, f64)> = p_grid
        .values()
        .iter()
        .map(|&p| {
            Ok((
                fidelity_closed_form(&base, p)?,
                fidelity_closed_form(&limit, p)?,
            ))
        })
        .collect::<Result<_>>()?;

    let blocks: Vec<Vec<Vec<f64>>> = m_grid
        .values()
        .par_iter()
        .map(|&m| {
            let psi = w_m(WmParams::real(m)?);
            p_grid
                .values()
                .iter()
                .zip(&per_p)
                .map(|(&p, &(f1, f_lim))| {
                    let f = fidelity_closed_form(&psi, p)?;
                    Ok(vec![m, p, f, f - f1, (f - f_lim).abs()])
                })
                .collect()
        })
        .collect::<Result<_>>()?;

    let meta = [
        ("sweep", json!("m_sweep")),
        ("m_grid", json!(m_grid.values())),
        (
            "grid",
            json!({"name": p_grid.name(), "values": p_grid.len()}),
        ),
        ("saturation_tol", json!(SATURATION_TOL)),
    ];
    let mut table = Table::new(
        ["m", "p", "F", "dF_m1", "gap_limit"]
            .map(String::from)
            .to_vec(),
    )
    .with_meta(meta.clone());
    let mut max_gap = Table::new(vec!["m".into(), "max_gap".into()]).with_meta(meta);
    let mut m_star = None;
    for (block, &m) in blocks.into_iter().zip(m_grid.values()) {
        let gap = block.iter().map(|r| r[4]).fold(0.0, f64::max);
        max_gap.push(vec![m, gap])?;
        if m_star.is_none() && gap < SATURATION_TOL {
            m_star = Some(m);
        }
        for row in block {
            table.push(row)?;
        }
    }
    table.meta.insert("m_star".into(), json!(m_star));
    Ok(MSweep {
        table,
        max_gap,
        m_star,
    })
}
