use rayon::prelude::*;
use serde_json::json;

use super::{SweepGrid, Table};
use crate::entmetrics::{
    find_threshold, golden_section_min, pair_expressions, tangle_report, Minimum, Threshold,
    DEFAULT_SEARCH_TOL, VANISH_TOL,
};
use crate::noise::DepolarizingParam;
use crate::protocols::{protocol1, protocol2_effective, protocol3, OutcomePolicy, Protocol3Mode};
use crate::qcore::{DensityMatrix, QubitLabel};
use crate::wfamily::w_mod;
use crate::Result;

/// Which protocol a tangle sweep follows.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepProtocol {
    /// Uniform noise `p` on all three qubits.
    One,
    /// Noise `p` on qubits 1, 2 and `p_eff` on the routed qubit (kept as
    /// label 3).
    Two,
    Three(Protocol3Mode),
}

#[derive(Clone, Debug)]
pub struct TangleSweep {
    /// Columns `p` (and `p_eff` for Protocol 2), the three pairwise tangles
    /// named after the result's labels, and `tau_av`.
    pub table: Table,
    /// First vanishing point of every metric that vanishes on the grid.
    pub thresholds: Vec<Threshold>,
    /// Interior, strictly positive minima of the tangle columns.
    pub minima: Vec<Minimum>,
    /// Protocol 2 only: see [`p2_zero_contour`].
    pub contour: Option<Table>,
}

fn dp(p: f64) -> DepolarizingParam {
    DepolarizingParam::new(p).expect("grid values are checked to lie in [0, 1]")
}

fn state_1d(protocol: SweepProtocol, p: f64) -> Result<DensityMatrix> {
    Ok(match protocol {
        SweepProtocol::One | SweepProtocol::Two => protocol1([dp(p); 3], &w_mod())?.final_state,
        SweepProtocol::Three(mode) => protocol3(dp(p), mode, &OutcomePolicy::Average)?.final_state,
    })
}

fn state_2d(p: f64, p_eff: f64) -> Result<DensityMatrix> {
    let routed = QubitLabel::new(3)?;
    Ok(protocol2_effective(dp(p), dp(p_eff), routed)?.final_state)
}

/// Signed metric for bisection: the concurrence expression of one pair, or
/// for `tau_av` the largest of the three.
fn signed(rho: &DensityMatrix, metric: usize) -> f64 {
    let e = pair_expressions(rho).expect("three-qubit state");
    if metric < 3 {
        e[metric]
    } else {
        e[0].max(e[1]).max(e[2])
    }
}

fn metric_names(rho: &DensityMatrix) -> [String; 4] {
    let l = rho.labels();
    [
        format!("tau_{}{}", l[0], l[1]),
        format!("tau_{}{}", l[0], l[2]),
        format!("tau_{}{}", l[1], l[2]),
        "tau_av".to_string(),
    ]
}

fn tangle_row(rho: &DensityMatrix) -> Result<[f64; 4]> {
    let t = tangle_report(rho)?;
    Ok([t.tau_12, t.tau_13, t.tau_23, t.tau_av])
}

/// Locates the first grid cell where `f` stops exceeding [`VANISH_TOL`] and
/// bisects inside it.
fn first_threshold<F: Fn(f64) -> f64>(
    f: F,
    name: &str,
    grid: &[f64],
    values: &[f64],
) -> Option<Threshold> {
    if values.first().is_some_and(|&v| v <= VANISH_TOL) {
        return None;
    }
    let i = values.iter().position(|&v| v <= VANISH_TOL)?;
    find_threshold(f, name, (grid[i - 1], grid[i]), DEFAULT_SEARCH_TOL).ok()
}

/// Tangle curves of one protocol over `grid`, with thresholds refined by
/// bisection and positive interior minima refined by golden-section search.
/// Protocol 2 also needs `p_eff_grid` and yields a two-dimensional table.
pub fn tangle_sweep(
    protocol: SweepProtocol,
    grid: &SweepGrid,
    p_eff_grid: Option<&SweepGrid>,
) -> Result<TangleSweep> {
    grid.check_bounds(0.0, 1.0)?;
    if protocol == SweepProtocol::Two {
        let p_eff_grid = p_eff_grid
            .ok_or_else(|| crate::Error::Table("Protocol 2 sweep needs a p_eff grid".into()))?;
        return sweep_two(grid, p_eff_grid);
    }
    let names = metric_names(&state_1d(protocol, 0.0)?);
    let ps = grid.values();
    let rows: Vec<([f64; 4], [f64; 4])> = ps
        .par_iter()
        .map(|&p| {
            let rho = state_1d(protocol, p)?;
            let s = [
                signed(&rho, 0),
                signed(&rho, 1),
                signed(&rho, 2),
                signed(&rho, 3),
            ];
            Ok((tangle_row(&rho)?, s))
        })
        .collect::<Result<_>>()?;

    let mut columns = vec![grid.name().to_string()];
    columns.extend(names.iter().cloned());
    let mut table = Table::new(columns).with_meta([
        ("sweep", json!("tangle")),
        ("protocol", json!(format!("{protocol:?}"))),
        ("grid", json!({"name": grid.name(), "values": grid.len()})),
    ]);
    for (&p, (t, _)) in ps.iter().zip(&rows) {
        let mut row = vec![p];
        row.extend(t);
        table.push(row)?;
    }

    let mut thresholds = Vec::new();
    let mut minima = Vec::new();
    for (k, name) in names.iter().enumerate() {
        let at = |p: f64| signed(&state_1d(protocol, p).expect("valid grid point"), k);
        let signed_col: Vec<f64> = rows.iter().map(|(_, s)| s[k]).collect();
        if let Some(t) = first_threshold(at, name, ps, &signed_col) {
            thresholds.push(t);
        }
        let col: Vec<f64> = rows.iter().map(|(t, _)| t[k]).collect();
        let (i, &v) = col
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("non-empty grid");
        if v > VANISH_TOL && i > 0 && i + 1 < col.len() {
            let tau = |p: f64| {
                tangle_row(&state_1d(protocol, p).expect("valid grid point")).expect("three qubits")
                    [k]
            };
            minima.push(golden_section_min(
                tau,
                name,
                (ps[i - 1], ps[i + 1]),
                DEFAULT_SEARCH_TOL,
            ));
        }
    }
    Ok(TangleSweep {
        table,
        thresholds,
        minima,
        contour: None,
    })
}

fn sweep_two(p_grid: &SweepGrid, p_eff_grid: &SweepGrid) -> Result<TangleSweep> {
    p_eff_grid.check_bounds(0.0, 1.0)?;
    let names = metric_names(&state_2d(0.0, 0.0)?);
    let points: Vec<(f64, f64)> = p_grid
        .values()
        .iter()
        .flat_map(|&p| p_eff_grid.values().iter().map(move |&q| (p, q)))
        .collect();
    let rows: Vec<Vec<f64>> = points
        .par_iter()
        .map(|&(p, q)| {
            let mut row = vec![p, q];
            row.extend(tangle_row(&state_2d(p, q)?)?);
            Ok(row)
        })
        .collect::<Result<_>>()?;
    let mut columns = vec![p_grid.name().to_string(), p_eff_grid.name().to_string()];
    columns.extend(names.iter().cloned());
    let mut table = Table::new(columns).with_meta([
        ("sweep", json!("tangle")),
        ("protocol", json!("Two")),
        (
            "grid",
            json!({"name": p_grid.name(), "values": p_grid.len()}),
        ),
        (
            "grid_p_eff",
            json!({"name": p_eff_grid.name(), "values": p_eff_grid.len()}),
        ),
    ]);
    for row in rows {
        table.push(row)?;
    }

    // τ₁₂ does not involve the routed qubit, so its threshold in p is taken
    // at the first p_eff value.
    let q0 = p_eff_grid.values().first().copied().unwrap_or(0.0);
    let ps = p_grid.values();
    let signed12: Vec<f64> = ps
        .iter()
        .map(|&p| Ok(signed(&state_2d(p, q0)?, 0)))
        .collect::<Result<_>>()?;
    let thresholds = first_threshold(
        |p| signed(&state_2d(p, q0).expect("valid"), 0),
        &names[0],
        ps,
        &signed12,
    )
    .into_iter()
    .collect();
    Ok(TangleSweep {
        table,
        thresholds,
        minima: Vec::new(),
        contour: Some(p2_zero_contour(p_grid)?),
    })
}

/// Boundary in `p_eff` of the Protocol-2 tangles, per `p`: columns `p`,
/// `p_eff_tau13`, `p_eff_tau23` (smallest `p_eff` at which that tangle is
/// zero; 0 if it already is at `p_eff = 0`) and `p_eff_all_positive`, the
/// edge of the region where all three tangles are nonzero (0 once `τ₁₂`
/// has vanished).
pub fn p2_zero_contour(p_grid: &SweepGrid) -> Result<Table> {
    p_grid.check_bounds(0.0, 1.0)?;
    let boundary = |p: f64, k: usize| -> f64 {
        let f = |q: f64| signed(&state_2d(p, q).expect("valid"), k);
        if f(0.0) <= VANISH_TOL {
            return 0.0;
        }
        find_threshold(f, "", (0.0, 1.0), DEFAULT_SEARCH_TOL)
            .map(|t| t.p_crit)
            .unwrap_or(1.0)
    };
    let rows: Vec<Vec<f64>> = p_grid
        .values()
        .par_iter()
        .map(|&p| {
            let b13 = boundary(p, 1);
            let b23 = boundary(p, 2);
            let tau12_alive = signed(&state_2d(p, 0.0).expect("valid"), 0) > VANISH_TOL;
            let all = if tau12_alive { b13.min(b23) } else { 0.0 };
            vec![p, b13, b23, all]
        })
        .collect();
    let mut table = Table::new(
        ["p", "p_eff_tau13", "p_eff_tau23", "p_eff_all_positive"]
            .map(String::from)
            .to_vec(),
    )
    .with_meta([
        ("sweep", json!("p2_zero_contour")),
        (
            "grid",
            json!({"name": p_grid.name(), "values": p_grid.len()}),
        ),
        ("tolerance", json!(DEFAULT_SEARCH_TOL)),
    ]);
    for row in rows {
        table.push(row)?;
    }
    Ok(table)
}

/// Metric selector for [`protocol_threshold`], by register position.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TangleMetric {
    /// Positions (0, 1).
    First,
    /// Positions (0, 2).
    Second,
    /// Positions (1, 2).
    Third,
    Average,
}

impl TangleMetric {
    fn index(self) -> usize {
        match self {
            TangleMetric::First => 0,
            TangleMetric::Second => 1,
            TangleMetric::Third => 2,
            TangleMetric::Average => 3,
        }
    }
}

/// Which parameter a threshold search moves.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ThresholdAxis {
    /// Move `p`; Protocol 2 holds the routed qubit at `p_eff`.
    P { p_eff: f64 },
    /// Protocol 2 only: move `p_eff` at fixed `p`.
    PEff { p: f64 },
}

/// First vanishing point of one tangle: a scan over the default grid
/// followed by bisection to `tol` inside the first vanished cell.
pub fn protocol_threshold(
    protocol: SweepProtocol,
    metric: TangleMetric,
    axis: ThresholdAxis,
    tol: f64,
) -> Result<Threshold> {
    let k = metric.index();
    let eval = |x: f64| -> Result<DensityMatrix> {
        match (protocol, axis) {
            (SweepProtocol::Two, ThresholdAxis::P { p_eff }) => state_2d(x, p_eff),
            (SweepProtocol::Two, ThresholdAxis::PEff { p }) => state_2d(p, x),
            (_, ThresholdAxis::PEff { .. }) => Err(crate::Error::Table(
                "a p_eff axis only exists for Protocol 2".into(),
            )),
            (_, ThresholdAxis::P { .. }) => state_1d(protocol, x),
        }
    };
    let (fixed_name, fixed) = match axis {
        ThresholdAxis::P { p_eff } => ("p_eff", p_eff),
        ThresholdAxis::PEff { p } => ("p", p),
    };
    if !(0.0..=1.0).contains(&fixed) {
        return Err(crate::Error::domain(fixed_name, fixed, "0 <= value <= 1"));
    }
    let grid = SweepGrid::default_p();
    let ps = grid.values();
    let signed_col: Vec<f64> = ps
        .iter()
        .map(|&x| Ok(signed(&eval(x)?, k)))
        .collect::<Result<_>>()?;
    let name = metric_names(&eval(0.0)?)[k].clone();
    let (lo, hi) = match signed_col.iter().position(|&v| v <= VANISH_TOL) {
        Some(0) | None => (0.0, 1.0),
        Some(i) => (ps[i - 1], ps[i]),
    };
    find_threshold(
        |x| signed(&eval(x).expect("valid grid point"), k),
        &name,
        (lo, hi),
        tol,
    )
}
