use rayon::prelude::*;
use serde_json::json;

use super::{SweepGrid, Table};
use crate::qcore::PureState;
use crate::wfamily::{ghz, w_canonical, w_m, w_mod, WmParams};
use crate::Result;

/// States compared under uniform depolarizing noise.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StateSpec {
    WMod,
    W,
    Ghz,
    Wm(f64),
}

impl StateSpec {
    pub fn name(&self) -> String {
        match self {
            StateSpec::WMod => "Wmod".into(),
            StateSpec::W => "W".into(),
            StateSpec::Ghz => "GHZ".into(),
            StateSpec::Wm(m) => format!("Wm{m}"),
        }
    }

    pub fn state(&self) -> Result<PureState> {
        Ok(match self {
            StateSpec::WMod => w_mod(),
            StateSpec::W => w_canonical(),
            StateSpec::Ghz => ghz(),
            StateSpec::Wm(m) => w_m(WmParams::real(*m)?),
        })
    }
}

/// Difference columns `F_a − F_b` reported when both states are swept.
pub const COMPARISON_PAIRS: [(StateSpec, StateSpec); 3] = [
    (StateSpec::WMod, StateSpec::Ghz),
    (StateSpec::W, StateSpec::Ghz),
    (StateSpec::WMod, StateSpec::W),
];

/// Fidelity of `psi` after independent depolarizing noise of strength `p` on
/// every qubit, from the expansion over noisy subsets `S`:
/// `F = Σ_S (1−p)^{n−|S|} p^{|S|} 2^{−|S|} Tr ρ_{S̄}²`.
pub fn fidelity_closed_form(psi: &PureState, p: f64) -> Result<f64> {
    let rho = psi.to_density();
    let n = psi.num_qubits();
    let labels = psi.labels();
    let mut total = 0.0;
    for mask in 0u32..(1 << n) {
        let noisy = mask.count_ones() as i32;
        let keep: Vec<_> = (0..n)
            .filter(|i| mask & (1 << i) == 0)
            .map(|i| labels[i])
            .collect();
        let purity = rho.partial_trace(&keep)?.purity();
        total += (1.0 - p).powi(n as i32 - noisy) * p.powi(noisy) * 0.5f64.powi(noisy) * purity;
    }
    Ok(total)
}

/// One row per grid value: `p`, `F_<state>` for every state, then for each
/// pair of [`COMPARISON_PAIRS`] present, `dF_<a>_<b> = F_a − F_b` and
/// `pct_<a>_<b> = 100 (F_a − F_b) / F_b`.
pub fn fidelity_sweep(states: &[StateSpec], grid: &SweepGrid) -> Result<Table> {
    grid.check_bounds(0.0, 1.0)?;
    let pure: Vec<PureState> = states.iter().map(|s| s.state()).collect::<Result<_>>()?;
    let idx = |s: StateSpec| states.iter().position(|t| *t == s);
    let pairs: Vec<(usize, usize)> = COMPARISON_PAIRS
        .iter()
        .filter_map(|&(a, b)| Some((idx(a)?, idx(b)?)))
        .collect();

    let mut columns = vec![grid.name().to_string()];
    columns.extend(states.iter().map(|s| format!("F_{}", s.name())));
    for &(a, b) in &pairs {
        let (na, nb) = (states[a].name(), states[b].name());
        columns.push(format!("dF_{na}_{nb}"));
        columns.push(format!("pct_{na}_{nb}"));
    }
    let names: Vec<String> = states.iter().map(|s| s.name()).collect();
    let mut table = Table::new(columns).with_meta([
        ("sweep", json!("fidelity")),
        ("grid", json!({"name": grid.name(), "values": grid.len()})),
        ("states", json!(names)),
        ("noise", json!("uniform single-qubit depolarizing")),
    ]);

    let rows: Vec<Vec<f64>> = grid
        .values()
        .par_iter()
        .map(|&p| {
            let f: Vec<f64> = pure
                .iter()
                .map(|psi| fidelity_closed_form(psi, p))
                .collect::<Result<_>>()?;
            let mut row = vec![p];
            row.extend(&f);
            for &(a, b) in &pairs {
                row.push(f[a] - f[b]);
                row.push(100.0 * (f[a] - f[b]) / f[b]);
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;
    for row in rows {
        table.push(row)?;
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_polynomial() {
        for p in [0.0, 0.3, 1.0] {
            let f = fidelity_closed_form(&w_mod(), p).unwrap();
            let poly = 1.0 - 17.0 / 8.0 * p + 27.0 / 16.0 * p * p - 7.0 / 16.0 * p.powi(3);
            assert!((f - poly).abs() < 1e-14);
        }
    }

    #[test]
    fn sweep_columns() {
        let g = SweepGrid::new("p", vec![0.0, 0.5]).unwrap();
        let t = fidelity_sweep(&[StateSpec::WMod, StateSpec::W, StateSpec::Ghz], &g).unwrap();
        assert_eq!(
            t.columns,
            [
                "p",
                "F_Wmod",
                "F_W",
                "F_GHZ",
                "dF_Wmod_GHZ",
                "pct_Wmod_GHZ",
                "dF_W_GHZ",
                "pct_W_GHZ",
                "dF_Wmod_W",
                "pct_Wmod_W"
            ]
        );
        assert!(t.rows[0][4].abs() < 1e-15);
        assert!((t.rows[1][1] - 0.3046875).abs() < 1e-12);
    }
}
