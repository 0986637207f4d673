//! Subcommand parameter tables and their implementations.

use anyhow::{anyhow, bail};
use rand::SeedableRng;
use serde_json::json;
use wnet::analysis::{
    design_point, design_space, fidelity_sweep, m_sweep, protocol_threshold, tangle_sweep,
    StateSpec, SweepGrid, SweepProtocol, Table, TangleMetric, ThresholdAxis,
};
use wnet::noise::{depolarizing_kraus, random_channel, ChainSpec, DepolarizingParam};
use wnet::protocols::{
    protocol1, protocol2, protocol3, superdense_wmod, teleport_wmod, verify_noise_commutation,
    OutcomePolicy, Protocol2Mode, Protocol3Mode, ProtocolResult,
};
use wnet::qcore::{CVector, PureState, Register, C64};

use crate::params::{Kind, ParamSpec, Resolved};

/// Result of one subcommand: the table to write and a one-line summary.
pub struct Outcome {
    pub table: Table,
    pub summary: String,
    /// Set when the run detected a numerical invariant violation.
    pub violation: Option<String>,
}

impl Outcome {
    fn ok(table: Table, summary: String) -> Self {
        Outcome {
            table,
            summary,
            violation: None,
        }
    }
}

pub struct CommandSpec {
    pub name: &'static str,
    pub about: &'static str,
    pub params: &'static [ParamSpec],
    pub run: fn(&Resolved) -> anyhow::Result<Outcome>,
}

const fn spec(
    name: &'static str,
    kind: Kind,
    default: &'static str,
    help: &'static str,
) -> ParamSpec {
    ParamSpec {
        name,
        kind,
        default,
        help,
    }
}

/// Accepted by every subcommand.
pub const COMMON: &[ParamSpec] = &[
    spec(
        "out",
        Kind::Text,
        "",
        "output file (default: $WNET_OUT_DIR/<command>.<format>, else stdout)",
    ),
    spec(
        "format",
        Kind::Choice(&["csv", "json"]),
        "csv",
        "output format",
    ),
    spec(
        "seed",
        Kind::Int { min: 0 },
        "7",
        "RNG seed (random channels of `verify` only)",
    ),
];

const PROTOCOLS: Kind = Kind::Choice(&["1", "2", "3"]);
const P3_MODES: Kind = Kind::Choice(&["analytic", "explicit"]);

pub const COMMANDS: &[CommandSpec] = &[
    CommandSpec {
        name: "fidelity-sweep",
        about: "Fidelity of W-class and GHZ states under uniform depolarizing noise",
        params: &[
            spec("states", Kind::Text, "wmod,w,ghz", "comma-separated: wmod, w, ghz, wm"),
            spec("m", Kind::NonNegative, "5", "parameter of the `wm` state"),
            spec("p-min", Kind::Prob, "0", "first grid value"),
            spec("p-max", Kind::Prob, "1", "last grid value"),
            spec("p-step", Kind::Positive, "0.005", "grid step"),
        ],
        run: run_fidelity_sweep,
    },
    CommandSpec {
        name: "tangle-sweep",
        about: "Pairwise and average tangles of a protocol's output over a noise grid",
        params: &[
            spec("protocol", PROTOCOLS, "1", "protocol number"),
            spec("mode", P3_MODES, "analytic", "protocol 3 state model"),
            spec("p-min", Kind::Prob, "0", "first grid value"),
            spec("p-max", Kind::Prob, "1", "last grid value"),
            spec("p-step", Kind::Positive, "0.005", "grid step"),
            spec("p-eff-step", Kind::Positive, "0.05", "protocol 2: step of the p_eff grid over [0, 1]"),
            spec("table", Kind::Choice(&["curves", "contour"]), "curves", "protocol 2: tangle grid or zero contour"),
        ],
        run: run_tangle_sweep,
    },
    CommandSpec {
        name: "protocol-run",
        about: "Run one distribution protocol and report fidelity and tangles",
        params: &[
            spec("protocol", PROTOCOLS, "1", "protocol number"),
            spec("p", Kind::Prob, "0", "noise strength (protocol 3: p_eff)"),
            spec("state", Kind::Choice(&["wmod", "w", "ghz"]), "wmod", "protocol 1: transmitted state"),
            spec("hops", Kind::Int { min: 1 }, "1", "protocol 2: number of hops"),
            spec("p-link", Kind::Prob, "", "protocol 2: link noise (default: p)"),
            spec("p-mem", Kind::Prob, "", "protocol 2: memory noise (default: p)"),
            spec("p-bsm", Kind::Prob, "", "protocol 2: Bell-measurement noise (default: p)"),
            spec(
                "mode",
                Kind::Choice(&["explicit", "effective", "analytic"]),
                "",
                "protocol 2: explicit|effective (default explicit); protocol 3: analytic|explicit (default analytic)",
            ),
            spec("branch", Kind::Text, "", "post-select this outcome label instead of averaging"),
        ],
        run: run_protocol,
    },
    CommandSpec {
        name: "threshold",
        about: "Noise value at which a tangle first vanishes",
        params: &[
            spec("protocol", PROTOCOLS, "1", "protocol number"),
            spec(
                "metric",
                Kind::Choice(&["tau12", "tau13", "tau23", "tau16", "tau26", "tau_av"]),
                "tau12",
                "tangle, by end-node pair",
            ),
            spec("mode", P3_MODES, "analytic", "protocol 3 state model"),
            spec("axis", Kind::Choice(&["p", "p-eff"]), "p", "protocol 2: which parameter moves"),
            spec("p", Kind::Prob, "0", "protocol 2: fixed p when the axis is p-eff"),
            spec("p-eff", Kind::Prob, "0", "protocol 2: fixed p_eff when the axis is p"),
            spec("tol", Kind::Positive, "1e-4", "bisection tolerance"),
        ],
        run: run_threshold,
    },
    CommandSpec {
        name: "design-space",
        about: "Repeater design space: maximum hop length and reach per hop count",
        params: &[
            spec("lambda", Kind::Positive, "0.046", "fiber attenuation per km"),
            spec("threshold", Kind::Reals { min: 0.0 }, "0.407", "p_eff thresholds, comma-separated"),
            spec("n-min", Kind::Int { min: 1 }, "1", "smallest hop count"),
            spec("n-max", Kind::Int { min: 1 }, "20", "largest hop count"),
            spec("ell-step", Kind::Positive, "0.01", "hop-length grid step (km)"),
            spec("ell-max", Kind::Positive, "5", "largest hop length (km)"),
            spec("table", Kind::Choice(&["boundary", "grid"]), "boundary", "boundary per n, or the feasibility grid"),
            spec("points", Kind::Text, "", "evaluate only these n:ell pairs, e.g. 1:3.5,2:1.5"),
        ],
        run: run_design_space,
    },
    CommandSpec {
        name: "m-sweep",
        about: "Fidelity of W_m under uniform noise as m grows, and the saturation point",
        params: &[
            spec("m-grid", Kind::Reals { min: 0.0 }, "1,2,5,10,20,50,100,150,200,500", "values of m"),
            spec("p-step", Kind::Positive, "0.005", "noise grid step over [0, 1]"),
            spec("table", Kind::Choice(&["full", "gaps"]), "full", "every (m, p) point, or the max gap per m"),
        ],
        run: run_m_sweep,
    },
    CommandSpec {
        name: "teleport",
        about: "Teleport cos(theta/2)|0> + e^{i phi} sin(theta/2)|1> through W_mod",
        params: &[
            spec("theta", Kind::Real, "0", "polar angle (radians)"),
            spec("phi", Kind::Real, "0", "azimuthal angle (radians)"),
        ],
        run: run_teleport,
    },
    CommandSpec {
        name: "densecode",
        about: "Send two classical bits through one qubit of a W-class state",
        params: &[spec("bits", Kind::Choice(&["00", "01", "10", "11", "all"]), "all", "message")],
        run: run_densecode,
    },
    CommandSpec {
        name: "verify",
        about: "Check that local noise commutes with entanglement swapping",
        params: &[
            spec("p-list", Kind::Reals { min: 0.0 }, "0.1,0.3,0.7", "depolarizing strengths to test"),
            spec("random", Kind::Int { min: 0 }, "20", "number of random channels"),
            spec("trials", Kind::Int { min: 1 }, "5", "random input states per channel"),
            spec("tol", Kind::Positive, "1e-10", "largest acceptable deviation"),
        ],
        run: run_verify,
    },
];

fn dp(p: f64) -> anyhow::Result<DepolarizingParam> {
    Ok(DepolarizingParam::new(p)?)
}

fn need_real(r: &Resolved, key: &str) -> f64 {
    r.real(key)
        .unwrap_or_else(|| panic!("parameter {key} has a default"))
}

fn need_word<'a>(r: &'a Resolved, key: &str) -> &'a str {
    r.word(key)
        .unwrap_or_else(|| panic!("parameter {key} has a default"))
}

fn p_grid(r: &Resolved) -> anyhow::Result<SweepGrid> {
    let (lo, hi) = (need_real(r, "p-min"), need_real(r, "p-max"));
    if hi < lo {
        bail!(crate::params::InvalidInput(format!(
            "invalid value for p-max: {hi} (expected p-max >= p-min)"
        )));
    }
    Ok(SweepGrid::uniform("p", lo, hi, need_real(r, "p-step"))?)
}

fn run_fidelity_sweep(r: &Resolved) -> anyhow::Result<Outcome> {
    let m = need_real(r, "m");
    let states = need_word(r, "states")
        .split(',')
        .map(|s| match s.trim() {
            "wmod" => Ok(StateSpec::WMod),
            "w" => Ok(StateSpec::W),
            "ghz" => Ok(StateSpec::Ghz),
            "wm" => Ok(StateSpec::Wm(m)),
            other => Err(anyhow!(crate::params::InvalidInput(format!(
                "invalid value for states: {other:?} (expected wmod, w, ghz or wm)"
            )))),
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    let grid = p_grid(r)?;
    let table = fidelity_sweep(&states, &grid)?;
    let mut summary = format!("{} points", table.rows.len());
    if let (Some(i), Some(last)) = (
        table.column_index("dF_Wmod_GHZ"),
        table.rows.iter().max_by(|a, b| {
            let k = table.column_index("dF_Wmod_GHZ").unwrap();
            a[k].total_cmp(&b[k])
        }),
    ) {
        summary.push_str(&format!(
            ", largest F_Wmod - F_GHZ = {:.6} at p = {}",
            last[i], last[0]
        ));
    }
    Ok(Outcome::ok(table, summary))
}

fn sweep_protocol(r: &Resolved) -> SweepProtocol {
    match need_word(r, "protocol") {
        "1" => SweepProtocol::One,
        "2" => SweepProtocol::Two,
        _ => SweepProtocol::Three(if need_word(r, "mode") == "explicit" {
            Protocol3Mode::Explicit
        } else {
            Protocol3Mode::Analytic
        }),
    }
}

fn run_tangle_sweep(r: &Resolved) -> anyhow::Result<Outcome> {
    let protocol = sweep_protocol(r);
    let grid = p_grid(r)?;
    let q_grid = SweepGrid::uniform("p_eff", 0.0, 1.0, need_real(r, "p-eff-step"))?;
    let sweep = tangle_sweep(protocol, &grid, Some(&q_grid))?;
    let mut parts: Vec<String> = sweep
        .thresholds
        .iter()
        .map(|t| format!("{} vanishes at {:.4}", t.metric, t.p_crit))
        .collect();
    parts.extend(
        sweep
            .minima
            .iter()
            .map(|m| format!("{} min {:.6} at {:.4}", m.metric, m.value, m.p_min)),
    );
    if parts.is_empty() {
        parts.push("no threshold on the grid".into());
    }
    let table = match (need_word(r, "table"), sweep.contour) {
        ("contour", Some(c)) => c,
        ("contour", None) => bail!(crate::params::InvalidInput(
            "invalid value for table: contour is only available for protocol 2".into()
        )),
        _ => sweep.table,
    };
    Ok(Outcome::ok(table, parts.join("; ")))
}

fn policy(r: &Resolved) -> OutcomePolicy {
    match r.word("branch") {
        Some(label) if !label.is_empty() => OutcomePolicy::Postselect(label.to_string()),
        _ => OutcomePolicy::Average,
    }
}

fn result_table(res: &ProtocolResult) -> anyhow::Result<Table> {
    let l = res.final_state.labels();
    let cols = vec![
        "fidelity".to_string(),
        format!("tau_{}{}", l[0], l[1]),
        format!("tau_{}{}", l[0], l[2]),
        format!("tau_{}{}", l[1], l[2]),
        "tau_av".into(),
        "success_probability".into(),
    ];
    let labels: Vec<u32> = l.iter().map(|q| q.index()).collect();
    let trace: Vec<_> = res
        .outcome_trace
        .iter()
        .map(|s| json!({"stage": s.stage, "label": s.label, "probability": s.probability, "correction": s.correction}))
        .collect();
    let mut t =
        Table::new(cols).with_meta([("labels", json!(labels)), ("outcome_trace", json!(trace))]);
    t.push(vec![
        res.fidelity,
        res.tangles.tau_12,
        res.tangles.tau_13,
        res.tangles.tau_23,
        res.tangles.tau_av,
        res.success_probability,
    ])?;
    Ok(t)
}

fn run_protocol(r: &Resolved) -> anyhow::Result<Outcome> {
    let p = need_real(r, "p");
    let or_p = |key: &str| r.real(key).unwrap_or(p);
    let mode = r.word("mode");
    let which = need_word(r, "protocol");
    let bad_mode = |m: &str| {
        anyhow!(crate::params::InvalidInput(format!(
            "invalid value for mode: {m:?} does not apply to protocol {which}"
        )))
    };
    let res = match which {
        "1" => {
            if let Some(m) = mode {
                return Err(bad_mode(m));
            }
            let state = match need_word(r, "state") {
                "w" => StateSpec::W,
                "ghz" => StateSpec::Ghz,
                _ => StateSpec::WMod,
            }
            .state()?;
            protocol1([dp(p)?; 3], &state)?
        }
        "2" => {
            let mode = match mode {
                None | Some("explicit") => Protocol2Mode::Explicit,
                Some("effective") => Protocol2Mode::Effective,
                Some(m) => return Err(bad_mode(m)),
            };
            let hops = u32::try_from(r.int("hops").unwrap_or(1))?;
            let chain = ChainSpec::new(
                hops,
                dp(or_p("p-link"))?,
                dp(or_p("p-mem"))?,
                dp(or_p("p-bsm"))?,
            )?;
            protocol2(&chain, mode, &policy(r))?
        }
        _ => {
            let mode = match mode {
                None | Some("analytic") => Protocol3Mode::Analytic,
                Some("explicit") => Protocol3Mode::Explicit,
                Some(m) => return Err(bad_mode(m)),
            };
            protocol3(dp(p)?, mode, &policy(r))?
        }
    };
    let summary = format!(
        "protocol {which}: fidelity {:.12}, tau_av {:.6}, success probability {:.6}",
        res.fidelity, res.tangles.tau_av, res.success_probability
    );
    Ok(Outcome::ok(result_table(&res)?, summary))
}

fn run_threshold(r: &Resolved) -> anyhow::Result<Outcome> {
    let protocol = sweep_protocol(r);
    let metric = match need_word(r, "metric") {
        "tau12" => TangleMetric::First,
        "tau13" | "tau16" => TangleMetric::Second,
        "tau23" | "tau26" => TangleMetric::Third,
        _ => TangleMetric::Average,
    };
    let axis = match need_word(r, "axis") {
        "p-eff" => ThresholdAxis::PEff {
            p: need_real(r, "p"),
        },
        _ => ThresholdAxis::P {
            p_eff: need_real(r, "p-eff"),
        },
    };
    let t = protocol_threshold(protocol, metric, axis, need_real(r, "tol"))?;
    let mut table = Table::new(vec!["p_crit".into(), "tolerance".into()]).with_meta([
        ("metric", json!(t.metric)),
        ("bracket", json!([t.bracket.0, t.bracket.1])),
    ]);
    table.push(vec![t.p_crit, t.tolerance])?;
    let axis_name = if matches!(axis, ThresholdAxis::PEff { .. }) {
        "p_eff"
    } else {
        "p"
    };
    let summary = format!(
        "{} vanishes at {axis_name} = {:.4} (tolerance {:e})",
        t.metric, t.p_crit, t.tolerance
    );
    Ok(Outcome::ok(table, summary))
}

fn parse_points(text: &str) -> anyhow::Result<Vec<(u32, f64)>> {
    let bad = |part: &str| {
        anyhow!(crate::params::InvalidInput(format!(
            "invalid value for points: {part:?} (expected n:ell with n >= 1 and ell > 0)"
        )))
    };
    text.split(',')
        .map(|part| {
            let (n, ell) = part.trim().split_once(':').ok_or_else(|| bad(part))?;
            let n: u32 = n.trim().parse().map_err(|_| bad(part))?;
            let ell: f64 = ell.trim().parse().map_err(|_| bad(part))?;
            if n < 1 || ell <= 0.0 || !ell.is_finite() {
                return Err(bad(part));
            }
            Ok((n, ell))
        })
        .collect()
}

fn run_design_space(r: &Resolved) -> anyhow::Result<Outcome> {
    let lambda = need_real(r, "lambda");
    let thresholds = r.reals("threshold").unwrap_or(&[]).to_vec();
    let first = *thresholds.first().ok_or_else(|| {
        anyhow!(crate::params::InvalidInput(
            "invalid value for threshold: at least one value needed".into()
        ))
    })?;
    if let Some(points) = r.word("points").filter(|s| !s.is_empty()) {
        let mut table = Table::new(["n", "ell", "p_eff", "feasible"].map(String::from).to_vec())
            .with_meta([("lambda", json!(lambda)), ("threshold", json!(first))]);
        let mut parts = Vec::new();
        for (n, ell) in parse_points(points)? {
            let d = design_point(n, ell, lambda, first)?;
            table.push(vec![
                n as f64,
                ell,
                d.p_eff,
                if d.feasible { 1.0 } else { 0.0 },
            ])?;
            parts.push(format!("({n}, {ell}) -> {:.3}", d.p_eff));
        }
        return Ok(Outcome::ok(table, parts.join(", ")));
    }
    let (n_min, n_max) = (r.int("n-min").unwrap_or(1), r.int("n-max").unwrap_or(20));
    if n_max < n_min {
        bail!(crate::params::InvalidInput(format!(
            "invalid value for n-max: {n_max} (expected n-max >= n-min)"
        )));
    }
    let step = need_real(r, "ell-step");
    let ell = SweepGrid::uniform("ell", step, need_real(r, "ell-max"), step)?;
    let ds = design_space(lambda, &thresholds, (n_min as u32, n_max as u32), &ell)?;
    let b = &ds.boundary.rows;
    let summary = match (b.first(), b.iter().rfind(|row| row[0] == first)) {
        (Some(lo), Some(hi)) => format!(
            "threshold {first}: ell_max(n={}) = {:.4} km, ell_max(n={}) = {:.4} km, L_max(n={}) = {:.4} km",
            lo[1], lo[2], hi[1], hi[2], hi[1], hi[3]
        ),
        _ => "empty design space".into(),
    };
    let table = if need_word(r, "table") == "grid" {
        ds.grid
    } else {
        ds.boundary
    };
    Ok(Outcome::ok(table, summary))
}

fn run_m_sweep(r: &Resolved) -> anyhow::Result<Outcome> {
    let m_grid = SweepGrid::new("m", r.reals("m-grid").unwrap_or(&[]).to_vec())?;
    let p_grid = SweepGrid::uniform("p", 0.0, 1.0, need_real(r, "p-step"))?;
    let s = m_sweep(&m_grid, &p_grid)?;
    let summary = match s.m_star {
        Some(m) => format!(
            "saturation m* = {m} (max gap below {:e})",
            wnet::analysis::SATURATION_TOL
        ),
        None => "no grid value of m saturates".into(),
    };
    let table = if need_word(r, "table") == "gaps" {
        s.max_gap
    } else {
        s.table
    };
    Ok(Outcome::ok(table, summary))
}

fn run_teleport(r: &Resolved) -> anyhow::Result<Outcome> {
    let (theta, phi) = (need_real(r, "theta"), need_real(r, "phi"));
    let amps = CVector::from_vec(vec![
        C64::new((theta / 2.0).cos(), 0.0),
        C64::from_polar((theta / 2.0).sin(), phi),
    ]);
    let input = PureState::normalized(Register::from_indices(&[1])?, amps)?;
    let out = teleport_wmod(&input)?;
    let labels: Vec<&str> = out
        .branches
        .iter()
        .filter(|b| b.fidelity.is_some())
        .map(|b| b.label.as_str())
        .collect();
    let mut table = Table::new(
        ["branch", "probability", "fidelity"]
            .map(String::from)
            .to_vec(),
    )
    .with_meta([("branches", json!(labels))]);
    for (i, b) in out.branches.iter().enumerate() {
        if let Some(f) = b.fidelity {
            table.push(vec![i as f64, b.probability, f])?;
        }
    }
    let f = out.fidelity();
    let summary = format!(
        "worst-branch fidelity {f:.12} over {} branches",
        labels.len()
    );
    let violation = (f < 1.0 - 1e-10).then(|| format!("teleportation fidelity {f} below 1"));
    Ok(Outcome {
        table,
        summary,
        violation,
    })
}

fn run_densecode(r: &Resolved) -> anyhow::Result<Outcome> {
    let messages: Vec<u8> = match need_word(r, "bits") {
        "all" => vec![0, 1, 2, 3],
        bits => vec![u8::from_str_radix(bits, 2)?],
    };
    let mut table = Table::new(
        ["sent", "decoded", "probability"]
            .map(String::from)
            .to_vec(),
    )
    .with_meta([]);
    let mut correct = 0;
    for bits in &messages {
        let out = superdense_wmod(*bits)?;
        correct += usize::from(out.decoded == out.sent);
        table.push(vec![out.sent as f64, out.decoded as f64, out.probability])?;
    }
    let summary = format!("decoded {correct}/{} messages correctly", messages.len());
    let violation =
        (correct != messages.len()).then(|| "dense coding decoded a wrong message".to_string());
    Ok(Outcome {
        table,
        summary,
        violation,
    })
}

fn run_verify(r: &Resolved) -> anyhow::Result<Outcome> {
    let seed = r.int("seed").unwrap_or(7) as u64;
    let trials = r.int("trials").unwrap_or(5) as u32;
    let tol = need_real(r, "tol");
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut channels = Vec::new();
    for &p in r.reals("p-list").unwrap_or(&[]) {
        channels.push((format!("depolarizing({p})"), depolarizing_kraus(dp(p)?)));
    }
    for i in 0..r.int("random").unwrap_or(0) {
        let rank = 1 + (i as usize % 4);
        channels.push((
            format!("random(rank {rank})"),
            random_channel(&mut rng, rank),
        ));
    }
    let names: Vec<&str> = channels.iter().map(|(n, _)| n.as_str()).collect();
    let mut table = Table::new(
        ["channel", "kraus_rank", "deviation"]
            .map(String::from)
            .to_vec(),
    )
    .with_meta([
        ("channels", json!(names)),
        ("seed", json!(seed)),
        ("trials", json!(trials)),
    ]);
    let mut worst: f64 = 0.0;
    for (i, (_, ch)) in channels.iter().enumerate() {
        let dev = verify_noise_commutation(ch, trials, seed.wrapping_add(i as u64))?;
        worst = worst.max(dev);
        table.push(vec![i as f64, ch.kraus().len() as f64, dev])?;
    }
    let summary = format!(
        "{} channels, max deviation {worst:.3e} (tolerance {tol:e})",
        channels.len()
    );
    let violation =
        (worst >= tol).then(|| format!("noise/swap deviation {worst:e} exceeds {tol:e}"));
    Ok(Outcome {
        table,
        summary,
        violation,
    })
}
