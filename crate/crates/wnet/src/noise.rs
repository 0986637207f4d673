//! Depolarizing noise, channel composition and repeater-chain accounting.
//!
//! All parameters use the Kraus convention
//! `E_p(ρ) = (1 − 3p/4) ρ + p/4 (XρX + YρY + ZρZ) = (1 − p) ρ + p I/2`,
//! so `p = 1` is full depolarization and two channels compose as
//! `1 − p = (1 − p₁)(1 − p₂)`. [`DepolarizingParam::from_pauli_weight`]
//! converts from the `(1 − q) ρ + q/3 Σ PρP` form.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::qcore::{
    c, pauli_i, pauli_x, pauli_y, pauli_z, CMatrix, DensityMatrix, QuantumChannel, QubitLabel, C64,
};
use crate::{Error, Result};

/// Depolarizing strength `p ∈ [0, 1]` in the Kraus convention.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Default)]
pub struct DepolarizingParam(f64);

impl DepolarizingParam {
    pub const ZERO: DepolarizingParam = DepolarizingParam(0.0);
    pub const FULL: DepolarizingParam = DepolarizingParam(1.0);

    pub fn new(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::domain("p", p, "0 <= p <= 1"));
        }
        Ok(DepolarizingParam(p))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// From the Pauli-weight form `(1 − q) ρ + q/3 (XρX + YρY + ZρZ)`.
    /// Only `q ≤ 3/4` maps into the Kraus-convention range.
    pub fn from_pauli_weight(q: f64) -> Result<Self> {
        if !(0.0..=0.75).contains(&q) {
            return Err(Error::domain("q", q, "0 <= q <= 3/4"));
        }
        DepolarizingParam::new((4.0 * q / 3.0).min(1.0))
    }

    /// Total Pauli-error weight `q = 3p/4` of the same channel.
    pub fn pauli_weight(self) -> f64 {
        0.75 * self.0
    }
}

impl TryFrom<f64> for DepolarizingParam {
    type Error = Error;

    fn try_from(p: f64) -> Result<Self> {
        DepolarizingParam::new(p)
    }
}

/// `{√(1−3p/4) I, √(p/4) X, √(p/4) Y, √(p/4) Z}`.
pub fn depolarizing_kraus(p: DepolarizingParam) -> QuantumChannel {
    let p = p.value();
    let weights = [
        (1.0 - 0.75 * p).sqrt(),
        (p / 4.0).sqrt(),
        (p / 4.0).sqrt(),
        (p / 4.0).sqrt(),
    ];
    let kraus = [pauli_i(), pauli_x(), pauli_y(), pauli_z()]
        .iter()
        .zip(weights)
        .map(|(u, w)| u.matrix() * c(w))
        .collect();
    QuantumChannel::new(kraus).expect("depolarizing Kraus set is complete")
}

/// Depolarizes a single qubit.
pub fn depolarize(
    rho: &DensityMatrix,
    target: QubitLabel,
    p: DepolarizingParam,
) -> Result<DensityMatrix> {
    if p.value() == 0.0 {
        rho.register().position(target)?;
        return Ok(rho.clone());
    }
    rho.apply_channel(&depolarizing_kraus(p), &[target])
}

/// Applies an independent depolarizing channel to every qubit, `ps[i]` on
/// register position `i`.
pub fn depolarize_all(rho: &DensityMatrix, ps: &[DepolarizingParam]) -> Result<DensityMatrix> {
    if ps.len() != rho.num_qubits() {
        return Err(Error::DimensionMismatch {
            expected: rho.num_qubits(),
            got: ps.len(),
        });
    }
    let labels = rho.labels().to_vec();
    labels
        .iter()
        .zip(ps)
        .try_fold(rho.clone(), |acc, (&l, &p)| depolarize(&acc, l, p))
}

/// Single parameter equivalent to applying all `ps` in sequence:
/// `1 − p_eff = Π (1 − pᵢ)`.
pub fn compose_depolarizing(ps: &[DepolarizingParam]) -> DepolarizingParam {
    // a ∘ b = a + b − ab, folded so that a single element is returned as is.
    let p = ps
        .iter()
        .map(|p| p.value())
        .reduce(|a, b| a + b - a * b)
        .unwrap_or(0.0);
    DepolarizingParam(p.clamp(0.0, 1.0))
}

/// Noise-event counts for an `n`-hop chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EventCount {
    pub link: u32,
    pub memory: u32,
    pub bsm: u32,
    pub total: u32,
}

/// `(n, 2n − 1, n, 4n − 1)`: one link and one BSM per hop, one storage event
/// at the central node and two per repeater.
pub fn event_count(hops: u32) -> Result<EventCount> {
    if hops < 1 {
        return Err(Error::domain("n", hops as f64, "n >= 1"));
    }
    let (link, memory, bsm) = (hops, 2 * hops - 1, hops);
    Ok(EventCount {
        link,
        memory,
        bsm,
        total: link + memory + bsm,
    })
}

/// `1 − (1 − p)^{4n−1}`: every event of an `n`-hop chain at strength `p`.
pub fn p_eff_hops(p: DepolarizingParam, hops: u32) -> Result<DepolarizingParam> {
    let events = event_count(hops)?;
    Ok(compose_depolarizing(&vec![p; events.total as usize]))
}

/// Exponential link model `p = 1 − e^{−λℓ}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinkModel {
    lambda: f64,
    length: f64,
}

impl LinkModel {
    /// `lambda` in km⁻¹, `length` in km.
    pub fn new(lambda: f64, length: f64) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::domain("lambda", lambda, "lambda > 0"));
        }
        if !(length >= 0.0) || !length.is_finite() {
            return Err(Error::domain("length", length, "length >= 0"));
        }
        Ok(LinkModel { lambda, length })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn length(&self) -> f64 {
        self.length
    }
}

pub fn link_noise(model: LinkModel) -> DepolarizingParam {
    DepolarizingParam(-(-model.lambda * model.length).exp_m1())
}

/// `1 − e^{−(4n−1) λ L / n}` for total distance `L` split into `n` equal
/// links.
pub fn p_eff_distance(hops: u32, total_length: f64, lambda: f64) -> Result<DepolarizingParam> {
    let events = event_count(hops)?;
    let model = LinkModel::new(lambda, total_length)?;
    let exponent = events.total as f64 * model.lambda * model.length / hops as f64;
    Ok(DepolarizingParam(-(-exponent).exp_m1()))
}

/// Success rate `η^N` of direct transmission to `N` end nodes.
pub fn rate_direct(eta: f64, nodes: u32) -> Result<f64> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::domain("eta", eta, "0 <= eta <= 1"));
    }
    Ok(eta.powi(nodes as i32))
}

/// Noise budget of an `n`-hop repeater chain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChainSpec {
    hops: u32,
    pub p_link: DepolarizingParam,
    pub p_mem: DepolarizingParam,
    pub p_bsm: DepolarizingParam,
}

impl ChainSpec {
    pub fn new(
        hops: u32,
        p_link: DepolarizingParam,
        p_mem: DepolarizingParam,
        p_bsm: DepolarizingParam,
    ) -> Result<Self> {
        event_count(hops)?;
        Ok(ChainSpec {
            hops,
            p_link,
            p_mem,
            p_bsm,
        })
    }

    /// Same strength for links, memories and BSMs.
    pub fn uniform(hops: u32, p: DepolarizingParam) -> Result<Self> {
        ChainSpec::new(hops, p, p, p)
    }

    pub fn hops(&self) -> u32 {
        self.hops
    }

    /// Composition of every event that lands on the routed qubit:
    /// `1 − (1−p_link)^n (1−p_mem)^{2n−1} (1−p_bsm)^n`.
    pub fn effective(&self) -> DepolarizingParam {
        let e = event_count(self.hops).expect("validated at construction");
        let mut events = Vec::with_capacity(e.total as usize);
        events.extend(std::iter::repeat_n(self.p_link, e.link as usize));
        events.extend(std::iter::repeat_n(self.p_mem, e.memory as usize));
        events.extend(std::iter::repeat_n(self.p_bsm, e.bsm as usize));
        compose_depolarizing(&events)
    }
}

/// Random single-qubit CPTP map with `rank` Kraus operators, drawn from a
/// Gaussian isometry (Stinespring dilation).
pub fn random_channel<R: Rng + ?Sized>(rng: &mut R, rank: usize) -> QuantumChannel {
    let rank = rank.max(1);
    let rows = 2 * rank;
    let g = DMatrix::<C64>::from_fn(rows, 2, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let q = g.qr().q();
    let kraus: Vec<CMatrix> = (0..rank).map(|i| q.rows(2 * i, 2).into_owned()).collect();
    QuantumChannel::new(kraus).expect("isometry blocks form a complete Kraus set")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{labels, PureState};
    use rand::SeedableRng;

    fn dp(p: f64) -> DepolarizingParam {
        DepolarizingParam::new(p).unwrap()
    }

    #[test]
    fn domain_checks() {
        assert!(DepolarizingParam::new(1.5).is_err());
        assert!(DepolarizingParam::new(-0.1).is_err());
        assert!(DepolarizingParam::new(f64::NAN).is_err());
        assert!(p_eff_hops(dp(0.1), 0).is_err());
        assert!(event_count(0).is_err());
        assert!(LinkModel::new(0.0, 1.0).is_err());
        assert!(LinkModel::new(0.1, -1.0).is_err());
        assert!(rate_direct(1.1, 2).is_err());
    }

    #[test]
    fn full_depolarization_of_zero() {
        // ρ/4 + (2I − ρ)/4 = I/2
        let rho = PureState::basis(&[1], "0").unwrap().to_density();
        let out = depolarize(&rho, labels([1])[0], DepolarizingParam::FULL).unwrap();
        let mixed = DensityMatrix::maximally_mixed(&[1]).unwrap();
        assert!(out.max_deviation(&mixed).unwrap() < 1e-15);
    }

    #[test]
    fn zero_noise_is_identity() {
        let k = depolarizing_kraus(DepolarizingParam::ZERO);
        assert_eq!(k.kraus().len(), 4);
        assert!(k.kraus()[1].iter().all(|z| z.norm() == 0.0));
        let rho = PureState::from_real_kets(&[1, 2], &[("01", 0.6), ("10", 0.8)])
            .unwrap()
            .to_density();
        let out = depolarize_all(&rho, &[DepolarizingParam::ZERO; 2]).unwrap();
        assert_eq!(out, rho);
        assert!(depolarize_all(&rho, &[DepolarizingParam::ZERO; 3]).is_err());
    }

    #[test]
    fn composition_values() {
        assert_eq!(compose_depolarizing(&[dp(0.3)]), dp(0.3));
        let seven = compose_depolarizing(&[dp(0.1); 7]).value();
        assert!((seven - (1.0 - 0.9f64.powi(7))).abs() < 1e-15);
        assert!((seven - 0.5217031).abs() < 1e-7);
        assert_eq!(
            compose_depolarizing(&[dp(0.2), DepolarizingParam::FULL]).value(),
            1.0
        );
        assert_eq!(p_eff_hops(dp(0.1), 2).unwrap().value(), seven);
        assert_eq!(p_eff_hops(DepolarizingParam::ZERO, 9).unwrap().value(), 0.0);
        let one_hop = p_eff_hops(dp(0.2), 1).unwrap().value();
        assert!((one_hop - (1.0 - 0.8f64.powi(3))).abs() < 1e-15);
    }

    #[test]
    fn event_counts() {
        let e1 = event_count(1).unwrap();
        assert_eq!((e1.link, e1.memory, e1.bsm, e1.total), (1, 1, 1, 3));
        let e3 = event_count(3).unwrap();
        assert_eq!((e3.link, e3.memory, e3.bsm, e3.total), (3, 5, 3, 11));
        assert_eq!(event_count(10).unwrap().total, 39);
    }

    #[test]
    fn link_and_distance_models() {
        assert_eq!(link_noise(LinkModel::new(0.046, 0.0).unwrap()).value(), 0.0);
        let one_km = link_noise(LinkModel::new(0.046, 1.0).unwrap()).value();
        assert!((one_km - (1.0 - (-0.046f64).exp())).abs() < 1e-15);
        assert!((one_km - 0.0450).abs() < 5e-5);
        assert_eq!(p_eff_distance(3, 0.0, 0.046).unwrap().value(), 0.0);
        assert!((p_eff_distance(3, 3.0, 0.046).unwrap().value() - 0.397).abs() < 5e-4);
    }

    #[test]
    fn direct_rate() {
        assert_eq!(rate_direct(1.0, 5).unwrap(), 1.0);
        assert_eq!(rate_direct(0.5, 3).unwrap(), 0.125);
        assert!((rate_direct(0.9, 3).unwrap() - 0.729).abs() < 1e-15);
    }

    #[test]
    fn pauli_weight_conversion() {
        let p = DepolarizingParam::from_pauli_weight(0.75).unwrap();
        assert_eq!(p.value(), 1.0);
        assert!((dp(0.4).pauli_weight() - 0.3).abs() < 1e-15);
        assert!(DepolarizingParam::from_pauli_weight(0.8).is_err());
    }

    #[test]
    fn chain_effective_matches_hops_formula() {
        let chain = ChainSpec::uniform(4, dp(0.03)).unwrap();
        let want = p_eff_hops(dp(0.03), 4).unwrap().value();
        assert!((chain.effective().value() - want).abs() < 1e-15);
        assert!(ChainSpec::uniform(0, dp(0.1)).is_err());
    }

    #[test]
    fn random_channels_are_complete() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for rank in 1..=4 {
            let ch = random_channel(&mut rng, rank);
            assert_eq!(ch.kraus().len(), rank);
        }
    }
}
