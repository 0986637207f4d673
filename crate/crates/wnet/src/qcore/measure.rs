use super::kernel::spread;
use super::{
    c, CMatrix, CVector, DensityMatrix, PureState, QubitLabel, Register, C64, PROBABILITY_FLOOR,
    STATE_TOL,
};
use crate::{Error, Result};

/// Complete orthonormal basis of a `k`-qubit subsystem with labeled
/// outcomes. Vector amplitudes are ordered by `subsystem`.
#[derive(Clone, Debug)]
pub struct MeasurementBasis {
    subsystem: Vec<QubitLabel>,
    outcomes: Vec<(String, CVector)>,
}

impl MeasurementBasis {
    /// Checks that there are `2^k` normalized, pairwise orthogonal vectors
    /// (tolerance [`STATE_TOL`]) with distinct labels.
    pub fn new(subsystem: Vec<QubitLabel>, outcomes: Vec<(String, CVector)>) -> Result<Self> {
        let register = Register::new(subsystem.clone())?;
        let d = register.dim();
        if outcomes.len() != d {
            return Err(Error::NonOrthonormalBasis(format!(
                "{} vectors for a {d}-dimensional space",
                outcomes.len()
            )));
        }
        for (i, (label, v)) in outcomes.iter().enumerate() {
            if v.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: v.len(),
                });
            }
            if outcomes[..i].iter().any(|(l, _)| l == label) {
                return Err(Error::NonOrthonormalBasis(format!(
                    "duplicate label {label}"
                )));
            }
            if (v.norm() - 1.0).abs() > STATE_TOL {
                return Err(Error::NonOrthonormalBasis(format!(
                    "{label} has norm {}",
                    v.norm()
                )));
            }
            for (other, w) in &outcomes[..i] {
                let ip = w.dotc(v).norm();
                if ip > STATE_TOL {
                    return Err(Error::NonOrthonormalBasis(format!(
                        "⟨{other}|{label}⟩ = {ip:e}"
                    )));
                }
            }
        }
        Ok(MeasurementBasis {
            subsystem,
            outcomes,
        })
    }

    /// Extends the labeled `primary` vectors to a complete basis by
    /// Gram–Schmidt over computational basis vectors taken in ascending
    /// index order, skipping residuals with norm below 1e-10. Completion
    /// vectors are labeled `perp0`, `perp1`, ….
    pub fn completed(subsystem: Vec<QubitLabel>, primary: Vec<(String, CVector)>) -> Result<Self> {
        let d = 1usize << subsystem.len();
        let mut vectors: Vec<CVector> = primary.iter().map(|(_, v)| v.clone()).collect();
        let mut outcomes = primary;
        let mut extra = 0;
        for i in 0..d {
            if vectors.len() == d {
                break;
            }
            let mut r = CVector::zeros(d);
            r[i] = c(1.0);
            // Two passes keep the residual orthogonal to working precision.
            for _ in 0..2 {
                for v in &vectors {
                    let proj = v.dotc(&r);
                    r -= v * proj;
                }
            }
            let norm = r.norm();
            if norm < 1e-10 {
                continue;
            }
            let r = r.unscale(norm);
            vectors.push(r.clone());
            outcomes.push((format!("perp{extra}"), r));
            extra += 1;
        }
        MeasurementBasis::new(subsystem, outcomes)
    }

    /// Computational basis, outcomes labeled by their bit strings.
    pub fn computational(subsystem: Vec<QubitLabel>) -> Result<Self> {
        let k = subsystem.len();
        let d = 1usize << k;
        let outcomes = (0..d)
            .map(|i| {
                let mut v = CVector::zeros(d);
                v[i] = c(1.0);
                (format!("{i:0k$b}"), v)
            })
            .collect();
        MeasurementBasis::new(subsystem, outcomes)
    }

    /// The same vectors attached to different qubits.
    pub fn on(&self, subsystem: &[QubitLabel]) -> Result<Self> {
        if subsystem.len() != self.subsystem.len() {
            return Err(Error::DimensionMismatch {
                expected: self.subsystem.len(),
                got: subsystem.len(),
            });
        }
        Register::new(subsystem.to_vec())?;
        Ok(MeasurementBasis {
            subsystem: subsystem.to_vec(),
            outcomes: self.outcomes.clone(),
        })
    }

    pub fn subsystem(&self) -> &[QubitLabel] {
        &self.subsystem
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.outcomes.iter().map(|(l, _)| l.as_str())
    }

    pub fn vectors(&self) -> impl Iterator<Item = (&str, &CVector)> {
        self.outcomes.iter().map(|(l, v)| (l.as_str(), v))
    }

    pub fn vector(&self, label: &str) -> Option<&CVector> {
        self.outcomes
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, v)| v)
    }

    /// Basis vector as a state over the subsystem labels.
    pub fn state(&self, label: &str) -> Result<PureState> {
        let v = self
            .vector(label)
            .ok_or_else(|| Error::UnknownOutcome(label.to_string()))?;
        PureState::new(Register::new(self.subsystem.clone())?, v.clone())
    }

    /// Index tables: for every subsystem sub-index and every remaining
    /// sub-index, the full register offset.
    fn layout(&self, register: &Register) -> Result<(Vec<usize>, Vec<usize>, Register)> {
        let meas_pos = register.positions(&self.subsystem)?;
        let n = register.len();
        let rest_pos: Vec<usize> = (0..n).filter(|p| !meas_pos.contains(p)).collect();
        let rest = Register::new(register.complement(&self.subsystem))?;
        Ok((spread(&meas_pos, n), spread(&rest_pos, n), rest))
    }
}

/// Outcome label, probability and the unnormalized block on the unmeasured
/// qubits.
pub(crate) type ProjectedBlock = (String, f64, Option<(Register, CMatrix)>);

/// One outcome of a projective measurement on a mixed state.
#[derive(Clone, Debug)]
pub struct MeasurementRecord {
    pub label: String,
    pub probability: f64,
    /// Normalized state of the unmeasured qubits; `None` when the outcome
    /// probability is at or below [`PROBABILITY_FLOOR`].
    pub post_state: Option<DensityMatrix>,
}

/// One outcome of a projective measurement on a pure state.
#[derive(Clone, Debug)]
pub struct PureOutcome {
    pub label: String,
    pub probability: f64,
    pub post_state: Option<PureState>,
}

impl PureState {
    /// Projects the basis subsystem onto every basis vector; post-states
    /// live on the remaining qubits in register order.
    pub fn measure(&self, basis: &MeasurementBasis) -> Result<Vec<PureOutcome>> {
        let (meas, rest, rest_reg) = basis.layout(self.register())?;
        let amps = self.amplitudes();
        basis
            .outcomes
            .iter()
            .map(|(label, v)| {
                let projected = CVector::from_iterator(
                    rest.len(),
                    rest.iter().map(|&r| {
                        meas.iter()
                            .zip(v.iter())
                            .map(|(&m, vi)| vi.conj() * amps[m + r])
                            .sum::<C64>()
                    }),
                );
                let probability = projected.norm_squared();
                let post_state = if probability > PROBABILITY_FLOOR {
                    Some(PureState::normalized(rest_reg.clone(), projected)?)
                } else {
                    None
                };
                Ok(PureOutcome {
                    label: label.clone(),
                    probability,
                    post_state,
                })
            })
            .collect()
    }
}

impl DensityMatrix {
    /// Projects the basis subsystem onto every basis vector; post-states are
    /// `⟨v|ρ|v⟩ / p` on the remaining qubits in register order.
    pub fn measure(&self, basis: &MeasurementBasis) -> Result<Vec<MeasurementRecord>> {
        Ok(self
            .project_each(basis)?
            .into_iter()
            .map(|(label, probability, block)| {
                let post_state = block
                    .filter(|_| probability > PROBABILITY_FLOOR)
                    .map(|(reg, m)| DensityMatrix::from_parts(reg, m * c(1.0 / probability)));
                MeasurementRecord {
                    label,
                    probability,
                    post_state,
                }
            })
            .collect())
    }

    /// Unnormalized conditional blocks `⟨v|ρ|v⟩` for every outcome.
    pub(crate) fn project_each(&self, basis: &MeasurementBasis) -> Result<Vec<ProjectedBlock>> {
        let (meas, rest, rest_reg) = basis.layout(self.register())?;
        let rho = self.matrix();
        let dr = rest.len();
        Ok(basis
            .outcomes
            .iter()
            .map(|(label, v)| {
                // half[(a, r), r'] = Σ_b v_b ρ[(a, r), (b, r')]
                let block = CMatrix::from_fn(dr, dr, |i, j| {
                    let mut acc = C64::new(0.0, 0.0);
                    for (&ma, va) in meas.iter().zip(v.iter()) {
                        if va.norm_sqr() == 0.0 {
                            continue;
                        }
                        let mut inner = C64::new(0.0, 0.0);
                        for (&mb, vb) in meas.iter().zip(v.iter()) {
                            inner += vb * rho[(ma + rest[i], mb + rest[j])];
                        }
                        acc += va.conj() * inner;
                    }
                    acc
                });
                let probability = block.trace().re.max(0.0);
                (label.clone(), probability, Some((rest_reg.clone(), block)))
            })
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::labels;

    #[test]
    fn computational_measurement_of_zero() {
        let psi = PureState::basis(&[1], "0").unwrap();
        let basis = MeasurementBasis::computational(labels([1]).to_vec()).unwrap();
        let out = psi.measure(&basis).unwrap();
        assert_eq!(out[0].label, "0");
        assert!((out[0].probability - 1.0).abs() < 1e-15);
        assert!(out[1].post_state.is_none());
        let rho_out = psi.to_density().measure(&basis).unwrap();
        assert!((rho_out[0].probability - 1.0).abs() < 1e-15);
        assert_eq!(rho_out[0].post_state.as_ref().unwrap().dim(), 1);
    }

    #[test]
    fn non_orthonormal_rejected() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let v0 = CVector::from_vec(vec![c(1.0), c(0.0)]);
        let v1 = CVector::from_vec(vec![c(h), c(h)]);
        let err = MeasurementBasis::new(
            labels([1]).to_vec(),
            vec![("a".into(), v0), ("b".into(), v1)],
        );
        assert!(matches!(err, Err(Error::NonOrthonormalBasis(_))));
    }

    #[test]
    fn completion_spans_space() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus = CVector::from_vec(vec![c(h), c(0.0), c(0.0), c(h)]);
        let b = MeasurementBasis::completed(labels([1, 2]).to_vec(), vec![("phi".into(), plus)])
            .unwrap();
        assert_eq!(b.len(), 4);
        assert_eq!(
            b.labels().collect::<Vec<_>>(),
            ["phi", "perp0", "perp1", "perp2"]
        );
    }

    #[test]
    fn subsystem_must_be_in_register() {
        let psi = PureState::basis(&[1, 2], "00").unwrap();
        let basis = MeasurementBasis::computational(labels([3]).to_vec()).unwrap();
        assert!(matches!(psi.measure(&basis), Err(Error::UnknownLabel(_))));
    }
}
