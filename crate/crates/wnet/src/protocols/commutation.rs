use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::distribution::swap_step;
use super::OutcomePolicy;
use crate::qcore::{labels, CVector, DensityMatrix, PureState, QuantumChannel, Register, C64};
use crate::wfamily::{bell_on, BellKind};
use crate::{Error, Result};

/// `α|100⟩ + β|010⟩ + γ|001⟩` on (1, 2, 3) with complex Gaussian
/// coefficients, normalized.
pub fn random_w_class<R: Rng + ?Sized>(rng: &mut R) -> PureState {
    let mut amps = CVector::zeros(8);
    for idx in [4, 2, 1] {
        amps[idx] = C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
    }
    PureState::normalized(
        Register::from_indices(&[1, 2, 3]).expect("three labels"),
        amps,
    )
    .expect("nonzero Gaussian amplitudes")
}

/// Ideal entanglement swap of qubit 3 onto qubit 5 through `|Φ+⟩₄₅`,
/// averaged over corrected outcomes. Input on (1, 2, 3), output on (1, 2, 5).
pub fn swap_with_bell_pair(rho: &DensityMatrix) -> Result<DensityMatrix> {
    let [q3, q4, q5] = labels([3, 4, 5]);
    let full = rho.tensor(&bell_on(BellKind::PhiPlus, 4, 5).to_density())?;
    let (out, _) = swap_step(
        &full,
        [q3, q4, q5],
        &OutcomePolicy::Average,
        0,
        "swap",
        &mut Vec::new(),
    )?;
    Ok(out)
}

/// Compares "channel on qubit 3, then swap" with "swap, then channel on
/// qubit 5" for `trials` random W-class inputs and returns the largest
/// elementwise deviation.
pub fn verify_noise_commutation(channel: &QuantumChannel, trials: u32, seed: u64) -> Result<f64> {
    if channel.arity() != 1 {
        return Err(Error::ArityMismatch {
            expected: 1,
            got: channel.arity(),
        });
    }
    let [q3, q5] = labels([3, 5]);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let rho = random_w_class(&mut rng).to_density();
        let noise_first = swap_with_bell_pair(&rho.apply_channel(channel, &[q3])?)?;
        let swap_first = swap_with_bell_pair(&rho)?.apply_channel(channel, &[q5])?;
        worst = worst.max(noise_first.max_deviation(&swap_first)?);
    }
    Ok(worst)
}
