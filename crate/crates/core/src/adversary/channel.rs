use rand::Rng;
use rayon::prelude::*;

use super::{rate, AttackKind, AttackStats};
use crate::error::{Error, Result};
use crate::field::{FieldElement, SchemeParams};
use crate::protocol::{
    cumulative_label, distribution_step, execute, prepare, ChannelTap, InFlight, ProtocolTranscript,
};
use crate::qudit::{csum_entangle, BipartiteState, MubLabel};
use crate::rng::{trial_rng, SimRng};
use crate::scalar::Real;

/// Eve measures the state on one hop in a uniformly random quadratic-phase
/// basis and forwards the collapsed state.
struct InterceptResend {
    hop: usize,
    record: Option<(u64, u64)>,
}

impl<T: Real> ChannelTap<T> for InterceptResend {
    fn intercept(&mut self, hop: usize, state: InFlight<T>, rng: &mut SimRng) -> Result<(InFlight<T>, Option<String>)> {
        if hop != self.hop {
            return Ok((state, None));
        }
        let InFlight::Qudit(s) = state else {
            return Err(Error::State("intercept-resend expects a single qudit".into()));
        };
        let basis = rng.random_range(0..s.dim() as u64);
        let (outcome, post) = s.measure_mub(basis, rng)?;
        self.record = Some((basis, outcome));
        Ok((
            InFlight::Qudit(post),
            Some(format!("intercept-resend: measured basis {basis}, outcome {outcome}")),
        ))
    }
}

/// Eve couples an ancilla by CSUM on one hop and measures it in the
/// computational basis once the last participant has measured.
struct EntangleMeasure {
    hop: usize,
    ancilla_outcome: Option<u64>,
}

impl<T: Real> ChannelTap<T> for EntangleMeasure {
    fn intercept(&mut self, hop: usize, state: InFlight<T>, _rng: &mut SimRng) -> Result<(InFlight<T>, Option<String>)> {
        if hop != self.hop {
            return Ok((state, None));
        }
        let InFlight::Qudit(s) = state else {
            return Err(Error::State("ancilla already attached".into()));
        };
        Ok((
            InFlight::Entangled(csum_entangle(&s)),
            Some("entangle-measure: CSUM onto ancilla |0>".into()),
        ))
    }

    fn after_measurement(&mut self, post: &InFlight<T>, rng: &mut SimRng) -> Result<()> {
        if let InFlight::Entangled(b) = post {
            let (a, _) = b.measure_ancilla_computational(rng)?;
            self.ancilla_outcome = Some(a);
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct InterceptTrial {
    /// Label of the state actually on the tapped hop.
    pub true_label: MubLabel,
    pub eve_basis: u64,
    pub eve_outcome: u64,
    pub basis_matched: bool,
    /// Eve's outcome, taken as her guess of `S`, equals `S`.
    pub secret_guessed: bool,
    /// The dealer's `R'` check failed.
    pub detected: bool,
    pub transcript: ProtocolTranscript,
}

pub fn intercept_trial<T: Real>(
    params: &SchemeParams,
    secret: FieldElement,
    recovery_set: &[usize],
    hop: usize,
    rng: &mut SimRng,
) -> Result<InterceptTrial> {
    let (dealer, participants, initial) = prepare::<T, _>(params, secret, recovery_set, rng)?;
    let true_label = cumulative_label(&dealer, &participants, hop);
    let mut tap = InterceptResend { hop, record: None };
    let transcript = execute(dealer, participants, initial, false, &mut tap, rng);
    let (eve_basis, eve_outcome) = tap
        .record
        .ok_or_else(|| Error::State(format!("hop {hop} was never traversed")))?;
    Ok(InterceptTrial {
        true_label,
        eve_basis,
        eve_outcome,
        basis_matched: eve_basis == true_label.j,
        secret_guessed: eve_outcome == secret.value(),
        detected: transcript.verdicts.as_ref().is_some_and(|v| !v.r_check),
        transcript,
    })
}

pub fn attack_intercept_resend(
    params: &SchemeParams,
    secret: FieldElement,
    recovery_set: &[usize],
    hop: usize,
    trials: u64,
    seed: u64,
) -> Result<AttackStats> {
    let outcomes = (0..trials)
        .into_par_iter()
        .map(|i| {
            let t = intercept_trial::<f64>(params, secret, recovery_set, hop, &mut trial_rng(seed, i))?;
            Ok([t.basis_matched, t.secret_guessed, t.detected])
        })
        .collect::<Result<Vec<_>>>()?;
    let count = |k: usize| outcomes.iter().filter(|o| o[k]).count() as u64;
    let mut stats = AttackStats::empty(AttackKind::InterceptResend, trials, seed);
    stats.eve_basis_match_rate = Some(rate(count(0), trials));
    stats.eve_secret_guess_rate = Some(rate(count(1), trials));
    stats.detection_rate = Some(rate(count(2), trials));
    Ok(stats)
}

#[derive(Debug, Clone)]
pub struct EntangleTrial {
    pub ancilla_outcome: u64,
    /// Eve's ancilla outcome, taken as her guess of `S`, equals `S`.
    pub secret_guessed: bool,
    pub detected: bool,
    pub transcript: ProtocolTranscript,
}

pub fn entangle_trial<T: Real>(
    params: &SchemeParams,
    secret: FieldElement,
    recovery_set: &[usize],
    hop: usize,
    rng: &mut SimRng,
) -> Result<EntangleTrial> {
    let (dealer, participants, initial) = prepare::<T, _>(params, secret, recovery_set, rng)?;
    let mut tap = EntangleMeasure {
        hop,
        ancilla_outcome: None,
    };
    let transcript = execute(dealer, participants, initial, false, &mut tap, rng);
    let ancilla_outcome = tap
        .ancilla_outcome
        .ok_or_else(|| Error::State("ancilla was never measured".into()))?;
    Ok(EntangleTrial {
        ancilla_outcome,
        secret_guessed: ancilla_outcome == secret.value(),
        detected: transcript.verdicts.as_ref().is_some_and(|v| !v.r_check),
        transcript,
    })
}

pub fn attack_entangle_measure(
    params: &SchemeParams,
    secret: FieldElement,
    recovery_set: &[usize],
    hop: usize,
    trials: u64,
    seed: u64,
) -> Result<AttackStats> {
    let outcomes = (0..trials)
        .into_par_iter()
        .map(|i| {
            let t = entangle_trial::<f64>(params, secret, recovery_set, hop, &mut trial_rng(seed, i))?;
            Ok([t.secret_guessed, t.detected])
        })
        .collect::<Result<Vec<_>>>()?;
    let count = |k: usize| outcomes.iter().filter(|o| o[k]).count() as u64;
    let mut stats = AttackStats::empty(AttackKind::EntangleMeasure, trials, seed);
    stats.eve_secret_guess_rate = Some(rate(count(0), trials));
    stats.detection_rate = Some(rate(count(1), trials));
    Ok(stats)
}

/// Runs the distribution phase with a CSUM at `hop` and returns the
/// system-ancilla state just before the final measurement, together with the
/// label the honest chain would have produced.
pub fn entangled_pre_measurement<T: Real>(
    params: &SchemeParams,
    secret: FieldElement,
    recovery_set: &[usize],
    hop: usize,
    rng: &mut SimRng,
) -> Result<(BipartiteState<T>, MubLabel)> {
    let (dealer, participants, initial) = prepare::<T, _>(params, secret, recovery_set, rng)?;
    let mut state = InFlight::Qudit(initial);
    for (pos, p) in participants.iter().enumerate() {
        if pos == hop {
            if let InFlight::Qudit(s) = &state {
                state = InFlight::Entangled(csum_entangle(s));
            }
        }
        state = distribution_step(p, &state);
    }
    let label = cumulative_label(&dealer, &participants, participants.len());
    match state {
        InFlight::Entangled(b) => Ok((b, label)),
        InFlight::Qudit(_) => Err(Error::Param(format!("hop {hop} outside the chain"))),
    }
}
