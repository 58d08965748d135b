use rayon::prelude::*;

use super::{rate, AttackKind, AttackStats};
use crate::error::Result;
use crate::field::{FieldElement, SchemeParams};
use crate::protocol::{run_session, Behavior, BehaviorConfig, ProtocolTranscript};
use crate::rng::{trial_rng, SimRng};

#[derive(Debug, Clone)]
pub struct DishonestTrial {
    /// Some participant's `s'` differed from `s`.
    pub detected: bool,
    /// The cross-check accused exactly the cheater.
    pub identified: bool,
    pub transcript: ProtocolTranscript,
}

/// One session in which `cheater` replaces both `p` and `q` by different
/// uniformly random values, in its unitary and in the classical exchange.
pub fn dishonest_trial(
    params: &SchemeParams,
    secret: FieldElement,
    recovery_set: &[usize],
    cheater: usize,
    rng: &mut SimRng,
) -> Result<DishonestTrial> {
    let config = BehaviorConfig::honest().with(cheater, Behavior::SubstituteRandom);
    let transcript = run_session(params, secret, recovery_set, &config, rng)?;
    let (detected, identified) = match &transcript.verdicts {
        Some(v) => (v.s_check_failed(), v.p_crosscheck == [cheater]),
        None => (false, false),
    };
    Ok(DishonestTrial {
        detected,
        identified,
        transcript,
    })
}

pub fn attack_dishonest(
    params: &SchemeParams,
    secret: FieldElement,
    recovery_set: &[usize],
    cheater: usize,
    trials: u64,
    seed: u64,
) -> Result<AttackStats> {
    let outcomes = (0..trials)
        .into_par_iter()
        .map(|i| {
            let t = dishonest_trial(params, secret, recovery_set, cheater, &mut trial_rng(seed, i))?;
            Ok((t.detected, t.identified))
        })
        .collect::<Result<Vec<_>>>()?;
    let detected = outcomes.iter().filter(|o| o.0).count() as u64;
    let identified = outcomes.iter().filter(|o| o.1).count() as u64;
    let mut stats = AttackStats::empty(AttackKind::DishonestParticipant, trials, seed);
    stats.detection_rate = Some(rate(detected, trials));
    stats.cheater_identified_rate = Some(rate(identified, trials));
    Ok(stats)
}
