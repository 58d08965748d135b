use std::collections::BTreeMap;

use super::transcript::{Event, PhaseLog, ProtocolTranscript};
use super::{
    classical_exchange, distribution_step, measurement_phase, prepare, recovery_phase, testing_phase,
    Behavior, DealerState, InFlight, MeasurementRecord, ParticipantState,
};
use crate::error::{param, Error, Result};
use crate::field::{FieldElement, SchemeParams};
use crate::qudit::{MubLabel, QuditState};
use crate::rng::SimRng;
use crate::scalar::Real;

/// Hook on the quantum channel between consecutive parties.
///
/// Hop `h` carries the state emitted by chain position `h` (0 is the dealer)
/// to position `h + 1`.
pub trait ChannelTap<T: Real> {
    /// Returns the state to forward and, if the tap acted, a description for
    /// the transcript.
    fn intercept(
        &mut self,
        hop: usize,
        state: InFlight<T>,
        rng: &mut SimRng,
    ) -> Result<(InFlight<T>, Option<String>)>;

    /// Sees the post-measurement state after the last participant measured.
    fn after_measurement(&mut self, _post: &InFlight<T>, _rng: &mut SimRng) -> Result<()> {
        Ok(())
    }
}

/// A channel nobody listens on.
#[derive(Debug, Default, Clone, Copy)]
pub struct NoTap;

impl<T: Real> ChannelTap<T> for NoTap {
    fn intercept(&mut self, _hop: usize, state: InFlight<T>, _rng: &mut SimRng) -> Result<(InFlight<T>, Option<String>)> {
        Ok((state, None))
    }
}

/// Per-participant behaviors (absent means honest) and transcript options.
#[derive(Debug, Clone, Default)]
pub struct BehaviorConfig {
    pub behaviors: BTreeMap<usize, Behavior>,
    pub dump_states: bool,
}

impl BehaviorConfig {
    pub fn honest() -> Self {
        Self::default()
    }

    pub fn with(mut self, participant: usize, behavior: Behavior) -> Self {
        self.behaviors.insert(participant, behavior);
        self
    }

    fn validate(&self, recovery_set: &[usize]) -> Result<()> {
        for (&i, b) in &self.behaviors {
            let pos = recovery_set
                .iter()
                .position(|&r| r == i)
                .ok_or_else(|| param(format!("participant {i} with a behavior is not in the recovery set")))?;
            let forges = matches!(b, Behavior::ForgeR { .. } | Behavior::ForgeRandomR);
            if forges && pos + 1 != recovery_set.len() {
                return Err(param(format!(
                    "only the last participant broadcasts R', participant {i} cannot forge it"
                )));
            }
        }
        Ok(())
    }
}

/// Runs a full honest-channel session in double precision.
pub fn run_session(
    params: &SchemeParams,
    secret: FieldElement,
    recovery_set: &[usize],
    config: &BehaviorConfig,
    rng: &mut SimRng,
) -> Result<ProtocolTranscript> {
    run_session_with::<f64>(params, secret, recovery_set, config, &mut NoTap, rng)
}

/// Runs a full session with a channel tap. Parameter errors are returned
/// before any phase runs; faults afterwards produce an aborted transcript.
pub fn run_session_with<T: Real>(
    params: &SchemeParams,
    secret: FieldElement,
    recovery_set: &[usize],
    config: &BehaviorConfig,
    tap: &mut dyn ChannelTap<T>,
    rng: &mut SimRng,
) -> Result<ProtocolTranscript> {
    config.validate(recovery_set)?;
    let (dealer, mut participants, initial) = prepare::<T, _>(params, secret, recovery_set, rng)?;
    for p in participants.iter_mut() {
        if let Some(&b) = config.behaviors.get(&p.index) {
            p.set_behavior(b, rng);
        }
    }
    Ok(execute(dealer, participants, initial, config.dump_states, tap, rng))
}

fn abort(tr: &mut ProtocolTranscript, mut phase: PhaseLog, err: Error) {
    phase.events.push(Event::Fault {
        message: err.to_string(),
    });
    tr.aborted = Some(phase.name.to_string());
    tr.phases.push(phase);
}

/// Runs the distribution, measurement, testing and recovery phases on a
/// prepared session.
pub fn execute<T: Real>(
    dealer: DealerState,
    mut participants: Vec<ParticipantState>,
    initial: QuditState<T>,
    dump_states: bool,
    tap: &mut dyn ChannelTap<T>,
    rng: &mut SimRng,
) -> ProtocolTranscript {
    let params = dealer.params.clone();
    let dump = |s: &InFlight<T>| dump_states.then(|| s.dump());
    let mut tr = ProtocolTranscript {
        params: params.clone(),
        recovery_set: dealer.recovery_set.clone(),
        secret: dealer.secret,
        phases: Vec::with_capacity(5),
        measurement: None,
        verdicts: None,
        recovered: BTreeMap::new(),
        aborted: None,
        seed: None,
    };

    let mut prep = PhaseLog::new("preparation");
    prep.events.push(Event::Prepared {
        polynomial: dealer.poly.clone(),
        s: dealer.s,
        p0: dealer.p0,
        q0: dealer.q0,
    });
    prep.events.extend(dealer.shares.iter().map(|s| Event::ShareSent { to: s.owner }));
    prep.events.extend(participants.iter().filter(|p| !p.honest()).map(|p| Event::Behavior {
        party: p.index,
        behavior: p.behavior.describe(),
    }));
    let mut state = InFlight::Qudit(initial);
    prep.events.push(Event::StatePrepared {
        label: MubLabel::new(params.d(), dealer.q0.value(), dealer.p0.value()),
        state: dump(&state),
    });
    tr.phases.push(prep);

    let mut dist = PhaseLog::new("distribution");
    let mut from = super::DEALER;
    for (hop, part) in participants.iter().enumerate() {
        dist.events.push(Event::Handoff { hop, from, to: part.index });
        match tap.intercept(hop, state, rng) {
            Ok((next, action)) => {
                state = next;
                if let Some(action) = action {
                    dist.events.push(Event::Tap {
                        hop,
                        action,
                        state: dump(&state),
                    });
                }
            }
            Err(e) => {
                abort(&mut tr, dist, e);
                return tr;
            }
        }
        state = distribution_step(part, &state);
        dist.events.push(Event::Unitary {
            party: part.index,
            p: part.p_used,
            q: part.q_used,
            state: dump(&state),
        });
        from = part.index;
    }
    match classical_exchange(&params, &mut participants) {
        Ok(msgs) => dist.events.extend(msgs.into_iter().map(Event::Message)),
        Err(e) => {
            abort(&mut tr, dist, e);
            return tr;
        }
    }
    tr.phases.push(dist);

    let mut meas = PhaseLog::new("measurement");
    let m = match measurement_phase(&params, &mut participants, &state, rng) {
        Ok(m) => m,
        Err(e) => {
            abort(&mut tr, meas, e);
            return tr;
        }
    };
    meas.events.push(Event::Measured {
        party: participants.last().map(|p| p.index).unwrap_or_default(),
        basis: m.s_prime,
        outcome: m.r_prime,
        state: dump(&m.post_state),
    });
    meas.events.extend(m.messages.iter().copied().map(Event::Message));
    tr.measurement = Some(MeasurementRecord {
        s_prime: m.s_prime,
        r_prime: m.r_prime,
    });
    if let Err(e) = tap.after_measurement(&m.post_state, rng) {
        abort(&mut tr, meas, e);
        return tr;
    }
    tr.phases.push(meas);

    let mut testing = PhaseLog::new("testing");
    let (verdicts, reports) = testing_phase(&dealer, &participants);
    testing.events.extend(reports.into_iter().map(Event::Message));
    testing.events.push(Event::CrossCheck {
        accused: verdicts.p_crosscheck.clone(),
    });
    testing.events.push(Event::RCheck {
        passed: verdicts.r_check,
    });
    let passed = verdicts.passed();
    tr.verdicts = Some(verdicts);
    tr.phases.push(testing);
    if !passed {
        tr.aborted = Some("testing".into());
        return tr;
    }

    let mut recovery = PhaseLog::new("recovery");
    match recovery_phase(&participants, tr.verdicts.as_ref().expect("set above")) {
        Ok(values) => {
            recovery.events.extend(values.iter().map(|(&party, &value)| Event::Recovered { party, value }));
            tr.recovered = values;
            tr.phases.push(recovery);
        }
        Err(e) => abort(&mut tr, recovery, e),
    }
    tr
}
