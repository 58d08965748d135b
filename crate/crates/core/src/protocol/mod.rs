//! One protocol session: preparation, distribution, measurement, testing and
//! recovery.
//!
//! The dealer encodes the secret `S` as the vector index of `|v_S^(q0)>`,
//! with `q0 = F(0,0) - sum F(x_i, 0)` over the ordered recovery set. Each
//! participant `i` then applies `U_{p_i, q_i}` with `p_i = F(x_i, x_i)` and
//! `q_i = F(x_i, 0)`, so the final state is `|v_R^(s)>` with
//! `R = S + sum p_i` and `s = F(0,0)`. The last participant measures in the
//! basis obtained by interpolating the exchanged `q_i` at zero.

mod session;
mod transcript;

use std::collections::BTreeMap;

use rand::Rng;

use crate::error::{param, Error, Result};
use crate::field::{
    lagrange_at_zero, otp_decrypt, otp_encrypt, share_generate, BivariatePolynomial, FieldElement,
    PairwiseKey, PrimeField, SchemeParams, Share,
};
use crate::qudit::{BipartiteState, MubLabel, QuditState};
use crate::rng::SimRng;
use crate::scalar::Real;

pub use session::{execute, run_session, run_session_with, BehaviorConfig, ChannelTap, NoTap};
pub use transcript::{
    ClassicalMessage, Event, MeasurementRecord, MessageKind, PartyId, PhaseLog, ProtocolTranscript,
    StateDump, TestVerdicts, DEALER,
};

/// The dealer's private view of a session.
#[derive(Debug, Clone)]
pub struct DealerState {
    pub params: SchemeParams,
    pub poly: BivariatePolynomial,
    pub secret: FieldElement,
    /// `F(0, 0)`, the final measurement basis.
    pub s: FieldElement,
    pub p0: FieldElement,
    pub q0: FieldElement,
    pub recovery_set: Vec<usize>,
    /// Shares handed to all `n` participants.
    pub shares: Vec<Share>,
}

impl DealerState {
    /// `R = p0 + sum p_i` over the recovery set, from ground truth.
    pub fn expected_outcome(&self) -> FieldElement {
        self.recovery_set.iter().fold(self.p0, |acc, &i| {
            let x = self.params.public_points()[i - 1];
            acc + self.poly.eval(x, x)
        })
    }

    fn true_pq(&self, i: usize) -> (FieldElement, FieldElement) {
        let x = self.params.public_points()[i - 1];
        (self.poly.eval(x, x), self.poly.eval(x, self.params.field().zero()))
    }
}

/// How a participant behaves during a session.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Behavior {
    Honest,
    /// Uses `(p, q)` in place of the true values, both in the unitary and in
    /// the classical exchange.
    Substitute { p: FieldElement, q: FieldElement },
    /// Substitute uniformly random values differing from the true ones in
    /// both coordinates. Resolved when the session starts.
    SubstituteRandom,
    /// As last participant, broadcasts `r` instead of the measured outcome.
    ForgeR { r: FieldElement },
    /// Broadcast a uniformly random value differing from the measured outcome.
    ForgeRandomR,
}

impl Behavior {
    fn describe(&self) -> String {
        match self {
            Behavior::Honest => "honest".into(),
            Behavior::Substitute { p, q } => format!("substitute p={p} q={q}"),
            Behavior::SubstituteRandom => "substitute-random".into(),
            Behavior::ForgeR { r } => format!("forge R={r}"),
            Behavior::ForgeRandomR => "forge-random-R".into(),
        }
    }
}

/// A recovery-set participant.
#[derive(Debug, Clone)]
pub struct ParticipantState {
    pub index: usize,
    pub field: PrimeField,
    pub share: Share,
    /// `F(x_i, x_i)`.
    pub p: FieldElement,
    /// `F(x_i, 0)`.
    pub q: FieldElement,
    /// Values actually applied and sent; differ from `(p, q)` for a cheater.
    pub p_used: FieldElement,
    pub q_used: FieldElement,
    /// Outgoing keys toward the other recovery participants.
    pub keys: BTreeMap<usize, PairwiseKey>,
    pub received_p: BTreeMap<usize, FieldElement>,
    pub received_q: BTreeMap<usize, FieldElement>,
    pub received_r: Option<FieldElement>,
    pub behavior: Behavior,
}

impl ParticipantState {
    fn new(params: &SchemeParams, share: Share, peers: &[usize]) -> Result<Self> {
        let x = params.point(share.owner)?;
        let p = share.row_eval(x);
        let q = share.row_eval(params.field().zero());
        let keys = peers
            .iter()
            .filter(|&&j| j != share.owner)
            .map(|&j| Ok((j, share.key_to(params, j)?)))
            .collect::<Result<_>>()?;
        Ok(ParticipantState {
            index: share.owner,
            field: params.field(),
            share,
            p,
            q,
            p_used: p,
            q_used: q,
            keys,
            received_p: BTreeMap::new(),
            received_q: BTreeMap::new(),
            received_r: None,
            behavior: Behavior::Honest,
        })
    }

    pub fn honest(&self) -> bool {
        self.behavior == Behavior::Honest
    }

    /// Sets the behavior, resolving random substitutions against the true
    /// values.
    pub fn set_behavior<R: Rng + ?Sized>(&mut self, behavior: Behavior, rng: &mut R) {
        let f = self.field;
        self.behavior = behavior;
        match behavior {
            Behavior::Substitute { p, q } => {
                self.p_used = p;
                self.q_used = q;
            }
            Behavior::SubstituteRandom => {
                let p = f.random_except(rng, self.p);
                let q = f.random_except(rng, self.q);
                self.behavior = Behavior::Substitute { p, q };
                self.p_used = p;
                self.q_used = q;
            }
            Behavior::Honest | Behavior::ForgeR { .. } | Behavior::ForgeRandomR => {
                self.p_used = self.p;
                self.q_used = self.q;
            }
        }
    }

    /// `s'` from the participant's own `q` and the received ones.
    pub fn s_prime(&self, params: &SchemeParams, recovery_set: &[usize]) -> Result<FieldElement> {
        let points = recovery_set
            .iter()
            .map(|&i| {
                let q = if i == self.index {
                    self.q_used
                } else {
                    *self.received_q.get(&i).ok_or_else(|| {
                        Error::ProtocolOrder(format!(
                            "participant {} has not received q from {i}",
                            self.index
                        ))
                    })?
                };
                Ok((params.point(i)?, q))
            })
            .collect::<Result<Vec<_>>>()?;
        lagrange_at_zero(&points)
    }

    /// `R' - sum p_i`, using the participant's own `p` and the received ones.
    pub fn recover(&self, recovery_set: &[usize]) -> Result<FieldElement> {
        let r = self
            .received_r
            .ok_or_else(|| Error::ProtocolOrder(format!("participant {} has no R'", self.index)))?;
        recovery_set.iter().try_fold(r, |acc, &i| {
            let p = if i == self.index {
                self.p_used
            } else {
                *self.received_p.get(&i).ok_or_else(|| {
                    Error::ProtocolOrder(format!("participant {} lacks p from {i}", self.index))
                })?
            };
            Ok(acc - p)
        })
    }
}

/// State travelling on the quantum channel; becomes entangled with an
/// eavesdropper's ancilla under the entangle-and-measure attack.
#[derive(Debug, Clone, PartialEq)]
pub enum InFlight<T> {
    Qudit(QuditState<T>),
    Entangled(BipartiteState<T>),
}

impl<T: Real> InFlight<T> {
    pub fn apply_xy(&self, x: u64, y: u64) -> Self {
        match self {
            InFlight::Qudit(s) => InFlight::Qudit(s.apply_xy(x, y)),
            InFlight::Entangled(b) => InFlight::Entangled(b.apply_xy_system(x, y)),
        }
    }

    pub fn measure_mub(&self, j: u64, rng: &mut SimRng) -> Result<(u64, Self)> {
        Ok(match self {
            InFlight::Qudit(s) => {
                let (l, post) = s.measure_mub(j, rng)?;
                (l, InFlight::Qudit(post))
            }
            InFlight::Entangled(b) => {
                let (l, post) = b.measure_mub_system(j, rng)?;
                (l, InFlight::Entangled(post))
            }
        })
    }

    pub fn dump(&self) -> StateDump {
        match self {
            InFlight::Qudit(s) => transcript::dump_qudit(s),
            InFlight::Entangled(b) => transcript::dump_bipartite(b),
        }
    }
}

fn check_recovery_set(params: &SchemeParams, recovery_set: &[usize]) -> Result<()> {
    if recovery_set.len() != params.t() {
        return Err(param(format!(
            "recovery set must have exactly t = {} participants, got {}",
            params.t(),
            recovery_set.len()
        )));
    }
    for (k, &i) in recovery_set.iter().enumerate() {
        params.check_index(i)?;
        if recovery_set[..k].contains(&i) {
            return Err(param(format!("participant {i} appears twice in the recovery set")));
        }
    }
    Ok(())
}

/// Preparation with a caller-supplied polynomial.
pub fn prepare_with_polynomial<T: Real>(
    params: &SchemeParams,
    poly: BivariatePolynomial,
    secret: FieldElement,
    recovery_set: &[usize],
) -> Result<(DealerState, Vec<ParticipantState>, QuditState<T>)> {
    check_recovery_set(params, recovery_set)?;
    let f = params.field();
    if poly.field() != f || poly.size() != params.t() {
        return Err(param("polynomial does not match the scheme parameters"));
    }
    if secret.modulus() != params.d() {
        return Err(param("secret is not an element of F_d"));
    }
    let shares = (1..=params.n())
        .map(|i| share_generate(&poly, params, i))
        .collect::<Result<Vec<_>>>()?;
    let s = poly.constant_term();
    let q0 = recovery_set
        .iter()
        .fold(s, |acc, &i| acc - shares[i - 1].row_eval(f.zero()));
    let p0 = secret;
    let participants = recovery_set
        .iter()
        .map(|&i| ParticipantState::new(params, shares[i - 1].clone(), recovery_set))
        .collect::<Result<Vec<_>>>()?;
    let d = params.d() as usize;
    let initial = QuditState::mub_vector(d, MubLabel::new(params.d(), 0, 0))?.apply_xy(p0.value(), q0.value());
    let dealer = DealerState {
        params: params.clone(),
        poly,
        secret,
        s,
        p0,
        q0,
        recovery_set: recovery_set.to_vec(),
        shares,
    };
    Ok((dealer, participants, initial))
}

/// Samples F, distributes shares and prepares `U_{p0,q0} |v_0^(0)> = |v_{p0}^(q0)>`.
pub fn prepare<T: Real, R: Rng + ?Sized>(
    params: &SchemeParams,
    secret: FieldElement,
    recovery_set: &[usize],
    rng: &mut R,
) -> Result<(DealerState, Vec<ParticipantState>, QuditState<T>)> {
    check_recovery_set(params, recovery_set)?;
    let poly = BivariatePolynomial::random(params, rng);
    prepare_with_polynomial(params, poly, secret, recovery_set)
}

/// Applies the participant's `U_{p,q}` to the incoming state.
pub fn distribution_step<T: Real>(participant: &ParticipantState, incoming: &InFlight<T>) -> InFlight<T> {
    incoming.apply_xy(participant.p_used.value(), participant.q_used.value())
}

/// Label of the state emitted by the party at chain position `hop`
/// (0 = dealer): `|v_{sum p}^(sum q)>` over the applied values up to `hop`.
pub fn cumulative_label(dealer: &DealerState, participants: &[ParticipantState], hop: usize) -> MubLabel {
    let (p, q) = participants
        .iter()
        .take(hop)
        .fold((dealer.p0, dealer.q0), |(p, q), b| (p + b.p_used, q + b.q_used));
    MubLabel::new(dealer.params.d(), q.value(), p.value())
}

/// Every participant sends its `(p, q)` to every other, encrypted under the
/// sender-indexed pairwise key; receivers decrypt and store.
pub fn classical_exchange(params: &SchemeParams, participants: &mut [ParticipantState]) -> Result<Vec<ClassicalMessage>> {
    let mut messages = Vec::new();
    for s in 0..participants.len() {
        for r in 0..participants.len() {
            if s == r {
                continue;
            }
            let (from, to) = (participants[s].index, participants[r].index);
            let key = participants[s].keys[&to].key;
            let cp = otp_encrypt(participants[s].p_used, key);
            let cq = otp_encrypt(participants[s].q_used, key);
            let receiver = &mut participants[r];
            let rkey = receiver.share.key_from(params, from)?.key;
            receiver.received_p.insert(from, otp_decrypt(cp, rkey));
            receiver.received_q.insert(from, otp_decrypt(cq, rkey));
            messages.push(ClassicalMessage { from, to, kind: MessageKind::PCipher, payload: cp });
            messages.push(ClassicalMessage { from, to, kind: MessageKind::QCipher, payload: cq });
        }
    }
    Ok(messages)
}

/// Output of the measurement phase.
#[derive(Debug, Clone)]
pub struct Measurement<T> {
    pub s_prime: FieldElement,
    pub r_prime: FieldElement,
    pub messages: Vec<ClassicalMessage>,
    pub post_state: InFlight<T>,
}

/// The last participant interpolates `s'`, measures in basis `s'` and
/// broadcasts the outcome under each pairwise key.
pub fn measurement_phase<T: Real>(
    params: &SchemeParams,
    participants: &mut [ParticipantState],
    state: &InFlight<T>,
    rng: &mut SimRng,
) -> Result<Measurement<T>> {
    let recovery_set: Vec<usize> = participants.iter().map(|p| p.index).collect();
    let (last, others) = participants
        .split_last_mut()
        .ok_or_else(|| Error::ProtocolOrder("no participants".into()))?;
    let f = params.field();
    let s_prime = last.s_prime(params, &recovery_set)?;
    let (outcome, post_state) = state.measure_mub(s_prime.value(), rng)?;
    let r_prime = f.elem(outcome);
    last.received_r = Some(r_prime);
    let broadcast = match last.behavior {
        Behavior::ForgeR { r } => r,
        Behavior::ForgeRandomR => {
            let r = f.random_except(rng, r_prime);
            last.behavior = Behavior::ForgeR { r };
            r
        }
        _ => r_prime,
    };
    let mut messages = Vec::with_capacity(others.len());
    for other in others.iter_mut() {
        let key = last.keys[&other.index].key;
        let c = otp_encrypt(broadcast, key);
        let rkey = other.share.key_from(params, last.index)?.key;
        other.received_r = Some(otp_decrypt(c, rkey));
        messages.push(ClassicalMessage {
            from: last.index,
            to: other.index,
            kind: MessageKind::RCipher,
            payload: c,
        });
    }
    Ok(Measurement {
        s_prime,
        r_prime,
        messages,
        post_state,
    })
}

/// The dealer's checks: every reported `s'` against `s`; a cross-check of all
/// exchanged `(p, q)` against F when a check fails; every received `R'`
/// against `R`. Returns the verdicts and the `s-report` messages.
pub fn testing_phase(
    dealer: &DealerState,
    participants: &[ParticipantState],
) -> (TestVerdicts, Vec<ClassicalMessage>) {
    let params = &dealer.params;
    let mut verdicts = TestVerdicts::default();
    let mut reports = Vec::new();
    for p in participants {
        let reported = p.s_prime(params, &dealer.recovery_set);
        if let Ok(v) = reported {
            reports.push(ClassicalMessage {
                from: p.index,
                to: DEALER,
                kind: MessageKind::SReport,
                payload: v,
            });
        }
        verdicts.s_check.insert(p.index, reported.map(|v| v == dealer.s).unwrap_or(false));
    }

    let r = dealer.expected_outcome();
    verdicts.r_check = participants.iter().all(|p| p.received_r == Some(r));

    // the cross-check also runs on an R mismatch so that a substituted p,
    // which leaves every s' intact, is still traced to its sender
    if verdicts.s_check_failed() || !verdicts.r_check {
        verdicts.p_crosscheck = cross_check(dealer, participants);
    }
    (verdicts, reports)
}

/// Participants whose claimed or delivered `(p, q)` disagree with F.
fn cross_check(dealer: &DealerState, participants: &[ParticipantState]) -> Vec<usize> {
    participants
        .iter()
        .filter(|sender| {
            let (p, q) = dealer.true_pq(sender.index);
            let claimed_bad = sender.p_used != p || sender.q_used != q;
            let delivered_bad = participants.iter().filter(|r| r.index != sender.index).any(|r| {
                r.received_p.get(&sender.index) != Some(&p) || r.received_q.get(&sender.index) != Some(&q)
            });
            claimed_bad || delivered_bad
        })
        .map(|p| p.index)
        .collect()
}

/// Each participant computes `p0 = R' - sum p_i`.
pub fn recovery_phase(
    participants: &[ParticipantState],
    verdicts: &TestVerdicts,
) -> Result<BTreeMap<usize, FieldElement>> {
    if !verdicts.passed() {
        return Err(Error::ProtocolOrder("recovery after failed verdicts".into()));
    }
    let recovery_set: Vec<usize> = participants.iter().map(|p| p.index).collect();
    participants
        .iter()
        .map(|p| Ok((p.index, p.recover(&recovery_set)?)))
        .collect()
}
