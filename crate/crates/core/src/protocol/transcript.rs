use std::collections::BTreeMap;

use serde::Serialize;

use crate::field::{BivariatePolynomial, FieldElement, SchemeParams};
use crate::qudit::{BipartiteState, MubLabel, QuditState};
use crate::scalar::Real;

/// Party identifier on the wire: 0 is the dealer, `i >= 1` is participant `i`.
pub type PartyId = usize;

pub const DEALER: PartyId = 0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum MessageKind {
    #[serde(rename = "p-cipher")]
    PCipher,
    #[serde(rename = "q-cipher")]
    QCipher,
    #[serde(rename = "R-cipher")]
    RCipher,
    #[serde(rename = "s-report")]
    SReport,
}

/// One classical message. Cipher kinds carry one-time-pad ciphertexts under
/// the `(from, to)` pairwise key; `s-report` is plaintext to the dealer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClassicalMessage {
    pub from: PartyId,
    pub to: PartyId,
    pub kind: MessageKind,
    pub payload: FieldElement,
}

/// Amplitudes as `[re, im]` pairs, in index order.
pub type StateDump = Vec<[f64; 2]>;

pub(crate) fn dump_qudit<T: Real>(s: &QuditState<T>) -> StateDump {
    s.amplitudes().iter().map(|a| [a.re.as_f64(), a.im.as_f64()]).collect()
}

pub(crate) fn dump_bipartite<T: Real>(s: &BipartiteState<T>) -> StateDump {
    s.amplitudes().iter().map(|a| [a.re.as_f64(), a.im.as_f64()]).collect()
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Event {
    Prepared {
        polynomial: BivariatePolynomial,
        s: FieldElement,
        p0: FieldElement,
        q0: FieldElement,
    },
    ShareSent {
        to: PartyId,
    },
    Behavior {
        party: PartyId,
        behavior: String,
    },
    StatePrepared {
        label: MubLabel,
        #[serde(skip_serializing_if = "Option::is_none")]
        state: Option<StateDump>,
    },
    Handoff {
        hop: usize,
        from: PartyId,
        to: PartyId,
    },
    Tap {
        hop: usize,
        action: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        state: Option<StateDump>,
    },
    Unitary {
        party: PartyId,
        p: FieldElement,
        q: FieldElement,
        #[serde(skip_serializing_if = "Option::is_none")]
        state: Option<StateDump>,
    },
    Message(ClassicalMessage),
    Measured {
        party: PartyId,
        basis: FieldElement,
        outcome: FieldElement,
        #[serde(skip_serializing_if = "Option::is_none")]
        state: Option<StateDump>,
    },
    CrossCheck {
        accused: Vec<PartyId>,
    },
    RCheck {
        passed: bool,
    },
    Recovered {
        party: PartyId,
        value: FieldElement,
    },
    Fault {
        message: String,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct PhaseLog {
    pub name: &'static str,
    pub events: Vec<Event>,
}

impl PhaseLog {
    pub(crate) fn new(name: &'static str) -> Self {
        PhaseLog {
            name,
            events: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MeasurementRecord {
    pub s_prime: FieldElement,
    #[serde(rename = "R_prime")]
    pub r_prime: FieldElement,
}

/// The dealer's findings in the testing phase.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct TestVerdicts {
    /// Whether each participant's reported `s'` equals `s`.
    pub s_check: BTreeMap<PartyId, bool>,
    /// Participants whose sent or received `(p, q)` disagree with F.
    pub p_crosscheck: Vec<PartyId>,
    /// Whether every participant received `R' = R`.
    #[serde(rename = "R_check")]
    pub r_check: bool,
}

impl TestVerdicts {
    pub fn passed(&self) -> bool {
        self.s_check.values().all(|&ok| ok) && self.p_crosscheck.is_empty() && self.r_check
    }

    pub fn s_check_failed(&self) -> bool {
        self.s_check.values().any(|&ok| !ok)
    }
}

/// Complete record of one session.
#[derive(Debug, Clone, Serialize)]
pub struct ProtocolTranscript {
    pub params: SchemeParams,
    pub recovery_set: Vec<PartyId>,
    #[serde(rename = "secret_S")]
    pub secret: FieldElement,
    pub phases: Vec<PhaseLog>,
    pub measurement: Option<MeasurementRecord>,
    pub verdicts: Option<TestVerdicts>,
    pub recovered: BTreeMap<PartyId, FieldElement>,
    pub aborted: Option<String>,
    pub seed: Option<u64>,
}

impl ProtocolTranscript {
    pub fn messages(&self) -> impl Iterator<Item = &ClassicalMessage> {
        self.phases.iter().flat_map(|p| &p.events).filter_map(|e| match e {
            Event::Message(m) => Some(m),
            _ => None,
        })
    }

    pub fn phase(&self, name: &str) -> Option<&PhaseLog> {
        self.phases.iter().find(|p| p.name == name)
    }

    /// True when every recovery-set participant recovered the dealer's secret.
    pub fn succeeded(&self) -> bool {
        self.aborted.is_none()
            && self.recovered.len() == self.recovery_set.len()
            && self.recovered.values().all(|&v| v == self.secret)
    }
}
