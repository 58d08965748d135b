//! Attack experiments against the protocol and the oracles that quantify
//! what each adversary learns.
//!
//! Every experiment is a pure function of its inputs and a master seed;
//! trial `i` runs on its own random stream (see [`crate::rng::trial_rng`]),
//! so results do not depend on how trials are scheduled across threads.

mod channel;
mod collusion;
mod dishonest;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{param, Error, Result};
use crate::field::{FieldElement, SchemeParams};

pub use channel::{
    attack_entangle_measure, attack_intercept_resend, entangle_trial, entangled_pre_measurement, intercept_trial,
    EntangleTrial, InterceptTrial,
};
pub use collusion::{attack_collusion, enumerate_consistent, threshold_hiding_histogram, CollusionReport};
pub use dishonest::{attack_dishonest, dishonest_trial, DishonestTrial};

/// Default cap on exhaustive polynomial enumeration.
pub const DEFAULT_ENUMERATION_CAP: u128 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AttackKind {
    DishonestParticipant,
    InterceptResend,
    EntangleMeasure,
    Collusion,
}

impl AttackKind {
    pub const ALL: [AttackKind; 4] = [
        AttackKind::DishonestParticipant,
        AttackKind::InterceptResend,
        AttackKind::EntangleMeasure,
        AttackKind::Collusion,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AttackKind::DishonestParticipant => "dishonest-participant",
            AttackKind::InterceptResend => "intercept-resend",
            AttackKind::EntangleMeasure => "entangle-measure",
            AttackKind::Collusion => "collusion",
        }
    }

    pub fn targets_channel(self) -> bool {
        matches!(self, AttackKind::InterceptResend | AttackKind::EntangleMeasure)
    }
}

impl fmt::Display for AttackKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AttackKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dishonest" | "dishonest-participant" => Ok(AttackKind::DishonestParticipant),
            "intercept-resend" => Ok(AttackKind::InterceptResend),
            "entangle-measure" => Ok(AttackKind::EntangleMeasure),
            "collusion" => Ok(AttackKind::Collusion),
            other => Err(param(format!("unknown attack type '{other}'"))),
        }
    }
}

/// One attack experiment.
///
/// `position` is the channel hop (`0..t`) for channel attacks, the cheater's
/// participant index for the dishonest-participant attack, and the single
/// honest participant's index for collusion (every other member of the
/// recovery set colludes).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttackConfig {
    pub kind: AttackKind,
    pub position: usize,
    pub trials: u64,
    pub seed: u64,
    pub enumeration_cap: u128,
}

impl AttackConfig {
    pub fn new(kind: AttackKind, position: usize, trials: u64, seed: u64) -> Self {
        AttackConfig {
            kind,
            position,
            trials,
            seed,
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
        }
    }

    pub fn validate(&self, params: &SchemeParams, recovery_set: &[usize]) -> Result<()> {
        if self.trials == 0 && self.kind != AttackKind::Collusion {
            return Err(param("trials must be positive"));
        }
        if self.kind.targets_channel() {
            if self.position >= params.t() {
                return Err(param(format!("hop {} outside 0..{}", self.position, params.t())));
            }
        } else if !recovery_set.contains(&self.position) {
            return Err(param(format!(
                "participant {} is not in the recovery set",
                self.position
            )));
        }
        Ok(())
    }

    pub fn run(&self, params: &SchemeParams, secret: FieldElement, recovery_set: &[usize]) -> Result<AttackStats> {
        self.validate(params, recovery_set)?;
        match self.kind {
            AttackKind::DishonestParticipant => {
                attack_dishonest(params, secret, recovery_set, self.position, self.trials, self.seed)
            }
            AttackKind::InterceptResend => {
                attack_intercept_resend(params, secret, recovery_set, self.position, self.trials, self.seed)
            }
            AttackKind::EntangleMeasure => {
                attack_entangle_measure(params, secret, recovery_set, self.position, self.trials, self.seed)
            }
            AttackKind::Collusion => {
                attack_collusion(params, secret, recovery_set, self.position, self.seed, self.enumeration_cap)
                    .map(|r| r.stats)
            }
        }
    }
}

/// Aggregate outcome of an attack experiment. Rates that do not apply to an
/// attack are `None` (JSON `null`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttackStats {
    pub kind: AttackKind,
    pub trials: u64,
    pub eve_basis_match_rate: Option<f64>,
    pub eve_secret_guess_rate: Option<f64>,
    pub detection_rate: Option<f64>,
    pub cheater_identified_rate: Option<f64>,
    /// Collusion only: candidate secret -> number of consistent polynomials,
    /// with the colluders holding `R'`.
    pub posterior: Option<BTreeMap<u64, u64>>,
    /// Collusion only: candidate final basis `F(0,0)` -> count, from the
    /// colluders' shares alone.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub posterior_pre_broadcast: Option<BTreeMap<u64, u64>>,
    pub seed: u64,
}

impl AttackStats {
    fn empty(kind: AttackKind, trials: u64, seed: u64) -> Self {
        AttackStats {
            kind,
            trials,
            eve_basis_match_rate: None,
            eve_secret_guess_rate: None,
            detection_rate: None,
            cheater_identified_rate: None,
            posterior: None,
            posterior_pre_broadcast: None,
            seed,
        }
    }

    /// `(metric name, value)` for every rate that applies.
    pub fn metrics(&self) -> Vec<(&'static str, f64)> {
        [
            ("eve_basis_match_rate", self.eve_basis_match_rate),
            ("eve_secret_guess_rate", self.eve_secret_guess_rate),
            ("detection_rate", self.detection_rate),
            ("cheater_identified_rate", self.cheater_identified_rate),
        ]
        .into_iter()
        .filter_map(|(name, v)| v.map(|v| (name, v)))
        .collect()
    }
}

/// Three-sigma half-width of a binomial proportion estimate.
pub fn ci3sigma(rate: f64, trials: u64) -> f64 {
    if trials == 0 {
        return 0.0;
    }
    3.0 * (rate * (1.0 - rate) / trials as f64).sqrt()
}

pub(crate) fn rate(count: u64, trials: u64) -> f64 {
    if trials == 0 {
        0.0
    } else {
        count as f64 / trials as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn attack_kind_round_trips_names() {
        for k in AttackKind::ALL {
            assert_eq!(k.name().parse::<AttackKind>().unwrap(), k);
        }
        assert_eq!("dishonest".parse::<AttackKind>().unwrap(), AttackKind::DishonestParticipant);
        assert!("replay".parse::<AttackKind>().is_err());
    }

    #[test]
    fn config_positions_are_validated() {
        let params = SchemeParams::new(5, 3, 4, None).unwrap();
        let set = [1, 2, 3];
        let ok = |kind, pos| AttackConfig::new(kind, pos, 10, 0).validate(&params, &set).is_ok();
        assert!(ok(AttackKind::InterceptResend, 0));
        assert!(ok(AttackKind::InterceptResend, 2));
        assert!(!ok(AttackKind::InterceptResend, 3));
        assert!(!ok(AttackKind::EntangleMeasure, 3));
        assert!(ok(AttackKind::DishonestParticipant, 3));
        assert!(!ok(AttackKind::DishonestParticipant, 4));
        assert!(!ok(AttackKind::Collusion, 0));
        assert!(AttackConfig::new(AttackKind::InterceptResend, 0, 0, 0).validate(&params, &set).is_err());
    }

    #[test]
    fn ci_is_zero_at_the_extremes() {
        assert_eq!(ci3sigma(1.0, 100), 0.0);
        assert_eq!(ci3sigma(0.0, 100), 0.0);
        assert!((ci3sigma(0.2, 10_000) - 0.012).abs() < 1e-12);
    }
}
