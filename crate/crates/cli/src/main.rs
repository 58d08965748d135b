//! `vqss` command-line runner.
//!
//! Exit codes: 0 success, 1 aborted session or failed verification,
//! 2 invalid parameters, 3 I/O failure.

mod args;

use std::fs;
use std::io::{self, Write};
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use vqss_core::adversary::{ci3sigma, AttackConfig, AttackKind};
use vqss_core::protocol::{run_session, BehaviorConfig};
use vqss_core::qudit::verify_mubs;
use vqss_core::rng::seeded;
use vqss_core::{Error, FieldElement, SchemeParams};

use args::{AttackArgs, Cli, Command, MubVerifyArgs, RunArgs, SchemeArgs, SweepArgs};

enum Failure {
    Invalid(String),
    Internal(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Internal(_) => 1,
            Failure::Invalid(_) => 2,
            Failure::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Invalid(m) | Failure::Internal(m) | Failure::Io(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Param(_) | Error::EnumerationTooLarge { .. } => Failure::Invalid(e.to_string()),
            Error::State(_) | Error::ProtocolOrder(_) => Failure::Internal(e.to_string()),
        }
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Attack(a) => cmd_attack(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::MubVerify(a) => cmd_mub_verify(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn emit(out: Option<&Path>, body: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, body).map_err(|e| Failure::Io(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(body.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure::Io(format!("stdout: {e}")))
        }
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| Failure::Internal(e.to_string()))
}

fn resolve_seed(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        let s = rand::random();
        eprintln!("no seed given, using {s}");
        s
    })
}

struct Scheme {
    params: SchemeParams,
    recovery_set: Vec<usize>,
    secret: FieldElement,
}

impl SchemeArgs {
    /// The secret, when not given, is the first draw from the seeded generator.
    fn resolve(&self, seed: u64) -> Result<Scheme, Failure> {
        let params = SchemeParams::new(self.d, self.t, self.n.unwrap_or(self.t), self.points.as_deref())?;
        let recovery_set = self.recovery.clone().unwrap_or_else(|| (1..=self.t).collect());
        let field = params.field();
        let secret = match self.secret {
            Some(v) if v >= self.d => return Err(Failure::Invalid(format!("secret {v} is not in F_{}", self.d))),
            Some(v) => field.elem(v),
            None => field.random(&mut seeded(seed)),
        };
        Ok(Scheme {
            params,
            recovery_set,
            secret,
        })
    }
}

fn cmd_run(a: RunArgs) -> Outcome {
    let seed = resolve_seed(a.seed);
    let scheme = a.scheme.resolve(seed)?;
    let config = BehaviorConfig {
        dump_states: a.dump_states,
        ..BehaviorConfig::honest()
    };
    let mut rng = seeded(seed);
    let mut transcript = run_session(&scheme.params, scheme.secret, &scheme.recovery_set, &config, &mut rng)?;
    transcript.seed = Some(seed);
    emit(a.out.as_deref(), &to_json(&transcript)?)?;
    if transcript.succeeded() {
        Ok(0)
    } else {
        eprintln!(
            "session did not recover the secret (aborted in {})",
            transcript.aborted.as_deref().unwrap_or("recovery")
        );
        Ok(1)
    }
}

fn default_position(kind: AttackKind, recovery_set: &[usize]) -> usize {
    match kind {
        AttackKind::InterceptResend | AttackKind::EntangleMeasure => 0,
        AttackKind::DishonestParticipant => recovery_set.first().copied().unwrap_or(1),
        AttackKind::Collusion => recovery_set.last().copied().unwrap_or(1),
    }
}

fn parse_kind(s: &str) -> Result<AttackKind, Failure> {
    s.parse::<AttackKind>().map_err(Failure::from)
}

fn cmd_attack(a: AttackArgs) -> Outcome {
    let kind = parse_kind(&a.kind)?;
    let seed = resolve_seed(a.seed);
    let scheme = a.scheme.resolve(seed)?;
    let position = a.position.unwrap_or_else(|| default_position(kind, &scheme.recovery_set));
    let config = AttackConfig {
        enumeration_cap: a.cap,
        ..AttackConfig::new(kind, position, a.trials, seed)
    };
    let stats = config.run(&scheme.params, scheme.secret, &scheme.recovery_set)?;
    emit(a.out.as_deref(), &to_json(&stats)?)?;
    Ok(0)
}

fn cmd_sweep(a: SweepArgs) -> Outcome {
    if a.d.is_empty() || a.t.is_empty() || a.attacks.is_empty() {
        return Err(Failure::Invalid("sweep needs at least one value for each of --d, --t and --attack".into()));
    }
    let kinds = a.attacks.iter().map(|s| parse_kind(s)).collect::<Result<Vec<_>, _>>()?;
    let seed = resolve_seed(a.seed);

    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Failure::Internal(e.to_string());
    w.write_record(["d", "t", "attack", "metric", "value", "ci3sigma", "trials", "seed"])
        .map_err(csv_err)?;
    for &d in &a.d {
        for &t in &a.t {
            let params = match SchemeParams::new(d, t, t, None) {
                Ok(p) => p,
                Err(e) if vqss_core::field::is_prime(d) && d > 2 => {
                    eprintln!("skipping d={d}, t={t}: {e}");
                    continue;
                }
                Err(e) => return Err(e.into()),
            };
            let recovery_set: Vec<usize> = (1..=t).collect();
            let secret = params.field().random(&mut seeded(seed));
            for &kind in &kinds {
                let config = AttackConfig {
                    enumeration_cap: a.cap,
                    ..AttackConfig::new(kind, default_position(kind, &recovery_set), a.trials, seed)
                };
                let stats = config.run(&params, secret, &recovery_set)?;
                for (metric, value) in stats.metrics() {
                    // collusion rates come from exact enumeration
                    let ci = if kind == AttackKind::Collusion {
                        0.0
                    } else {
                        ci3sigma(value, stats.trials)
                    };
                    w.write_record([
                        d.to_string(),
                        t.to_string(),
                        kind.to_string(),
                        metric.to_string(),
                        value.to_string(),
                        ci.to_string(),
                        stats.trials.to_string(),
                        seed.to_string(),
                    ])
                    .map_err(csv_err)?;
                }
            }
        }
    }
    let bytes = w.into_inner().map_err(|e| Failure::Internal(e.to_string()))?;
    emit(a.out.as_deref(), &String::from_utf8_lossy(&bytes))?;
    Ok(0)
}

fn cmd_mub_verify(a: MubVerifyArgs) -> Outcome {
    let d = usize::try_from(a.d).map_err(|_| Failure::Invalid(format!("d = {} is too large", a.d)))?;
    let report = verify_mubs(d, a.tol)?;
    let summary = format!(
        "d={}: {} bases (d quadratic-phase + computational), max orthonormality dev {:.3e}, \
         max unbiasedness dev {:.3e}, max shift-law dev {:.3e}, tol {:.1e}: {}\n",
        report.d,
        report.bases,
        report.max_orthonormality_dev,
        report.max_unbiasedness_dev,
        report.max_shift_law_dev,
        a.tol,
        if report.passed() { "PASS" } else { "FAIL" },
    );
    emit(None, &summary)?;
    match &report.first_violation {
        None => Ok(0),
        Some(v) => {
            emit(None, &format!("first violation: {v}\n"))?;
            Ok(1)
        }
    }
}
