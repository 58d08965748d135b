use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::{rate, AttackKind, AttackStats};
use crate::error::{param, Error, Result};
use crate::field::{BivariatePolynomial, FieldElement, PrimeField, SchemeParams, Share};
use crate::protocol::{execute, prepare, NoTap};
use crate::rng::seeded;

fn space_size(d: u64, exponent: usize) -> u128 {
    u32::try_from(exponent)
        .ok()
        .and_then(|e| (d as u128).checked_pow(e))
        .unwrap_or(u128::MAX)
}

fn guard(size: u128, cap: u128) -> Result<u64> {
    if size > cap || size > u64::MAX as u128 {
        return Err(Error::EnumerationTooLarge { size, cap });
    }
    Ok(size as u64)
}

fn digits(mut idx: u64, d: u64, out: &mut [u64]) {
    for c in out.iter_mut() {
        *c = idx % d;
        idx /= d;
    }
}

/// Every `t x t` coefficient matrix over F_d whose restrictions at each
/// share's point reproduce that share's row and column polynomials.
///
/// Returns the size of the enumerated space and the consistent polynomials.
/// Refuses with [`Error::EnumerationTooLarge`] when `d^(t^2)` exceeds `cap`.
pub fn enumerate_consistent(
    params: &SchemeParams,
    shares: &[Share],
    cap: u128,
) -> Result<(u128, Vec<BivariatePolynomial>)> {
    let d = params.d();
    let t = params.t();
    let size = space_size(d, t * t);
    let total = guard(size, cap)?;

    struct Target {
        powers: Vec<u64>,
        row: Vec<u64>,
        col: Vec<u64>,
    }
    let targets = shares
        .iter()
        .map(|s| {
            let x = params.point(s.owner)?;
            let powers = (0..t as u64).map(|k| x.pow(k).value()).collect();
            let vals = |p: &crate::field::Polynomial| p.coeffs().iter().map(|c| c.value()).collect::<Vec<_>>();
            Ok(Target {
                powers,
                row: vals(&s.row_poly),
                col: vals(&s.col_poly),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let consistent = |a: &[u64]| {
        targets.iter().all(|tg| {
            (0..t).all(|j| (0..t).fold(0, |acc, i| (acc + a[i * t + j] * tg.powers[i]) % d) == tg.row[j])
                && (0..t).all(|i| (0..t).fold(0, |acc, j| (acc + a[i * t + j] * tg.powers[j]) % d) == tg.col[i])
        })
    };
    let found: Vec<Vec<u64>> = (0..total)
        .into_par_iter()
        .map_init(
            || vec![0u64; t * t],
            |a, idx| {
                digits(idx, d, a);
                consistent(a).then(|| a.clone())
            },
        )
        .flatten()
        .collect();
    let polys = found
        .into_iter()
        .map(|a| {
            let rows: Vec<Vec<u64>> = a.chunks(t).map(<[u64]>::to_vec).collect();
            BivariatePolynomial::from_matrix(params.field(), &rows)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((size, polys))
}

/// For univariate polynomials of degree at most `t - 1` over `field`, counts
/// how many pass through all of `points`, grouped by constant term.
pub fn threshold_hiding_histogram(
    field: PrimeField,
    t: usize,
    points: &[(FieldElement, FieldElement)],
    cap: u128,
) -> Result<BTreeMap<u64, u64>> {
    let d = field.modulus();
    let total = guard(space_size(d, t), cap)?;
    let mut hist: BTreeMap<u64, u64> = (0..d).map(|c| (c, 0)).collect();
    let mut a = vec![0u64; t];
    for idx in 0..total {
        digits(idx, d, &mut a);
        let fits = points.iter().all(|&(x, y)| {
            let v = a.iter().rev().fold(0, |acc, &c| (acc * x.value() + c) % d);
            v == y.value()
        });
        if fits {
            *hist.entry(a[0]).or_default() += 1;
        }
    }
    Ok(hist)
}

#[derive(Debug, Clone, Serialize)]
pub struct CollusionReport {
    pub stats: AttackStats,
    pub colluders: Vec<usize>,
    pub honest: usize,
    /// `d^(t^2)`.
    pub enumerated: u128,
    /// Polynomials consistent with the pooled shares.
    pub consistent: u64,
}

/// All members of the recovery set except `honest` pool their shares and
/// their `p_i`, then receive `R'` from a completed honest session.
///
/// The post-broadcast posterior counts, over every polynomial consistent with
/// the pooled shares, the implied secret `R' - sum p_colluders - F(x_h, x_h)`.
/// The pre-broadcast posterior counts the implied final basis `F(0, 0)`.
pub fn attack_collusion(
    params: &SchemeParams,
    secret: FieldElement,
    recovery_set: &[usize],
    honest: usize,
    seed: u64,
    cap: u128,
) -> Result<CollusionReport> {
    if !recovery_set.contains(&honest) {
        return Err(param(format!("participant {honest} is not in the recovery set")));
    }
    guard(space_size(params.d(), params.t() * params.t()), cap)?;
    let mut rng = seeded(seed);
    let (dealer, participants, initial) = prepare::<f64, _>(params, secret, recovery_set, &mut rng)?;
    let colluders: Vec<usize> = recovery_set.iter().copied().filter(|&i| i != honest).collect();
    let shares: Vec<Share> = colluders.iter().map(|&i| dealer.shares[i - 1].clone()).collect();
    let pooled_p = participants
        .iter()
        .filter(|p| p.index != honest)
        .fold(params.field().zero(), |acc, p| acc + p.p);

    let transcript = execute(dealer, participants, initial, false, &mut NoTap, &mut rng);
    let r_prime = transcript
        .measurement
        .as_ref()
        .map(|m| m.r_prime)
        .ok_or_else(|| Error::State("honest session produced no R'".into()))?;

    let (enumerated, polys) = enumerate_consistent(params, &shares, cap)?;
    let xh = params.point(honest)?;
    let empty = || (0..params.d()).map(|c| (c, 0u64)).collect::<BTreeMap<_, _>>();
    let (mut post, mut pre) = (empty(), empty());
    for f in &polys {
        *post.entry((r_prime - pooled_p - f.eval(xh, xh)).value()).or_default() += 1;
        *pre.entry(f.constant_term().value()).or_default() += 1;
    }
    let consistent = polys.len() as u64;
    let best = post.values().copied().max().unwrap_or(0);

    let mut stats = AttackStats::empty(AttackKind::Collusion, 1, seed);
    stats.eve_secret_guess_rate = Some(rate(best, consistent));
    stats.posterior = Some(post);
    stats.posterior_pre_broadcast = Some(pre);
    Ok(CollusionReport {
        stats,
        colluders,
        honest,
        enumerated,
        consistent,
    })
}
