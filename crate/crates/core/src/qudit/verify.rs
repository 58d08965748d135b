use serde::Serialize;

use super::{check_dim, MubLabel, QuditState};
use crate::error::Result;

/// Outcome of an exhaustive self-check of the `d + 1` bases for one `d`.
#[derive(Debug, Clone, Serialize)]
pub struct MubReport {
    pub d: usize,
    /// Quadratic-phase bases plus the computational basis.
    pub bases: usize,
    pub max_orthonormality_dev: f64,
    pub max_unbiasedness_dev: f64,
    pub max_shift_law_dev: f64,
    pub first_violation: Option<String>,
}

impl MubReport {
    pub fn passed(&self) -> bool {
        self.first_violation.is_none()
    }
}

/// Checks orthonormality within every basis, unbiasedness across every pair of
/// distinct bases (computational basis included) and the shift law for all
/// `(j, l, x, y)`.
pub fn verify_mubs(d: usize, tol: f64) -> Result<MubReport> {
    check_dim(d)?;
    let du = d as u64;
    let unbiased = 1.0 / (d as f64).sqrt();
    // bases[b][l]; b = d is the computational basis
    let mut bases: Vec<Vec<QuditState<f64>>> = (0..du)
        .map(|j| {
            (0..du)
                .map(|l| QuditState::mub_vector(d, MubLabel::new(du, j, l)))
                .collect::<Result<_>>()
        })
        .collect::<Result<_>>()?;
    bases.push((0..d).map(|k| QuditState::computational(d, k)).collect());

    let mut report = MubReport {
        d,
        bases: bases.len(),
        max_orthonormality_dev: 0.0,
        max_unbiasedness_dev: 0.0,
        max_shift_law_dev: 0.0,
        first_violation: None,
    };
    let name = |b: usize, l: usize| {
        if b == d {
            format!("|{l}>")
        } else {
            format!("v_{l}^({b})")
        }
    };
    let note = |report: &mut MubReport, msg: String| {
        if report.first_violation.is_none() {
            report.first_violation = Some(msg);
        }
    };

    for (b1, basis1) in bases.iter().enumerate() {
        for (l1, u) in basis1.iter().enumerate() {
            for (b2, basis2) in bases.iter().enumerate().skip(b1) {
                for (l2, w) in basis2.iter().enumerate() {
                    let m = u.inner_product(w)?.norm();
                    let (target, dev) = if b1 == b2 {
                        let target = if l1 == l2 { 1.0 } else { 0.0 };
                        (target, &mut report.max_orthonormality_dev)
                    } else {
                        (unbiased, &mut report.max_unbiasedness_dev)
                    };
                    let err = (m - target).abs();
                    *dev = dev.max(err);
                    if err > tol {
                        let msg = format!(
                            "|<{}|{}>| = {m:.3e}, expected {target:.3e}",
                            name(b1, l1),
                            name(b2, l2)
                        );
                        note(&mut report, msg);
                    }
                }
            }
        }
    }

    for j in 0..d {
        for l in 0..d {
            for x in 0..d {
                for y in 0..d {
                    let shifted = bases[j][l].apply_xy(x as u64, y as u64);
                    let err = shifted.max_deviation(&bases[(j + y) % d][(l + x) % d]);
                    report.max_shift_law_dev = report.max_shift_law_dev.max(err);
                    if err > tol {
                        let msg = format!("U_{{{x},{y}}} {} deviates by {err:.3e}", name(j, l));
                        note(&mut report, msg);
                    }
                }
            }
        }
    }
    Ok(report)
}
