//! State-vector simulation of a single prime-dimensional qudit.
//!
//! Besides the computational basis, the simulator works with the `d`
//! quadratic-phase bases
//!
//! ```text
//! |v_l^(j)> = d^{-1/2} sum_k w^{k (l + j k)} |k>,   w = exp(2 pi i / d)
//! ```
//!
//! and the diagonal unitaries `U_{x,y} = X^x Y^y` with
//! `X = sum_m w^m |m><m|` and `Y = sum_m w^{m^2} |m><m|`, which act on that
//! family as the exact index shift `|v_l^(j)> -> |v_{l+x}^(j+y)>`.
//!
//! All phase exponents are reduced modulo `d` in integer arithmetic before any
//! floating-point work, so identities hold to rounding of a single
//! `exp(2 pi i m / d)` evaluation.

mod bipartite;
mod verify;

use num_complex::Complex;
use rand::Rng;
use serde::{Serialize, Serializer};

use crate::error::{param, Error, Result};
use crate::field::is_prime;
use crate::scalar::Real;

pub use bipartite::{csum_entangle, BipartiteState};
pub use verify::{verify_mubs, MubReport};

pub(crate) fn check_dim(d: usize) -> Result<()> {
    if d < 3 || !is_prime(d as u64) {
        return Err(param("d must be an odd prime"));
    }
    Ok(())
}

/// `w^m` for every residue `m`, evaluated once per operation.
pub(crate) struct Phases<T> {
    table: Vec<Complex<T>>,
}

impl<T: Real> Phases<T> {
    pub(crate) fn new(d: usize) -> Self {
        let step = T::TAU() / T::from_f64(d as f64);
        let table = (0..d)
            .map(|m| Complex::from_polar(T::one(), step * T::from_f64(m as f64)))
            .collect();
        Phases { table }
    }

    /// `w^e` for an exponent already reduced mod d.
    #[inline]
    pub(crate) fn get(&self, e: usize) -> Complex<T> {
        self.table[e]
    }
}

/// Exponent of `w` in the `k`-th component of `|v_l^(j)>`: `k (l + j k) mod d`.
#[inline]
pub(crate) fn mub_exponent(d: usize, j: usize, l: usize, k: usize) -> usize {
    k * ((l + j * k % d) % d) % d
}

/// Exponent of `w` applied by `U_{x,y}` to `|k>`: `x k + y k^2 mod d`.
#[inline]
pub(crate) fn xy_exponent(d: usize, x: usize, y: usize, k: usize) -> usize {
    (x * k % d + y * (k * k % d) % d) % d
}

/// Basis index `j` and vector index `l` of a quadratic-phase basis vector.
/// Both wrap modulo `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct MubLabel {
    pub j: u64,
    pub l: u64,
}

impl MubLabel {
    pub fn new(d: u64, j: u64, l: u64) -> Self {
        MubLabel { j: j % d, l: l % d }
    }
}

fn sample_index<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> usize {
    let total: f64 = weights.iter().sum();
    let u = rng.random::<f64>() * total;
    let mut acc = 0.0;
    for (i, &w) in weights.iter().enumerate() {
        acc += w;
        if u < acc {
            return i;
        }
    }
    // rounding can leave u just above the final partial sum
    weights.iter().rposition(|&w| w > 0.0).unwrap_or(weights.len() - 1)
}

pub(crate) fn check_probabilities<T: Real>(weights: &[f64]) -> Result<()> {
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > T::NORM_TOL {
        return Err(Error::State(format!(
            "measurement weights sum to {total}, state is not normalized"
        )));
    }
    Ok(())
}

/// Normalized pure state of one qudit.
#[derive(Debug, Clone, PartialEq)]
pub struct QuditState<T> {
    dim: usize,
    amps: Vec<Complex<T>>,
}

impl<T: Real> QuditState<T> {
    /// Wraps `amps`, rejecting vectors whose squared norm is not one within
    /// `T::NORM_TOL`.
    pub fn new(amps: Vec<Complex<T>>) -> Result<Self> {
        let state = QuditState {
            dim: amps.len(),
            amps,
        };
        let n = state.norm_sqr();
        if (n - 1.0).abs() > T::NORM_TOL {
            return Err(Error::State(format!("squared norm {n} differs from 1")));
        }
        Ok(state)
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(amps: Vec<Complex<T>>) -> Result<Self> {
        let n: T = amps.iter().map(|a| a.norm_sqr()).fold(T::zero(), |s, v| s + v);
        if n <= T::zero() {
            return Err(Error::State("zero vector cannot be normalized".into()));
        }
        let s = n.sqrt();
        Ok(QuditState {
            dim: amps.len(),
            amps: amps.into_iter().map(|a| a / s).collect(),
        })
    }

    /// Computational basis state `|k>`.
    pub fn computational(d: usize, k: usize) -> Self {
        let mut amps = vec![Complex::new(T::zero(), T::zero()); d];
        amps[k % d] = Complex::new(T::one(), T::zero());
        QuditState { dim: d, amps }
    }

    /// `|v_l^(j)>`.
    pub fn mub_vector(d: usize, label: MubLabel) -> Result<Self> {
        check_dim(d)?;
        let (j, l) = (label.j as usize % d, label.l as usize % d);
        let phases = Phases::<T>::new(d);
        let scale = T::one() / T::from_f64(d as f64).sqrt();
        let amps = (0..d)
            .map(|k| phases.get(mub_exponent(d, j, l, k)) * scale)
            .collect();
        Ok(QuditState { dim: d, amps })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr().as_f64()).sum()
    }

    /// `<self|other>`, conjugate-linear in `self`.
    pub fn inner_product(&self, other: &QuditState<T>) -> Result<Complex<T>> {
        if self.dim != other.dim {
            return Err(param(format!(
                "dimension mismatch: {} vs {}",
                self.dim, other.dim
            )));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + a.conj() * b))
    }

    /// `U_{x,y} |self>`; `x` and `y` are taken modulo `d`.
    pub fn apply_xy(&self, x: u64, y: u64) -> Self {
        let d = self.dim;
        let (x, y) = ((x % d as u64) as usize, (y % d as u64) as usize);
        let phases = Phases::<T>::new(d);
        let amps = self
            .amps
            .iter()
            .enumerate()
            .map(|(k, &a)| a * phases.get(xy_exponent(d, x, y, k)))
            .collect();
        QuditState { dim: d, amps }
    }

    /// Outcome probabilities `|<v_l^(j)|self>|^2` for `l = 0..d`.
    pub fn mub_probabilities(&self, j: u64) -> Result<Vec<f64>> {
        check_dim(self.dim)?;
        let d = self.dim;
        let j = (j % d as u64) as usize;
        let phases = Phases::<T>::new(d);
        let inv_d = 1.0 / d as f64;
        Ok((0..d)
            .map(|l| {
                let proj = (0..d).fold(Complex::new(T::zero(), T::zero()), |acc, k| {
                    acc + phases.get(mub_exponent(d, j, l, k)).conj() * self.amps[k]
                });
                proj.norm_sqr().as_f64() * inv_d
            })
            .collect())
    }

    /// Projective measurement in basis `j`. Returns the outcome `l` and the
    /// collapsed state `|v_l^(j)>`.
    pub fn measure_mub<R: Rng + ?Sized>(&self, j: u64, rng: &mut R) -> Result<(u64, Self)> {
        let weights = self.mub_probabilities(j)?;
        check_probabilities::<T>(&weights)?;
        let l = sample_index(&weights, rng) as u64;
        let post = QuditState::mub_vector(self.dim, MubLabel::new(self.dim as u64, j, l))?;
        Ok((l, post))
    }

    pub fn measure_computational<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<(u64, Self)> {
        let weights: Vec<f64> = self.amps.iter().map(|a| a.norm_sqr().as_f64()).collect();
        check_probabilities::<T>(&weights)?;
        let k = sample_index(&weights, rng);
        Ok((k as u64, QuditState::computational(self.dim, k)))
    }

    /// Largest componentwise distance to `other`.
    pub fn max_deviation(&self, other: &QuditState<T>) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm().as_f64())
            .fold(0.0, f64::max)
    }
}

impl<T: Real> Serialize for QuditState<T> {
    /// A list of `[re, im]` pairs.
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.amps.iter().map(|a| [a.re.as_f64(), a.im.as_f64()]))
    }
}

/// `|v_l^(j)>` (free-function form).
pub fn mub_vector<T: Real>(d: usize, label: MubLabel) -> Result<QuditState<T>> {
    QuditState::mub_vector(d, label)
}

pub fn inner_product<T: Real>(a: &QuditState<T>, b: &QuditState<T>) -> Result<Complex<T>> {
    a.inner_product(b)
}

pub fn apply_xy<T: Real>(state: &QuditState<T>, x: u64, y: u64) -> QuditState<T> {
    state.apply_xy(x, y)
}

pub fn measure_mub<T: Real, R: Rng + ?Sized>(
    state: &QuditState<T>,
    j: u64,
    rng: &mut R,
) -> Result<(u64, QuditState<T>)> {
    state.measure_mub(j, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use proptest::prelude::*;
    use rand::Rng;

    type S = QuditState<f64>;

    fn v(d: usize, j: u64, l: u64) -> S {
        S::mub_vector(d, MubLabel::new(d as u64, j, l)).unwrap()
    }

    #[test]
    fn basis_zero_zero_is_uniform_superposition() {
        let s = v(3, 0, 0);
        for a in s.amplitudes() {
            assert!((a - Complex::new(1.0 / 3f64.sqrt(), 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn direct_substitution_d3_j0_l1() {
        let w = Complex::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        let expected = [Complex::new(1.0, 0.0), w, w * w];
        let s = v(3, 0, 1);
        for (a, e) in s.amplitudes().iter().zip(expected) {
            assert!((a - e / 3f64.sqrt()).norm() < 1e-12);
        }
    }

    #[test]
    fn rejects_non_prime_dimension() {
        assert!(S::mub_vector(4, MubLabel::new(4, 0, 0)).is_err());
        assert!(S::mub_vector(2, MubLabel::new(2, 0, 0)).is_err());
    }

    #[test]
    fn inner_products() {
        for d in [3usize, 5, 7] {
            for j in 0..d as u64 {
                for l in 0..d as u64 {
                    let a = v(d, j, l);
                    assert!((a.inner_product(&a).unwrap().norm() - 1.0).abs() < 1e-10);
                    for l2 in (0..d as u64).filter(|&x| x != l) {
                        assert!(a.inner_product(&v(d, j, l2)).unwrap().norm() < 1e-10);
                    }
                    for j2 in (0..d as u64).filter(|&x| x != j) {
                        for l2 in 0..d as u64 {
                            let m = a.inner_product(&v(d, j2, l2)).unwrap().norm();
                            assert!((m - 1.0 / (d as f64).sqrt()).abs() < 1e-10);
                        }
                    }
                }
            }
        }
        assert!(v(3, 0, 0).inner_product(&v(5, 0, 0)).is_err());
    }

    #[test]
    fn shift_law_examples() {
        assert!(v(5, 0, 0).apply_xy(1, 2).max_deviation(&v(5, 2, 1)) < 1e-10);
        assert!(v(5, 0, 1).apply_xy(4, 0).max_deviation(&v(5, 0, 0)) < 1e-10);
        let s = v(7, 3, 2);
        assert!(s.apply_xy(0, 0).max_deviation(&s) < 1e-15);
    }

    #[test]
    fn shift_law_exhaustive_d5() {
        let d = 5;
        for j in 0..5 {
            for l in 0..5 {
                let s = v(d, j, l);
                for x in 0..5 {
                    for y in 0..5 {
                        assert!(s.apply_xy(x, y).max_deviation(&v(d, j + y, l + x)) < 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn eigenstate_measurement_is_certain_and_idempotent() {
        let mut rng = seeded(3);
        let s = v(5, 1, 2);
        for _ in 0..20 {
            let (l, post) = s.measure_mub(1, &mut rng).unwrap();
            assert_eq!(l, 2);
            let (l2, _) = post.measure_mub(1, &mut rng).unwrap();
            assert_eq!(l2, 2);
        }
    }

    #[test]
    fn wrong_basis_measurement_is_uniform() {
        // binomial(10^4, 0.2) per outcome: 3 sigma = 120
        let mut rng = seeded(11);
        let s = v(5, 0, 0);
        let mut counts = [0i64; 5];
        for _ in 0..10_000 {
            counts[s.measure_mub(1, &mut rng).unwrap().0 as usize] += 1;
        }
        for c in counts {
            assert!((c - 2000).abs() <= 120, "{counts:?}");
        }
    }

    #[test]
    fn measurement_is_deterministic_per_seed() {
        let s = v(7, 2, 0);
        let run = |seed| {
            let mut rng = seeded(seed);
            (0..32).map(|_| s.measure_mub(5, &mut rng).unwrap().0).collect::<Vec<_>>()
        };
        assert_eq!(run(99), run(99));
    }

    #[test]
    fn unnormalized_state_is_rejected() {
        let bad = S {
            dim: 3,
            amps: vec![Complex::new(1.0, 0.0); 3],
        };
        assert!(matches!(bad.measure_mub(0, &mut seeded(0)), Err(Error::State(_))));
        assert!(S::new(vec![Complex::new(1.0, 0.0); 3]).is_err());
    }

    #[test]
    fn serializes_as_re_im_pairs() {
        let s = S::computational(3, 1);
        assert_eq!(serde_json::to_string(&s).unwrap(), "[[0.0,0.0],[1.0,0.0],[0.0,0.0]]");
    }

    #[test]
    fn single_precision_shift_law() {
        let a = QuditState::<f32>::mub_vector(7, MubLabel::new(7, 2, 3)).unwrap();
        let b = QuditState::<f32>::mub_vector(7, MubLabel::new(7, 6, 4)).unwrap();
        assert!(a.apply_xy(1, 4).max_deviation(&b) < f32::IDENTITY_TOL);
    }

    fn random_state(d: usize, seed: u64) -> S {
        let mut rng = seeded(seed);
        let amps = (0..d)
            .map(|_| Complex::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect();
        S::normalized(amps).unwrap()
    }

    proptest! {
        #[test]
        fn composition_and_unitarity(seed in any::<u64>(), x1 in 0u64..11, y1 in 0u64..11, x2 in 0u64..11, y2 in 0u64..11) {
            let s = random_state(11, seed);
            let two_step = s.apply_xy(x1, y1).apply_xy(x2, y2);
            let one_step = s.apply_xy(x1 + x2, y1 + y2);
            prop_assert!(two_step.max_deviation(&one_step) < 1e-10);
            prop_assert!((two_step.norm_sqr() - 1.0).abs() < 1e-10);
        }

        #[test]
        fn probabilities_form_a_distribution(seed in any::<u64>(), j in 0u64..7) {
            let p = random_state(7, seed).mub_probabilities(j).unwrap();
            prop_assert!(p.iter().all(|&w| w >= 0.0));
            prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }
    }
}
