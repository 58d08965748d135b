//! Exact arithmetic over the prime field F_d and the classical share
//! machinery built on it.

mod interpolate;
mod otp;
mod poly;
mod share;

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use rand::Rng;
use serde::{Serialize, Serializer};

use crate::error::{param, Result};

pub use interpolate::{lagrange_at_zero, lagrange_weights_at_zero};
pub use otp::{otp_decrypt, otp_encrypt};
pub use poly::{BivariatePolynomial, Polynomial};
pub use share::{pairwise_key, share_generate, PairwiseKey, SchemeParams, Share};

/// Largest modulus accepted; keeps every product of two residues inside `u64`.
pub const MAX_MODULUS: u64 = u32::MAX as u64;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut k = 3u64;
    while k * k <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 2;
    }
    true
}

/// The field F_d for an odd prime `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    modulus: u64,
}

impl PrimeField {
    pub fn new(d: u64) -> Result<Self> {
        if d > MAX_MODULUS || !is_prime(d) || d < 3 {
            return Err(param("d must be an odd prime"));
        }
        Ok(PrimeField { modulus: d })
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Reduces `v` into the field.
    #[inline]
    pub fn elem(&self, v: u64) -> FieldElement {
        FieldElement {
            value: v % self.modulus,
            modulus: self.modulus,
        }
    }

    /// Reduces a signed integer into the field.
    pub fn elem_i64(&self, v: i64) -> FieldElement {
        self.elem(v.rem_euclid(self.modulus as i64) as u64)
    }

    #[inline]
    pub fn zero(&self) -> FieldElement {
        self.elem(0)
    }

    #[inline]
    pub fn one(&self) -> FieldElement {
        self.elem(1)
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        self.elem(rng.random_range(0..self.modulus))
    }

    /// Uniform over the field minus `excluded`.
    pub fn random_except<R: Rng + ?Sized>(&self, rng: &mut R, excluded: FieldElement) -> FieldElement {
        let offset = rng.random_range(1..self.modulus);
        excluded + self.elem(offset)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.modulus).map(move |v| self.elem(v))
    }
}

/// A residue modulo an odd prime. Always reduced.
///
/// Elements remember their modulus; combining elements of different fields is
/// a logic error and panics.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    value: u64,
    modulus: u64,
}

impl FieldElement {
    #[inline]
    pub fn value(self) -> u64 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> u64 {
        self.modulus
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn pow(self, mut exp: u64) -> FieldElement {
        let mut base = self;
        let mut acc = FieldElement {
            value: 1 % self.modulus,
            modulus: self.modulus,
        };
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by the extended Euclidean algorithm.
    pub fn inverse(self) -> Option<FieldElement> {
        if self.value == 0 {
            return None;
        }
        let (mut r0, mut r1) = (self.modulus as i64, self.value as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Some(FieldElement {
            value: t0.rem_euclid(self.modulus as i64) as u64,
            modulus: self.modulus,
        })
    }

    #[inline]
    fn check(self, other: FieldElement) {
        assert_eq!(
            self.modulus, other.modulus,
            "field elements from different moduli"
        );
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl From<FieldElement> for u64 {
    fn from(e: FieldElement) -> u64 {
        e.value
    }
}

impl Serialize for FieldElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_u64(self.value)
    }
}

impl Add for FieldElement {
    type Output = FieldElement;
    #[inline]
    fn add(self, rhs: FieldElement) -> FieldElement {
        self.check(rhs);
        let s = self.value + rhs.value;
        FieldElement {
            value: if s >= self.modulus { s - self.modulus } else { s },
            modulus: self.modulus,
        }
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    #[inline]
    fn sub(self, rhs: FieldElement) -> FieldElement {
        self + (-rhs)
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    #[inline]
    fn neg(self) -> FieldElement {
        FieldElement {
            value: if self.value == 0 { 0 } else { self.modulus - self.value },
            modulus: self.modulus,
        }
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    #[inline]
    fn mul(self, rhs: FieldElement) -> FieldElement {
        self.check(rhs);
        FieldElement {
            value: self.value * rhs.value % self.modulus,
            modulus: self.modulus,
        }
    }
}

impl AddAssign for FieldElement {
    fn add_assign(&mut self, rhs: FieldElement) {
        *self = *self + rhs;
    }
}

impl SubAssign for FieldElement {
    fn sub_assign(&mut self, rhs: FieldElement) {
        *self = *self - rhs;
    }
}

impl std::iter::Sum for FieldElement {
    /// Panics on an empty iterator, which has no modulus to sum in; use
    /// `fold(field.zero(), ..)` when the iterator may be empty.
    fn sum<I: Iterator<Item = FieldElement>>(mut iter: I) -> FieldElement {
        let first = iter.next().expect("sum of an empty set of field elements");
        iter.fold(first, |a, b| a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rejects_non_prime_and_even_moduli() {
        for d in [0, 1, 2, 4, 9, 15, 21] {
            assert!(PrimeField::new(d).is_err(), "d={d}");
        }
        for d in [3, 5, 7, 11, 13, 101] {
            assert!(PrimeField::new(d).is_ok(), "d={d}");
        }
    }

    #[test]
    fn inverse_of_zero_is_none() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.zero().inverse(), None);
    }

    #[test]
    fn signed_reduction() {
        let f = PrimeField::new(5).unwrap();
        assert_eq!(f.elem_i64(-1).value(), 4);
        assert_eq!(f.elem_i64(-11).value(), 4);
    }

    #[test]
    #[should_panic(expected = "different moduli")]
    fn mixing_moduli_panics() {
        let a = PrimeField::new(5).unwrap().one();
        let b = PrimeField::new(7).unwrap().one();
        let _ = a + b;
    }

    #[test]
    fn random_except_never_hits_excluded() {
        let f = PrimeField::new(3).unwrap();
        let mut rng = crate::rng::seeded(1);
        for v in 0..3 {
            for _ in 0..50 {
                assert_ne!(f.random_except(&mut rng, f.elem(v)).value(), v);
            }
        }
    }

    proptest! {
        #[test]
        fn inverse_matches_fermat(d_idx in 0usize..6, v in 1u64..1000) {
            let d = [3u64, 5, 7, 11, 13, 65521][d_idx];
            let f = PrimeField::new(d).unwrap();
            let a = f.elem(v);
            prop_assume!(!a.is_zero());
            let inv = a.inverse().unwrap();
            prop_assert_eq!(inv, a.pow(d - 2));
            prop_assert_eq!((a * inv).value(), 1);
        }

        #[test]
        fn ops_agree_with_integer_arithmetic(a in 0u64..10_007, b in 0u64..10_007) {
            let f = PrimeField::new(10_007).unwrap();
            let (x, y) = (f.elem(a), f.elem(b));
            prop_assert_eq!((x + y).value(), (a + b) % 10_007);
            prop_assert_eq!((x * y).value(), a * b % 10_007);
            prop_assert_eq!((x - y).value(), (a + 10_007 - b) % 10_007);
        }
    }
}
