use std::collections::HashSet;

use serde::Serialize;

use super::{BivariatePolynomial, FieldElement, Polynomial, PrimeField};
use crate::error::{param, Result};

/// Public parameters of a (t, n) scheme over F_d.
///
/// Participants are numbered `1..=n`; participant `i` owns public point
/// `public_points[i - 1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemeParams {
    field: PrimeField,
    t: usize,
    n: usize,
    public_points: Vec<FieldElement>,
}

#[derive(Serialize)]
struct ParamsRepr<'a> {
    d: u64,
    t: usize,
    n: usize,
    public_points: &'a [FieldElement],
}

impl Serialize for SchemeParams {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ParamsRepr {
            d: self.d(),
            t: self.t,
            n: self.n,
            public_points: &self.public_points,
        }
        .serialize(serializer)
    }
}

impl SchemeParams {
    /// Validates `(d, t, n)` and the public points. `points = None` selects
    /// `x_i = i`.
    pub fn new(d: u64, t: usize, n: usize, points: Option<&[u64]>) -> Result<Self> {
        let field = PrimeField::new(d)?;
        if t < 2 {
            return Err(param("t must be at least 2"));
        }
        if t > n {
            return Err(param("t must not exceed n"));
        }
        if n as u64 > d - 1 {
            return Err(param("n must not exceed d - 1"));
        }
        let raw: Vec<u64> = match points {
            Some(p) => p.to_vec(),
            None => (1..=n as u64).collect(),
        };
        if raw.len() != n {
            return Err(param(format!("expected {n} public points, got {}", raw.len())));
        }
        let mut seen = HashSet::new();
        for &x in &raw {
            if x == 0 || x >= d {
                return Err(param(format!("public point {x} must lie in 1..{d}")));
            }
            if !seen.insert(x) {
                return Err(param(format!("public point {x} is repeated")));
            }
        }
        Ok(SchemeParams {
            field,
            t,
            n,
            public_points: raw.into_iter().map(|x| field.elem(x)).collect(),
        })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn d(&self) -> u64 {
        self.field.modulus()
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn public_points(&self) -> &[FieldElement] {
        &self.public_points
    }

    /// Public point of participant `i` (1-based).
    pub fn point(&self, i: usize) -> Result<FieldElement> {
        self.check_index(i)?;
        Ok(self.public_points[i - 1])
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.n {
            return Err(param(format!("participant index {i} outside 1..={}", self.n)));
        }
        Ok(())
    }
}

/// A participant's pair of univariate restrictions of F.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Share {
    pub owner: usize,
    /// `F(x_i, y)` in y.
    pub row_poly: Polynomial,
    /// `F(x, x_i)` in x.
    pub col_poly: Polynomial,
}

impl Share {
    /// `F(x_i, y)`.
    pub fn row_eval(&self, y: FieldElement) -> FieldElement {
        self.row_poly.eval(y)
    }

    /// `F(x, x_i)`.
    pub fn col_eval(&self, x: FieldElement) -> FieldElement {
        self.col_poly.eval(x)
    }

    /// Key for traffic from this participant to `other`: `F(x_i, x_other)`.
    pub fn key_to(&self, params: &SchemeParams, other: usize) -> Result<PairwiseKey> {
        self.check_other(other)?;
        let xj = params.point(other)?;
        Ok(PairwiseKey {
            holder_pair: (self.owner, other),
            key: self.row_eval(xj),
        })
    }

    /// Key for traffic from `other` to this participant: `F(x_other, x_i)`.
    pub fn key_from(&self, params: &SchemeParams, other: usize) -> Result<PairwiseKey> {
        self.check_other(other)?;
        let xj = params.point(other)?;
        Ok(PairwiseKey {
            holder_pair: (other, self.owner),
            key: self.col_eval(xj),
        })
    }

    fn check_other(&self, other: usize) -> Result<()> {
        if other == self.owner {
            return Err(param("a participant has no pairwise key with itself"));
        }
        Ok(())
    }
}

/// Key `F(x_i, x_j)` protecting messages sent from `i` to `j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PairwiseKey {
    pub holder_pair: (usize, usize),
    pub key: FieldElement,
}

pub fn share_generate(poly: &BivariatePolynomial, params: &SchemeParams, i: usize) -> Result<Share> {
    let xi = params.point(i)?;
    Ok(Share {
        owner: i,
        row_poly: poly.restrict_x(xi),
        col_poly: poly.restrict_y(xi),
    })
}

/// Sender-side key from `share.owner` to `other`.
pub fn pairwise_key(share: &Share, params: &SchemeParams, other: usize) -> Result<PairwiseKey> {
    share.key_to(params, other)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use proptest::prelude::*;

    fn worked() -> (SchemeParams, BivariatePolynomial) {
        let params = SchemeParams::new(5, 2, 3, None).unwrap();
        let poly = BivariatePolynomial::from_matrix(params.field(), &[vec![1, 3], vec![2, 4]]).unwrap();
        (params, poly)
    }

    fn values(p: &Polynomial) -> Vec<u64> {
        p.coeffs().iter().map(|c| c.value()).collect()
    }

    #[test]
    fn params_validation() {
        assert!(SchemeParams::new(4, 2, 3, None).is_err());
        assert!(SchemeParams::new(5, 1, 3, None).is_err());
        assert!(SchemeParams::new(5, 6, 3, None).is_err());
        assert!(SchemeParams::new(5, 2, 5, None).is_err());
        assert!(SchemeParams::new(5, 2, 2, Some(&[1, 1])).is_err());
        assert!(SchemeParams::new(5, 2, 2, Some(&[0, 1])).is_err());
        assert!(SchemeParams::new(5, 2, 2, Some(&[1, 5])).is_err());
        assert!(SchemeParams::new(5, 2, 2, Some(&[1])).is_err());
        assert!(SchemeParams::new(5, 2, 4, Some(&[4, 3, 2, 1])).is_ok());
        let msg = SchemeParams::new(4, 2, 3, None).unwrap_err().to_string();
        assert_eq!(msg, "d must be an odd prime");
    }

    #[test]
    fn worked_example_shares() {
        let (params, poly) = worked();
        let s1 = share_generate(&poly, &params, 1).unwrap();
        let s2 = share_generate(&poly, &params, 2).unwrap();
        assert_eq!(values(&s1.row_poly), vec![3, 2]);
        assert_eq!(values(&s2.row_poly), vec![0, 1]);
        // F(x, 1) = (1 + 3) + (2 + 4) x
        assert_eq!(values(&s1.col_poly), vec![4, 1]);
        assert!(share_generate(&poly, &params, 0).is_err());
        assert!(share_generate(&poly, &params, 4).is_err());
    }

    #[test]
    fn zero_polynomial_gives_zero_shares_and_keys() {
        let params = SchemeParams::new(7, 3, 4, None).unwrap();
        let poly = BivariatePolynomial::zero(params.field(), 3);
        for i in 1..=4 {
            let s = share_generate(&poly, &params, i).unwrap();
            assert!(s.row_poly.coeffs().iter().all(|c| c.is_zero()));
            assert!(s.col_poly.coeffs().iter().all(|c| c.is_zero()));
            for j in (1..=4).filter(|&j| j != i) {
                assert!(pairwise_key(&s, &params, j).unwrap().key.is_zero());
            }
        }
    }

    #[test]
    fn worked_example_key() {
        let (params, poly) = worked();
        let s1 = share_generate(&poly, &params, 1).unwrap();
        let s2 = share_generate(&poly, &params, 2).unwrap();
        let k = pairwise_key(&s1, &params, 2).unwrap();
        assert_eq!(k.key.value(), 2);
        assert_eq!(k.holder_pair, (1, 2));
        assert_eq!(s2.key_from(&params, 1).unwrap(), k);
        assert!(pairwise_key(&s1, &params, 1).is_err());
    }

    #[test]
    fn key_agreement_over_random_polynomials() {
        let params = SchemeParams::new(7, 3, 6, None).unwrap();
        let mut rng = seeded(2024);
        for _ in 0..100 {
            let poly = BivariatePolynomial::random(&params, &mut rng);
            let shares: Vec<Share> = (1..=6).map(|i| share_generate(&poly, &params, i).unwrap()).collect();
            for si in &shares {
                let xi = params.point(si.owner).unwrap();
                assert_eq!(si.row_eval(xi), si.col_eval(xi));
                for sj in shares.iter().filter(|s| s.owner != si.owner) {
                    let xj = params.point(sj.owner).unwrap();
                    let sent = si.key_to(&params, sj.owner).unwrap();
                    let recv = sj.key_from(&params, si.owner).unwrap();
                    assert_eq!(sent, recv);
                    assert_eq!(sent.key, poly.eval(xi, xj));
                }
            }
        }
    }

    proptest! {
        #[test]
        fn share_cross_consistency(seed in any::<u64>(), i in 1usize..=4) {
            let params = SchemeParams::new(11, 4, 4, None).unwrap();
            let poly = BivariatePolynomial::random(&params, &mut seeded(seed));
            let share = share_generate(&poly, &params, i).unwrap();
            let xi = params.point(i).unwrap();
            prop_assert_eq!(share.row_eval(xi), share.col_eval(xi));
            prop_assert_eq!(share.row_eval(xi), poly.eval(xi, xi));
        }
    }
}
