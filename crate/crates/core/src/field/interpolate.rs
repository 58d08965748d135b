use std::collections::HashSet;

use super::FieldElement;
use crate::error::{param, Result};

/// Lagrange basis weights at zero: `w_i = prod_{k != i} x_k / (x_k - x_i)`.
pub fn lagrange_weights_at_zero(xs: &[FieldElement]) -> Result<Vec<FieldElement>> {
    if xs.is_empty() {
        return Err(param("interpolation needs at least one point"));
    }
    let mut seen = HashSet::new();
    for &x in xs {
        if x.is_zero() {
            return Err(param("interpolation point x = 0 is not allowed"));
        }
        if !seen.insert(x) {
            return Err(param(format!("duplicate interpolation point x = {x}")));
        }
    }
    let one = xs[0].pow(0);
    let weights = xs
        .iter()
        .enumerate()
        .map(|(i, &xi)| {
            let (num, den) = xs
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != i)
                .fold((one, one), |(num, den), (_, &xk)| (num * xk, den * (xk - xi)));
            num * den.inverse().expect("distinct points give a nonzero denominator")
        })
        .collect();
    Ok(weights)
}

/// Value at zero of the unique polynomial of degree `< points.len()` through
/// `points`.
pub fn lagrange_at_zero(points: &[(FieldElement, FieldElement)]) -> Result<FieldElement> {
    let xs: Vec<FieldElement> = points.iter().map(|p| p.0).collect();
    let weights = lagrange_weights_at_zero(&xs)?;
    Ok(points
        .iter()
        .zip(weights)
        .map(|(&(_, q), w)| q * w)
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{BivariatePolynomial, PrimeField, SchemeParams};
    use crate::rng::seeded;

    #[test]
    fn worked_example() {
        let f = PrimeField::new(5).unwrap();
        let pts = [(f.elem(1), f.elem(3)), (f.elem(2), f.elem(0))];
        assert_eq!(lagrange_at_zero(&pts).unwrap().value(), 1);
    }

    #[test]
    fn single_point_is_constant() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(lagrange_at_zero(&[(f.elem(3), f.elem(6))]).unwrap().value(), 6);
    }

    #[test]
    fn rejects_bad_points() {
        let f = PrimeField::new(7).unwrap();
        assert!(lagrange_at_zero(&[]).is_err());
        assert!(lagrange_at_zero(&[(f.elem(0), f.elem(1)), (f.elem(1), f.elem(1))]).is_err());
        assert!(lagrange_at_zero(&[(f.elem(2), f.elem(1)), (f.elem(2), f.elem(3))]).is_err());
    }

    #[test]
    fn recovers_constant_term_of_bivariate_polynomial() {
        let params = SchemeParams::new(7, 3, 6, None).unwrap();
        let f = params.field();
        let mut rng = seeded(77);
        for trial in 0..100 {
            let poly = BivariatePolynomial::random(&params, &mut rng);
            let idx = [1 + trial % 4, 5, 6];
            let pts: Vec<_> = idx
                .iter()
                .map(|&i| {
                    let x = params.point(i).unwrap();
                    (x, poly.eval(x, f.zero()))
                })
                .collect();
            assert_eq!(lagrange_at_zero(&pts).unwrap(), poly.constant_term());
        }
    }

    #[test]
    fn exact_for_every_linear_polynomial_at_d3() {
        // all polynomials c0 + c1 x over F_3, all pairs of distinct nonzero points
        let f = PrimeField::new(3).unwrap();
        for c0 in f.elements() {
            for c1 in f.elements() {
                let p = |x: FieldElement| c0 + c1 * x;
                let (a, b) = (f.elem(1), f.elem(2));
                assert_eq!(lagrange_at_zero(&[(a, p(a)), (b, p(b))]).unwrap(), c0);
                assert_eq!(lagrange_at_zero(&[(b, p(b)), (a, p(a))]).unwrap(), c0);
            }
        }
    }
}
