use rand::Rng;
use serde::{Serialize, Serializer};

use super::{FieldElement, PrimeField, SchemeParams};
use crate::error::{param, Result};

/// Univariate polynomial over F_d; `coeffs[k]` multiplies `z^k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Polynomial {
    coeffs: Vec<FieldElement>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<FieldElement>) -> Self {
        assert!(!coeffs.is_empty(), "polynomial needs at least one coefficient");
        Polynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    /// Horner evaluation.
    pub fn eval(&self, z: FieldElement) -> FieldElement {
        let mut acc = FieldElement { value: 0, modulus: z.modulus() };
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }
}

/// Bivariate polynomial `F(x, y) = sum a_ij x^i y^j mod d`, degree `t - 1` in
/// each variable. `coeffs[i][j]` is `a_ij`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BivariatePolynomial {
    field: PrimeField,
    coeffs: Vec<Vec<FieldElement>>,
}

impl Serialize for BivariatePolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs.serialize(serializer)
    }
}

impl BivariatePolynomial {
    /// Samples every coefficient uniformly, row by row. Symmetry is neither
    /// enforced nor excluded.
    pub fn random<R: Rng + ?Sized>(params: &SchemeParams, rng: &mut R) -> Self {
        let field = params.field();
        let t = params.t();
        let coeffs = (0..t)
            .map(|_| (0..t).map(|_| field.random(rng)).collect())
            .collect();
        BivariatePolynomial { field, coeffs }
    }

    /// Builds a polynomial from a square integer matrix (entries reduced mod d).
    pub fn from_matrix(field: PrimeField, rows: &[Vec<u64>]) -> Result<Self> {
        let t = rows.len();
        if t == 0 || rows.iter().any(|r| r.len() != t) {
            return Err(param("coefficient matrix must be square and non-empty"));
        }
        let coeffs = rows
            .iter()
            .map(|r| r.iter().map(|&v| field.elem(v)).collect())
            .collect();
        Ok(BivariatePolynomial { field, coeffs })
    }

    pub fn zero(field: PrimeField, t: usize) -> Self {
        BivariatePolynomial {
            field,
            coeffs: vec![vec![field.zero(); t]; t],
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    /// Number of coefficients per variable (the threshold `t`).
    pub fn size(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, i: usize, j: usize) -> FieldElement {
        self.coeffs[i][j]
    }

    pub fn rows(&self) -> &[Vec<FieldElement>] {
        &self.coeffs
    }

    pub fn constant_term(&self) -> FieldElement {
        self.coeffs[0][0]
    }

    pub fn eval(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        self.restrict_x(x).eval(y)
    }

    /// `F(x0, ·)` as a polynomial in y.
    pub fn restrict_x(&self, x0: FieldElement) -> Polynomial {
        let t = self.size();
        let mut out = vec![self.field.zero(); t];
        let mut xp = self.field.one();
        for row in &self.coeffs {
            for (acc, &a) in out.iter_mut().zip(row) {
                *acc += a * xp;
            }
            xp = xp * x0;
        }
        Polynomial::new(out)
    }

    /// `F(·, y0)` as a polynomial in x.
    pub fn restrict_y(&self, y0: FieldElement) -> Polynomial {
        let out = self
            .coeffs
            .iter()
            .map(|row| Polynomial::new(row.clone()).eval(y0))
            .collect();
        Polynomial::new(out)
    }
}
