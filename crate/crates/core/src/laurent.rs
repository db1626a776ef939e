use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{IntVector, Rational};

/// A Laurent polynomial `Σ a_m x^m` with exact rational coefficients.
///
/// Zero coefficients are never stored, so the key set is the support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPolynomial {
    n: usize,
    terms: BTreeMap<IntVector, Rational>,
}

impl LaurentPolynomial {
    pub fn zero(n: usize) -> Self {
        LaurentPolynomial {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (IntVector, Rational)>,
    {
        let mut p = Self::zero(n);
        for (m, a) in terms {
            p.add_term(m, a)?;
        }
        Ok(p)
    }

    pub fn monomial(m: IntVector, a: Rational) -> Self {
        let mut p = Self::zero(m.dim());
        if !a.is_zero() {
            p.terms.insert(m, a);
        }
        p
    }

    pub fn add_term(&mut self, m: IntVector, a: Rational) -> Result<()> {
        if m.dim() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: m.dim(),
            });
        }
        if a.is_zero() {
            return Ok(());
        }
        let slot = self.terms.entry(m).or_insert_with(Rational::zero);
        *slot += a;
        if slot.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
        Ok(())
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &IntVector) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Terms in lexicographic exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&IntVector, &Rational)> {
        self.terms.iter()
    }

    pub fn support(&self) -> Vec<IntVector> {
        self.terms.keys().cloned().collect()
    }

    pub fn add(&self, other: &LaurentPolynomial) -> Result<LaurentPolynomial> {
        let mut out = self.clone();
        for (m, a) in other.terms() {
            out.add_term(m.clone(), a.clone())?;
        }
        Ok(out)
    }

    pub fn scale(&self, k: &Rational) -> LaurentPolynomial {
        if k.is_zero() {
            return Self::zero(self.n);
        }
        LaurentPolynomial {
            n: self.n,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * k)).collect(),
        }
    }

    /// Keep the terms whose exponent satisfies `keep`.
    pub fn filter<F: Fn(&IntVector) -> bool>(&self, keep: F) -> LaurentPolynomial {
        LaurentPolynomial {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, a)| (m.clone(), a.clone()))
                .collect(),
        }
    }
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, a)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if m.is_zero() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "x^{m}")?;
            } else {
                write!(f, "{a}*x^{m}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(x: i64) -> Rational {
        Rational::from_integer(x.into())
    }

    #[test]
    fn cancellation_removes_terms() {
        let mut p = LaurentPolynomial::zero(2);
        p.add_term(IntVector::from_i64s(&[1, 0]), q(3)).unwrap();
        p.add_term(IntVector::from_i64s(&[1, 0]), q(-3)).unwrap();
        assert!(p.is_zero());
    }

    #[test]
    fn wrong_arity_is_rejected() {
        let mut p = LaurentPolynomial::zero(2);
        assert!(p.add_term(IntVector::from_i64s(&[1]), q(1)).is_err());
    }

    #[test]
    fn display_is_lexicographic() {
        let p = LaurentPolynomial::from_terms(
            2,
            [
                (IntVector::from_i64s(&[0, 1]), q(2)),
                (IntVector::from_i64s(&[-1, 0]), q(1)),
            ],
        )
        .unwrap();
        assert_eq!(p.to_string(), "x^(-1,0) + 2*x^(0,1)");
    }
}
