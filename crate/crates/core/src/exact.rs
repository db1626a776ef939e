//! Exact scalars, lattice vectors and rational linear algebra.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Integer = BigInt;
pub type Rational = BigRational;

/// A point of the lattice `M` or `N`, depending on context.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntVector(pub Vec<Integer>);

impl IntVector {
    pub fn new(coords: Vec<Integer>) -> Self {
        IntVector(coords)
    }

    pub fn from_i64s(coords: &[i64]) -> Self {
        IntVector(coords.iter().map(|&c| Integer::from(c)).collect())
    }

    pub fn zero(n: usize) -> Self {
        IntVector(vec![Integer::zero(); n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Self::zero(n);
        v.0[i] = Integer::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Integer] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn pairing(&self, other: &IntVector) -> Result<Integer> {
        check_len(self.dim(), other.dim())?;
        Ok(self.dot(other))
    }

    /// Dot product without the length check, for hot loops over vectors
    /// already known to share an ambient lattice.
    pub(crate) fn dot(&self, other: &IntVector) -> Integer {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn pairing_rational(&self, other: &RatVector) -> Result<Rational> {
        check_len(self.dim(), other.dim())?;
        Ok(self
            .0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| b * Rational::from_integer(a.clone()))
            .sum())
    }

    pub fn content(&self) -> Integer {
        self.0.iter().fold(Integer::zero(), |g, c| g.gcd(c))
    }

    pub fn primitive(&self) -> Result<IntVector> {
        if self.is_zero() {
            return Err(Error::ZeroVector);
        }
        let g = self.content();
        Ok(IntVector(self.0.iter().map(|c| c / &g).collect()))
    }

    pub fn add(&self, other: &IntVector) -> IntVector {
        IntVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &IntVector) -> IntVector {
        IntVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> IntVector {
        IntVector(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: &Integer) -> IntVector {
        IntVector(self.0.iter().map(|a| a * k).collect())
    }

    pub fn to_rational(&self) -> RatVector {
        RatVector(
            self.0
                .iter()
                .map(|a| Rational::from_integer(a.clone()))
                .collect(),
        )
    }

    /// Small-integer view, used by tests and the JSON layer.
    pub fn to_i64s(&self) -> Option<Vec<i64>> {
        self.0.iter().map(|c| i64::try_from(c).ok()).collect()
    }
}

impl From<Vec<i64>> for IntVector {
    fn from(v: Vec<i64>) -> Self {
        IntVector::from_i64s(&v)
    }
}

impl fmt::Display for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RatVector(pub Vec<Rational>);

impl RatVector {
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|c| c.is_integer())
    }

    pub fn to_integral(&self) -> Option<IntVector> {
        self.is_integral()
            .then(|| IntVector(self.0.iter().map(|c| c.to_integer()).collect()))
    }
}

impl fmt::Display for RatVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}

/// The dual pairing `<m, nu>` between `M` and `N`.
pub fn pairing(m: &IntVector, nu: &IntVector) -> Result<Integer> {
    m.pairing(nu)
}

/// `v` divided by the gcd of its entries.
pub fn primitive(v: &IntVector) -> Result<IntVector> {
    v.primitive()
}

/// Dense row-major matrix over `Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    cols: usize,
    rows: Vec<Vec<Rational>>,
}

impl RatMatrix {
    pub fn empty(cols: usize) -> Self {
        RatMatrix {
            cols,
            rows: Vec::new(),
        }
    }

    pub fn from_rows(cols: usize, rows: Vec<Vec<Rational>>) -> Result<Self> {
        for r in &rows {
            check_len(cols, r.len())?;
        }
        Ok(RatMatrix { cols, rows })
    }

    pub fn from_i64_rows(cols: usize, rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(
            cols,
            rows.iter()
                .map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect())
                .collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { Rational::one() } else { Rational::zero() })
                    .collect()
            })
            .collect();
        RatMatrix { cols: n, rows }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            cols,
            rows: vec![vec![Rational::zero(); cols]; rows],
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn push_row(&mut self, row: Vec<Rational>) -> Result<()> {
        check_len(self.cols, row.len())?;
        self.rows.push(row);
        Ok(())
    }

    pub fn transpose(&self) -> RatMatrix {
        let rows = (0..self.cols)
            .map(|j| self.rows.iter().map(|r| r[j].clone()).collect())
            .collect();
        RatMatrix {
            cols: self.rows.len(),
            rows,
        }
    }

    pub fn stack(&self, other: &RatMatrix) -> Result<RatMatrix> {
        check_len(self.cols, other.cols)?;
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Ok(RatMatrix {
            cols: self.cols,
            rows,
        })
    }

    /// Reduced row echelon form and the pivot columns. Zero rows are dropped,
    /// so the result is the canonical basis of the row space.
    pub fn rref(&self) -> (RatMatrix, Vec<usize>) {
        let mut m = self.rows.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == m.len() {
                break;
            }
            let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(r, p);
            let inv = m[r][c].recip();
            for x in m[r].iter_mut() {
                *x *= &inv;
            }
            let pivot_row = m[r].clone();
            for (i, row) in m.iter_mut().enumerate() {
                if i == r || row[c].is_zero() {
                    continue;
                }
                let factor = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row).skip(c) {
                    *x -= &factor * p;
                }
            }
            pivots.push(c);
            r += 1;
        }
        m.truncate(r);
        (
            RatMatrix {
                cols: self.cols,
                rows: m,
            },
            pivots,
        )
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis (as rows) of `{x : x * self = 0}`.
    pub fn left_nullspace(&self) -> RatMatrix {
        self.transpose().nullspace()
    }

    /// Basis (as rows) of `{x : self * x = 0}`.
    pub fn nullspace(&self) -> RatMatrix {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let rows = free
            .iter()
            .map(|&fc| {
                let mut v = vec![Rational::zero(); self.cols];
                v[fc] = Rational::one();
                for (row, &pc) in r.rows.iter().zip(&pivots) {
                    v[pc] = -row[fc].clone();
                }
                v
            })
            .collect();
        RatMatrix {
            cols: self.cols,
            rows,
        }
    }

    /// Solve `self * x = b` for square invertible `self`.
    pub fn solve(&self, b: &[Rational]) -> Option<Vec<Rational>> {
        let n = self.cols;
        if self.rows.len() != n || b.len() != n {
            return None;
        }
        let aug = RatMatrix {
            cols: n + 1,
            rows: self
                .rows
                .iter()
                .zip(b)
                .map(|(r, bi)| {
                    let mut r = r.clone();
                    r.push(bi.clone());
                    r
                })
                .collect(),
        };
        let (r, pivots) = aug.rref();
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return None;
        }
        Some(r.rows.iter().map(|row| row[n].clone()).collect())
    }
}

/// Canonical basis of `rowspan(a) ∩ rowspan(b)`, as reduced echelon rows.
pub fn span_intersection(a: &RatMatrix, b: &RatMatrix) -> Result<RatMatrix> {
    check_len(a.cols, b.cols)?;
    let a = a.rref().0;
    let b = b.rref().0;
    // x*a = y*b  <=>  (x, -y) lies in the left nullspace of [a; b].
    let relations = a.stack(&b)?.left_nullspace();
    let mut out = RatMatrix::empty(a.cols);
    for rel in relations.rows() {
        let mut v = vec![Rational::zero(); a.cols];
        for (coef, row) in rel.iter().zip(a.rows()) {
            if coef.is_zero() {
                continue;
            }
            for (x, y) in v.iter_mut().zip(row) {
                *x += coef * y;
            }
        }
        out.rows.push(v);
    }
    Ok(out.rref().0)
}

/// Clear denominators and divide by the content, keeping the sign.
pub(crate) fn integral_primitive_row(row: &[Rational]) -> Vec<Integer> {
    let lcm = row
        .iter()
        .fold(Integer::one(), |l, x| l.lcm(x.denom()));
    let ints: Vec<Integer> = row
        .iter()
        .map(|x| x.numer() * (&lcm / x.denom()))
        .collect();
    let g = ints.iter().fold(Integer::zero(), |g, c| g.gcd(c));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|c| c / &g).collect()
}

pub(crate) fn ceil(r: &Rational) -> Integer {
    r.ceil().to_integer()
}

pub(crate) fn floor(r: &Rational) -> Integer {
    r.floor().to_integer()
}
