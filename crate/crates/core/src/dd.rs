//! Double description method for pointed polyhedral cones.
//!
//! The cone is `{y : <a_k, y> >= 0}` for integer rows `a_k`. Rays are kept as
//! primitive integer vectors, so every step is exact and no rationals are
//! created inside the main loop. Adjacency uses the combinatorial test: two
//! rays are adjacent iff no third ray is tight on every row on which both
//! are tight.

use fixedbitset::FixedBitSet;
use num_integer::Integer as _;
use num_traits::{Signed, Zero};

use crate::exact::{integral_primitive_row, Integer, RatMatrix, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum ConeError {
    /// The rows have rank below the ambient dimension, so the cone contains a
    /// line.
    NotPointed,
}

struct Ray {
    v: Vec<Integer>,
    zeros: FixedBitSet,
}

fn dot(a: &[Integer], b: &[Integer]) -> Integer {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn make_primitive(mut v: Vec<Integer>) -> Vec<Integer> {
    let g = v.iter().fold(Integer::zero(), |g, c| g.gcd(c));
    if !g.is_zero() && g != Integer::from(1) {
        for c in v.iter_mut() {
            *c = &*c / &g;
        }
    }
    v
}

fn to_rational_row(row: &[Integer]) -> Vec<Rational> {
    row.iter().map(|x| Rational::from_integer(x.clone())).collect()
}

/// Greedily pick `dim` linearly independent rows in input order.
fn initial_basis(rows: &[Vec<Integer>], dim: usize) -> Option<Vec<usize>> {
    let mut chosen = Vec::with_capacity(dim);
    let mut basis = RatMatrix::empty(dim);
    for (i, row) in rows.iter().enumerate() {
        if row.iter().all(Zero::is_zero) {
            continue;
        }
        let mut trial = basis.clone();
        trial.push_row(to_rational_row(row)).ok()?;
        if trial.rank() > chosen.len() {
            basis = trial;
            chosen.push(i);
            if chosen.len() == dim {
                return Some(chosen);
            }
        }
    }
    None
}

/// Extreme rays of the pointed cone `{y : <row, y> >= 0 for all rows}`,
/// sorted lexicographically. An empty result means the cone is `{0}`.
pub(crate) fn extreme_rays(
    rows: &[Vec<Integer>],
    dim: usize,
) -> Result<Vec<Vec<Integer>>, ConeError> {
    let m = rows.len();
    let basis = initial_basis(rows, dim).ok_or(ConeError::NotPointed)?;
    let bmat = RatMatrix::from_rows(dim, basis.iter().map(|&i| to_rational_row(&rows[i])).collect())
        .expect("rows share the ambient dimension");

    let mut processed = FixedBitSet::with_capacity(m);
    for &i in &basis {
        processed.insert(i);
    }

    let mut rays: Vec<Ray> = Vec::with_capacity(dim);
    for j in 0..dim {
        let mut e = vec![Rational::zero(); dim];
        e[j] = Rational::from_integer(1.into());
        let y = bmat.solve(&e).expect("initial basis is invertible");
        let v = integral_primitive_row(&y);
        let mut zeros = FixedBitSet::with_capacity(m);
        for (k, &i) in basis.iter().enumerate() {
            if k != j {
                zeros.insert(i);
            }
        }
        rays.push(Ray { v, zeros });
    }

    for (idx, row) in rows.iter().enumerate() {
        if processed.contains(idx) {
            continue;
        }
        processed.insert(idx);
        if rays.is_empty() {
            continue;
        }
        let vals: Vec<Integer> = rays.iter().map(|r| dot(row, &r.v)).collect();
        let plus: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let minus: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();

        if minus.is_empty() {
            for (r, val) in rays.iter_mut().zip(&vals) {
                if val.is_zero() {
                    r.zeros.insert(idx);
                }
            }
            continue;
        }

        let mut fresh: Vec<Ray> = Vec::new();
        for &p in &plus {
            for &q in &minus {
                let mut common = rays[p].zeros.clone();
                common.intersect_with(&rays[q].zeros);
                let blocked = rays.iter().enumerate().any(|(k, r)| {
                    k != p && k != q && common.is_subset(&r.zeros)
                });
                if blocked {
                    continue;
                }
                let a = &vals[p];
                let b = -&vals[q];
                let v: Vec<Integer> = rays[q]
                    .v
                    .iter()
                    .zip(&rays[p].v)
                    .map(|(x, y)| a * x + &b * y)
                    .collect();
                let v = make_primitive(v);
                let mut zeros = common;
                zeros.insert(idx);
                fresh.push(Ray { v, zeros });
            }
        }

        let mut next: Vec<Ray> = Vec::with_capacity(rays.len() + fresh.len());
        for (r, val) in rays.into_iter().zip(&vals) {
            if val.is_negative() {
                continue;
            }
            let mut r = r;
            if val.is_zero() {
                r.zeros.insert(idx);
            }
            next.push(r);
        }
        next.extend(fresh);
        rays = next;
    }

    let mut out: Vec<Vec<Integer>> = rays.into_iter().map(|r| r.v).collect();
    out.sort();
    out.dedup();
    Ok(out)
}
