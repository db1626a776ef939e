//! Demazure roots of a complete fan, computed from its rays alone.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use crate::dd::extreme_rays;
use crate::error::{Error, Result};
use crate::exact::{IntVector, Integer};
use crate::fine_interior::{canonical_closure_from, fine_interior, CanonicalClosureResult, FineInteriorResult};
use crate::polytope::{Halfspace, LatticePolytope, Polytope, RationalHPolytope};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RayOrigin {
    NormalFanDelta,
    NormalFanCanonical,
    SupportSet,
}

/// Primitive, pairwise distinct rays that positively span `N_R`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RaySet {
    rays: Vec<IntVector>,
    origin: RayOrigin,
}

fn positively_spans(rays: &[IntVector], n: usize) -> bool {
    // The rays span positively iff no nonzero α has <α, n_j> >= 0 for all j.
    let rows: Vec<Vec<Integer>> = rays.iter().map(|r| r.0.clone()).collect();
    matches!(extreme_rays(&rows, n), Ok(r) if r.is_empty())
}

impl RaySet {
    pub fn new(rays: Vec<IntVector>, origin: RayOrigin) -> Result<Self> {
        let n = rays.first().ok_or(Error::EmptyInput)?.dim();
        let mut set = BTreeSet::new();
        for r in &rays {
            if r.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: r.dim(),
                });
            }
            set.insert(r.primitive()?);
        }
        let rays: Vec<IntVector> = set.into_iter().collect();
        if !positively_spans(&rays, n) {
            return Err(Error::Unbounded("root polytope unbounded".into()));
        }
        Ok(RaySet { rays, origin })
    }

    pub fn rays(&self) -> &[IntVector] {
        &self.rays
    }

    pub fn origin(&self) -> RayOrigin {
        self.origin
    }

    pub fn dim(&self) -> usize {
        self.rays[0].dim()
    }
}

/// A root `α` with `<α, n(α)> = 1` and `<α, n_j> <= 0` for every other ray.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Root {
    pub alpha: IntVector,
    pub distinguished_ray: IntVector,
}

/// All roots, sorted by `α`. Each ray contributes the lattice points of the
/// polytope `{α : <α, n_i> = 1, <α, n_j> <= 0 for j != i}`.
pub fn roots(set: &RaySet) -> Result<Vec<Root>> {
    let n = set.dim();
    let mut out = Vec::new();
    for (i, ni) in set.rays.iter().enumerate() {
        let mut hs = vec![
            Halfspace::from_integer(ni.clone(), Integer::one()),
            Halfspace::from_integer(ni.neg(), -Integer::one()),
        ];
        for (j, nj) in set.rays.iter().enumerate() {
            if j != i {
                hs.push(Halfspace::from_integer(nj.neg(), Integer::zero()));
            }
        }
        let poly = RationalHPolytope::new(n, hs)?;
        for alpha in poly.lattice_points()? {
            debug_assert!(set.rays.iter().enumerate().all(|(j, nj)| {
                let p = alpha.dot(nj);
                if j == i { p.is_one() } else { !p.is_positive() }
            }));
            out.push(Root {
                alpha,
                distinguished_ray: ni.clone(),
            });
        }
    }
    out.sort();
    Ok(out)
}

/// Roots of `Σ_Δ`, of `Σ_{C(Δ)}` and of the support set `S_F(Δ)`, with the
/// inclusion `R(Σ_Δ) ⊂ R(Σ_{C(Δ)})` and equality `R(S_F) = R(Σ_{C(Δ)})`
/// checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootComparison {
    pub r_delta: Vec<Root>,
    pub r_canonical: Vec<Root>,
    pub r_support: Vec<Root>,
    /// Roots of `Σ_{C(Δ)}` that are not roots of `Σ_Δ`.
    pub difference: Vec<Root>,
    pub inclusion_holds: bool,
    pub equality_holds: bool,
}

fn alphas(rs: &[Root]) -> BTreeSet<&IntVector> {
    rs.iter().map(|r| &r.alpha).collect()
}

pub fn compare_roots(
    delta: &LatticePolytope,
    fi: &FineInteriorResult,
    cc: &CanonicalClosureResult,
) -> Result<RootComparison> {
    let r_delta = roots(&RaySet::new(delta.facet_normals(), RayOrigin::NormalFanDelta)?)?;
    let r_canonical = roots(&RaySet::new(cc.facet_normals(), RayOrigin::NormalFanCanonical)?)?;
    let r_support = roots(&RaySet::new(fi.support.clone(), RayOrigin::SupportSet)?)?;

    let delta_set = alphas(&r_delta);
    let canonical_set = alphas(&r_canonical);
    let difference = r_canonical
        .iter()
        .filter(|r| !delta_set.contains(&r.alpha))
        .cloned()
        .collect();
    let inclusion_holds = delta_set.is_subset(&canonical_set);
    let equality_holds = r_support == r_canonical;
    Ok(RootComparison {
        r_delta,
        r_canonical,
        r_support,
        difference,
        inclusion_holds,
        equality_holds,
    })
}

pub fn root_set_difference(delta: &LatticePolytope) -> Result<RootComparison> {
    let fi = fine_interior(delta, 1)?;
    let cc = canonical_closure_from(delta, &fi)?;
    compare_roots(delta, &fi, &cc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::hull;

    fn v(c: &[i64]) -> IntVector {
        IntVector::from_i64s(c)
    }

    fn vs(c: &[&[i64]]) -> Vec<IntVector> {
        c.iter().map(|x| v(x)).collect()
    }

    fn alpha_list(rs: &[Root]) -> Vec<IntVector> {
        rs.iter().map(|r| r.alpha.clone()).collect()
    }

    #[test]
    fn projective_space_roots() {
        let set = RaySet::new(
            vs(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[-1, -1, -1]]),
            RayOrigin::NormalFanDelta,
        )
        .unwrap();
        let rs = roots(&set).unwrap();
        let mut expected = Vec::new();
        for i in 0..3 {
            let e = IntVector::unit(3, i);
            expected.push(e.clone());
            expected.push(e.neg());
            for j in 0..3 {
                if i != j {
                    expected.push(e.sub(&IntVector::unit(3, j)));
                }
            }
        }
        expected.sort();
        assert_eq!(alpha_list(&rs), expected);
        assert_eq!(rs.len(), 12);
    }

    #[test]
    fn product_of_lines_roots_match_scan() {
        for n in 1..=3usize {
            let mut rays = Vec::new();
            for i in 0..n {
                rays.push(IntVector::unit(n, i));
                rays.push(IntVector::unit(n, i).neg());
            }
            let set = RaySet::new(rays.clone(), RayOrigin::NormalFanDelta).unwrap();
            // Brute-force scan of [-3, 3]^n.
            let lo = vec![Integer::from(-3); n];
            let hi = vec![Integer::from(3); n];
            let mut oracle = Vec::new();
            crate::polytope::for_each_box_point(&lo, &hi, |a| {
                let ones = rays.iter().filter(|r| a.dot(r).is_one()).count();
                let pos = rays.iter().filter(|r| a.dot(r).is_positive()).count();
                if ones == 1 && pos == 1 {
                    oracle.push(a.clone());
                }
            });
            assert_eq!(oracle.len(), 2 * n);
            assert_eq!(alpha_list(&roots(&set).unwrap()), oracle);
        }
    }

    #[test]
    fn elliptic_roots() {
        let delta = hull(&vs(&[&[-1, -1, -1], &[5, 1, 3], &[-1, 10, 0], &[-1, -1, 0]])).unwrap();
        let cmp = root_set_difference(&delta).unwrap();
        let mut expected = vs(&[
            &[-3, -1, -2],
            &[-1, -4, -1],
            &[-1, -3, -1],
            &[-1, -2, -1],
            &[-1, -1, -1],
            &[-1, 0, -1],
            &[0, -1, 0],
        ]);
        expected.sort();
        assert_eq!(alpha_list(&cmp.r_canonical), expected);
        assert_eq!(alpha_list(&cmp.difference), vs(&[&[-1, 0, -1]]));
        assert_eq!(cmp.r_delta.len(), 6);
        assert!(cmp.inclusion_holds);
        assert!(cmp.equality_holds);
    }

    #[test]
    fn quartic_has_no_extra_roots() {
        let delta = hull(&vs(&[&[0, 0, 0], &[4, 0, 0], &[0, 4, 0], &[0, 0, 4]])).unwrap();
        let cmp = root_set_difference(&delta).unwrap();
        assert!(cmp.difference.is_empty());
        assert_eq!(cmp.r_delta, cmp.r_canonical);
    }

    #[test]
    fn non_spanning_rays_are_rejected() {
        let r = RaySet::new(vs(&[&[1, 0], &[0, 1]]), RayOrigin::SupportSet);
        assert_eq!(r, Err(Error::Unbounded("root polytope unbounded".into())));
    }

    #[test]
    fn rays_are_normalized() {
        let r = RaySet::new(vs(&[&[2, 0], &[0, 3], &[-1, -1], &[1, 0]]), RayOrigin::SupportSet).unwrap();
        assert_eq!(r.rays(), vs(&[&[-1, -1], &[0, 1], &[1, 0]]).as_slice());
    }
}
