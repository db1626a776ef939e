//! Lattice and rational polytopes with exact vertex/facet duality.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};

use crate::dd::{extreme_rays, ConeError};
use crate::error::{Error, Result};
use crate::exact::{ceil, floor, integral_primitive_row, IntVector, Integer, RatMatrix, RatVector, Rational};
use crate::laurent::LaurentPolynomial;

/// The inequality `<x, normal> >= offset`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Halfspace {
    pub normal: IntVector,
    pub offset: Rational,
}

impl Halfspace {
    pub fn new(normal: IntVector, offset: Rational) -> Self {
        Halfspace { normal, offset }
    }

    pub fn from_integer(normal: IntVector, offset: Integer) -> Self {
        Halfspace {
            normal,
            offset: Rational::from_integer(offset),
        }
    }

    /// Scale to a primitive normal; the described set is unchanged.
    fn normalized(&self) -> Result<Halfspace> {
        let g = self.normal.content();
        if g.is_zero() {
            return Err(Error::ZeroVector);
        }
        Ok(Halfspace {
            normal: IntVector(self.normal.0.iter().map(|c| c / &g).collect()),
            offset: &self.offset / Rational::from_integer(g),
        })
    }

    fn value(&self, x: &RatVector) -> Rational {
        self.normal
            .0
            .iter()
            .zip(&x.0)
            .map(|(a, b)| b * Rational::from_integer(a.clone()))
            .sum::<Rational>()
            - &self.offset
    }
}

/// Operations shared by lattice polytopes and rational H-polytopes.
pub trait Polytope {
    fn ambient_dim(&self) -> usize;

    /// Vertices as rational points, lexicographically sorted. Empty iff the
    /// polytope is empty.
    fn rational_vertices(&self) -> Vec<RatVector>;

    /// A defining system of inequalities (equations appear as opposite
    /// pairs).
    fn halfspaces(&self) -> Vec<Halfspace>;

    fn contains_lattice_point(&self, p: &IntVector) -> bool;

    /// `Min_P(nu) = min over P of <., nu>`, attained at a vertex.
    fn min_support(&self, nu: &IntVector) -> Result<Rational> {
        if nu.dim() != self.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim(),
                got: nu.dim(),
            });
        }
        if nu.is_zero() {
            return Err(Error::ZeroVector);
        }
        self.rational_vertices()
            .iter()
            .map(|v| nu.pairing_rational(v))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .min()
            .ok_or(Error::EmptyPolytope)
    }

    /// All lattice points, lexicographically sorted.
    fn lattice_points(&self) -> Result<Vec<IntVector>> {
        let verts = self.rational_vertices();
        if verts.is_empty() {
            return Ok(Vec::new());
        }
        let n = self.ambient_dim();
        let lo: Vec<Integer> = (0..n)
            .map(|i| verts.iter().map(|v| ceil(&v.0[i])).min().expect("nonempty"))
            .collect();
        let hi: Vec<Integer> = (0..n)
            .map(|i| verts.iter().map(|v| floor(&v.0[i])).max().expect("nonempty"))
            .collect();
        let ineqs: Vec<(IntVector, Integer)> = self
            .halfspaces()
            .into_iter()
            .map(|h| {
                let b = ceil(&h.offset);
                (h.normal, b)
            })
            .collect();
        Ok(lattice_points_in_box(&lo, &hi, &ineqs))
    }
}

/// Integer points `x` of the box `[lo, hi]` with `<x, a> >= b` for every
/// `(a, b)` in `ineqs`, in lexicographic order.
///
/// Coordinates are fixed one at a time; the range of each coordinate is cut
/// down using the best case of the coordinates still free, so the last
/// coordinate range is exact and dead prefixes are pruned early.
pub(crate) fn lattice_points_in_box(lo: &[Integer], hi: &[Integer], ineqs: &[(IntVector, Integer)]) -> Vec<IntVector> {
    if let Some(flat) = small_lattice_points(lo, hi, ineqs).filter(|_| !lo.is_empty()) {
        return flat
            .chunks(lo.len())
            .map(|c| IntVector(c.iter().map(|&x| Integer::from(x)).collect()))
            .collect();
    }
    let mut out = Vec::new();
    for_each_box_point(lo, hi, |p| {
        if ineqs.iter().all(|(a, b)| p.dot(a) >= *b) {
            out.push(p.clone());
        }
    });
    out
}

/// Same points as [`lattice_points_in_box`], concatenated into one flat
/// buffer of machine integers; `None` when the data is too large for the
/// machine-integer path.
pub(crate) fn small_lattice_points(lo: &[Integer], hi: &[Integer], ineqs: &[(IntVector, Integer)]) -> Option<Vec<i64>> {
    SmallSystem::new(lo, hi, ineqs).map(|s| s.enumerate())
}

/// Bound for the machine-integer path; products and sums of a few such
/// values stay far inside `i128`.
const SMALL: i64 = 1 << 31;

fn small(x: &Integer) -> Option<i64> {
    i64::try_from(x).ok().filter(|v| v.abs() < SMALL)
}

struct SmallSystem {
    lo: Vec<i128>,
    hi: Vec<i128>,
    a: Vec<Vec<i128>>,
    b: Vec<i128>,
    /// `rest[i][k]`: largest value of `Σ_{j>k} a_ij x_j` over the box.
    rest: Vec<Vec<i128>>,
}

impl SmallSystem {
    fn new(lo: &[Integer], hi: &[Integer], ineqs: &[(IntVector, Integer)]) -> Option<Self> {
        let n = lo.len();
        let lo: Vec<i128> = lo.iter().map(|x| small(x).map(i128::from)).collect::<Option<_>>()?;
        let hi: Vec<i128> = hi.iter().map(|x| small(x).map(i128::from)).collect::<Option<_>>()?;
        let mut a = Vec::with_capacity(ineqs.len());
        let mut b = Vec::with_capacity(ineqs.len());
        for (row, off) in ineqs {
            a.push(row.0.iter().map(|x| small(x).map(i128::from)).collect::<Option<Vec<_>>>()?);
            b.push(i128::from(small(off)?));
        }
        let rest = a
            .iter()
            .map(|row: &Vec<i128>| {
                let mut r = vec![0i128; n];
                for k in (0..n.saturating_sub(1)).rev() {
                    let j = k + 1;
                    r[k] = r[j] + (row[j] * lo[j]).max(row[j] * hi[j]);
                }
                r
            })
            .collect();
        Some(SmallSystem { lo, hi, a, b, rest })
    }

    fn enumerate(&self) -> Vec<i64> {
        let mut out = Vec::new();
        if self.lo.iter().zip(&self.hi).any(|(l, h)| l > h) {
            return out;
        }
        let mut x = vec![0i128; self.lo.len()];
        let mut partial = vec![0i128; self.a.len()];
        self.descend(0, &mut x, &mut partial, &mut out);
        out
    }

    fn descend(&self, k: usize, x: &mut Vec<i128>, partial: &mut Vec<i128>, out: &mut Vec<i64>) {
        let n = self.lo.len();
        if k == n {
            // Box coordinates are below SMALL, so they fit.
            out.extend(x.iter().map(|&c| c as i64));
            return;
        }
        let (mut lo, mut hi) = (self.lo[k], self.hi[k]);
        for (i, row) in self.a.iter().enumerate() {
            // row[k] * x_k >= need
            let need = self.b[i] - partial[i] - self.rest[i][k];
            let c = row[k];
            if c > 0 {
                lo = lo.max(div_ceil(need, c));
            } else if c < 0 {
                hi = hi.min(div_floor(need, c));
            } else if need > 0 {
                return;
            }
            if lo > hi {
                return;
            }
        }
        for v in lo..=hi {
            x[k] = v;
            for (i, row) in self.a.iter().enumerate() {
                partial[i] += row[k] * v;
            }
            self.descend(k + 1, x, partial, out);
            for (i, row) in self.a.iter().enumerate() {
                partial[i] -= row[k] * v;
            }
        }
    }
}

fn div_floor(a: i128, b: i128) -> i128 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

fn div_ceil(a: i128, b: i128) -> i128 {
    -div_floor(-a, b)
}

/// Visit every integer point of the box `[lo, hi]` in lexicographic order.
pub(crate) fn for_each_box_point<F: FnMut(&IntVector)>(lo: &[Integer], hi: &[Integer], mut visit: F) {
    let n = lo.len();
    if lo.iter().zip(hi).any(|(l, h)| l > h) {
        return;
    }
    let mut cur = IntVector(lo.to_vec());
    if n == 0 {
        visit(&cur);
        return;
    }
    loop {
        visit(&cur);
        let mut i = n;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if cur.0[i] < hi[i] {
                cur.0[i] += 1;
                for j in i + 1..n {
                    cur.0[j] = lo[j].clone();
                }
                break;
            }
        }
    }
}

/// Affine dimension of a finite point set; `-1` when empty.
pub(crate) fn affine_rank(points: &[RatVector]) -> i64 {
    let Some(p0) = points.first() else {
        return -1;
    };
    let n = p0.dim();
    let rows = points[1..]
        .iter()
        .map(|p| p.0.iter().zip(&p0.0).map(|(a, b)| a - b).collect())
        .collect();
    RatMatrix::from_rows(n, rows)
        .expect("points share the ambient dimension")
        .rank() as i64
}

/// A facet `{x : <x, normal> = offset}` of a lattice polytope, with the
/// polytope on the side `<x, normal> >= offset`. Normals are primitive and
/// inner-pointing.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Facet {
    pub normal: IntVector,
    pub offset: Integer,
}

/// A lattice polytope given by its vertices, with the dual facet description
/// computed exactly.
///
/// Lower-dimensional polytopes carry the equations of their affine hull in
/// `equations`; their facet normals are then one valid choice among many
/// (normals are supported on a fixed coordinate subset).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticePolytope {
    ambient_dim: usize,
    dim: usize,
    vertices: Vec<IntVector>,
    facets: Vec<Facet>,
    equations: Vec<Facet>,
}

impl LatticePolytope {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim == self.ambient_dim
    }

    pub fn vertices(&self) -> &[IntVector] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn equations(&self) -> &[Facet] {
        &self.equations
    }

    /// Primitive inner facet normals, i.e. the rays of the normal fan.
    pub fn facet_normals(&self) -> Vec<IntVector> {
        self.facets.iter().map(|f| f.normal.clone()).collect()
    }

    pub fn contains(&self, p: &IntVector) -> bool {
        p.dim() == self.ambient_dim
            && self.facets.iter().all(|f| p.dot(&f.normal) >= f.offset)
            && self.equations.iter().all(|f| p.dot(&f.normal) == f.offset)
    }

    /// Exact minimum of `<., nu>` over the polytope.
    pub fn min_support_int(&self, nu: &IntVector) -> Result<Integer> {
        if nu.dim() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                got: nu.dim(),
            });
        }
        if nu.is_zero() {
            return Err(Error::ZeroVector);
        }
        Ok(self
            .vertices
            .iter()
            .map(|v| v.dot(nu))
            .min()
            .expect("lattice polytopes are nonempty"))
    }

    /// Lattice points satisfying every facet inequality strictly.
    pub fn interior_lattice_points(&self) -> Result<Vec<IntVector>> {
        if !self.is_full_dimensional() {
            return Err(Error::NotFullDimensional {
                dim: self.dim as i64,
                ambient: self.ambient_dim,
            });
        }
        Ok(self
            .lattice_points()?
            .into_iter()
            .filter(|p| self.facets.iter().all(|f| p.dot(&f.normal) > f.offset))
            .collect())
    }

    pub fn scaled(&self, k: &Integer) -> Result<LatticePolytope> {
        hull(&self.vertices.iter().map(|v| v.scale(k)).collect::<Vec<_>>())
    }

    pub fn to_h_polytope(&self) -> RationalHPolytope {
        let mut hs: Vec<Halfspace> = self
            .facets
            .iter()
            .map(|f| Halfspace::from_integer(f.normal.clone(), f.offset.clone()))
            .collect();
        for e in &self.equations {
            hs.push(Halfspace::from_integer(e.normal.clone(), e.offset.clone()));
            hs.push(Halfspace::from_integer(e.normal.neg(), -&e.offset));
        }
        RationalHPolytope::with_vertices(
            self.ambient_dim,
            hs,
            self.vertices.iter().map(IntVector::to_rational).collect(),
        )
    }
}

impl Polytope for LatticePolytope {
    fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    fn rational_vertices(&self) -> Vec<RatVector> {
        self.vertices.iter().map(IntVector::to_rational).collect()
    }

    fn halfspaces(&self) -> Vec<Halfspace> {
        self.to_h_polytope().halfspaces
    }

    fn contains_lattice_point(&self, p: &IntVector) -> bool {
        self.contains(p)
    }

    fn min_support(&self, nu: &IntVector) -> Result<Rational> {
        self.min_support_int(nu).map(Rational::from_integer)
    }

    fn lattice_points(&self) -> Result<Vec<IntVector>> {
        let n = self.ambient_dim;
        let lo: Vec<Integer> = (0..n)
            .map(|i| self.vertices.iter().map(|v| v.0[i].clone()).min().expect("nonempty"))
            .collect();
        let hi: Vec<Integer> = (0..n)
            .map(|i| self.vertices.iter().map(|v| v.0[i].clone()).max().expect("nonempty"))
            .collect();
        let mut ineqs: Vec<(IntVector, Integer)> =
            self.facets.iter().map(|f| (f.normal.clone(), f.offset.clone())).collect();
        for e in &self.equations {
            ineqs.push((e.normal.clone(), e.offset.clone()));
            ineqs.push((e.normal.neg(), -&e.offset));
        }
        Ok(lattice_points_in_box(&lo, &hi, &ineqs))
    }
}

/// Convex hull of lattice points, with exact facet enumeration.
pub fn hull(points: &[IntVector]) -> Result<LatticePolytope> {
    let first = points.first().ok_or(Error::EmptyInput)?;
    let n = first.dim();
    for p in points {
        if p.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: p.dim(),
            });
        }
    }
    let pts: Vec<IntVector> = points.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let p0 = pts[0].clone();

    let directions = RatMatrix::from_rows(
        n,
        pts[1..].iter().map(|p| p.sub(&p0).to_rational().0).collect(),
    )?;
    let (_, pivots) = directions.rref();
    let d = pivots.len();

    let equations: Vec<Facet> = directions
        .nullspace()
        .rows()
        .iter()
        .map(|row| {
            let normal = IntVector(integral_primitive_row(row));
            let offset = p0.dot(&normal);
            Facet { normal, offset }
        })
        .collect();

    if d == 0 {
        return Ok(LatticePolytope {
            ambient_dim: n,
            dim: 0,
            vertices: pts,
            facets: Vec::new(),
            equations,
        });
    }

    // Work in the coordinates of the pivot columns, which are injective on
    // the affine hull.
    let project = |p: &IntVector| -> Vec<Integer> { pivots.iter().map(|&c| p.0[c].clone()).collect() };
    let rows: Vec<Vec<Integer>> = pts
        .iter()
        .map(|p| {
            let mut r = vec![Integer::one()];
            r.extend(project(p));
            r
        })
        .collect();
    let rays = extreme_rays(&rows, d + 1).expect("points affinely span the projected space");

    let mut facets: Vec<Facet> = rays
        .into_iter()
        .filter(|r| r[1..].iter().any(|c| !c.is_zero()))
        .map(|r| {
            let mut normal = vec![Integer::zero(); n];
            for (k, &c) in pivots.iter().enumerate() {
                normal[c] = r[k + 1].clone();
            }
            Facet {
                normal: IntVector(normal),
                offset: -r[0].clone(),
            }
        })
        .collect();
    facets.sort();

    let vertices: Vec<IntVector> = pts
        .into_iter()
        .filter(|p| {
            let tight: Vec<Vec<Rational>> = facets
                .iter()
                .filter(|f| p.dot(&f.normal) == f.offset)
                .map(|f| project(&f.normal).into_iter().map(Rational::from_integer).collect())
                .collect();
            RatMatrix::from_rows(d, tight).expect("projected normals").rank() == d
        })
        .collect();

    Ok(LatticePolytope {
        ambient_dim: n,
        dim: d,
        vertices,
        facets,
        equations,
    })
}

/// Intersection of finitely many rational halfspaces, with its vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalHPolytope {
    ambient_dim: usize,
    halfspaces: Vec<Halfspace>,
    /// `ceil(offset)` per halfspace; the lattice-point test only needs these.
    lattice_offsets: Vec<Integer>,
    vertices: Vec<RatVector>,
    dim: i64,
}

fn normalize_halfspaces(n: usize, hs: Vec<Halfspace>) -> Result<Vec<Halfspace>> {
    let mut strongest: BTreeMap<IntVector, Rational> = BTreeMap::new();
    for h in hs {
        if h.normal.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: h.normal.dim(),
            });
        }
        let h = h.normalized()?;
        strongest
            .entry(h.normal)
            .and_modify(|b| {
                if h.offset > *b {
                    *b = h.offset.clone();
                }
            })
            .or_insert(h.offset);
    }
    Ok(strongest
        .into_iter()
        .map(|(normal, offset)| Halfspace { normal, offset })
        .collect())
}

/// Vertices of `{x : <x, h.normal> >= h.offset}`; `Unbounded` when the
/// system does not cut out a polytope.
fn enumerate_vertices(n: usize, hs: &[Halfspace]) -> Result<Vec<RatVector>> {
    // Homogenize: (t, x) with <x, normal> - offset * t >= 0 and t >= 0.
    let mut rows = Vec::with_capacity(hs.len() + 1);
    let mut t_row = vec![Integer::zero(); n + 1];
    t_row[0] = Integer::one();
    rows.push(t_row);
    for h in hs {
        let den = h.offset.denom().clone();
        let mut r = Vec::with_capacity(n + 1);
        r.push(-h.offset.numer().clone());
        r.extend(h.normal.0.iter().map(|c| c * &den));
        rows.push(r);
    }
    let rays = extreme_rays(&rows, n + 1).map_err(|ConeError::NotPointed| {
        Error::Unbounded("halfspace system contains a line".into())
    })?;
    let mut verts = Vec::with_capacity(rays.len());
    for r in rays {
        if !r[0].is_positive() {
            return Err(Error::Unbounded("recession direction found".into()));
        }
        let t = Rational::from_integer(r[0].clone());
        verts.push(RatVector(
            r[1..].iter().map(|c| Rational::from_integer(c.clone()) / &t).collect(),
        ));
    }
    verts.sort();
    Ok(verts)
}

impl RationalHPolytope {
    /// Normalizes every halfspace to a primitive normal, keeps the strongest
    /// inequality per normal and enumerates vertices. Redundant inequalities
    /// are kept; see [`RationalHPolytope::reduced`].
    pub fn new(ambient_dim: usize, halfspaces: Vec<Halfspace>) -> Result<Self> {
        let halfspaces = normalize_halfspaces(ambient_dim, halfspaces)?;
        let vertices = enumerate_vertices(ambient_dim, &halfspaces)?;
        Ok(Self::with_vertices(ambient_dim, halfspaces, vertices))
    }

    fn with_vertices(ambient_dim: usize, halfspaces: Vec<Halfspace>, vertices: Vec<RatVector>) -> Self {
        let dim = affine_rank(&vertices);
        let lattice_offsets = halfspaces.iter().map(|h| ceil(&h.offset)).collect();
        RationalHPolytope {
            ambient_dim,
            halfspaces,
            lattice_offsets,
            vertices,
            dim,
        }
    }

    /// Drop redundant inequalities.
    ///
    /// Full-dimensional polytopes keep exactly their facet inequalities.
    /// Lower-dimensional ones are reduced greedily in lexicographic normal
    /// order, keeping an inequality whenever its removal would change the
    /// vertex set.
    pub fn reduced(&self) -> Result<Self> {
        if self.vertices.is_empty() {
            return Ok(self.clone());
        }
        let n = self.ambient_dim;
        let tight_sets: Vec<(Halfspace, Vec<RatVector>)> = self
            .halfspaces
            .iter()
            .map(|h| {
                let t: Vec<RatVector> = self
                    .vertices
                    .iter()
                    .filter(|v| h.value(v).is_zero())
                    .cloned()
                    .collect();
                (h.clone(), t)
            })
            .filter(|(_, t)| !t.is_empty())
            .collect();

        let kept: Vec<Halfspace> = if self.dim == n as i64 {
            tight_sets
                .into_iter()
                .filter(|(_, t)| affine_rank(t) == n as i64 - 1)
                .map(|(h, _)| h)
                .collect()
        } else {
            let mut current: Vec<Halfspace> = tight_sets.into_iter().map(|(h, _)| h).collect();
            let mut i = 0;
            while i < current.len() {
                let mut trial = current.clone();
                trial.remove(i);
                match enumerate_vertices(n, &trial) {
                    Ok(v) if v == self.vertices => current = trial,
                    _ => i += 1,
                }
            }
            current
        };
        Ok(Self::with_vertices(n, kept, self.vertices.clone()))
    }

    pub fn dim(&self) -> i64 {
        self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[RatVector] {
        &self.vertices
    }

    pub fn halfspace_list(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    pub fn normals(&self) -> Vec<IntVector> {
        self.halfspaces.iter().map(|h| h.normal.clone()).collect()
    }

    pub fn is_lattice(&self) -> bool {
        self.vertices.iter().all(RatVector::is_integral)
    }

    pub fn contains_rational(&self, x: &RatVector) -> bool {
        x.dim() == self.ambient_dim && self.halfspaces.iter().all(|h| !h.value(x).is_negative())
    }

    /// Same point set, compared through vertices.
    pub fn same_set(&self, other: &RationalHPolytope) -> bool {
        self.vertices == other.vertices
    }
}

impl Polytope for RationalHPolytope {
    fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    fn rational_vertices(&self) -> Vec<RatVector> {
        self.vertices.clone()
    }

    fn halfspaces(&self) -> Vec<Halfspace> {
        self.halfspaces.clone()
    }

    fn contains_lattice_point(&self, p: &IntVector) -> bool {
        p.dim() == self.ambient_dim
            && self
                .halfspaces
                .iter()
                .zip(&self.lattice_offsets)
                .all(|(h, b)| p.dot(&h.normal) >= *b)
    }
}

/// A torus-invariant divisor `Σ a_i D_i` on the toric variety of a fan with
/// the given rays.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToricDivisorData {
    pub rays: Vec<IntVector>,
    pub coefficients: Vec<Integer>,
}

/// `P_D = {x : <x, n_i> >= -a_i}`. Fails with `Unbounded` when the rays do
/// not positively span.
pub fn divisor_polytope(d: &ToricDivisorData) -> Result<RationalHPolytope> {
    let n = d.rays.first().ok_or(Error::EmptyInput)?.dim();
    if d.rays.len() != d.coefficients.len() {
        return Err(Error::DimensionMismatch {
            expected: d.rays.len(),
            got: d.coefficients.len(),
        });
    }
    let hs = d
        .rays
        .iter()
        .zip(&d.coefficients)
        .map(|(r, a)| Halfspace::from_integer(r.clone(), -a))
        .collect();
    RationalHPolytope::new(n, hs)?.reduced()
}

/// Convex hull of the exponents carrying a nonzero coefficient.
pub fn newton_polytope(f: &LaurentPolynomial) -> Result<LatticePolytope> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    hull(&f.support())
}

/// A face of a lattice polytope: its vertices, dimension and the facets
/// containing it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Face {
    pub vertices: Vec<IntVector>,
    pub dim: usize,
    pub facets: Vec<Facet>,
}

impl Face {
    /// Membership for points already known to lie in the ambient polytope.
    pub fn contains_polytope_point(&self, p: &IntVector) -> bool {
        self.facets.iter().all(|f| p.dot(&f.normal) == f.offset)
    }
}

/// All `k`-dimensional faces, sorted by vertex list.
pub fn faces(p: &LatticePolytope, k: i64) -> Result<Vec<Face>> {
    if k < 0 || k > p.dim as i64 {
        return Err(Error::FaceDimension {
            k,
            n: p.dim,
        });
    }
    let nv = p.vertices.len();
    let incidence: Vec<BTreeSet<usize>> = p
        .facets
        .iter()
        .map(|f| (0..nv).filter(|&i| p.vertices[i].dot(&f.normal) == f.offset).collect())
        .collect();

    let full: BTreeSet<usize> = (0..nv).collect();
    let mut all: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    let mut frontier = vec![full];
    while let Some(face) = frontier.pop() {
        if !all.insert(face.clone()) {
            continue;
        }
        for inc in &incidence {
            let sub: BTreeSet<usize> = face.intersection(inc).copied().collect();
            if !sub.is_empty() && sub.len() < face.len() && !all.contains(&sub) {
                frontier.push(sub);
            }
        }
    }

    let mut out: Vec<Face> = all
        .into_iter()
        .filter_map(|set| {
            let verts: Vec<IntVector> = set.iter().map(|&i| p.vertices[i].clone()).collect();
            let dim = affine_rank(&verts.iter().map(IntVector::to_rational).collect::<Vec<_>>());
            (dim == k).then(|| {
                let facets = p
                    .facets
                    .iter()
                    .zip(&incidence)
                    .filter(|(_, inc)| set.is_subset(inc))
                    .map(|(f, _)| f.clone())
                    .collect();
                Face {
                    vertices: verts,
                    dim: dim as usize,
                    facets,
                }
            })
        })
        .collect();
    out.sort();
    Ok(out)
}

/// `f|Γ`: the terms of `f` whose exponent lies on the face.
pub fn restrict_to_face(f: &LaurentPolynomial, face: &Face) -> LaurentPolynomial {
    f.filter(|m| face.contains_polytope_point(m))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[i64]) -> IntVector {
        IntVector::from_i64s(c)
    }

    fn vs(c: &[&[i64]]) -> Vec<IntVector> {
        c.iter().map(|x| v(x)).collect()
    }

    fn q(x: i64) -> Rational {
        Rational::from_integer(x.into())
    }

    fn facet(n: &[i64], b: i64) -> Facet {
        Facet {
            normal: v(n),
            offset: b.into(),
        }
    }

    fn simplex(n: usize, d: i64) -> LatticePolytope {
        let mut pts = vec![IntVector::zero(n)];
        for i in 0..n {
            pts.push(IntVector::unit(n, i).scale(&d.into()));
        }
        hull(&pts).unwrap()
    }

    #[test]
    fn point_triangle_triangle_facets() {
        let t = hull(&vs(&[&[0, 1], &[0, 3], &[4, 1]])).unwrap();
        assert_eq!(t.vertices(), vs(&[&[0, 1], &[0, 3], &[4, 1]]).as_slice());
        let mut expected = vec![facet(&[-1, -2], -6), facet(&[0, 1], 1), facet(&[1, 0], 0)];
        expected.sort();
        assert_eq!(t.facets(), expected.as_slice());
    }

    #[test]
    fn duplicates_and_interior_points_are_dropped() {
        let t = hull(&vs(&[&[0, 0], &[1, 0], &[0, 1], &[0, 0]])).unwrap();
        assert_eq!(t.vertices().len(), 3);
        let sq = hull(&vs(&[&[0, 0], &[2, 0], &[0, 2], &[2, 2], &[1, 1], &[1, 0]])).unwrap();
        assert_eq!(sq.vertices(), vs(&[&[0, 0], &[0, 2], &[2, 0], &[2, 2]]).as_slice());
    }

    #[test]
    fn elliptic_tetrahedron_hull() {
        let t = hull(&vs(&[&[-1, -1, -1], &[5, 1, 3], &[-1, 10, 0], &[-1, -1, 0]])).unwrap();
        assert_eq!(t.vertices().len(), 4);
        assert_eq!(t.facets().len(), 4);
        assert!(t.is_full_dimensional());
    }

    #[test]
    fn empty_hull_is_an_error() {
        assert_eq!(hull(&[]), Err(Error::EmptyInput));
    }

    #[test]
    fn min_support_examples() {
        let t = hull(&vs(&[&[0, 1], &[0, 3], &[4, 1]])).unwrap();
        assert_eq!(t.min_support(&v(&[0, -1])).unwrap(), q(-3));
        let sq = hull(&vs(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]])).unwrap();
        assert_eq!(sq.min_support(&v(&[1, 1])).unwrap(), q(0));
        let e = hull(&vs(&[&[-1, -1, -1], &[5, 1, 3], &[-1, 10, 0], &[-1, -1, 0]])).unwrap();
        assert_eq!(e.min_support(&v(&[0, 0, 1])).unwrap(), q(-1));
        assert_eq!(e.min_support(&v(&[0, 0, 0])), Err(Error::ZeroVector));
    }

    #[test]
    fn lattice_point_counts() {
        // Degree-4 monomials in 4 variables: C(7, 3) = 35.
        assert_eq!(simplex(3, 4).lattice_points().unwrap().len(), 35);
        assert_eq!(hull(&vs(&[&[0], &[1]])).unwrap().lattice_points().unwrap().len(), 2);
        let e = hull(&vs(&[&[-1, -1, -1], &[5, 1, 3], &[-1, 10, 0], &[-1, -1, 0]])).unwrap();
        assert_eq!(e.interior_lattice_points().unwrap().len(), 3);
    }

    #[test]
    fn interior_points_examples() {
        let t = hull(&vs(&[&[0, 1], &[0, 3], &[4, 1]])).unwrap();
        assert_eq!(t.interior_lattice_points().unwrap(), vs(&[&[1, 2]]));
        let sq = hull(&vs(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]])).unwrap();
        assert!(sq.interior_lattice_points().unwrap().is_empty());
        assert_eq!(simplex(3, 4).interior_lattice_points().unwrap(), vs(&[&[1, 1, 1]]));
    }

    #[test]
    fn lower_dimensional_hull() {
        let seg = hull(&vs(&[&[0, 0, 0], &[1, 1, 1], &[2, 2, 2]])).unwrap();
        assert_eq!(seg.dim(), 1);
        assert_eq!(seg.vertices(), vs(&[&[0, 0, 0], &[2, 2, 2]]).as_slice());
        assert_eq!(seg.equations().len(), 2);
        assert_eq!(seg.lattice_points().unwrap().len(), 3);
        assert!(seg.interior_lattice_points().is_err());

        let pt = hull(&vs(&[&[3, -1]])).unwrap();
        assert_eq!(pt.dim(), 0);
        assert_eq!(pt.lattice_points().unwrap(), vs(&[&[3, -1]]));
    }

    #[test]
    fn h_polytope_vertices_and_reduction() {
        // Unit square plus a redundant inequality x + y >= -5.
        let hs = vec![
            Halfspace::from_integer(v(&[1, 0]), 0.into()),
            Halfspace::from_integer(v(&[0, 1]), 0.into()),
            Halfspace::from_integer(v(&[-1, 0]), (-1).into()),
            Halfspace::from_integer(v(&[0, -2]), (-2).into()),
            Halfspace::from_integer(v(&[1, 1]), (-5).into()),
        ];
        let p = RationalHPolytope::new(2, hs).unwrap().reduced().unwrap();
        assert_eq!(p.dim(), 2);
        assert_eq!(p.vertices().len(), 4);
        assert_eq!(p.halfspace_list().len(), 4);
        assert!(p.is_lattice());
    }

    #[test]
    fn h_polytope_point_and_empty() {
        // x >= 1/2, y >= 0, x + y <= 1/2: the single point (1/2, 0).
        let hs = vec![
            Halfspace::new(v(&[1, 0]), Rational::new(1.into(), 2.into())),
            Halfspace::from_integer(v(&[0, 1]), 0.into()),
            Halfspace::new(v(&[-2, -2]), q(-1)),
        ];
        let p = RationalHPolytope::new(2, hs).unwrap();
        assert_eq!(p.dim(), 0);
        assert!(!p.is_lattice());
        assert!(p.lattice_points().unwrap().is_empty());
        let r = p.reduced().unwrap();
        assert_eq!(r.vertices(), p.vertices());

        let hs = vec![
            Halfspace::from_integer(v(&[1, 0]), 1.into()),
            Halfspace::from_integer(v(&[0, 1]), 0.into()),
            Halfspace::from_integer(v(&[-1, -1]), 0.into()),
        ];
        let e = RationalHPolytope::new(2, hs).unwrap();
        assert_eq!(e.dim(), -1);
        assert!(e.min_support(&v(&[1, 0])).is_err());
    }

    #[test]
    fn unbounded_system_is_rejected() {
        let hs = vec![
            Halfspace::from_integer(v(&[1, 0]), 0.into()),
            Halfspace::from_integer(v(&[0, 1]), 0.into()),
        ];
        assert!(matches!(RationalHPolytope::new(2, hs), Err(Error::Unbounded(_))));
    }

    #[test]
    fn divisor_polytope_examples() {
        let rays = vs(&[&[1, 0], &[0, 1], &[-1, -1]]);
        let p = divisor_polytope(&ToricDivisorData {
            rays: rays.clone(),
            coefficients: vec![0.into(), 0.into(), 1.into()],
        })
        .unwrap();
        assert_eq!(p.lattice_points().unwrap(), vs(&[&[0, 0], &[0, 1], &[1, 0]]));

        let z = divisor_polytope(&ToricDivisorData {
            rays,
            coefficients: vec![0.into(), 0.into(), 0.into()],
        })
        .unwrap();
        assert_eq!(z.vertices(), &[v(&[0, 0]).to_rational()]);

        let half = divisor_polytope(&ToricDivisorData {
            rays: vs(&[&[1, 0], &[0, 1]]),
            coefficients: vec![0.into(), 0.into()],
        });
        assert!(matches!(half, Err(Error::Unbounded(_))));
    }

    #[test]
    fn newton_polytope_examples() {
        let f = LaurentPolynomial::from_terms(
            2,
            [(v(&[1, 0]), q(1)), (v(&[0, 1]), q(1)), (v(&[-1, -1]), q(1))],
        )
        .unwrap();
        let p = newton_polytope(&f).unwrap();
        assert_eq!(p.vertices(), vs(&[&[-1, -1], &[0, 1], &[1, 0]]).as_slice());

        let c = LaurentPolynomial::monomial(v(&[0, 0]), q(5));
        assert_eq!(newton_polytope(&c).unwrap().vertices(), vs(&[&[0, 0]]).as_slice());
        assert_eq!(newton_polytope(&LaurentPolynomial::zero(2)), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn faces_examples() {
        let t = hull(&vs(&[&[0, 1], &[0, 3], &[4, 1]])).unwrap();
        assert_eq!(faces(&t, 1).unwrap().len(), 3);
        assert_eq!(faces(&t, 0).unwrap().len(), 3);
        assert_eq!(faces(&t, 2).unwrap().len(), 1);
        assert!(faces(&t, 3).is_err());
        assert!(faces(&t, -1).is_err());
        let e = hull(&vs(&[&[-1, -1, -1], &[5, 1, 3], &[-1, 10, 0], &[-1, -1, 0]])).unwrap();
        assert_eq!(faces(&e, 2).unwrap().len(), 4);
        assert_eq!(faces(&e, 1).unwrap().len(), 6);
    }

    #[test]
    fn restrict_to_face_examples() {
        let f = LaurentPolynomial::from_terms(
            2,
            [(v(&[0, 0]), q(1)), (v(&[1, 0]), q(1)), (v(&[0, 1]), q(1))],
        )
        .unwrap();
        let p = newton_polytope(&f).unwrap();
        let edges = faces(&p, 1).unwrap();
        let diag = edges
            .iter()
            .find(|e| e.vertices == vs(&[&[0, 1], &[1, 0]]))
            .unwrap();
        let r = restrict_to_face(&f, diag);
        assert_eq!(r.support(), vs(&[&[0, 1], &[1, 0]]));

        let whole = &faces(&p, 2).unwrap()[0];
        assert_eq!(restrict_to_face(&f, whole), f);

        let g = LaurentPolynomial::monomial(v(&[0, 0]), q(1));
        assert!(restrict_to_face(&g, diag).is_zero());
    }

    mod enumeration {
        use super::*;
        use proptest::prelude::*;

        fn system() -> impl Strategy<Value = (Vec<i64>, Vec<i64>, Vec<(Vec<i64>, i64)>)> {
            (1usize..=3).prop_flat_map(|n| {
                (
                    prop::collection::vec(-3i64..=0, n),
                    prop::collection::vec(0i64..=3, n),
                    prop::collection::vec((prop::collection::vec(-4i64..=4, n), -6i64..=6), 0..5),
                )
            })
        }

        proptest! {
            #[test]
            fn pruned_enumeration_matches_box_scan((lo, hi, ineqs) in system()) {
                let lo: Vec<Integer> = lo.into_iter().map(Integer::from).collect();
                let hi: Vec<Integer> = hi.into_iter().map(Integer::from).collect();
                let ineqs: Vec<(IntVector, Integer)> = ineqs
                    .into_iter()
                    .map(|(a, b)| (IntVector::from(a), Integer::from(b)))
                    .collect();
                let mut oracle = Vec::new();
                for_each_box_point(&lo, &hi, |p| {
                    if ineqs.iter().all(|(a, b)| p.dot(a) >= *b) {
                        oracle.push(p.clone());
                    }
                });
                prop_assert_eq!(lattice_points_in_box(&lo, &hi, &ineqs), oracle);
            }
        }
    }
}
