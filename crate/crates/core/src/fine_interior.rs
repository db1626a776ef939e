//! Fine interior, its support and the canonical closure.
//!
//! `F(Δ)` is an intersection over all nonzero `ν ∈ N`. Every inequality that
//! is tight on `F(Δ)` has its normal in the support `S_F(Δ)`, and the support
//! lies in the convex hull of the facet normals of `Δ`, so it suffices to
//! intersect over the nonzero lattice points of `conv(Σ_Δ[1] ∪ {0})`. The
//! `scale` parameter enlarges that candidate set for the stability check.

use std::cmp::Ordering;

use num_integer::Integer as _;
use num_traits::One;

use crate::error::{Error, Result};
use crate::exact::{IntVector, Integer, RatVector, Rational};
use crate::polytope::{hull, small_lattice_points, Halfspace, LatticePolytope, Polytope, RationalHPolytope};

/// Record of the candidate-set enlargement check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityCertificate {
    pub scale: u32,
    pub candidate_count: usize,
    /// Set when the result was recomputed with `scale + 1` candidates.
    pub enlarged_scale: Option<u32>,
    pub enlarged_candidate_count: Option<usize>,
    /// Whether `F` and its support agree between the two candidate sets.
    pub stable: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FineInteriorResult {
    pub fine_interior: RationalHPolytope,
    /// `S_F(Δ)`, sorted; empty when `F(Δ)` is empty.
    pub support: Vec<IntVector>,
    pub stability_certificate: StabilityCertificate,
    rays: Vec<IntVector>,
}

impl FineInteriorResult {
    /// The candidate normals the intersection ran over. They are recomputed
    /// on demand since enlarged candidate sets get large.
    pub fn candidate_normals(&self) -> Result<Vec<IntVector>> {
        candidates_from_rays(&self.rays, self.stability_certificate.scale)
    }

    pub fn dim(&self) -> i64 {
        self.fine_interior.dim()
    }

    pub fn is_empty(&self) -> bool {
        self.fine_interior.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalClosureResult {
    pub closure: RationalHPolytope,
    pub is_lattice: bool,
    /// Vertices of `C(Δ)` that do not lie in `Δ`.
    pub extra_vertices: Vec<RatVector>,
}

impl CanonicalClosureResult {
    /// Rays of the normal fan of `C(Δ)`.
    pub fn facet_normals(&self) -> Vec<IntVector> {
        self.closure.normals()
    }
}

fn require_full_dim(delta: &LatticePolytope) -> Result<()> {
    if !delta.is_full_dimensional() {
        return Err(Error::NotFullDimensional {
            dim: delta.dim() as i64,
            ambient: delta.ambient_dim(),
        });
    }
    Ok(())
}

/// Nonzero lattice points of `scale · conv(rays ∪ {0})`, in lexicographic
/// order, stored flat as machine integers when they fit.
enum Candidates {
    Small { n: usize, flat: Vec<i64> },
    Big(Vec<IntVector>),
}

impl Candidates {
    fn new(rays: &[IntVector], scale: u32) -> Result<Candidates> {
        if scale == 0 {
            return Err(Error::InvalidScale);
        }
        let n = rays.first().ok_or(Error::EmptyInput)?.dim();
        let k = Integer::from(scale);
        let mut pts: Vec<IntVector> = rays.iter().map(|r| r.scale(&k)).collect();
        pts.push(IntVector::zero(n));
        let p = hull(&pts)?;
        let lo: Vec<Integer> = (0..n)
            .map(|i| p.vertices().iter().map(|v| v.0[i].clone()).min().expect("nonempty"))
            .collect();
        let hi: Vec<Integer> = (0..n)
            .map(|i| p.vertices().iter().map(|v| v.0[i].clone()).max().expect("nonempty"))
            .collect();
        let mut ineqs: Vec<(IntVector, Integer)> =
            p.facets().iter().map(|f| (f.normal.clone(), f.offset.clone())).collect();
        for e in p.equations() {
            ineqs.push((e.normal.clone(), e.offset.clone()));
            ineqs.push((e.normal.neg(), -&e.offset));
        }
        if n > 0 {
            if let Some(mut flat) = small_lattice_points(&lo, &hi, &ineqs) {
                let mut kept = 0;
                for i in 0..flat.len() / n {
                    if flat[i * n..(i + 1) * n].iter().any(|&c| c != 0) {
                        flat.copy_within(i * n..(i + 1) * n, kept * n);
                        kept += 1;
                    }
                }
                flat.truncate(kept * n);
                return Ok(Candidates::Small { n, flat });
            }
        }
        Ok(Candidates::Big(
            p.lattice_points()?.into_iter().filter(|v| !v.is_zero()).collect(),
        ))
    }

    fn len(&self) -> usize {
        match self {
            Candidates::Small { n, flat } => flat.len() / n,
            Candidates::Big(v) => v.len(),
        }
    }

    fn small(&self, i: usize) -> Option<&[i64]> {
        match self {
            Candidates::Small { n, flat } => Some(&flat[i * n..(i + 1) * n]),
            Candidates::Big(_) => None,
        }
    }

    fn get(&self, i: usize) -> IntVector {
        match self {
            Candidates::Small { .. } => IntVector::from_i64s(self.small(i).expect("small")),
            Candidates::Big(v) => v[i].clone(),
        }
    }

    fn position(&self, target: &IntVector) -> Option<usize> {
        match self {
            Candidates::Small { .. } => {
                let t = target.to_i64s()?;
                let (mut lo, mut hi) = (0, self.len());
                while lo < hi {
                    let mid = (lo + hi) / 2;
                    match self.small(mid).expect("small").cmp(t.as_slice()) {
                        Ordering::Less => lo = mid + 1,
                        Ordering::Greater => hi = mid,
                        Ordering::Equal => return Some(mid),
                    }
                }
                None
            }
            Candidates::Big(v) => v.binary_search(target).ok(),
        }
    }

    fn into_vec(self) -> Vec<IntVector> {
        match self {
            Candidates::Small { n, flat } => flat.chunks(n).map(IntVector::from_i64s).collect(),
            Candidates::Big(v) => v,
        }
    }
}

fn candidates_from_rays(rays: &[IntVector], scale: u32) -> Result<Vec<IntVector>> {
    Ok(Candidates::new(rays, scale)?.into_vec())
}

/// Nonzero lattice points of `scale · conv(Σ_Δ[1] ∪ {0})`.
pub fn candidate_normals(delta: &LatticePolytope, scale: u32) -> Result<Vec<IntVector>> {
    require_full_dim(delta)?;
    candidates_from_rays(&delta.facet_normals(), scale)
}

/// An exact rational value, kept as a machine fraction while it fits.
#[derive(Clone, Debug)]
enum Value {
    Small(i128, i128),
    Big(Rational),
}

impl Value {
    fn to_rational(&self) -> Rational {
        match self {
            Value::Small(a, d) => Rational::new(Integer::from(*a), Integer::from(*d)),
            Value::Big(r) => r.clone(),
        }
    }

    fn plus_one(&self) -> Value {
        match self {
            Value::Small(a, d) => match a.checked_add(*d) {
                Some(s) => Value::Small(s, *d),
                None => Value::Big(self.to_rational() + Rational::one()),
            },
            Value::Big(r) => Value::Big(r + Rational::one()),
        }
    }

    fn minus(&self, other: &Value) -> Value {
        if let (Value::Small(a, d), Value::Small(b, e)) = (self, other) {
            let num = a
                .checked_mul(*e)
                .zip(b.checked_mul(*d))
                .and_then(|(x, y)| x.checked_sub(y));
            if let Some((num, den)) = num.zip(d.checked_mul(*e)) {
                return Value::Small(num, den);
            }
        }
        Value::Big(self.to_rational() - other.to_rational())
    }

    fn cmp(&self, other: &Value) -> Ordering {
        if let (Value::Small(a, d), Value::Small(b, e)) = (self, other) {
            if let (Some(x), Some(y)) = (a.checked_mul(*e), b.checked_mul(*d)) {
                return x.cmp(&y);
            }
        }
        self.to_rational().cmp(&other.to_rational())
    }
}

const SMALL: i64 = 1 << 31;

fn small_coords(v: &IntVector) -> Option<Vec<i64>> {
    v.0.iter()
        .map(|x| i64::try_from(x).ok().filter(|c| c.abs() < SMALL))
        .collect()
}

/// Machine-integer form of a point set.
enum SmallPoints {
    /// Flat numerators over one common denominator.
    Common(Vec<i64>, i64),
    /// Numerators and denominator per point.
    Each(Vec<(Vec<i64>, i64)>),
}

/// Finitely many points of `M_Q`, each as `num / den`.
struct PointSet {
    points: Vec<(IntVector, Integer)>,
    small: Option<SmallPoints>,
}

fn small_int(x: &Integer) -> Option<i64> {
    i64::try_from(x).ok().filter(|d| d.abs() < SMALL)
}

fn over_denominator(v: &RatVector, den: &Integer) -> IntVector {
    IntVector(v.0.iter().map(|c| c.numer() * (den / c.denom())).collect())
}

impl PointSet {
    fn new(points: &[RatVector]) -> PointSet {
        let each: Vec<(IntVector, Integer)> = points
            .iter()
            .map(|v| {
                let den = v.0.iter().fold(Integer::one(), |acc, c| acc.lcm(c.denom()));
                (over_denominator(v, &den), den)
            })
            .collect();
        let common = each.iter().fold(Integer::one(), |acc, (_, d)| acc.lcm(d));
        let small = small_int(&common)
            .and_then(|d| {
                let flat: Option<Vec<Vec<i64>>> = points
                    .iter()
                    .map(|v| small_coords(&over_denominator(v, &common)))
                    .collect();
                flat.map(|f| SmallPoints::Common(f.concat(), d))
            })
            .or_else(|| {
                each.iter()
                    .map(|(w, d)| small_coords(w).zip(small_int(d)))
                    .collect::<Option<Vec<_>>>()
                    .map(SmallPoints::Each)
            });
        PointSet { points: each, small }
    }

    fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `min <p, ν_i>` over the points.
    fn min_pairing(&self, cands: &Candidates, i: usize) -> Value {
        let dot = |w: &[i64], nu: &[i64]| -> i128 { w.iter().zip(nu).map(|(a, b)| i128::from(*a) * i128::from(*b)).sum() };
        match (&self.small, cands.small(i)) {
            (Some(SmallPoints::Common(flat, d)), Some(nu)) => {
                let min = flat.chunks(nu.len()).map(|w| dot(w, nu)).min().expect("nonempty point set");
                Value::Small(min, i128::from(*d))
            }
            (Some(SmallPoints::Each(pts)), Some(nu)) => pts
                .iter()
                .map(|(w, d)| Value::Small(dot(w, nu), i128::from(*d)))
                .reduce(|a, b| if b.cmp(&a) == Ordering::Less { b } else { a })
                .expect("nonempty point set"),
            _ => {
                let nu = cands.get(i);
                let min = self
                    .points
                    .iter()
                    .map(|(w, d)| Rational::new(w.dot(&nu), d.clone()))
                    .min()
                    .expect("nonempty point set");
                Value::Big(min)
            }
        }
    }
}

/// Inequalities added per cutting-plane round.
const BATCH: usize = 8;

/// Fine interior of a (lattice or rational) polytope `q` whose normal fan has
/// the given rays.
///
/// The intersection is built by cutting planes: starting from the ray
/// inequalities, the most violated candidate inequalities at the current
/// vertices are added until none is violated. The result is the same set as
/// the intersection over all candidates.
pub fn fine_interior_of<P: Polytope>(q: &P, rays: &[IntVector], scale: u32) -> Result<FineInteriorResult> {
    let n = q.ambient_dim();
    let cands = Candidates::new(rays, scale)?;
    let q_points = PointSet::new(&q.rational_vertices());
    if q_points.is_empty() {
        return Err(Error::EmptyPolytope);
    }
    let bounds: Vec<Value> = (0..cands.len())
        .map(|i| q_points.min_pairing(&cands, i).plus_one())
        .collect();
    let halfspace = |i: usize| Halfspace::new(cands.get(i), bounds[i].to_rational());

    let mut active: Vec<usize> = Vec::new();
    let mut in_use = vec![false; cands.len()];
    for r in rays {
        // A primitive ray lies on the segment from 0 to the ray, so it is a candidate.
        let i = cands
            .position(&r.primitive()?)
            .expect("primitive rays are candidates");
        if !in_use[i] {
            in_use[i] = true;
            active.push(i);
        }
    }
    let mut f = RationalHPolytope::new(n, active.iter().map(|&i| halfspace(i)).collect())?;

    // F only shrinks as inequalities are added, so Min_F(ν) only grows: a
    // satisfied candidate stays satisfied, and one with slack can never be
    // in the support. Only violated candidates are looked at again, and only
    // tight ones are kept as support candidates.
    let mut pending: Vec<usize> = (0..cands.len()).filter(|&i| !in_use[i]).collect();
    let mut tight: Vec<usize> = active.clone();
    while !f.is_empty() {
        let f_points = PointSet::new(f.vertices());
        let mut violated: Vec<(Value, usize)> = Vec::new();
        for &i in &pending {
            let m = f_points.min_pairing(&cands, i);
            match m.cmp(&bounds[i]) {
                Ordering::Less => violated.push((bounds[i].minus(&m), i)),
                Ordering::Equal => tight.push(i),
                Ordering::Greater => {}
            }
        }
        if violated.is_empty() {
            break;
        }
        violated.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        for (_, i) in violated.iter().take(BATCH) {
            in_use[*i] = true;
            active.push(*i);
            tight.push(*i);
        }
        pending = violated.into_iter().skip(BATCH).map(|(_, i)| i).collect();
        f = RationalHPolytope::new(n, active.iter().map(|&i| halfspace(i)).collect())?;
    }
    let f = f.reduced()?;

    let mut support = Vec::new();
    if !f.is_empty() {
        let f_points = PointSet::new(f.vertices());
        for i in tight {
            if f_points.min_pairing(&cands, i).cmp(&bounds[i]) == Ordering::Equal {
                support.push(cands.get(i));
            }
        }
    }
    support.sort();

    Ok(FineInteriorResult {
        stability_certificate: StabilityCertificate {
            scale,
            candidate_count: cands.len(),
            enlarged_scale: None,
            enlarged_candidate_count: None,
            stable: None,
        },
        fine_interior: f,
        support,
        rays: rays.to_vec(),
    })
}

/// `F(Δ)` from the candidate set at the given scale. An empty Fine interior
/// is a normal outcome, reported through `dim() == -1`.
pub fn fine_interior(delta: &LatticePolytope, scale: u32) -> Result<FineInteriorResult> {
    require_full_dim(delta)?;
    fine_interior_of(delta, &delta.facet_normals(), scale)
}

/// `F(Δ)` at `scale`, recomputed at `scale + 1` to certify that the
/// candidate set was large enough.
pub fn fine_interior_certified(delta: &LatticePolytope, scale: u32) -> Result<FineInteriorResult> {
    let mut base = fine_interior(delta, scale)?;
    let enlarged = fine_interior(delta, scale + 1)?;
    let stable = base.fine_interior.same_set(&enlarged.fine_interior) && base.support == enlarged.support;
    let cert = &mut base.stability_certificate;
    cert.enlarged_scale = Some(scale + 1);
    cert.enlarged_candidate_count = Some(enlarged.stability_certificate.candidate_count);
    cert.stable = Some(stable);
    Ok(base)
}

/// `S_F(Δ)`, the normals whose shifted hyperplane touches `F(Δ)`.
pub fn support(delta: &LatticePolytope) -> Result<Vec<IntVector>> {
    let fi = fine_interior(delta, 1)?;
    if fi.is_empty() {
        return Err(Error::NoFineInterior);
    }
    Ok(fi.support)
}

/// `{x : <x, ν> >= Min_q(ν) for ν in support}`, reduced.
pub fn closure_of<P: Polytope>(q: &P, support: &[IntVector]) -> Result<RationalHPolytope> {
    if support.is_empty() {
        return Err(Error::NoFineInterior);
    }
    let hs = support
        .iter()
        .map(|nu| Ok(Halfspace::new(nu.clone(), q.min_support(nu)?)))
        .collect::<Result<Vec<_>>>()?;
    RationalHPolytope::new(q.ambient_dim(), hs)?.reduced()
}

/// `C(Δ)` from an already computed Fine interior.
pub fn canonical_closure_from(delta: &LatticePolytope, fi: &FineInteriorResult) -> Result<CanonicalClosureResult> {
    if fi.is_empty() {
        return Err(Error::NoFineInterior);
    }
    let closure = closure_of(delta, &fi.support)?;
    let extra_vertices = closure
        .vertices()
        .iter()
        .filter(|v| match v.to_integral() {
            Some(p) => !delta.contains(&p),
            None => true,
        })
        .cloned()
        .collect();
    Ok(CanonicalClosureResult {
        is_lattice: closure.is_lattice(),
        closure,
        extra_vertices,
    })
}

pub fn canonical_closure(delta: &LatticePolytope) -> Result<CanonicalClosureResult> {
    let fi = fine_interior(delta, 1)?;
    canonical_closure_from(delta, &fi)
}

/// Whether `C(Δ)` is a lattice polytope.
pub fn is_cartier(delta: &LatticePolytope) -> Result<bool> {
    Ok(canonical_closure(delta)?.is_lattice)
}
