//! Height functions, the polynomials `w_{-α}(f)`, and explicit kernel bases
//! of the Kodaira-Spencer maps of the ambient toric variety (`κ_{P,f}`) and
//! of the tautological family (`κ_f`).
//!
//! Quotients by `C·f` are never formed explicitly: `f` is carried alongside
//! every basis and ranks are taken of `{f} ∪ basis`.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exact::{floor, span_intersection, IntVector, Integer, RatMatrix, Rational};
use crate::fine_interior::{
    canonical_closure_from, fine_interior_certified, CanonicalClosureResult, FineInteriorResult,
};
use crate::laurent::LaurentPolynomial;
use crate::polytope::{newton_polytope, LatticePolytope, Polytope};
use crate::roots::{compare_roots, Root, RootComparison};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MapVariant {
    /// `κ_{P,f}`: deformations inside the ambient toric variety.
    Ambient,
    /// `κ_f`: deformations inside the family over `L(Δ)`.
    Family,
}

/// Everything about `Δ` that the kernel computations need, computed once.
#[derive(Clone, Debug)]
pub struct ToricAnalysis {
    pub delta: LatticePolytope,
    pub fine: FineInteriorResult,
    pub closure: CanonicalClosureResult,
    pub roots: RootComparison,
    delta_points: Vec<IntVector>,
    closure_points: Vec<IntVector>,
    interior_count: usize,
}

impl ToricAnalysis {
    /// Runs the Fine interior (with the `scale + 1` stability check),
    /// canonical closure and root computations. Fails with `NoFineInterior`
    /// when `F(Δ)` is empty.
    pub fn new(delta: LatticePolytope, scale: u32) -> Result<Self> {
        let fine = fine_interior_certified(&delta, scale)?;
        let closure = canonical_closure_from(&delta, &fine)?;
        let roots = compare_roots(&delta, &fine, &closure)?;
        let delta_points = delta.lattice_points()?;
        let closure_points = closure.closure.lattice_points()?;
        let interior_count = delta.interior_lattice_points()?.len();
        Ok(ToricAnalysis {
            delta,
            fine,
            closure,
            roots,
            delta_points,
            closure_points,
            interior_count,
        })
    }

    pub fn n(&self) -> usize {
        self.delta.ambient_dim()
    }

    /// `Δ ∩ M`, sorted.
    pub fn delta_points(&self) -> &[IntVector] {
        &self.delta_points
    }

    /// `C(Δ) ∩ M`, sorted.
    pub fn closure_points(&self) -> &[IntVector] {
        &self.closure_points
    }

    pub fn interior_count(&self) -> usize {
        self.interior_count
    }

    pub fn roots_for(&self, variant: MapVariant) -> &[Root] {
        match variant {
            MapVariant::Ambient => &self.roots.r_canonical,
            MapVariant::Family => &self.roots.r_delta,
        }
    }

    pub fn hypothesis_flags(&self, f: &LaurentPolynomial) -> HypothesisFlags {
        let n = self.n();
        HypothesisFlags {
            dim_at_least_two: n >= 2,
            has_interior_points: self.interior_count > 0,
            surface_condition: n != 2 || self.interior_count >= 2,
            newton_polytope_matches: newton_polytope(f)
                .map(|p| p.vertices() == self.delta.vertices())
                .unwrap_or(false),
        }
    }

    /// `w_{-α}(f)` with heights measured in `C(Δ)`.
    pub fn w_poly(&self, f: &LaurentPolynomial, alpha: &IntVector) -> Result<LaurentPolynomial> {
        if !self.roots.r_canonical.iter().any(|r| &r.alpha == alpha) {
            return Err(Error::NotARoot(alpha.to_string()));
        }
        w_poly(&self.closure.closure, f, alpha)
    }

    fn coefficient_row(&self, p: &LaurentPolynomial) -> Result<Vec<Rational>> {
        let index: BTreeMap<&IntVector, usize> =
            self.closure_points.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut row = vec![Rational::zero(); self.closure_points.len()];
        for (m, a) in p.terms() {
            let &i = index.get(m).ok_or_else(|| Error::PointOutside(m.to_string()))?;
            row[i] = a.clone();
        }
        Ok(row)
    }

    fn coefficient_matrix<'a, I>(&self, polys: I) -> Result<RatMatrix>
    where
        I: IntoIterator<Item = &'a LaurentPolynomial>,
    {
        let rows = polys
            .into_iter()
            .map(|p| self.coefficient_row(p))
            .collect::<Result<Vec<_>>>()?;
        RatMatrix::from_rows(self.closure_points.len(), rows)
    }

    /// Coordinate subspace `L(S)` inside `L(C(Δ))`.
    fn coordinate_span(&self, points: &[IntVector]) -> RatMatrix {
        let wanted: BTreeSet<&IntVector> = points.iter().collect();
        let cols = self.closure_points.len();
        let rows = self
            .closure_points
            .iter()
            .enumerate()
            .filter(|(_, m)| wanted.contains(m))
            .map(|(i, _)| {
                let mut r = vec![Rational::zero(); cols];
                r[i] = Rational::one();
                r
            })
            .collect();
        RatMatrix::from_rows(cols, rows).expect("rows have closure width")
    }

    fn poly_from_row(&self, row: &[Rational]) -> LaurentPolynomial {
        LaurentPolynomial::from_terms(
            self.n(),
            self.closure_points
                .iter()
                .zip(row)
                .filter(|(_, a)| !a.is_zero())
                .map(|(m, a)| (m.clone(), a.clone())),
        )
        .expect("closure points have the ambient dimension")
    }
}

/// The conditions under which the kernel bases are known to be exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HypothesisFlags {
    pub dim_at_least_two: bool,
    pub has_interior_points: bool,
    /// `n = 2` requires at least two interior lattice points.
    pub surface_condition: bool,
    pub newton_polytope_matches: bool,
}

impl HypothesisFlags {
    pub fn all_hold(&self) -> bool {
        self.dim_at_least_two && self.has_interior_points && self.surface_condition && self.newton_polytope_matches
    }
}

/// The facet normal `n(α)` of `q` with `<α, n(α)> = 1`, and its offset.
fn distinguished_facet<P: Polytope>(q: &P, alpha: &IntVector) -> Result<(IntVector, Rational)> {
    let hs = q.halfspaces();
    let mut found = None;
    for h in &hs {
        let p = alpha.pairing(&h.normal)?;
        if p.is_one() {
            if found.is_some() {
                return Err(Error::NotARoot(alpha.to_string()));
            }
            found = Some((h.normal.clone(), h.offset.clone()));
        } else if p.is_positive() {
            return Err(Error::NotARoot(alpha.to_string()));
        }
    }
    found.ok_or_else(|| Error::NotARoot(alpha.to_string()))
}

/// `max{k >= 0 : m - kα ∈ q}` by stepping.
pub fn height_iterative<P: Polytope>(q: &P, alpha: &IntVector, m: &IntVector) -> Result<Integer> {
    if !q.contains_lattice_point(m) {
        return Err(Error::PointOutside(m.to_string()));
    }
    distinguished_facet(q, alpha)?;
    let mut k = Integer::zero();
    let mut cur = m.sub(alpha);
    while q.contains_lattice_point(&cur) {
        k += 1;
        cur = cur.sub(alpha);
    }
    Ok(k)
}

/// `<m, n_Γ> - b_Γ` for the facet `Γ` distinguished by `α`.
pub fn height_facet<P: Polytope>(q: &P, alpha: &IntVector, m: &IntVector) -> Result<Integer> {
    if !q.contains_lattice_point(m) {
        return Err(Error::PointOutside(m.to_string()));
    }
    let (normal, offset) = distinguished_facet(q, alpha)?;
    let value = Rational::from_integer(m.dot(&normal)) - offset;
    Ok(floor(&value))
}

/// `ht_{-α}(m)`, computed by stepping and by the facet formula; the two
/// must agree.
pub fn height<P: Polytope>(q: &P, alpha: &IntVector, m: &IntVector) -> Result<Integer> {
    let iterative = height_iterative(q, alpha, m)?;
    let facet = height_facet(q, alpha, m)?;
    if iterative != facet {
        return Err(Error::HeightMismatch {
            point: m.to_string(),
            iterative: iterative.to_string(),
            facet: facet.to_string(),
        });
    }
    Ok(iterative)
}

/// `w_{-α}(f) = Σ ht_{-α}(m) a_m x^{m-α}` with heights measured in `q`.
pub fn w_poly<P: Polytope>(q: &P, f: &LaurentPolynomial, alpha: &IntVector) -> Result<LaurentPolynomial> {
    let (normal, offset) = distinguished_facet(q, alpha)?;
    let mut out = LaurentPolynomial::zero(f.nvars());
    for (m, a) in f.terms() {
        if !q.contains_lattice_point(m) {
            return Err(Error::PointOutside(m.to_string()));
        }
        let ht = floor(&(Rational::from_integer(m.dot(&normal)) - &offset));
        if ht.is_zero() {
            continue;
        }
        out.add_term(m.sub(alpha), a * Rational::from_integer(ht))?;
    }
    Ok(out)
}

/// `x_i ∂f/∂x_i` for the 1-based axis `i`.
pub fn toric_derivative(f: &LaurentPolynomial, i: usize) -> Result<LaurentPolynomial> {
    let n = f.nvars();
    if i == 0 || i > n {
        return Err(Error::AxisOutOfRange { index: i, n });
    }
    LaurentPolynomial::from_terms(
        n,
        f.terms()
            .map(|(m, a)| (m.clone(), a * Rational::from_integer(m.0[i - 1].clone()))),
    )
}

/// Rank of the coefficient matrix of `{f, x_1 ∂f/∂x_1, ..., x_n ∂f/∂x_n}`.
pub fn torus_part_rank(f: &LaurentPolynomial) -> Result<usize> {
    let support = f.support();
    let mut polys = vec![f.clone()];
    for i in 1..=f.nvars() {
        polys.push(toric_derivative(f, i)?);
    }
    let rows = polys
        .iter()
        .map(|p| support.iter().map(|m| p.coeff(m)).collect())
        .collect();
    Ok(RatMatrix::from_rows(support.len(), rows)?.rank())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelReport {
    pub variant: MapVariant,
    pub torus_part: Vec<LaurentPolynomial>,
    pub root_part: Vec<(Root, LaurentPolynomial)>,
    /// Dimension of the kernel in `L(·)/C·f`.
    pub kernel_dim: usize,
    /// `l(C(Δ)) - 1` or `l(Δ) - 1`.
    pub ambient_space_dim: usize,
    pub moduli: i64,
    pub hypothesis_flags: HypothesisFlags,
    pub independence_verified: bool,
}

impl KernelReport {
    /// Kernel dimension when `f` itself is not divided out.
    pub fn non_projectivized_kernel_dim(&self) -> usize {
        self.kernel_dim + 1
    }

    pub fn basis(&self) -> impl Iterator<Item = &LaurentPolynomial> {
        self.torus_part.iter().chain(self.root_part.iter().map(|(_, p)| p))
    }
}

fn check_newton(analysis: &ToricAnalysis, f: &LaurentPolynomial) -> Result<()> {
    if f.nvars() != analysis.n() {
        return Err(Error::DimensionMismatch {
            expected: analysis.n(),
            got: f.nvars(),
        });
    }
    let p = newton_polytope(f)?;
    if p.vertices() != analysis.delta.vertices() {
        return Err(Error::DegenerateSupport);
    }
    Ok(())
}

/// The explicit kernel basis of `κ_{P,f}` (ambient) or `κ_f` (family):
/// the `n` torus derivatives and `w_{-α}(f)` over the matching root set.
pub fn kernel_basis(analysis: &ToricAnalysis, f: &LaurentPolynomial, variant: MapVariant) -> Result<KernelReport> {
    check_newton(analysis, f)?;
    let n = analysis.n();
    let torus_part = (1..=n)
        .map(|i| toric_derivative(f, i))
        .collect::<Result<Vec<_>>>()?;
    let root_part = analysis
        .roots_for(variant)
        .iter()
        .map(|r| Ok((r.clone(), w_poly(&analysis.closure.closure, f, &r.alpha)?)))
        .collect::<Result<Vec<_>>>()?;

    let expected = 1 + n + root_part.len();
    let m = analysis.coefficient_matrix(
        std::iter::once(f)
            .chain(torus_part.iter())
            .chain(root_part.iter().map(|(_, p)| p)),
    )?;
    let got = m.rank();
    if got != expected {
        return Err(Error::DegenerateCoefficients { expected, got });
    }

    let kernel_dim = n + root_part.len();
    let ambient_space_dim = match variant {
        MapVariant::Ambient => analysis.closure_points.len() - 1,
        MapVariant::Family => analysis.delta_points.len() - 1,
    };
    Ok(KernelReport {
        variant,
        torus_part,
        root_part,
        kernel_dim,
        ambient_space_dim,
        moduli: ambient_space_dim as i64 - kernel_dim as i64,
        hypothesis_flags: analysis.hypothesis_flags(f),
        independence_verified: true,
    })
}

/// Comparison of `span(ker κ_{P,f}) ∩ L(Δ)` with `span(ker κ_f)`, both taken
/// together with `f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionCheck {
    pub agrees: bool,
    pub ambient_kernel_dim: usize,
    pub family_kernel_dim: usize,
    /// Dimension of the intersection, modulo `f`.
    pub intersection_dim: usize,
    pub dim_drop: usize,
    /// `#(R(Σ_{C(Δ)}) \ R(Σ_Δ))`.
    pub expected_drop: usize,
}

pub fn kernel_intersection_check(analysis: &ToricAnalysis, f: &LaurentPolynomial) -> Result<IntersectionCheck> {
    let ambient = kernel_basis(analysis, f, MapVariant::Ambient)?;
    let family = kernel_basis(analysis, f, MapVariant::Family)?;
    let a = analysis.coefficient_matrix(std::iter::once(f).chain(ambient.basis()))?;
    let fam = analysis.coefficient_matrix(std::iter::once(f).chain(family.basis()))?;
    let restricted = span_intersection(&a, &analysis.coordinate_span(&analysis.delta_points))?;
    let family_span = fam.rref().0;
    Ok(IntersectionCheck {
        agrees: restricted == family_span,
        ambient_kernel_dim: ambient.kernel_dim,
        family_kernel_dim: family.kernel_dim,
        intersection_dim: restricted.nrows().saturating_sub(1),
        dim_drop: ambient.kernel_dim - family.kernel_dim,
        expected_drop: analysis.roots.difference.len(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubfamilyReport {
    /// The exponent set `A`, sorted.
    pub subset: Vec<IntVector>,
    /// Basis of `span(ker κ_f) ∩ L(A)` modulo `f`.
    pub kernel_basis_in_a: Vec<LaurentPolynomial>,
    pub moduli: i64,
    pub vertex_lemma_applicable: bool,
    pub vertex_lemma_moduli: Option<i64>,
    /// Whether the vertex-lemma count matches the linear algebra.
    pub vertex_lemma_agrees: Option<bool>,
}

/// No vertex lies one lattice step inside any facet.
fn vertex_lemma_hypothesis(delta: &LatticePolytope) -> bool {
    delta.facets().iter().all(|facet| {
        let shifted = &facet.offset + Integer::one();
        delta.vertices().iter().all(|v| v.dot(&facet.normal) != shifted)
    })
}

/// Moduli of the subfamily with exponents restricted to `a`.
pub fn subfamily_analysis(
    analysis: &ToricAnalysis,
    f: &LaurentPolynomial,
    a: &[IntVector],
) -> Result<SubfamilyReport> {
    let subset: Vec<IntVector> = a.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    for m in &subset {
        if !analysis.delta.contains(m) {
            return Err(Error::NotInPolytope(m.to_string()));
        }
    }
    for v in analysis.delta.vertices() {
        if subset.binary_search(v).is_err() {
            return Err(Error::MissingVertex(v.to_string()));
        }
    }
    for m in f.support() {
        if subset.binary_search(&m).is_err() {
            return Err(Error::TermOutsideSubfamily(m.to_string()));
        }
    }

    let family = kernel_basis(analysis, f, MapVariant::Family)?;
    let span = analysis.coefficient_matrix(std::iter::once(f).chain(family.basis()))?;
    let inter = span_intersection(&span, &analysis.coordinate_span(&subset))?;

    // Extend {f} to a basis of the intersection and drop f.
    let mut chosen = analysis.coefficient_matrix(std::iter::once(f))?;
    let mut basis = Vec::new();
    for row in inter.rows() {
        let mut trial = chosen.clone();
        trial.push_row(row.clone())?;
        if trial.rank() > chosen.nrows() {
            chosen = trial;
            basis.push(analysis.poly_from_row(row));
        }
    }
    let dim = inter.nrows().saturating_sub(1);
    let moduli = subset.len() as i64 - 1 - dim as i64;

    let vertex_lemma_applicable =
        subset.as_slice() == analysis.delta.vertices() && vertex_lemma_hypothesis(&analysis.delta);
    let vertex_lemma_moduli = vertex_lemma_applicable
        .then(|| analysis.delta.vertices().len() as i64 - analysis.n() as i64 - 1);
    Ok(SubfamilyReport {
        subset,
        kernel_basis_in_a: basis,
        moduli,
        vertex_lemma_applicable,
        vertex_lemma_agrees: vertex_lemma_moduli.map(|m| m == moduli),
        vertex_lemma_moduli,
    })
}

/// Seeded pseudo-random nonzero integer coefficients in `[-range, range]`
/// on `a` (default: all lattice points of `Δ`).
pub fn generic_sample(
    delta: &LatticePolytope,
    a: Option<&[IntVector]>,
    seed: u64,
    range: i64,
) -> Result<LaurentPolynomial> {
    if range < 1 {
        return Err(Error::InvalidRange(range));
    }
    let support: Vec<IntVector> = match a {
        None => delta.lattice_points()?,
        Some(a) => {
            let set: BTreeSet<IntVector> = a.iter().cloned().collect();
            for m in &set {
                if !delta.contains(m) {
                    return Err(Error::NotInPolytope(m.to_string()));
                }
            }
            for v in delta.vertices() {
                if !set.contains(v) {
                    return Err(Error::MissingVertex(v.to_string()));
                }
            }
            set.into_iter().collect()
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let terms: Vec<(IntVector, Rational)> = support
        .into_iter()
        .map(|m| {
            let c = loop {
                let c: i64 = rng.gen_range(-range..=range);
                if c != 0 {
                    break c;
                }
            };
            (m, Rational::from_integer(c.into()))
        })
        .collect();
    LaurentPolynomial::from_terms(delta.ambient_dim(), terms)
}
