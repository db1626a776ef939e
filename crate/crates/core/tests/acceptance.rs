//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p toric-core --test acceptance`.

mod common;

use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap};
use std::rc::Rc;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{arb_instance, arb_polytope, runner, v, vs};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use toric_core::{
    fine_interior, fine_interior_certified, generic_sample, height, height_facet, height_iterative, hull,
    kernel_basis, kernel_intersection_check, subfamily_analysis, torus_part_rank, w_poly, Error, IntVector,
    LaurentPolynomial, LatticePolytope, MapVariant, Polytope, RatMatrix, RatVector, Rational, RationalHPolytope,
    ToricAnalysis,
};

type Check = std::result::Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn err<E: std::fmt::Debug>(e: E) -> String {
    format!("{e:?}")
}

fn q(x: i64) -> Rational {
    Rational::from_integer(x.into())
}

fn ones_on(points: &[IntVector]) -> LaurentPolynomial {
    LaurentPolynomial::from_terms(points[0].dim(), points.iter().map(|m| (m.clone(), q(1)))).unwrap()
}

fn alphas(roots: &[toric_core::Root]) -> BTreeSet<IntVector> {
    roots.iter().map(|r| r.alpha.clone()).collect()
}

fn dilated_simplex(n: usize, k: i64) -> LatticePolytope {
    let mut pts = vec![IntVector::zero(n)];
    for i in 0..n {
        pts.push(IntVector::unit(n, i).scale(&k.into()));
    }
    hull(&pts).unwrap()
}

fn elliptic() -> LatticePolytope {
    hull(&vs(&[&[-1, -1, -1], &[5, 1, 3], &[-1, 10, 0], &[-1, -1, 0]])).unwrap()
}

fn criterion_1() -> Check {
    let delta = hull(&vs(&[&[0, 1], &[0, 3], &[4, 1]])).map_err(err)?;
    let fi = fine_interior(&delta, 1).map_err(err)?;
    let verts: Vec<RatVector> = fi.fine_interior.vertices().to_vec();
    ensure!(verts == vec![v(&[1, 2]).to_rational()], "F(Δ) vertices {verts:?}");
    ensure!(fi.dim() == 0, "dim F = {}", fi.dim());
    ensure!(fi.support.contains(&v(&[0, -1])), "support {:?}", fi.support);
    Ok(())
}

fn criterion_2() -> Check {
    let p = hull(&vs(&[&[-1, 1], &[3, 4], &[4, 3], &[4, 1]])).map_err(err)?;
    // Shifting by v = (-1,-1) is stepping by -α with α = (1,1).
    let h = height(&p, &v(&[1, 1]), &v(&[3, 3])).map_err(err)?;
    ensure!(h == 2.into(), "ht = {h}");
    Ok(())
}

fn criterion_3() -> Check {
    let p = hull(&vs(&[&[-1, 1], &[3, 1], &[0, 4]])).map_err(err)?;
    let alpha = v(&[-1, 1]);
    let labels = [([0, 2], 1), ([1, 2], 1), ([2, 2], 1), ([0, 3], 2), ([1, 3], 2), ([0, 4], 3)];
    for (m, h) in labels {
        let got = height(&p, &alpha, &v(&m)).map_err(err)?;
        ensure!(got == h.into(), "ht({m:?}) = {got}, label {h}");
    }
    let f = ones_on(&p.lattice_points().map_err(err)?);
    let w = w_poly(&p, &f, &alpha).map_err(err)?;
    let thick = vs(&[&[1, 1], &[2, 1], &[3, 1], &[1, 2], &[2, 2], &[1, 3]]);
    let expected = LaurentPolynomial::from_terms(
        2,
        thick.iter().cloned().zip([1, 1, 1, 2, 2, 3].map(q)),
    )
    .map_err(err)?;
    ensure!(w == expected, "w = {w}");
    Ok(())
}

fn criterion_4() -> Check {
    let delta = dilated_simplex(3, 4);
    let an = ToricAnalysis::new(delta.clone(), 1).map_err(err)?;
    let closure_verts: Vec<RatVector> = an.closure.closure.vertices().to_vec();
    let delta_verts: Vec<RatVector> = delta.vertices().iter().map(|p| p.to_rational()).collect();
    ensure!(closure_verts == delta_verts, "C(Δ) ≠ Δ: {closure_verts:?}");

    let mut expected = BTreeSet::new();
    for i in 0..3 {
        let e = IntVector::unit(3, i);
        expected.insert(e.clone());
        expected.insert(e.neg());
        for j in 0..3 {
            if i != j {
                expected.insert(e.sub(&IntVector::unit(3, j)));
            }
        }
    }
    ensure!(expected.len() == 12, "oracle root count");
    ensure!(alphas(&an.roots.r_delta) == expected, "R(Σ_Δ) = {:?}", an.roots.r_delta);
    ensure!(alphas(&an.roots.r_canonical) == expected, "R(Σ_C) = {:?}", an.roots.r_canonical);

    let f = generic_sample(&delta, None, 0, 100).map_err(err)?;
    let report = kernel_basis(&an, &f, MapVariant::Family).map_err(err)?;
    ensure!(an.delta_points().len() == 35, "l(4Δ_3) = {}", an.delta_points().len());
    ensure!(report.independence_verified, "independence not verified");
    ensure!(report.kernel_dim == 15, "kernel_dim = {}", report.kernel_dim);
    ensure!(report.ambient_space_dim == 34, "ambient_space_dim = {}", report.ambient_space_dim);
    ensure!(report.moduli == 19, "moduli = {}", report.moduli);
    Ok(())
}

fn criterion_5() -> Check {
    let delta = elliptic();
    let interior = delta.interior_lattice_points().map_err(err)?;
    ensure!(interior.len() == 3, "l* = {}", interior.len());
    let an = ToricAnalysis::new(delta.clone(), 1).map_err(err)?;
    ensure!(an.fine.dim() == 1, "dim F = {}", an.fine.dim());
    let extra: Vec<RatVector> = an.closure.extra_vertices.clone();
    ensure!(extra == vec![v(&[1, -1, 1]).to_rational()], "extra vertices {extra:?}");

    let listed: BTreeSet<IntVector> = vs(&[
        &[-3, -1, -2],
        &[-1, -4, -1],
        &[-1, -3, -1],
        &[-1, -2, -1],
        &[-1, -1, -1],
        &[-1, 0, -1],
        &[0, -1, 0],
    ])
    .into_iter()
    .collect();
    ensure!(alphas(&an.roots.r_canonical) == listed, "ambient roots {:?}", an.roots.r_canonical);
    ensure!(an.roots.r_delta.len() == 6, "family roots {:?}", an.roots.r_delta);
    ensure!(alphas(&an.roots.r_delta).is_subset(&listed), "family roots not a subset");
    ensure!(alphas(&an.roots.difference) == [v(&[-1, 0, -1])].into_iter().collect(), "difference");

    let f = generic_sample(&delta, None, 0, 100).map_err(err)?;
    let ambient = kernel_basis(&an, &f, MapVariant::Ambient).map_err(err)?;
    let family = kernel_basis(&an, &f, MapVariant::Family).map_err(err)?;
    ensure!(ambient.root_part.len() == 7, "ambient root part {}", ambient.root_part.len());
    ensure!(family.root_part.len() == 6, "family root part {}", family.root_part.len());
    let check = kernel_intersection_check(&an, &f).map_err(err)?;
    ensure!(check.agrees, "intersection does not match family kernel");
    ensure!(check.dim_drop == 1 && check.expected_drop == 1, "drop {check:?}");
    ensure!(check.intersection_dim == family.kernel_dim, "{check:?}");
    Ok(())
}

fn vertex_subfamily_moduli(delta: &LatticePolytope, seed: u64) -> Result<toric_core::SubfamilyReport, String> {
    let an = ToricAnalysis::new(delta.clone(), 1).map_err(err)?;
    let verts = delta.vertices().to_vec();
    let f = generic_sample(delta, Some(&verts), seed, 100).map_err(err)?;
    subfamily_analysis(&an, &f, &verts).map_err(err)
}

fn criterion_6() -> Check {
    let simplices = [
        hull(&vs(&[&[-1, -1], &[2, -1], &[-1, 2]])).map_err(err)?,
        dilated_simplex(3, 4),
    ];
    for delta in &simplices {
        let r = vertex_subfamily_moduli(delta, 0)?;
        ensure!(r.moduli == 0, "moduli {} on {:?}", r.moduli, delta.vertices());
    }
    Ok(())
}

fn criterion_7() -> Check {
    let mut cube = Vec::new();
    for x in [-1, 1] {
        for y in [-1, 1] {
            for z in [-1, 1] {
                cube.push(v(&[x, y, z]));
            }
        }
    }
    let delta = hull(&cube).map_err(err)?;
    let r = vertex_subfamily_moduli(&delta, 0)?;
    ensure!(r.vertex_lemma_applicable, "lemma hypothesis not detected");
    ensure!(r.moduli == 8 - 3 - 1, "linear-algebra moduli {}", r.moduli);
    ensure!(r.vertex_lemma_moduli == Some(4) && r.vertex_lemma_agrees == Some(true), "{r:?}");
    Ok(())
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), TestCaseError> {
    if cond {
        Ok(())
    } else {
        Err(TestCaseError::fail(msg()))
    }
}

fn tc<T, E: std::fmt::Debug>(r: Result<T, E>) -> Result<T, TestCaseError> {
    r.map_err(|e| TestCaseError::fail(format!("{e:?}")))
}

thread_local! {
    static ANALYSES: RefCell<HashMap<Vec<IntVector>, Rc<ToricAnalysis>>> = RefCell::new(HashMap::new());
}

/// The property runners are seeded identically, so they visit the same
/// polytopes; the analysis of each is computed once.
fn analysis(delta: &LatticePolytope) -> Result<Rc<ToricAnalysis>, TestCaseError> {
    let key = delta.vertices().to_vec();
    if let Some(an) = ANALYSES.with(|c| c.borrow().get(&key).cloned()) {
        return Ok(an);
    }
    let an = Rc::new(tc(ToricAnalysis::new(delta.clone(), 1))?);
    ANALYSES.with(|c| c.borrow_mut().insert(key, an.clone()));
    Ok(an)
}

fn analysis_and_f(delta: &LatticePolytope, seed: u64) -> Result<(Rc<ToricAnalysis>, LaurentPolynomial), TestCaseError> {
    let an = analysis(delta)?;
    let f = tc(generic_sample(delta, None, seed, 100))?;
    Ok((an, f))
}

/// Cases per property; `TORIC_PROPTEST_CASES` overrides it for quick local runs.
fn cases() -> u32 {
    std::env::var("TORIC_PROPTEST_CASES")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(200)
}

fn property<S: Strategy>(
    name: &str,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let start = Instant::now();
    let n = cases();
    let r = runner(n).run(&strategy, test).map_err(|e| format!("{name}: {e}"));
    println!("    {name}: {n} cases, {} ({:.2?})", if r.is_ok() { "ok" } else { "failed" }, start.elapsed());
    r
}

fn criterion_8() -> Check {
    property("duality round trip", arb_polytope(), |delta| {
        // Every vertex satisfies every facet inequality, and the polytope cut
        // out by the facets has exactly the computed vertices.
        for f in delta.facets() {
            for p in delta.vertices() {
                check(p.pairing(&f.normal).unwrap() >= f.offset, || format!("{p} violates {f:?}"))?;
            }
        }
        let h = tc(RationalHPolytope::new(delta.ambient_dim(), delta.halfspaces()))?;
        let back: Vec<RatVector> = h.vertices().to_vec();
        let fwd: Vec<RatVector> = delta.vertices().iter().map(|p| p.to_rational()).collect();
        check(back == fwd, || format!("{back:?} vs {fwd:?}"))?;
        let again = tc(hull(delta.vertices()))?;
        check(again.facets() == delta.facets(), || "facets changed on re-hull".into())
    })?;

    property("height agreement", arb_instance(), |(delta, seed)| {
        let an = analysis(&delta)?;
        let c = &an.closure.closure;
        let pts = an.closure_points();
        for (i, r) in an.roots.r_canonical.iter().enumerate() {
            let m = &pts[(seed as usize).wrapping_add(i) % pts.len()];
            let a = tc(height_iterative(c, &r.alpha, m))?;
            let b = tc(height_facet(c, &r.alpha, m))?;
            check(a == b, || format!("ht({m}) along {}: {a} vs {b}", r.alpha))?;
        }
        Ok(())
    })?;

    property("support containment", arb_instance(), |(delta, seed)| {
        let (an, f) = analysis_and_f(&delta, seed)?;
        for r in &an.roots.r_delta {
            let w = tc(an.w_poly(&f, &r.alpha))?;
            for m in w.support() {
                check(delta.contains(&m), || format!("w_{{-{}}} escapes at {m}", r.alpha))?;
            }
        }
        Ok(())
    })?;

    property("support escape", arb_instance(), |(delta, seed)| {
        let (an, f) = analysis_and_f(&delta, seed)?;
        for r in &an.roots.difference {
            let w = tc(an.w_poly(&f, &r.alpha))?;
            check(w.support().iter().any(|m| !delta.contains(m)), || {
                format!("w_{{-{}}} stays inside Δ", r.alpha)
            })?;
        }
        Ok(())
    })?;

    property("independence modulo L(Δ)", arb_instance(), |(delta, seed)| {
        let (an, f) = analysis_and_f(&delta, seed)?;
        let outside: Vec<&IntVector> = an.closure_points().iter().filter(|m| !delta.contains(m)).collect();
        let rows = an
            .roots
            .difference
            .iter()
            .map(|r| {
                let w = an.w_poly(&f, &r.alpha)?;
                Ok(outside.iter().map(|m| w.coeff(m)).collect())
            })
            .collect::<Result<Vec<Vec<Rational>>, Error>>();
        let m = tc(RatMatrix::from_rows(outside.len(), tc(rows)?))?;
        check(m.rank() == an.roots.difference.len(), || {
            format!("rank {} < {}", m.rank(), an.roots.difference.len())
        })
    })?;

    property("root inclusion and equality", arb_instance(), |(delta, _)| {
        let an = analysis(&delta)?;
        check(an.roots.inclusion_holds, || "R(Σ_Δ) ⊄ R(Σ_C)".into())?;
        check(an.roots.equality_holds, || "R(S_F) ≠ R(Σ_C)".into())?;
        let d = alphas(&an.roots.r_delta);
        let c = alphas(&an.roots.r_canonical);
        check(d.is_subset(&c), || "inclusion recomputed".into())
    })?;

    property("scale stability", arb_polytope(), |delta| {
        let fi = tc(fine_interior_certified(&delta, 1))?;
        let cert = &fi.stability_certificate;
        check(cert.enlarged_scale == Some(2) && cert.stable == Some(true), || format!("{cert:?}"))
    })?;

    property("torus-part rank", arb_instance(), |(delta, seed)| {
        let f = tc(generic_sample(&delta, None, seed, 100))?;
        let r = tc(torus_part_rank(&f))?;
        check(r == delta.ambient_dim() + 1, || format!("rank {r}"))
    })?;
    Ok(())
}

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    run: fn() -> Check,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, name: "single-interior-point triangle: Fine interior and support", budget: Duration::from_secs(1), run: criterion_1 },
        Criterion { id: 2, name: "quadrilateral height", budget: Duration::from_secs(1), run: criterion_2 },
        Criterion { id: 3, name: "triangle heights and w-polynomial", budget: Duration::from_secs(1), run: criterion_3 },
        Criterion { id: 4, name: "4Δ_3: roots, kernel 15, moduli 19", budget: Duration::from_secs(5), run: criterion_4 },
        Criterion { id: 5, name: "elliptic tetrahedron: 7 vs 6 roots", budget: Duration::from_secs(5), run: criterion_5 },
        Criterion { id: 6, name: "simplex vertex subfamily has no moduli", budget: Duration::from_secs(1), run: criterion_6 },
        Criterion { id: 7, name: "vertex-subfamily lemma on the cube", budget: Duration::from_secs(5), run: criterion_7 },
        Criterion { id: 8, name: "property suites", budget: Duration::from_secs(120), run: criterion_8 },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let mut outcome = (c.run)();
        let elapsed = start.elapsed();
        if outcome.is_ok() && elapsed > c.budget {
            outcome = Err(format!("took {elapsed:.2?}, budget {:?}", c.budget));
        }
        match outcome {
            Ok(()) => println!("PASS criterion {}: {} ({elapsed:.2?})", c.id, c.name),
            Err(e) => {
                failed += 1;
                println!("FAIL criterion {}: {} ({elapsed:.2?}): {e}", c.id, c.name);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
