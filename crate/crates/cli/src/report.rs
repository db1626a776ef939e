//! Report assembly.
//!
//! Reports are `serde_json::Value` trees. Object keys are kept sorted, so
//! serializing the same report twice gives the same bytes. Rationals are
//! strings `"p/q"` (or `"p"`), lattice vectors are integer arrays.

use serde_json::{json, Map, Value};
use toric_core::{
    CanonicalClosureResult, Facet, FineInteriorResult, HypothesisFlags, IntVector, Integer, IntersectionCheck,
    KernelReport, LatticePolytope, LaurentPolynomial, MapVariant, RatVector, Rational, Root, RootComparison,
    SubfamilyReport,
};

use crate::input::{ResolvedPolynomial, SupportChoice};

pub fn integer(a: &Integer) -> Value {
    match i64::try_from(a) {
        Ok(x) => json!(x),
        Err(_) => json!(a.to_string()),
    }
}

pub fn rational(a: &Rational) -> Value {
    Value::String(a.to_string())
}

pub fn lattice_vector(v: &IntVector) -> Value {
    Value::Array(v.coords().iter().map(integer).collect())
}

pub fn rational_vector(v: &RatVector) -> Value {
    Value::Array(v.0.iter().map(rational).collect())
}

fn lattice_vectors<'a>(vs: impl IntoIterator<Item = &'a IntVector>) -> Value {
    Value::Array(vs.into_iter().map(lattice_vector).collect())
}

pub fn polynomial(f: &LaurentPolynomial) -> Value {
    Value::Array(
        f.terms()
            .map(|(m, a)| json!({ "exponent": lattice_vector(m), "coeff": rational(a) }))
            .collect(),
    )
}

fn facet(f: &Facet) -> Value {
    json!({ "normal": lattice_vector(&f.normal), "offset": integer(&f.offset) })
}

pub fn variant_name(v: MapVariant) -> &'static str {
    match v {
        MapVariant::Ambient => "ambient",
        MapVariant::Family => "family",
    }
}

/// A section that could not be computed; the message is the library's.
pub fn refused(reason: impl ToString) -> Value {
    json!({ "refused": reason.to_string() })
}

pub fn polytope(delta: &LatticePolytope, lattice_points: usize, interior_points: usize) -> Value {
    json!({
        "vertices": lattice_vectors(delta.vertices()),
        "facets": facets(delta),
        "lattice_point_count": lattice_points,
        "interior_point_count": interior_points,
    })
}

pub fn facets(delta: &LatticePolytope) -> Value {
    Value::Array(delta.facets().iter().map(facet).collect())
}

pub fn lattice_points(points: &[IntVector], interior: &[IntVector]) -> Value {
    json!({
        "count": points.len(),
        "points": lattice_vectors(points),
        "interior_count": interior.len(),
        "interior_points": lattice_vectors(interior),
    })
}

pub fn fine_interior(fi: &FineInteriorResult) -> Value {
    let cert = &fi.stability_certificate;
    json!({
        "dim": fi.dim(),
        "vertices": Value::Array(fi.fine_interior.vertices().iter().map(rational_vector).collect()),
        "support": lattice_vectors(&fi.support),
        "stability": {
            "scale": cert.scale,
            "candidate_count": cert.candidate_count,
            "enlarged_scale": cert.enlarged_scale,
            "enlarged_candidate_count": cert.enlarged_candidate_count,
            "stable": cert.stable,
        },
    })
}

pub fn support(fi: &FineInteriorResult) -> Value {
    lattice_vectors(&fi.support)
}

pub fn canonical_closure(cc: &CanonicalClosureResult) -> Value {
    json!({
        "vertices": Value::Array(cc.closure.vertices().iter().map(rational_vector).collect()),
        "is_lattice": cc.is_lattice,
        "extra_vertices": Value::Array(cc.extra_vertices.iter().map(rational_vector).collect()),
    })
}

fn root(r: &Root) -> Value {
    json!({ "alpha": lattice_vector(&r.alpha), "distinguished_ray": lattice_vector(&r.distinguished_ray) })
}

fn root_list(rs: &[Root]) -> Value {
    Value::Array(rs.iter().map(root).collect())
}

pub fn roots(rc: &RootComparison) -> Value {
    json!({
        "R_delta": root_list(&rc.r_delta),
        "R_canonical": root_list(&rc.r_canonical),
        "R_support": root_list(&rc.r_support),
        "difference": root_list(&rc.difference),
        "inclusion_holds": rc.inclusion_holds,
        "equality_holds": rc.equality_holds,
    })
}

fn flags(h: &HypothesisFlags) -> Value {
    json!({
        "dim_at_least_two": h.dim_at_least_two,
        "has_interior_points": h.has_interior_points,
        "surface_condition": h.surface_condition,
        "newton_polytope_matches": h.newton_polytope_matches,
        "all_hold": h.all_hold(),
    })
}

pub fn kernel(k: &KernelReport) -> Value {
    let torus: Vec<Value> = k.torus_part.iter().map(polynomial).collect();
    let root_part: Vec<Value> = k
        .root_part
        .iter()
        .map(|(r, w)| json!({ "alpha": lattice_vector(&r.alpha), "w": polynomial(w) }))
        .collect();
    json!({
        "variant": variant_name(k.variant),
        "basis": { "torus": torus, "roots": root_part },
        "kernel_dim": k.kernel_dim,
        "non_projectivized_kernel_dim": k.non_projectivized_kernel_dim(),
        "ambient_space_dim": k.ambient_space_dim,
        "moduli": k.moduli,
        "hypothesis_flags": flags(&k.hypothesis_flags),
        "independence_verified": k.independence_verified,
    })
}

pub fn intersection_check(c: &IntersectionCheck) -> Value {
    json!({
        "agrees": c.agrees,
        "ambient_kernel_dim": c.ambient_kernel_dim,
        "family_kernel_dim": c.family_kernel_dim,
        "intersection_dim": c.intersection_dim,
        "dim_drop": c.dim_drop,
        "expected_drop": c.expected_drop,
    })
}

pub fn moduli(ambient: &KernelReport, family: &KernelReport, check: &IntersectionCheck) -> Value {
    json!({
        "ambient": ambient.moduli,
        "family": family.moduli,
        "intersection_check": intersection_check(check),
    })
}

pub fn subfamily(s: &SubfamilyReport) -> Value {
    json!({
        "subset": lattice_vectors(&s.subset),
        "kernel_basis": Value::Array(s.kernel_basis_in_a.iter().map(polynomial).collect()),
        "moduli": s.moduli,
        "vertex_lemma": {
            "applicable": s.vertex_lemma_applicable,
            "moduli": s.vertex_lemma_moduli,
            "agrees": s.vertex_lemma_agrees,
        },
    })
}

pub fn polynomial_record(p: &ResolvedPolynomial) -> Value {
    let mut m = Map::new();
    m.insert("terms".into(), polynomial(&p.f));
    match &p.generic {
        None => {
            m.insert("source".into(), json!("terms"));
        }
        Some(g) => {
            m.insert("source".into(), json!("generic"));
            m.insert("seed".into(), json!(g.seed));
            m.insert("range".into(), json!(g.range));
            let support = match &g.support {
                SupportChoice::All => json!("all"),
                SupportChoice::Vertices => json!("vertices"),
                SupportChoice::Subfamily => json!("subfamily"),
                SupportChoice::Explicit(pts) => lattice_vectors(pts),
            };
            m.insert("support".into(), support);
        }
    }
    Value::Object(m)
}

/// Pretty JSON with a trailing newline.
pub fn to_json(report: &Value) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
    s.push('\n');
    s
}
