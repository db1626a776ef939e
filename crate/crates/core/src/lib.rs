//! Exact lattice-polytope invariants for families of toric hypersurfaces.
//!
//! Given a lattice polytope `Δ` and a Laurent polynomial `f` with Newton
//! polytope `Δ`, this crate computes the Fine interior `F(Δ)`, its support
//! `S_F(Δ)`, the canonical closure `C(Δ)`, the Demazure roots of the fans
//! involved, and explicit Laurent-polynomial bases for the kernels of the
//! Kodaira-Spencer maps of the ambient and tautological families.
//!
//! Everything is computed with arbitrary-precision integers and rationals;
//! there is no floating point anywhere in the crate.

pub mod dd;
pub mod error;
pub mod exact;
pub mod fine_interior;
pub mod kodaira;
pub mod laurent;
pub mod polytope;
pub mod roots;

pub use error::{Error, Result};
pub use exact::{pairing, primitive, span_intersection, IntVector, Integer, RatMatrix, RatVector, Rational};
pub use fine_interior::{
    canonical_closure, canonical_closure_from, candidate_normals, closure_of, fine_interior,
    fine_interior_certified, fine_interior_of, is_cartier, support, CanonicalClosureResult, FineInteriorResult, StabilityCertificate,
};
pub use kodaira::{
    generic_sample, height, height_facet, height_iterative, kernel_basis, kernel_intersection_check, subfamily_analysis,
    toric_derivative, torus_part_rank, w_poly, HypothesisFlags, IntersectionCheck, KernelReport, MapVariant,
    SubfamilyReport, ToricAnalysis,
};
pub use laurent::LaurentPolynomial;
pub use polytope::{
    divisor_polytope, faces, hull, newton_polytope, restrict_to_face, Face, Facet, Halfspace,
    LatticePolytope, Polytope, RationalHPolytope, ToricDivisorData,
};
pub use roots::{compare_roots, root_set_difference, roots, RaySet, RayOrigin, Root, RootComparison};
