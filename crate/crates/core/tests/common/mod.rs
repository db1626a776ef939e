#![allow(dead_code)]

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use toric_core::{hull, IntVector, Integer, LatticePolytope};

pub fn v(c: &[i64]) -> IntVector {
    IntVector::from_i64s(c)
}

pub fn vs(c: &[&[i64]]) -> Vec<IntVector> {
    c.iter().map(|x| v(x)).collect()
}

/// Coordinate bound used for random polytopes of dimension `n`.
pub fn bound(n: usize) -> i64 {
    match n {
        2 => 4,
        3 => 3,
        _ => 2,
    }
}

fn point(n: usize) -> impl Strategy<Value = IntVector> {
    let b = bound(n);
    prop::collection::vec(-b..=b, n).prop_map(IntVector::from)
}

/// Full-dimensional lattice polytopes of dimension 2 to 4 spanned by a few
/// random points. Many of them have an empty Fine interior.
pub fn arb_polytope() -> impl Strategy<Value = LatticePolytope> {
    (2usize..=4)
        .prop_flat_map(|n| prop::collection::vec(point(n), n + 1..n + 5))
        .prop_filter_map("not full-dimensional", |pts| {
            hull(&pts).ok().filter(|p| p.is_full_dimensional())
        })
}

/// Lattice polytopes of dimension 2 to 4 with the origin in the interior,
/// hence with a nonempty Fine interior.
pub fn arb_polytope_with_interior() -> impl Strategy<Value = LatticePolytope> {
    (2usize..=4)
        .prop_flat_map(|n| {
            let b = bound(n);
            (
                prop::collection::vec((1..=b, 1..=b), n),
                prop::collection::vec(point(n), 0..4),
            )
                .prop_map(move |(axes, extra)| {
                    let mut pts = extra;
                    for (i, (lo, hi)) in axes.into_iter().enumerate() {
                        let e = IntVector::unit(n, i);
                        pts.push(e.scale(&Integer::from(hi)));
                        pts.push(e.scale(&Integer::from(-lo)));
                    }
                    hull(&pts).expect("cross-polytope hull")
                })
        })
}

/// A polytope with a nonempty Fine interior together with a seed for a
/// generic coefficient choice.
pub fn arb_instance() -> impl Strategy<Value = (LatticePolytope, u64)> {
    (arb_polytope_with_interior(), any::<u64>())
}

/// Deterministic runner so failures reproduce across runs.
pub fn runner(cases: u32) -> TestRunner {
    let config = Config {
        cases,
        failure_persistence: None,
        max_global_rejects: 100_000,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

/// The named polytopes used throughout the tests and the CLI corpus.
pub fn corpus() -> Vec<(&'static str, LatticePolytope)> {
    let mut cube = Vec::new();
    for x in [-1, 1] {
        for y in [-1, 1] {
            for z in [-1, 1] {
                cube.push(v(&[x, y, z]));
            }
        }
    }
    let quartic = vs(&[&[0, 0, 0], &[4, 0, 0], &[0, 4, 0], &[0, 0, 4]]);
    [
        ("point-triangle", vs(&[&[0, 1], &[0, 3], &[4, 1]])),
        ("quadrilateral", vs(&[&[-1, 1], &[3, 4], &[4, 3], &[4, 1]])),
        ("height-triangle", vs(&[&[-1, 1], &[3, 1], &[0, 4]])),
        ("quartic", quartic),
        ("elliptic", vs(&[&[-1, -1, -1], &[5, 1, 3], &[-1, 10, 0], &[-1, -1, 0]])),
        ("simplex", vs(&[&[-1, -1], &[2, -1], &[-1, 2]])),
        ("cube", cube),
    ]
    .into_iter()
    .map(|(name, pts)| (name, hull(&pts).expect("corpus polytope")))
    .collect()
}
