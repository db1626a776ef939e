//! Problem input files.
//!
//! ```json
//! {
//!   "lattice_dim": 2,
//!   "polytope": { "vertices": [[0, 1], [0, 3], [4, 1]] },
//!   "polynomial": { "generic": { "seed": 0, "range": 100, "support": "all" } },
//!   "subfamily": [[0, 1], [0, 3], [4, 1], [1, 2]]
//! }
//! ```
//!
//! `polytope` is either `{"vertices": ...}` (every listed point must be a
//! vertex of the hull) or `{"points": ...}` (any point set, hull taken).
//! `polynomial` is either `{"terms": [{"exponent": [..], "coeff": "p/q"}]}`
//! or `{"generic": {...}}`; when absent a generic polynomial is drawn.

use std::collections::BTreeSet;
use std::path::Path;

use num_traits::Zero;
use serde::Deserialize;
use toric_core::{generic_sample, hull, IntVector, LatticePolytope, LaurentPolynomial, Rational};

use crate::error::{CliError, Result};

pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_RANGE: i64 = 100;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemInput {
    pub lattice_dim: usize,
    pub polytope: PolytopeInput,
    #[serde(default)]
    pub polynomial: Option<PolynomialInput>,
    #[serde(default)]
    pub subfamily: Option<Vec<Vec<i64>>>,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum PolytopeInput {
    Vertices(Vec<Vec<i64>>),
    Points(Vec<Vec<i64>>),
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum PolynomialInput {
    Terms(Vec<TermInput>),
    Generic(GenericInput),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermInput {
    pub exponent: Vec<i64>,
    pub coeff: String,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenericInput {
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub range: Option<i64>,
    #[serde(default)]
    pub support: Option<SupportInput>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum SupportInput {
    Named(String),
    Explicit(Vec<Vec<i64>>),
}

/// Where the coefficients of a generic polynomial live.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SupportChoice {
    All,
    Vertices,
    Subfamily,
    Explicit(Vec<IntVector>),
}

#[derive(Clone, Debug)]
pub enum PolynomialSpec {
    Terms(LaurentPolynomial),
    Generic {
        seed: Option<u64>,
        range: Option<i64>,
        support: SupportChoice,
    },
}

/// A validated problem.
#[derive(Clone, Debug)]
pub struct Problem {
    pub delta: LatticePolytope,
    pub polynomial: PolynomialSpec,
    pub subfamily: Option<Vec<IntVector>>,
}

/// The polynomial actually analysed, with enough provenance to redraw it.
#[derive(Clone, Debug)]
pub struct ResolvedPolynomial {
    pub f: LaurentPolynomial,
    pub generic: Option<GenericRecord>,
}

#[derive(Clone, Debug)]
pub struct GenericRecord {
    pub seed: u64,
    pub range: i64,
    pub support: SupportChoice,
}

/// Parses `bytes` as a problem file, reporting the offending field and
/// position on failure.
pub fn parse(path: &Path, bytes: &[u8]) -> Result<ProblemInput> {
    let de = &mut serde_json::Deserializer::from_slice(bytes);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let field = e.path().to_string();
        let inner = e.into_inner();
        CliError::Parse {
            path: path.to_path_buf(),
            field,
            line: inner.line(),
            column: inner.column(),
            message: inner.to_string(),
        }
    })
}

fn vector(n: usize, field: String, coords: &[i64]) -> Result<IntVector> {
    if coords.len() != n {
        return Err(CliError::invalid(
            field,
            format!("expected {n} coordinates, got {}", coords.len()),
        ));
    }
    Ok(IntVector::from_i64s(coords))
}

fn vectors(n: usize, field: &str, list: &[Vec<i64>]) -> Result<Vec<IntVector>> {
    list.iter()
        .enumerate()
        .map(|(i, c)| vector(n, format!("{field}[{i}]"), c))
        .collect()
}

fn inside(delta: &LatticePolytope, field: &str, pts: &[IntVector]) -> Result<()> {
    for (i, p) in pts.iter().enumerate() {
        if !delta.contains(p) {
            return Err(CliError::invalid(
                format!("{field}[{i}]"),
                format!("{p} is not a lattice point of the polytope"),
            ));
        }
    }
    Ok(())
}

fn parse_coeff(field: String, s: &str) -> Result<Rational> {
    let a: Rational = s
        .trim()
        .parse()
        .map_err(|e| CliError::invalid(field.clone(), format!("`{s}` is not a rational \"p/q\": {e}")))?;
    if a.is_zero() {
        return Err(CliError::invalid(field, "coefficient must be nonzero"));
    }
    Ok(a)
}

impl ProblemInput {
    pub fn validate(&self) -> Result<Problem> {
        let n = self.lattice_dim;
        if n == 0 {
            return Err(CliError::invalid("lattice_dim", "must be at least 1"));
        }

        let delta = match &self.polytope {
            PolytopeInput::Vertices(list) => {
                let pts = vectors(n, "polytope.vertices", list)?;
                let delta = hull(&pts)?;
                for (i, p) in pts.iter().enumerate() {
                    if delta.vertices().binary_search(p).is_err() {
                        return Err(CliError::invalid(
                            format!("polytope.vertices[{i}]"),
                            format!("{p} is not a vertex of the convex hull; use \"points\" for arbitrary point sets"),
                        ));
                    }
                }
                delta
            }
            PolytopeInput::Points(list) => hull(&vectors(n, "polytope.points", list)?)?,
        };
        if !delta.is_full_dimensional() {
            return Err(CliError::invalid(
                "polytope",
                format!("polytope has dimension {} in a lattice of rank {n}", delta.dim()),
            ));
        }

        let subfamily = match &self.subfamily {
            None => None,
            Some(list) => {
                let pts = vectors(n, "subfamily", list)?;
                inside(&delta, "subfamily", &pts)?;
                Some(pts)
            }
        };

        let polynomial = match &self.polynomial {
            Some(PolynomialInput::Terms(terms)) => {
                if terms.is_empty() {
                    return Err(CliError::invalid("polynomial.terms", "polynomial has no terms"));
                }
                let mut f = LaurentPolynomial::zero(n);
                let mut seen = BTreeSet::new();
                for (i, t) in terms.iter().enumerate() {
                    let m = vector(n, format!("polynomial.terms[{i}].exponent"), &t.exponent)?;
                    if !seen.insert(m.clone()) {
                        return Err(CliError::invalid(
                            format!("polynomial.terms[{i}].exponent"),
                            format!("exponent {m} appears twice"),
                        ));
                    }
                    if !delta.contains(&m) {
                        return Err(CliError::invalid(
                            format!("polynomial.terms[{i}].exponent"),
                            format!("{m} is not a lattice point of the polytope"),
                        ));
                    }
                    f.add_term(m, parse_coeff(format!("polynomial.terms[{i}].coeff"), &t.coeff)?)?;
                }
                PolynomialSpec::Terms(f)
            }
            Some(PolynomialInput::Generic(g)) => generic_spec(n, &delta, g, subfamily.is_some())?,
            None => generic_spec(n, &delta, &GenericInput::default(), subfamily.is_some())?,
        };

        Ok(Problem {
            delta,
            polynomial,
            subfamily,
        })
    }
}

fn generic_spec(n: usize, delta: &LatticePolytope, g: &GenericInput, has_subfamily: bool) -> Result<PolynomialSpec> {
    let support = match &g.support {
        None if has_subfamily => SupportChoice::Subfamily,
        None => SupportChoice::All,
        Some(SupportInput::Named(s)) => match s.as_str() {
            "all" => SupportChoice::All,
            "vertices" => SupportChoice::Vertices,
            "subfamily" if has_subfamily => SupportChoice::Subfamily,
            "subfamily" => {
                return Err(CliError::invalid(
                    "polynomial.generic.support",
                    "\"subfamily\" needs a top-level subfamily list",
                ))
            }
            other => {
                return Err(CliError::invalid(
                    "polynomial.generic.support",
                    format!("unknown support `{other}`, expected \"all\", \"vertices\", \"subfamily\" or a point list"),
                ))
            }
        },
        Some(SupportInput::Explicit(list)) => {
            let pts = vectors(n, "polynomial.generic.support", list)?;
            inside(delta, "polynomial.generic.support", &pts)?;
            SupportChoice::Explicit(pts)
        }
    };
    if let Some(r) = g.range {
        if r < 1 {
            return Err(CliError::invalid("polynomial.generic.range", "must be at least 1"));
        }
    }
    Ok(PolynomialSpec::Generic {
        seed: g.seed,
        range: g.range,
        support,
    })
}

impl Problem {
    /// Fixes the polynomial. Command-line `seed`/`range` override the file,
    /// which overrides the defaults; explicit terms ignore both.
    pub fn resolve(&self, seed: Option<u64>, range: Option<i64>) -> Result<ResolvedPolynomial> {
        match &self.polynomial {
            PolynomialSpec::Terms(f) => Ok(ResolvedPolynomial {
                f: f.clone(),
                generic: None,
            }),
            PolynomialSpec::Generic {
                seed: file_seed,
                range: file_range,
                support,
            } => {
                let seed = seed.or(*file_seed).unwrap_or(DEFAULT_SEED);
                let range = range.or(*file_range).unwrap_or(DEFAULT_RANGE);
                if range < 1 {
                    return Err(CliError::invalid("--range", "must be at least 1"));
                }
                let points: Option<Vec<IntVector>> = match support {
                    SupportChoice::All => None,
                    SupportChoice::Vertices => Some(self.delta.vertices().to_vec()),
                    SupportChoice::Subfamily => self.subfamily.clone(),
                    SupportChoice::Explicit(pts) => Some(pts.clone()),
                };
                let f = generic_sample(&self.delta, points.as_deref(), seed, range)?;
                Ok(ResolvedPolynomial {
                    f,
                    generic: Some(GenericRecord {
                        seed,
                        range,
                        support: support.clone(),
                    }),
                })
            }
        }
    }
}
