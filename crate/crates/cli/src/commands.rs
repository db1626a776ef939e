//! Subcommand execution.

use std::path::Path;

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};
use toric_core::{
    fine_interior_certified, kernel_basis, kernel_intersection_check, subfamily_analysis, KernelReport,
    LaurentPolynomial, MapVariant, Polytope, ToricAnalysis,
};

use crate::error::{core_exit_code, exit, CliError, Result};
use crate::input::{self, Problem, ResolvedPolynomial};
use crate::report;

/// Which part of the report to produce.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Section {
    Analyze,
    FineInterior,
    CanonicalClosure,
    Support,
    Roots,
    Kernel(MapVariant),
    Moduli,
    Subfamily,
    LatticePoints,
    Facets,
}

impl Section {
    pub fn name(self) -> &'static str {
        match self {
            Section::Analyze => "analyze",
            Section::FineInterior => "fine-interior",
            Section::CanonicalClosure => "canonical-closure",
            Section::Support => "support",
            Section::Roots => "roots",
            Section::Kernel(_) => "kernel",
            Section::Moduli => "moduli",
            Section::Subfamily => "subfamily",
            Section::LatticePoints => "lattice-points",
            Section::Facets => "facets",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Settings {
    pub candidate_scale: u32,
    pub seed: Option<u64>,
    pub range: Option<i64>,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            candidate_scale: 1,
            seed: None,
            range: None,
        }
    }
}

/// A report together with the exit code it should produce.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub report: Value,
    pub exit: u8,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Accumulates the report and the first refusal's exit code.
struct Builder {
    report: Map<String, Value>,
    exit: u8,
}

impl Builder {
    fn put(&mut self, key: &str, value: Value) {
        self.report.insert(key.to_string(), value);
    }

    /// Records `result`, turning precondition and degeneracy errors into a
    /// refused section. Validation errors abort the command.
    fn section(&mut self, key: &str, result: toric_core::Result<Value>) -> Result<()> {
        let value = self.refusable(result)?;
        self.put(key, value);
        Ok(())
    }

    fn refusable(&mut self, result: toric_core::Result<Value>) -> Result<Value> {
        match result {
            Ok(v) => Ok(v),
            Err(e) => {
                let code = core_exit_code(&e);
                if code != exit::PRECONDITION && code != exit::DEGENERATE {
                    return Err(e.into());
                }
                if self.exit == exit::SUCCESS {
                    self.exit = code;
                }
                Ok(report::refused(e))
            }
        }
    }
}

struct Context<'a> {
    problem: &'a Problem,
    settings: Settings,
    analysis: Option<toric_core::Result<ToricAnalysis>>,
    polynomial: Option<ResolvedPolynomial>,
}

impl Context<'_> {
    fn analysis(&mut self) -> toric_core::Result<&ToricAnalysis> {
        let (delta, scale) = (&self.problem.delta, self.settings.candidate_scale);
        self.analysis
            .get_or_insert_with(|| ToricAnalysis::new(delta.clone(), scale))
            .as_ref()
            .map_err(Clone::clone)
    }

    fn polynomial(&mut self) -> Result<&ResolvedPolynomial> {
        if self.polynomial.is_none() {
            self.polynomial = Some(self.problem.resolve(self.settings.seed, self.settings.range)?);
        }
        Ok(self.polynomial.as_ref().expect("just resolved"))
    }

    fn fine_interior(&mut self) -> toric_core::Result<Value> {
        if let Some(Ok(an)) = &self.analysis {
            return Ok(report::fine_interior(&an.fine));
        }
        let fi = fine_interior_certified(&self.problem.delta, self.settings.candidate_scale)?;
        Ok(report::fine_interior(&fi))
    }

    fn kernel(&mut self, variant: MapVariant) -> Result<toric_core::Result<KernelReport>> {
        let f = self.polynomial()?.f.clone();
        Ok(self.analysis().and_then(|an| kernel_basis(an, &f, variant)))
    }

    fn f(&mut self) -> Result<LaurentPolynomial> {
        Ok(self.polynomial()?.f.clone())
    }
}

/// Runs one subcommand on the raw bytes of an input file.
pub fn run(section: Section, path: &Path, bytes: &[u8], settings: Settings) -> Result<Outcome> {
    if settings.candidate_scale == 0 {
        return Err(CliError::invalid("--candidate-scale", "must be at least 1"));
    }
    let problem = input::parse(path, bytes)?.validate()?;
    let mut b = Builder {
        report: Map::new(),
        exit: exit::SUCCESS,
    };
    b.put("tool", json!(format!("toric-moduli {}", env!("CARGO_PKG_VERSION"))));
    b.put("command", json!(section.name()));
    b.put("input_sha256", json!(sha256_hex(bytes)));
    b.put("candidate_scale", json!(settings.candidate_scale));
    b.put("lattice_dim", json!(problem.delta.ambient_dim()));

    let mut cx = Context {
        problem: &problem,
        settings,
        analysis: None,
        polynomial: None,
    };
    let delta = &problem.delta;

    match section {
        Section::Facets => b.put("facets", report::facets(delta)),
        Section::LatticePoints => {
            let pts = delta.lattice_points()?;
            let interior = delta.interior_lattice_points()?;
            b.put("lattice_points", report::lattice_points(&pts, &interior));
        }
        Section::FineInterior => {
            let v = cx.fine_interior();
            b.section("fine_interior", v)?;
        }
        Section::Support => {
            let fi = fine_interior_certified(delta, settings.candidate_scale)?;
            b.put("support", report::support(&fi));
        }
        Section::CanonicalClosure => {
            let v = cx.analysis().map(|an| report::canonical_closure(&an.closure));
            b.section("canonical_closure", v)?;
        }
        Section::Roots => {
            let v = cx.analysis().map(|an| report::roots(&an.roots));
            b.section("roots", v)?;
        }
        Section::Kernel(variant) => {
            b.put("polynomial", report::polynomial_record(cx.polynomial()?));
            let v = cx.kernel(variant)?.map(|k| report::kernel(&k));
            b.section("kernel", v)?;
        }
        Section::Moduli => {
            b.put("polynomial", report::polynomial_record(cx.polynomial()?));
            let v = moduli(&mut cx)?;
            b.section("moduli", v)?;
        }
        Section::Subfamily => {
            if problem.subfamily.is_none() {
                return Err(CliError::invalid("subfamily", "input has no subfamily list"));
            }
            b.put("polynomial", report::polynomial_record(cx.polynomial()?));
            let v = subfamily(&mut cx)?;
            b.section("subfamily", v)?;
        }
        Section::Analyze => {
            let pts = delta.lattice_points()?.len();
            let interior = delta.interior_lattice_points()?.len();
            b.put("polytope", report::polytope(delta, pts, interior));
            b.put("polynomial", report::polynomial_record(cx.polynomial()?));
            // Build the analysis first so the Fine interior is computed once.
            let _ = cx.analysis();
            let v = cx.fine_interior();
            b.section("fine_interior", v)?;
            let v = cx.analysis().map(|an| report::canonical_closure(&an.closure));
            b.section("canonical_closure", v)?;
            let v = cx.analysis().map(|an| report::roots(&an.roots));
            b.section("roots", v)?;

            let mut kernels = Map::new();
            for variant in [MapVariant::Ambient, MapVariant::Family] {
                let v = cx.kernel(variant)?.map(|k| report::kernel(&k));
                kernels.insert(report::variant_name(variant).into(), b.refusable(v)?);
            }
            b.put("kernel", Value::Object(kernels));
            let v = moduli(&mut cx)?;
            b.section("moduli", v)?;
            if problem.subfamily.is_some() {
                let v = subfamily(&mut cx)?;
                b.section("subfamily", v)?;
            }
        }
    }

    Ok(Outcome {
        report: Value::Object(b.report),
        exit: b.exit,
    })
}

fn moduli(cx: &mut Context) -> Result<toric_core::Result<Value>> {
    let f = cx.f()?;
    let ambient = cx.kernel(MapVariant::Ambient)?;
    let family = cx.kernel(MapVariant::Family)?;
    Ok((|| {
        let (ambient, family) = (ambient?, family?);
        let check = kernel_intersection_check(cx.analysis()?, &f)?;
        Ok(report::moduli(&ambient, &family, &check))
    })())
}

fn subfamily(cx: &mut Context) -> Result<toric_core::Result<Value>> {
    let f = cx.f()?;
    let a = cx.problem.subfamily.clone().unwrap_or_default();
    Ok(cx
        .analysis()
        .and_then(|an| subfamily_analysis(an, &f, &a))
        .map(|s| report::subfamily(&s)))
}
