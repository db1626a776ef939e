//! Golden-report regression runner.
//!
//! A corpus directory holds pairs `<name>.input.json` / `<name>.expected.json`.
//! Each input is analysed at candidate scale 1 and the JSON report is
//! compared byte for byte with the expected file. The same input is then
//! analysed at scale 2; apart from the scale itself and the stability
//! certificate, the two reports must agree.

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde_json::Value;

use crate::commands::{run, Section, Settings};
use crate::error::{exit, CliError, Result};
use crate::report::to_json;

const INPUT_SUFFIX: &str = ".input.json";
const EXPECTED_SUFFIX: &str = ".expected.json";

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
}

impl Summary {
    pub fn exit_code(&self) -> u8 {
        if self.failed == 0 {
            exit::SUCCESS
        } else {
            exit::FAILURE
        }
    }
}

fn read(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Runs every case in `dir`, writing one line per case (plus diffs) to
/// `out` and warnings to `err`. With `bless`, expected files are
/// (re)written from the current output instead of compared.
pub fn run_corpus(dir: &Path, bless: bool, out: &mut dyn Write, err: &mut dyn Write) -> Result<Summary> {
    let entries = fs::read_dir(dir).map_err(|source| CliError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut inputs = BTreeSet::new();
    let mut expected = BTreeSet::new();
    for entry in entries {
        let entry = entry.map_err(|source| CliError::Io {
            path: dir.to_path_buf(),
            source,
        })?;
        let name = entry.file_name().to_string_lossy().into_owned();
        if let Some(stem) = name.strip_suffix(INPUT_SUFFIX) {
            inputs.insert(stem.to_string());
        } else if let Some(stem) = name.strip_suffix(EXPECTED_SUFFIX) {
            expected.insert(stem.to_string());
        }
    }

    let io = |e: std::io::Error| CliError::Io {
        path: "<output>".into(),
        source: e,
    };
    let mut summary = Summary::default();
    if inputs.is_empty() && expected.is_empty() {
        writeln!(err, "warning: no corpus cases in {}", dir.display()).map_err(io)?;
    }

    for name in expected.difference(&inputs) {
        summary.failed += 1;
        writeln!(out, "FAIL {name}: missing {name}{INPUT_SUFFIX}").map_err(io)?;
    }
    for name in &inputs {
        let problems = check_case(dir, name, bless)?;
        if problems.is_empty() {
            summary.passed += 1;
            let verb = if bless { "BLESSED" } else { "PASS" };
            writeln!(out, "{verb} {name}").map_err(io)?;
        } else {
            summary.failed += 1;
            for p in problems {
                writeln!(out, "FAIL {name}: {p}").map_err(io)?;
            }
        }
    }
    writeln!(out, "{} passed, {} failed", summary.passed, summary.failed).map_err(io)?;
    Ok(summary)
}

fn check_case(dir: &Path, name: &str, bless: bool) -> Result<Vec<String>> {
    let input_path = dir.join(format!("{name}{INPUT_SUFFIX}"));
    let expected_path = dir.join(format!("{name}{EXPECTED_SUFFIX}"));
    let bytes = read(&input_path)?;
    let mut problems = Vec::new();

    let base = match run(Section::Analyze, &input_path, &bytes, Settings::default()) {
        Ok(o) => o.report,
        Err(e) => return Ok(vec![e.to_string()]),
    };
    let actual = to_json(&base);
    if bless {
        fs::write(&expected_path, &actual).map_err(|source| CliError::Io {
            path: expected_path.clone(),
            source,
        })?;
    } else {
        match fs::read(&expected_path) {
            Err(e) => problems.push(format!("cannot read {}: {e}", expected_path.display())),
            Ok(want) if want != actual.as_bytes() => {
                let want = String::from_utf8_lossy(&want);
                problems.push(format!("report differs from {}\n{}", expected_path.display(), diff(&want, &actual)));
            }
            Ok(_) => {}
        }
    }

    let scale2 = Settings {
        candidate_scale: 2,
        ..Settings::default()
    };
    match run(Section::Analyze, &input_path, &bytes, scale2) {
        Err(e) => problems.push(format!("candidate scale 2: {e}")),
        Ok(o) => {
            let (a, b) = (scale_free(&base), scale_free(&o.report));
            if a != b {
                problems.push(format!(
                    "candidate scale 2 changes the report\n{}",
                    diff(&to_json(&a), &to_json(&b))
                ));
            }
        }
    }
    Ok(problems)
}

/// The report minus everything that legitimately depends on the candidate
/// scale.
fn scale_free(report: &Value) -> Value {
    let mut r = report.clone();
    if let Some(obj) = r.as_object_mut() {
        obj.remove("candidate_scale");
        if let Some(fi) = obj.get_mut("fine_interior").and_then(Value::as_object_mut) {
            fi.remove("stability");
        }
    }
    r
}

/// Line diff of `want` against `got` via longest common subsequence;
/// only changed lines are printed, prefixed with their line numbers.
pub fn diff(want: &str, got: &str) -> String {
    let a: Vec<&str> = want.lines().collect();
    let b: Vec<&str> = got.lines().collect();
    let (n, m) = (a.len(), b.len());
    let mut lcs = vec![vec![0u32; m + 1]; n + 1];
    for i in (0..n).rev() {
        for j in (0..m).rev() {
            lcs[i][j] = if a[i] == b[j] {
                lcs[i + 1][j + 1] + 1
            } else {
                lcs[i + 1][j].max(lcs[i][j + 1])
            };
        }
    }
    let mut out = String::new();
    let (mut i, mut j) = (0, 0);
    while i < n || j < m {
        if i < n && j < m && a[i] == b[j] {
            i += 1;
            j += 1;
        } else if i < n && (j == m || lcs[i + 1][j] >= lcs[i][j + 1]) {
            out.push_str(&format!("  -{:>5} {}\n", i + 1, a[i]));
            i += 1;
        } else {
            out.push_str(&format!("  +{:>5} {}\n", j + 1, b[j]));
            j += 1;
        }
    }
    out
}
