//! Command-line front end: input files, reports, table output and the
//! golden-report corpus runner.

pub mod commands;
pub mod corpus;
pub mod error;
pub mod input;
pub mod report;
pub mod table;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use toric_core::MapVariant;

use commands::{Section, Settings};
use error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(name = "toric-moduli", version, about = "Exact moduli counts for toric hypersurface families")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Full report: Fine interior, canonical closure, roots, kernels, moduli.
    Analyze(InputArgs),
    /// Fine interior F(Δ) with its stability certificate.
    FineInterior(InputArgs),
    /// Canonical closure C(Δ).
    CanonicalClosure(InputArgs),
    /// Support S_F(Δ) of the Fine interior.
    Support(InputArgs),
    /// Root sets of Δ, C(Δ) and the support, and their difference.
    Roots(InputArgs),
    /// Kernel basis of the Kodaira-Spencer map.
    Kernel {
        #[arg(long, value_enum, default_value_t = MapArg::Ambient)]
        map: MapArg,
        #[command(flatten)]
        args: InputArgs,
    },
    /// Moduli counts for both maps and the kernel intersection check.
    Moduli(InputArgs),
    /// Moduli of the subfamily given in the input file.
    Subfamily(InputArgs),
    /// Lattice points and interior lattice points of Δ.
    LatticePoints(InputArgs),
    /// Facet normals and offsets of Δ.
    Facets(InputArgs),
    /// Run a directory of golden input/expected report pairs.
    Corpus {
        dir: PathBuf,
        /// Write expected files from the current output instead of comparing.
        #[arg(long)]
        bless: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MapArg {
    Ambient,
    Family,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Clone, Debug, Args)]
pub struct InputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Candidate normals are taken from K·conv(rays ∪ 0); the result is
    /// re-checked at K+1.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    pub candidate_scale: u32,
    /// Seed for the generic polynomial (overrides the input file).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Coefficient range for the generic polynomial (overrides the input file).
    #[arg(long)]
    pub range: Option<i64>,
    pub input: PathBuf,
}

impl Command {
    fn section(&self) -> Option<(Section, &InputArgs)> {
        Some(match self {
            Command::Analyze(a) => (Section::Analyze, a),
            Command::FineInterior(a) => (Section::FineInterior, a),
            Command::CanonicalClosure(a) => (Section::CanonicalClosure, a),
            Command::Support(a) => (Section::Support, a),
            Command::Roots(a) => (Section::Roots, a),
            Command::Kernel { map, args } => {
                let v = match map {
                    MapArg::Ambient => MapVariant::Ambient,
                    MapArg::Family => MapVariant::Family,
                };
                (Section::Kernel(v), args)
            }
            Command::Moduli(a) => (Section::Moduli, a),
            Command::Subfamily(a) => (Section::Subfamily, a),
            Command::LatticePoints(a) => (Section::LatticePoints, a),
            Command::Facets(a) => (Section::Facets, a),
            Command::Corpus { .. } => return None,
        })
    }
}

/// Executes `cli`, writing the report to `out` and diagnostics to `err`.
/// Returns the process exit code.
pub fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    match try_execute(cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn try_execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<u8> {
    let io = |source| CliError::Io {
        path: "<output>".into(),
        source,
    };
    if let Command::Corpus { dir, bless } = &cli.command {
        return Ok(corpus::run_corpus(dir, *bless, out, err)?.exit_code());
    }
    let (section, args) = cli.command.section().expect("non-corpus command");
    let bytes = std::fs::read(&args.input).map_err(|source| CliError::Io {
        path: args.input.clone(),
        source,
    })?;
    let settings = Settings {
        candidate_scale: args.candidate_scale,
        seed: args.seed,
        range: args.range,
    };
    let outcome = commands::run(section, &args.input, &bytes, settings)?;
    let text = match args.format {
        Format::Json => report::to_json(&outcome.report),
        Format::Table => table::to_table(&outcome.report),
    };
    out.write_all(text.as_bytes()).map_err(io)?;
    Ok(outcome.exit)
}
