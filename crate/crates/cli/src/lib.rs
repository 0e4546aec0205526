//! `vgcheck`: load vector groupoid documents, run the law suites, and write
//! deterministic reports.
//!
//! Exit codes: 0 when every law passes, 1 on a violation, 2 on malformed
//! input or usage errors.

pub mod document;
pub mod error;
pub mod run;

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use vecgroupoid::{
    induced_groupoid, null_groupoid, pair_groupoid, single_unit_groupoid, CheckReport, FieldSpec,
    Matrix, Scalar, VectorGroupoid,
};

pub use document::{parse_json, to_pretty_json, FactorizeDoc, GroupoidDoc, MorphismDoc};
pub use error::CliError;
pub use run::{run_factorize, run_morphism, run_report, ReportDoc, Suite};

#[derive(Debug, Parser)]
#[command(
    name = "vgcheck",
    version,
    about = "Verify vector groupoids over GF(p)"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Write the JSON report here instead of to stdout.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Comma-separated suites to run.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub suites: Vec<Suite>,
    /// Record wall-clock time in the report summary.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Construction {
    Null,
    SingleUnit,
    Pair,
    Induced,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check every law of a groupoid document.
    Check {
        file: PathBuf,
        #[command(flatten)]
        report: ReportArgs,
    },
    /// Write a groupoid document for a standard construction.
    Construct {
        kind: Construction,
        #[arg(long, default_value_t = 2)]
        p: u32,
        /// Dimension of the space (of the base, for `pair`).
        #[arg(long, default_value_t = 1)]
        dim: usize,
        /// Parent groupoid document, for `induced`.
        #[arg(long)]
        parent: Option<PathBuf>,
        /// Rows of `h : X -> V0` as JSON, for `induced`.
        #[arg(long)]
        h: Option<String>,
        /// Dimension of X, for `induced`.
        #[arg(long)]
        x_dim: Option<usize>,
        /// Store the multiplication as an explicit table.
        #[arg(long)]
        table: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also check the constructed groupoid.
        #[command(flatten)]
        report: ReportArgs,
    },
    /// Check a morphism document.
    MorphismCheck {
        file: PathBuf,
        #[command(flatten)]
        report: ReportArgs,
    },
    /// Factor a morphism through the groupoid induced by its base map.
    Factorize {
        file: PathBuf,
        #[command(flatten)]
        report: ReportArgs,
    },
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Loads and validates a groupoid document.
pub fn parse_spec(text: &str) -> Result<VectorGroupoid, CliError> {
    parse_json::<GroupoidDoc>(text)?.to_groupoid()
}

pub fn serialize_groupoid(g: &VectorGroupoid) -> String {
    to_pretty_json(&GroupoidDoc::from_groupoid(g))
}

fn construct(
    kind: Construction,
    p: u32,
    dim: usize,
    parent: Option<&Path>,
    h: Option<&str>,
    x_dim: Option<usize>,
) -> Result<VectorGroupoid, CliError> {
    let field = FieldSpec::new(p)?;
    Ok(match kind {
        Construction::Null => null_groupoid(field, dim)?,
        Construction::SingleUnit => single_unit_groupoid(field, dim)?,
        Construction::Pair => pair_groupoid(field, dim)?,
        Construction::Induced => {
            let missing = |flag: &str| CliError::Usage(format!("induced needs --{flag}"));
            let parent = parse_spec(&read(parent.ok_or_else(|| missing("parent"))?)?)?;
            let x_dim = x_dim.ok_or_else(|| missing("x-dim"))?;
            let rows: Vec<Vec<Scalar>> = parse_json(h.ok_or_else(|| missing("h"))?)?;
            if rows.len() != parent.base().dim() || rows.iter().any(|r| r.len() != x_dim) {
                return Err(vecgroupoid::Error::ShapeMismatch(format!(
                    "h must be {}x{x_dim}",
                    parent.base().dim()
                ))
                .into());
            }
            let h = Matrix::from_rows(parent.field(), x_dim, &rows)?;
            induced_groupoid(&parent, &h, x_dim)?.structure
        }
    })
}

fn emit(doc: &ReportDoc, args: &ReportArgs) -> Result<i32, CliError> {
    let text = to_pretty_json(doc);
    match &args.report {
        Some(path) => {
            write(path, &text)?;
            let report = CheckReport {
                results: doc.results.clone(),
            };
            print!("{report}");
            println!(
                "{} passed, {} failed",
                doc.summary.pass_count, doc.summary.fail_count
            );
        }
        None => print!("{text}"),
    }
    Ok(doc.exit_code())
}

fn execute(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Check { file, report } => {
            let g = parse_spec(&read(&file)?)?;
            emit(&run_report(&g, &report.suites, report.timing)?, &report)
        }
        Command::Construct {
            kind,
            p,
            dim,
            parent,
            h,
            x_dim,
            table,
            output,
            report,
        } => {
            let mut g = construct(kind, p, dim, parent.as_deref(), h.as_deref(), x_dim)?;
            if table {
                g = g.to_table()?;
            }
            let text = serialize_groupoid(&g);
            match &output {
                Some(path) => write(path, &text)?,
                None => print!("{text}"),
            }
            if report.report.is_some() || !report.suites.is_empty() {
                if output.is_none() && report.report.is_none() {
                    return Err(CliError::Usage(
                        "checking a construction written to stdout needs --report".into(),
                    ));
                }
                return emit(&run_report(&g, &report.suites, report.timing)?, &report);
            }
            Ok(0)
        }
        Command::MorphismCheck { file, report } => {
            let m = parse_json::<MorphismDoc>(&read(&file)?)?.to_morphism()?;
            emit(&run_morphism(&m, &report.suites, report.timing)?, &report)
        }
        Command::Factorize { file, report } => {
            let inputs = parse_json::<FactorizeDoc>(&read(&file)?)?.load()?;
            emit(
                &run_factorize(&inputs, &report.suites, report.timing)?,
                &report,
            )
        }
    }
}

/// Runs a parsed command line and returns the process exit code.
pub fn main_with(cli: Cli) -> i32 {
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
