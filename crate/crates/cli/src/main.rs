//! `charclass`: Lie-algebra invariants and frame-field curvature from the command line.
//!
//! Exit status: 0 on success, 1 when the input fails a mathematical check
//! (Jacobi identity, a failed verification suite), 2 for parse, I/O and usage errors.

use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use charclass_core::catalog::{self, EntryKind, Payload};
use charclass_core::verify::{self, SuiteResult, SUITES};
use charclass_core::{algebra_file, report, Error, FrameDiagnostics, LieAlgebra};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Parser)]
#[command(name = "charclass", version, about = "Characteristic classes of Lie algebras and local Lie groups")]
struct Cli {
    /// Output format
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    format: Format,

    /// Add wall-clock timing to the report (makes output run-dependent)
    #[arg(long, global = true)]
    timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Structure, Betti numbers and trace-form classes of an algebra
    Analyze {
        /// Algebra file, or `catalog:<name>`
        source: String,
        /// Highest cochain degree for Betti numbers and classes
        #[arg(long)]
        max_degree: Option<usize>,
    },
    /// Components of the trace form w_k
    Forms {
        source: String,
        #[arg(long)]
        degree: usize,
    },
    /// Betti number in one degree and the cohomology class of w_k
    Cohomology {
        source: String,
        #[arg(long)]
        degree: usize,
    },
    /// Curvature tensors of a catalog frame field
    Curvature {
        /// Catalog frame name
        #[arg(long)]
        frame: String,
        /// Finite-difference step
        #[arg(long)]
        h: Option<f64>,
        /// Lattice points per axis
        #[arg(long)]
        lattice: Option<usize>,
    },
    /// Built-in algebras, frames and multiplications
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Run invariant suites and report pass/fail counts
    Verify {
        #[arg(long)]
        suite: Option<String>,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    List,
    Show {
        name: String,
        /// Disambiguates names shared between kinds (algebra, frame, multiplication)
        #[arg(long)]
        kind: Option<String>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotConstant { .. } | Error::RoundedJacobi | Error::DegenerateFrame { .. } | Error::NotClosed => 1,
            _ => 2,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

/// A report plus the exit status it implies.
struct Outcome {
    report: Value,
    text: Option<String>,
    code: u8,
}

impl Outcome {
    fn ok(report: Value) -> Self {
        Self {
            report,
            text: None,
            code: 0,
        }
    }
}

fn load_algebra(source: &str) -> Result<(String, LieAlgebra), Failure> {
    if let Some(name) = source.strip_prefix("catalog:") {
        return Ok((name.to_string(), catalog::algebra(name)?));
    }
    let text = std::fs::read_to_string(source).map_err(|e| Failure::usage(format!("{source}: {e}")))?;
    let alg = algebra_file::parse_algebra(&text).map_err(|e| match e {
        Error::Parse { line, column, message } => Failure::usage(format!("{source}:{line}:{column}: {message}")),
        other => Failure::usage(format!("{source}: {other}")),
    })?;
    let name = Path::new(source).file_stem().map_or(source.to_string(), |s| s.to_string_lossy().into_owned());
    Ok((name, alg))
}

/// Algebras that fail Jacobi produce the violation report and exit 1.
fn jacobi_gate(name: &str, alg: &LieAlgebra) -> Result<Option<Outcome>, Failure> {
    if alg.validate().ok {
        return Ok(None);
    }
    let (report, _) = report::analysis(name, alg, Some(0))?;
    Ok(Some(Outcome {
        report,
        text: None,
        code: 1,
    }))
}

fn catalog_list() -> Value {
    let entries: Vec<Value> = catalog::list()
        .into_iter()
        .map(|(kind, name)| {
            let note = catalog::lookup(kind, &name).map(|e| e.note).unwrap_or_default();
            json!({"kind": kind.as_str(), "name": name, "note": note})
        })
        .collect();
    json!({ "entries": entries })
}

fn catalog_show(name: &str, kind: Option<&str>) -> Result<Value, Failure> {
    let entry = match kind {
        Some(k) => {
            let kind = EntryKind::parse(k).ok_or_else(|| Failure::usage(format!("unknown kind `{k}`")))?;
            catalog::lookup(kind, name)?
        }
        None => catalog::get(name)?,
    };
    let mut m = Map::new();
    m.insert("name".into(), json!(entry.name));
    m.insert("kind".into(), json!(entry.kind.as_str()));
    m.insert("note".into(), json!(entry.note));
    match &entry.payload {
        Payload::Algebra(a) => {
            m.insert("dim".into(), json!(a.dim()));
            m.insert("basis".into(), json!(a.names()));
            m.insert("file".into(), json!(algebra_file::serialize(a)));
        }
        Payload::Frame(f) => {
            let c = f.chart();
            m.insert("dim".into(), json!(f.dim()));
            m.insert("chart".into(), json!({"lower": c.lower(), "upper": c.upper(), "h": c.step()}));
        }
        Payload::Multiplication(g) => {
            let c = g.chart();
            m.insert("dim".into(), json!(c.dim()));
            m.insert("identity".into(), json!(g.identity()));
            m.insert("chart".into(), json!({"lower": c.lower(), "upper": c.upper(), "h": c.step()}));
        }
    }
    Ok(Value::Object(m))
}

fn curvature(frame: &str, h: Option<f64>, lattice: Option<usize>) -> Result<Outcome, Failure> {
    let mut f = catalog::frame(frame)?;
    if let Some(h) = h {
        f = f.with_step(h)?;
    }
    if let Some(n) = lattice {
        f = f.with_lattice(n)?;
    }
    let d = FrameDiagnostics::compute(&f)?;
    // R₁ and dw − Tr R₂ vanish on every frame, so a failed study means the step is unusable.
    let code = if d.r1_convergence.passed && d.dw_convergence.passed { 0 } else { 1 };
    Ok(Outcome {
        report: report::curvature(frame, &d),
        text: None,
        code,
    })
}

fn verify_text(results: &[SuiteResult]) -> String {
    let mut out = String::new();
    for r in results {
        out.push_str(&format!("{:<11} {:>3} passed {:>3} failed\n", r.suite, r.passed(), r.failed()));
        for c in r.checks.iter().filter(|c| !c.passed) {
            out.push_str(&format!("  FAIL {} {}\n", c.name, c.detail));
        }
    }
    out
}

fn run_verify(suite: Option<&str>) -> Result<Outcome, Failure> {
    let names: Vec<&str> = match suite {
        Some(s) if SUITES.contains(&s) => vec![s],
        Some(s) => return Err(Failure::usage(format!("unknown suite `{s}`; expected one of {}", SUITES.join(", ")))),
        None => SUITES.to_vec(),
    };
    let results: Vec<SuiteResult> = names
        .iter()
        .map(|s| verify::run_suite(s).expect("known suite"))
        .collect::<Result<_, _>>()?;
    let passed: usize = results.iter().map(|r| r.passed()).sum();
    let failed: usize = results.iter().map(|r| r.failed()).sum();
    let suites: Vec<Value> = results
        .iter()
        .map(|r| {
            let checks: Vec<Value> = r
                .checks
                .iter()
                .map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail}))
                .collect();
            json!({"suite": r.suite, "passed": r.passed(), "failed": r.failed(), "checks": checks})
        })
        .collect();
    Ok(Outcome {
        report: json!({"passed": passed, "failed": failed, "suites": suites}),
        text: Some(verify_text(&results)),
        code: if failed == 0 { 0 } else { 1 },
    })
}

fn run(command: &Command) -> Result<Outcome, Failure> {
    match command {
        Command::Analyze { source, max_degree } => {
            let (name, alg) = load_algebra(source)?;
            let (report, ok) = report::analysis(&name, &alg, *max_degree)?;
            Ok(Outcome {
                report,
                text: None,
                code: if ok { 0 } else { 1 },
            })
        }
        Command::Forms { source, degree } => {
            let (name, alg) = load_algebra(source)?;
            if let Some(o) = jacobi_gate(&name, &alg)? {
                return Ok(o);
            }
            Ok(Outcome::ok(report::forms(&name, &alg, *degree)?))
        }
        Command::Cohomology { source, degree } => {
            let (name, alg) = load_algebra(source)?;
            if let Some(o) = jacobi_gate(&name, &alg)? {
                return Ok(o);
            }
            Ok(Outcome::ok(report::cohomology(&name, &alg, *degree)?))
        }
        Command::Curvature { frame, h, lattice } => curvature(frame, *h, *lattice),
        Command::Catalog { action } => match action {
            CatalogAction::List => Ok(Outcome::ok(catalog_list())),
            CatalogAction::Show { name, kind } => Ok(Outcome::ok(catalog_show(name, kind.as_deref())?)),
        },
        Command::Verify { suite } => run_verify(suite.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    match run(&cli.command) {
        Ok(mut outcome) => {
            if cli.timing {
                if let Value::Object(m) = &mut outcome.report {
                    m.insert("timing".into(), json!({"seconds": start.elapsed().as_secs_f64()}));
                }
                outcome.text = None;
            }
            let body = match cli.format {
                Format::Json => serde_json::to_string_pretty(&outcome.report).expect("serializable report") + "\n",
                Format::Text => outcome.text.unwrap_or_else(|| report::render_text(&outcome.report)),
            };
            print!("{body}");
            ExitCode::from(outcome.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
