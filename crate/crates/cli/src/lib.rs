//! `wh3k` command line: parse a manifold description, assemble its Whitehead
//! groups, render a report.
//!
//! Exit codes: 0 success, 1 parse error, 2 semantic error, 3 missing
//! annotation.

use std::path::PathBuf;
use std::sync::Arc;

use clap::Parser;
use wh3k_core::report::{render, Format};
use wh3k_core::{
    parse_manifold, Annotations, Assembler, DegreeWindow, Error, KnowledgeBase, ManifoldSpec,
    RingKind, RingProfile,
};

#[derive(Debug, Clone, Parser)]
#[command(name = "wh3k", version, about = "Whitehead groups of closed oriented 3-manifold groups")]
pub struct Cli {
    /// Manifold description, e.g. "Spherical(I*) # Hyperbolic(closed)"
    #[arg(required_unless_present = "file")]
    pub dsl: Option<String>,

    /// Read the description from a file (text DSL or JSON)
    #[arg(long, conflicts_with = "dsl")]
    pub file: Option<PathBuf>,

    #[arg(long, default_value = "generic", value_parser = parse_ring)]
    pub ring: RingKind,

    /// Degree window `a..b`
    #[arg(long, default_value = "0..1", allow_hyphen_values = true, value_parser = parse_window)]
    pub degrees: DegreeWindow,

    #[arg(long, default_value = "text", value_parser = parse_format)]
    pub format: Format,

    /// Knowledge base replacing the bundled table
    #[arg(long)]
    pub kdb: Option<PathBuf>,

    /// Cardinality of an index set, `label=N` or `label=inf`; repeatable
    #[arg(long = "annotate", value_name = "LABEL=N|inf")]
    pub annotate: Vec<String>,
}

fn parse_ring(s: &str) -> Result<RingKind, String> {
    s.parse()
}

fn parse_window(s: &str) -> Result<DegreeWindow, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Syntax { .. } => 1,
        Error::Semantic { .. } | Error::Database { .. } => 2,
        Error::MissingAnnotation(_) => 3,
    }
}

/// Text DSL, or JSON when the input starts with `{`.
pub fn read_manifold(src: &str) -> wh3k_core::Result<ManifoldSpec> {
    if src.trim_start().starts_with('{') {
        ManifoldSpec::from_json(src)
    } else {
        parse_manifold(src.trim())
    }
}

fn profile(cli: &Cli) -> wh3k_core::Result<RingProfile> {
    match (&cli.kdb, cli.ring) {
        (Some(path), RingKind::Integers) => {
            Ok(RingProfile::integers_with(Arc::new(KnowledgeBase::load(path)?)))
        }
        (_, kind) => Ok(RingProfile::of_kind(kind)),
    }
}

fn execute(cli: &Cli) -> wh3k_core::Result<String> {
    let src = match (&cli.dsl, &cli.file) {
        (_, Some(path)) => std::fs::read_to_string(path).map_err(|e| Error::Semantic {
            code: wh3k_core::error::SemanticCode::InvalidJson,
            message: format!("{}: {e}", path.display()),
        })?,
        (Some(s), None) => s.clone(),
        (None, None) => unreachable!("clap requires one input"),
    };
    let m = read_manifold(&src)?;
    let mut annotations = Annotations::new();
    for a in &cli.annotate {
        annotations.add_assignment(a)?;
    }
    let result = Assembler::new(profile(cli)?)
        .with_annotations(annotations.clone())
        .run(&m, cli.degrees)?;
    let mut warnings: Vec<String> = result
        .unused_annotations(&annotations)
        .into_iter()
        .map(|l| format!("annotation `{l}` matches no emitted index set"))
        .collect();
    if cli.kdb.is_some() && cli.ring != RingKind::Integers {
        warnings.push("--kdb is only consulted with --ring integers".into());
    }
    Ok(render(&result, cli.format, &warnings))
}

pub fn run(cli: &Cli) -> Outcome {
    match execute(cli) {
        Ok(stdout) => Outcome {
            code: 0,
            stdout,
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: exit_code(&e),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

/// Parses `args` (without the program name) and runs.
pub fn run_args<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let argv = std::iter::once(std::ffi::OsString::from("wh3k")).chain(args.into_iter().map(Into::into));
    match Cli::try_parse_from(argv) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            }
        }
    }
}
