//! The `cartan-forge` command line.
//!
//! Exit status: 0 success, 1 verification failure, 2 usage or input error,
//! 3 a build or enumeration limit was hit. Failures print a first stderr
//! line `error: <code>: <message>`.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::analysis::{compare, root_report, Diff, RootReport};
use crate::builder::{build_with, BuildError, BuildLimits};
use crate::catalog::{
    builtin_catalog, instantiate_with_defaults, parse_catalog_file, CartanSpec, Catalog, CatalogError, ConcreteCartan,
    ParamValue, Source,
};
use crate::emit::{emit, Format};
use crate::par::{self, Execution};
use crate::reflection::{canonical_form, enumerate_bases, replay, ReflectionError, DEFAULT_LIMIT};

pub const CATALOG_ENV: &str = "CARTAN_FORGE_CATALOG";

#[derive(Debug, Parser)]
#[command(
    name = "cartan-forge",
    version,
    about = "Root systems of contragredient Lie (super)algebras over finite fields"
)]
pub struct Cli {
    /// Run every computation on one thread.
    #[arg(long, global = true)]
    pub sequential: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Catalog entries with their source tags.
    List,
    /// Build an algebra and emit its root report.
    Build {
        name: Option<String>,
        /// Catalog document to read the entry from.
        #[arg(long)]
        file: Option<PathBuf>,
        /// Parameter binding, e.g. `a=w`.
        #[arg(long = "param", value_name = "SYM=VAL")]
        params: Vec<String>,
        #[arg(long, default_value_t = BuildLimits::default().max_height)]
        max_height: u32,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        emit: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Superdimension, with the derived algebra when the matrix is degenerate.
    Sdim {
        name: String,
        #[arg(long = "param", value_name = "SYM=VAL")]
        params: Vec<String>,
    },
    /// Odd reflections: apply a chain or enumerate the orbit.
    Reflect {
        name: String,
        /// 1-based pivots, e.g. `1,2`.
        #[arg(long, value_delimiter = ',')]
        chain: Vec<usize>,
        #[arg(long)]
        enumerate: bool,
        #[arg(long, default_value_t = DEFAULT_LIMIT)]
        limit: usize,
        #[arg(long, value_enum, default_value_t = GraphFormat::Json)]
        emit: GraphFormat,
        #[arg(long = "param", value_name = "SYM=VAL")]
        params: Vec<String>,
    },
    /// Compare computed reports with the golden tables.
    Verify {
        name: Option<String>,
        #[arg(long)]
        all: bool,
        #[arg(long, default_value_t = default_jobs())]
        jobs: usize,
        /// Write the deterministic JSON artifact here.
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GraphFormat {
    Json,
    Dot,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Limit(#[from] BuildError),
    #[error("{0}")]
    Reflection(ReflectionError),
    #[error("orbit enumeration stopped at {0} classes")]
    OrbitLimit(usize),
    #[error("{failed} of {total} entries failed verification")]
    Verify { failed: usize, total: usize },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl From<ReflectionError> for CliError {
    fn from(e: ReflectionError) -> Self {
        match e {
            ReflectionError::Build(b) => CliError::Limit(b),
            other => CliError::Reflection(other),
        }
    }
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Catalog(CatalogError::Unknown { .. }) => "unknown-entry",
            CliError::Catalog(_) => "catalog",
            CliError::Limit(_) | CliError::OrbitLimit(_) => "limit",
            CliError::Reflection(_) => "reflection",
            CliError::Verify { .. } => "verify",
            CliError::Io { .. } => "io",
        }
    }

    pub fn exit_status(&self) -> i32 {
        match self {
            CliError::Verify { .. } => 1,
            CliError::Limit(_) | CliError::OrbitLimit(_) => 3,
            _ => 2,
        }
    }
}

/// Process environment seen by [`run`].
#[derive(Debug, Clone, Default)]
pub struct Env {
    pub catalog: Option<PathBuf>,
}

impl Env {
    pub fn from_process() -> Self {
        Env { catalog: std::env::var_os(CATALOG_ENV).map(PathBuf::from) }
    }
}

/// Runs the CLI and returns the exit status.
pub fn run<I, T>(args: I, env: &Env, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(
                e.kind(),
                ErrorKind::DisplayHelp
                    | ErrorKind::DisplayVersion
                    | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand
            ) {
                let _ = write!(out, "{}", e.render());
                return if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand { 2 } else { 0 };
            }
            let rendered = e.render().to_string();
            let first = rendered.lines().next().unwrap_or("").trim_start_matches("error: ");
            let _ = writeln!(err, "error: usage: {first}");
            let _ = write!(err, "{rendered}");
            return 2;
        }
    };
    match dispatch(&cli, env, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {}: {}", e.code(), e.to_string().replace('\n', " "));
            e.exit_status()
        }
    }
}

fn load_catalog(env: &Env) -> Result<Catalog, CliError> {
    match &env.catalog {
        Some(path) => Ok(Catalog::new(parse_catalog_file(path)?)),
        None => Ok(Catalog::new(builtin_catalog().specs().to_vec())),
    }
}

fn parse_params(params: &[String]) -> Result<BTreeMap<String, ParamValue>, CliError> {
    params
        .iter()
        .map(|p| {
            let (k, v) =
                p.split_once('=').ok_or_else(|| CliError::Usage(format!("--param expects SYM=VAL, got `{p}`")))?;
            Ok((k.trim().to_string(), ParamValue::Text(v.trim().to_string())))
        })
        .collect()
}

fn write_out(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Io { path: p.display().to_string(), source }),
        None => out.write_all(text.as_bytes()).map_err(|source| CliError::Io { path: "<stdout>".into(), source }),
    }
}

fn exec_of(cli: &Cli) -> Execution {
    if cli.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

fn dispatch(cli: &Cli, env: &Env, out: &mut dyn Write) -> Result<(), CliError> {
    let exec = exec_of(cli);
    match &cli.command {
        Command::List => {
            let cat = load_catalog(env)?;
            let mut text = String::new();
            for s in cat.specs() {
                let tag = match s.source {
                    Source::Paper => "paper",
                    Source::External => "external",
                };
                text.push_str(&format!("{}\t{}\n", s.name, tag));
            }
            write_out(out, None, &text)
        }
        Command::Build { name, file, params, max_height, emit: format, out: path } => {
            let spec = match (name, file) {
                (_, Some(f)) => {
                    let specs = parse_catalog_file(f)?;
                    match name {
                        Some(n) => Catalog::new(specs).get(n)?.clone(),
                        None if specs.len() == 1 => specs.into_iter().next().unwrap(),
                        None => {
                            return Err(CliError::Usage(format!(
                                "{} has {} entries; name one",
                                f.display(),
                                specs.len()
                            )))
                        }
                    }
                }
                (Some(n), None) => load_catalog(env)?.get(n)?.clone(),
                (None, None) => return Err(CliError::Usage("build needs NAME or --file".into())),
            };
            let cc = instantiate_with_defaults(&spec, &parse_params(params)?)?;
            let limits = BuildLimits { max_height: *max_height, ..BuildLimits::default() };
            let report = root_report(&build_with(&cc, limits, exec)?);
            write_out(out, path.as_deref(), &emit(&report, *format))
        }
        Command::Sdim { name, params } => {
            let spec = load_catalog(env)?.get(name)?.clone();
            let cc = instantiate_with_defaults(&spec, &parse_params(params)?)?;
            let r = root_report(&build_with(&cc, BuildLimits::default(), exec)?);
            write_out(out, None, &format!("{}\n", r.sdim_string()))
        }
        Command::Reflect { name, chain, enumerate, limit, emit: format, params } => {
            let spec = load_catalog(env)?.get(name)?.clone();
            let cc = instantiate_with_defaults(&spec, &parse_params(params)?)?;
            if *enumerate {
                if *limit == 0 {
                    return Err(CliError::Usage("--limit must be at least 1".into()));
                }
                let orbit = enumerate_bases(&cc, *limit, BuildLimits::default(), exec)?;
                let text = match format {
                    GraphFormat::Json => orbit.to_json() + "\n",
                    GraphFormat::Dot => orbit.to_dot(),
                };
                write_out(out, None, &text)?;
                if orbit.truncated {
                    return Err(CliError::OrbitLimit(orbit.nodes.len()));
                }
                Ok(())
            } else {
                if chain.contains(&0) {
                    return Err(CliError::Usage("pivots are 1-based".into()));
                }
                let zero_based: Vec<usize> = chain.iter().map(|c| c - 1).collect();
                let state = replay(&cc, &zero_based, BuildLimits::default())?;
                let text = match format {
                    GraphFormat::Json => reflected_json(&state.cartan, &state.simple_roots, chain) + "\n",
                    GraphFormat::Dot => chain_dot(&cc, chain),
                };
                write_out(out, None, &text)
            }
        }
        Command::Verify { name, all, jobs, json } => {
            let cat = load_catalog(env)?;
            let specs: Vec<CartanSpec> = match (name, all) {
                (Some(n), false) => vec![cat.get(n)?.clone()],
                (None, true) => cat.specs().to_vec(),
                _ => return Err(CliError::Usage("verify needs exactly one of NAME or --all".into())),
            };
            let outcome = verify(&cat, &specs, *jobs);
            let mut text = String::new();
            for e in &outcome.entries {
                text.push_str(&format!("{:<8} {:<14} {} ({} ms)\n", e.status.label(), e.name, e.diff, e.wall_ms));
            }
            text.push_str(&format!(
                "{} passed, {} failed, {} skipped\n",
                outcome.passed, outcome.failed, outcome.skipped
            ));
            write_out(out, None, &text)?;
            if let Some(p) = json {
                write_out(out, Some(p), &(outcome.to_json() + "\n"))?;
            }
            if outcome.failed > 0 {
                return Err(CliError::Verify { failed: outcome.failed, total: outcome.entries.len() });
            }
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct Reflected<'a> {
    name: &'a str,
    chain: &'a [usize],
    parities: String,
    matrix: Vec<Vec<String>>,
    simple_roots: &'a [Vec<i64>],
    key: String,
}

fn reflected_json(cc: &ConcreteCartan, roots: &[Vec<i64>], chain: &[usize]) -> String {
    let r = Reflected {
        name: &cc.name,
        chain,
        parities: cc.parity_string(),
        matrix: cc.matrix_rows(),
        simple_roots: roots,
        key: canonical_form(cc).render(&cc.field),
    };
    serde_json::to_string_pretty(&r).expect("serializes")
}

fn chain_dot(cc: &ConcreteCartan, chain: &[usize]) -> String {
    let mut s = String::from("digraph chain {\n");
    s.push_str(&format!("  n0 [label=\"{}\"];\n", cc.name));
    for (i, p) in chain.iter().enumerate() {
        s.push_str(&format!("  n{} -> n{} [label=\"{p}\"];\n", i, i + 1));
    }
    s.push_str("}\n");
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    SkippedExternal,
}

impl Status {
    fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::SkippedExternal => "SKIP",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EntryOutcome {
    pub name: String,
    pub status: Status,
    pub diff: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub details: Option<Diff>,
    /// Excluded from the artifact so that it is reproducible.
    #[serde(skip)]
    pub wall_ms: u128,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyOutcome {
    pub entries: Vec<EntryOutcome>,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

impl VerifyOutcome {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializes")
    }
}

fn build_report(spec: &CartanSpec) -> Result<RootReport, String> {
    let cc = instantiate_with_defaults(spec, &BTreeMap::new()).map_err(|e| e.to_string())?;
    let model = build_with(&cc, BuildLimits::default(), Execution::Sequential).map_err(|e| e.to_string())?;
    Ok(root_report(&model))
}

/// Checks one entry: golden data, and for desuperizations the root multiset
/// of the aliased algebra with parities ignored.
pub fn verify_entry(cat: &Catalog, spec: &CartanSpec) -> EntryOutcome {
    let start = Instant::now();
    let golden = spec.expected.as_ref();
    let (status, diff, details) = match (spec.source, golden) {
        (Source::External, _) | (_, None) => (Status::SkippedExternal, "no golden data".to_string(), None),
        (Source::Paper, Some(g)) => match build_report(spec) {
            Err(e) => (Status::Fail, e, None),
            Ok(report) => {
                let d = compare(&report, g);
                let mut notes = Vec::new();
                if !d.is_empty() {
                    notes.push(d.summary());
                }
                if let Some(alias) = &g.alias {
                    match cat.get(alias).map_err(|e| e.to_string()).and_then(build_report) {
                        Ok(other) => {
                            let mut a = report.without_parities();
                            let mut b = other.without_parities();
                            a.sort();
                            b.sort();
                            if a != b {
                                notes.push(format!("roots differ from {alias}"));
                            }
                        }
                        Err(e) => notes.push(format!("alias {alias}: {e}")),
                    }
                }
                if notes.is_empty() {
                    (Status::Pass, "ok".to_string(), None)
                } else {
                    (Status::Fail, notes.join("; "), (!d.is_empty()).then_some(d))
                }
            }
        },
    };
    EntryOutcome { name: spec.name.clone(), status, diff, details, wall_ms: start.elapsed().as_millis() }
}

/// Verification fan-out over `jobs` threads; the outcome does not depend on `jobs`.
pub fn verify(cat: &Catalog, specs: &[CartanSpec], jobs: usize) -> VerifyOutcome {
    let entries = par::with_jobs(jobs, || par::map(Execution::Parallel, specs, |s| verify_entry(cat, s)));
    let count = |st: Status| entries.iter().filter(|e| e.status == st).count();
    VerifyOutcome {
        passed: count(Status::Pass),
        failed: count(Status::Fail),
        skipped: count(Status::SkippedExternal),
        entries,
    }
}
