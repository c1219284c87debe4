//! Batch front-end: each subcommand loads its inputs, runs one analysis and
//! returns a deterministic JSON report. Property failures are reported in
//! the `violations` array and never abort a run.

pub mod commands;
pub mod report;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use ncgalois::io::Resolver;
use ncgalois::{Error, Tolerance};
use serde_json::{json, Value};

/// Environment variable naming the fixture directory.
pub const FIXTURES_ENV: &str = "NCGALOIS_FIXTURES";

#[derive(Debug, Parser)]
#[command(name = "ncgalois", version, about = "Finite group actions on matrix algebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Absolute tolerance for rank and equality decisions.
    #[arg(long, global = true)]
    pub tol_abs: Option<f64>,
    /// Relative tolerance for rank and equality decisions.
    #[arg(long, global = true)]
    pub tol_rel: Option<f64>,
    /// Seed for randomized analyses; required by those.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Subgroups, conjugacy classes and element orders of a group.
    AnalyzeGroup { group: String },
    /// Irreducible representations with Peter-Weyl and Schur checks.
    Irreps { group: String },
    /// Decompose a representation into irreducible blocks.
    Decompose { representation: String },
    /// Subgroup to fixed-point algebra correspondence.
    Galois { spec: String },
    /// GNS space, modular operators, KMS and Connes cocycles.
    Modular { spec: String },
    /// Crossed product and its Galois analysis.
    Crossed { spec: String },
    /// Conditional expectations and martingales along a subgroup chain.
    Martingale { spec: String },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::AnalyzeGroup { .. } => "analyze-group",
            Command::Irreps { .. } => "irreps",
            Command::Decompose { .. } => "decompose",
            Command::Galois { .. } => "galois",
            Command::Modular { .. } => "modular",
            Command::Crossed { .. } => "crossed",
            Command::Martingale { .. } => "martingale",
        }
    }

    fn input(&self) -> &str {
        match self {
            Command::AnalyzeGroup { group: s } | Command::Irreps { group: s } => s,
            Command::Decompose { representation: s } => s,
            Command::Galois { spec: s } | Command::Modular { spec: s } | Command::Crossed { spec: s } | Command::Martingale { spec: s } => s,
        }
    }
}

/// A failed run: exit code 1 for invalid input, 2 for numerical failure.
#[derive(Debug)]
pub struct Failure {
    pub kind: String,
    pub message: String,
    pub exit_code: i32,
}

impl Failure {
    pub fn invalid(message: impl Into<String>) -> Self {
        Failure { kind: "InvalidInput".into(), message: message.into(), exit_code: 1 }
    }

    pub fn to_json(&self) -> String {
        report::render(&json!({"error": {"kind": self.kind, "message": self.message}}))
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { kind: e.kind().to_string(), message: e.to_string(), exit_code: if e.is_numerical() { 2 } else { 1 } }
    }
}

/// Everything a command needs besides its input.
pub struct Context {
    pub tol: Tolerance,
    pub seed: Option<u64>,
    pub resolver: Resolver,
}

impl Context {
    pub fn seed(&self) -> Result<u64, Failure> {
        self.seed.ok_or_else(|| Failure::invalid("this analysis is randomized and needs --seed"))
    }
}

/// Run one command and return the rendered report.
pub fn run(cli: &Cli) -> Result<String, Failure> {
    let default = Tolerance::default();
    let tol = Tolerance::new(cli.tol_abs.unwrap_or(default.abs_eps), cli.tol_rel.unwrap_or(default.rel_eps))?;
    let input = cli.command.input();
    let mut search = Vec::new();
    if let Some(dir) = Path::new(input).parent().filter(|d| !d.as_os_str().is_empty()) {
        search.push(dir.to_path_buf());
    }
    if let Some(dir) = std::env::var_os(FIXTURES_ENV) {
        search.push(PathBuf::from(dir));
    }
    let mut ctx = Context { tol, seed: cli.seed, resolver: Resolver::new(search) };
    let (body, violations) = commands::dispatch(&cli.command, &mut ctx)?;
    let inputs: Vec<Value> = ctx
        .resolver
        .loaded
        .iter()
        .map(|(name, bytes)| {
            let short = Path::new(name).file_name().map_or(name.clone(), |f| f.to_string_lossy().into_owned());
            json!({"name": short, "sha256": report::sha256_hex(bytes)})
        })
        .collect();
    let envelope = json!({
        "command": cli.command.name(),
        "seed": cli.seed,
        "tolerance": {"abs": tol.abs_eps, "rel": tol.rel_eps},
        "inputs": inputs,
        "report": body,
        "violations": violations,
    });
    Ok(report::render(&envelope))
}

/// Write `text` to `path` through a temporary sibling and a rename.
pub fn write_atomically(path: &Path, text: &str) -> std::io::Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    std::fs::write(&tmp, text)?;
    std::fs::rename(&tmp, path)
}
