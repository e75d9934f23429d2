//! Batch runner over a directory of `.ctrs` files.
//!
//! Each file is validated, unraveled both ways and handed to the prover
//! with both routes enabled. The summary tallies verdicts per method, in
//! the shape of a YES/NO/MAYBE by method table.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::checker::prover::{prove_with, Certificate, Method, ProverConfig, Verdict};
use crate::csrewrite::SeedOptions;
use crate::ctrs::{Dctrs, Fuel};
use crate::io::config::{Config, ExportFormat, ExternalTool};
use crate::io::parse::parse_ctrs;
use crate::io::print::{print_csrs, print_trs};
use crate::unravel::{unravel, unravel_cs};

pub const COMBINED: &str = "combined";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentConfig {
    pub fuel: Fuel,
    pub seeds: SeedOptions,
    pub precedence_cap: usize,
    /// Files processed concurrently; 0 lets the pool decide.
    pub workers: usize,
    pub external: Vec<ExternalTool>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let p = ProverConfig::default();
        ExperimentConfig {
            fuel: p.fuel,
            seeds: p.seeds,
            precedence_cap: p.precedence_cap,
            workers: 0,
            external: Vec::new(),
        }
    }
}

impl From<&Config> for ExperimentConfig {
    fn from(c: &Config) -> Self {
        let mut e = ExperimentConfig {
            fuel: c.fuel(),
            workers: c.workers.unwrap_or(0),
            external: c.external.clone(),
            ..ExperimentConfig::default()
        };
        if let Some(n) = c.seeds_size {
            e.seeds = SeedOptions::ground(n);
        }
        e
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SystemRow {
    /// File stem.
    pub system: String,
    pub valid: bool,
    pub error: Option<String>,
    pub rules: usize,
    pub conditional_rules: usize,
    pub unraveled_rules: usize,
    pub u_symbols: usize,
    /// Verdict per method, keyed by method name.
    pub methods: BTreeMap<String, Verdict>,
    pub verdict: Option<Verdict>,
    pub certificate: Option<String>,
    pub wall_ms: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub columns: Vec<String>,
    /// `counts[verdict][column]`
    pub counts: BTreeMap<Verdict, BTreeMap<String, usize>>,
    pub systems: usize,
    pub invalid: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExperimentReport {
    pub systems: Vec<SystemRow>,
    pub summary: Summary,
}

impl ExperimentReport {
    pub fn count(&self, verdict: Verdict, column: &str) -> usize {
        self.summary
            .counts
            .get(&verdict)
            .and_then(|row| row.get(column))
            .copied()
            .unwrap_or(0)
    }

    /// Plain-text table, verdicts down and methods across.
    pub fn table(&self) -> String {
        let cols = &self.summary.columns;
        let width = cols.iter().map(|c| c.len()).max().unwrap_or(0).max(5);
        let mut out = format!("{:<6}", "");
        for c in cols {
            out.push_str(&format!(" {c:>width$}"));
        }
        out.push('\n');
        for v in [Verdict::Yes, Verdict::No, Verdict::Maybe] {
            out.push_str(&format!("{:<6}", v.to_string()));
            for c in cols {
                out.push_str(&format!(" {:>width$}", self.count(v, c)));
            }
            out.push('\n');
        }
        out
    }
}

/// Runs every `*.ctrs` file in `dir`, sorted by name.
pub fn run_experiment(dir: &Path, config: &ExperimentConfig) -> std::io::Result<ExperimentReport> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)?
        .map(|e| e.map(|e| e.path()))
        .collect::<std::io::Result<_>>()?;
    files.retain(|p| p.extension().is_some_and(|e| e == "ctrs"));
    files.sort();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(std::io::Error::other)?;
    let systems: Vec<SystemRow> =
        pool.install(|| files.par_iter().map(|f| run_file(f, config)).collect());

    let mut columns: Vec<String> = vec![
        Method::LoopSearch.to_string(),
        Method::UnraveledLpo.to_string(),
    ];
    columns.extend(config.external.iter().map(|t| t.name.clone()));
    columns.push(COMBINED.to_string());
    let mut counts: BTreeMap<Verdict, BTreeMap<String, usize>> = BTreeMap::new();
    for v in [Verdict::Yes, Verdict::No, Verdict::Maybe] {
        counts.insert(v, columns.iter().map(|c| (c.clone(), 0)).collect());
    }
    for row in &systems {
        for (method, v) in &row.methods {
            *counts.get_mut(v).unwrap().get_mut(method).unwrap() += 1;
        }
        if let Some(v) = row.verdict {
            *counts.get_mut(&v).unwrap().get_mut(COMBINED).unwrap() += 1;
        }
    }
    let summary = Summary {
        columns,
        counts,
        systems: systems.len(),
        invalid: systems.iter().filter(|r| !r.valid).count(),
    };
    Ok(ExperimentReport { systems, summary })
}

fn run_file(path: &Path, config: &ExperimentConfig) -> SystemRow {
    let start = Instant::now();
    let system = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let mut row = SystemRow {
        system,
        valid: false,
        error: None,
        rules: 0,
        conditional_rules: 0,
        unraveled_rules: 0,
        u_symbols: 0,
        methods: BTreeMap::new(),
        verdict: None,
        certificate: None,
        wall_ms: 0,
    };
    let parsed = std::fs::read_to_string(path)
        .map_err(|e| e.to_string())
        .and_then(|text| parse_ctrs(&text).map_err(|e| e.to_string()));
    match parsed {
        Err(e) => row.error = Some(e),
        Ok(problem) => fill_row(&mut row, &problem.dctrs, config),
    }
    row.wall_ms = start.elapsed().as_millis() as u64;
    row
}

fn fill_row(row: &mut SystemRow, r: &Dctrs, config: &ExperimentConfig) {
    row.valid = true;
    row.rules = r.rules().len();
    row.conditional_rules = r.conditional_rules().count();
    let trs = unravel(r);
    row.unraveled_rules = trs.rules.len();
    row.u_symbols = trs.signature.iter().filter(|f| !f.is_original()).count();

    let prover = ProverConfig {
        fuel: config.fuel,
        seeds: config.seeds,
        precedence_cap: config.precedence_cap,
        all_routes: true,
    };
    let outcome = prove_with(r, &prover, None);
    for route in &outcome.routes {
        row.methods.insert(route.method.to_string(), route.verdict);
    }
    for tool in &config.external {
        let text = match tool.format {
            ExportFormat::Trs => print_trs(&trs),
            ExportFormat::Csrs => print_csrs(&unravel_cs(r)),
        };
        row.methods.insert(
            tool.name.clone(),
            run_external(tool, &text).unwrap_or(Verdict::Maybe),
        );
    }
    row.verdict = Some(outcome.verdict);
    row.certificate = Some(match &outcome.certificate {
        Certificate::Precedence { precedence } => format!("precedence {precedence}"),
        Certificate::Loop { reduction } => format!(
            "loop of length {} from {}",
            reduction.len(),
            reduction.start
        ),
        Certificate::BoundsExhausted { .. } => "bounds exhausted".to_string(),
    });
}

/// Any failure to run the tool or read its answer counts as MAYBE.
fn run_external(tool: &ExternalTool, text: &str) -> Option<Verdict> {
    let suffix = match tool.format {
        ExportFormat::Trs => ".trs",
        ExportFormat::Csrs => ".csrs",
    };
    let mut file = tempfile::Builder::new().suffix(suffix).tempfile().ok()?;
    std::io::Write::write_all(&mut file, text.as_bytes()).ok()?;
    let path = file.path().to_string_lossy().into_owned();
    let command = tool.command.replace("{file}", &shell_quote(&path));
    let out = Command::new("sh").arg("-c").arg(&command).output().ok()?;
    let stdout = String::from_utf8_lossy(&out.stdout);
    match stdout.lines().next()?.trim() {
        "YES" => Some(Verdict::Yes),
        "NO" => Some(Verdict::No),
        _ => Some(Verdict::Maybe),
    }
}

fn shell_quote(s: &str) -> String {
    format!("'{}'", s.replace('\'', r"'\''"))
}
