use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use unravel_core::checker::prover::{prove_with, ProverConfig, Verdict};
use unravel_core::checker::simulation::{check_simulation, SimulationOutcome};
use unravel_core::checker::witness::validate_witness_order;
use unravel_core::csrewrite::{enumerate_seeds, explore, mu_steps, SeedOptions};
use unravel_core::ctrs::{all_conditional_steps, Dctrs, Fuel, Reduction, ReductionStep};
use unravel_core::experiment::{run_experiment, ExperimentConfig};
use unravel_core::io::config::{load_config, Config};
use unravel_core::io::json::{to_json, versioned, witness_json};
use unravel_core::io::parse::{parse_ctrs, parse_term, CtrsProblem};
use unravel_core::io::print::{print_csrs, print_trs};
use unravel_core::term::Term;
use unravel_core::unravel::{unravel, unravel_cs};

const INPUT_ERROR: u8 = 3;

/// Context-sensitive unraveling of deterministic conditional rewrite systems.
#[derive(Parser)]
#[command(name = "unravel", version)]
struct Cli {
    /// TOML config file (default: $UNRAVEL_CONFIG, then ./unravel.toml).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args, Clone, Copy, Default)]
struct FuelArgs {
    /// Deepest nesting of condition evaluation.
    #[arg(long)]
    max_level: Option<usize>,
    /// Distinct terms visited per search.
    #[arg(long)]
    max_steps: Option<usize>,
    /// Terms larger than this are not expanded.
    #[arg(long)]
    max_term_size: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the DCTRS conditions.
    Validate { file: PathBuf },
    /// Print U(R), or U_CS(R) with --cs.
    Unravel {
        file: PathBuf,
        #[arg(long)]
        cs: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// One-step successors of a term, or a reduction to normal form.
    Rewrite {
        file: PathBuf,
        #[arg(short, long)]
        term: String,
        /// Rewrite with U_CS(R) instead of R.
        #[arg(long)]
        mu: bool,
        /// Follow the leftmost-outermost step until a normal form.
        #[arg(long)]
        normalize: bool,
        /// Print the explored U_CS(R) reduction graph as DOT.
        #[arg(long, requires = "mu")]
        dot: bool,
        /// Render binary operators infix.
        #[arg(long)]
        infix: bool,
        #[command(flatten)]
        fuel: FuelArgs,
    },
    /// R-steps from a term next to their U_CS(R) simulations.
    Simulate {
        file: PathBuf,
        #[arg(short, long)]
        source: String,
        #[command(flatten)]
        fuel: FuelArgs,
    },
    /// Decide quasi-decreasingness: YES, NO or MAYBE.
    Prove {
        file: PathBuf,
        /// Largest loop-search seed, in nodes.
        #[arg(long)]
        seeds_size: Option<usize>,
        /// Allow up to N variables in seeds.
        #[arg(long, default_value_t = 0)]
        seed_vars: usize,
        /// Run the loop search even after LPO succeeds.
        #[arg(long)]
        all_routes: bool,
        /// Write the outcome as JSON ("-" for stdout).
        #[arg(long)]
        json: Option<PathBuf>,
        #[command(flatten)]
        fuel: FuelArgs,
    },
    /// Sample the witness order and check its four obligations.
    CheckWitness {
        file: PathBuf,
        #[arg(long, default_value_t = 5)]
        seeds_size: usize,
        #[arg(long)]
        json: Option<PathBuf>,
        #[command(flatten)]
        fuel: FuelArgs,
    },
    /// Run the prover over every .ctrs file in a directory.
    Experiment {
        dir: PathBuf,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        seeds_size: Option<usize>,
        #[command(flatten)]
        fuel: FuelArgs,
    },
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { INPUT_ERROR } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(INPUT_ERROR)
        }
    }
}

fn run(cli: Cli) -> Outcome {
    let config = load_config(cli.config.as_deref())?;
    match cli.command {
        Cmd::Validate { file } => validate(&file),
        Cmd::Unravel { file, cs, output } => unravel_cmd(&file, cs, output.as_deref()),
        Cmd::Rewrite {
            file,
            term,
            mu,
            normalize,
            dot,
            infix,
            fuel,
        } => rewrite(
            &file,
            &term,
            mu,
            normalize,
            dot,
            infix,
            fuel.resolve(&config)?,
        ),
        Cmd::Simulate { file, source, fuel } => simulate(&file, &source, fuel.resolve(&config)?),
        Cmd::Prove {
            file,
            seeds_size,
            seed_vars,
            all_routes,
            json,
            fuel,
        } => {
            let prover = ProverConfig {
                fuel: fuel.resolve(&config)?,
                seeds: SeedOptions {
                    max_size: seeds_size.or(config.seeds_size).unwrap_or(5),
                    variables: seed_vars,
                },
                all_routes,
                ..ProverConfig::default()
            };
            prove(&file, &prover, json.as_deref())
        }
        Cmd::CheckWitness {
            file,
            seeds_size,
            json,
            fuel,
        } => check_witness(&file, seeds_size, fuel.resolve(&config)?, json.as_deref()),
        Cmd::Experiment {
            dir,
            json,
            workers,
            seeds_size,
            fuel,
        } => {
            let mut ec = ExperimentConfig::from(&config);
            ec.fuel = fuel.resolve(&config)?;
            if let Some(w) = workers {
                ec.workers = w;
            }
            if let Some(n) = seeds_size {
                ec.seeds = SeedOptions::ground(n);
            }
            experiment(&dir, &ec, json.as_deref())
        }
    }
}

impl FuelArgs {
    fn resolve(&self, config: &Config) -> Result<Fuel, Failure> {
        let base = config.fuel();
        Ok(Fuel::new(
            self.max_level.unwrap_or(base.max_level),
            self.max_steps.unwrap_or(base.max_steps),
            self.max_term_size.unwrap_or(base.max_term_size),
        )?)
    }
}

fn read_problem(file: &Path) -> Result<CtrsProblem, Failure> {
    let text = fs::read_to_string(file).map_err(|e| Failure(format!("{}: {e}", file.display())))?;
    parse_ctrs(&text).map_err(|e| Failure(format!("{}:{e}", file.display())))
}

/// Parses `text` against the problem, adding any new constructors it uses.
fn read_term(problem: &CtrsProblem, text: &str) -> Result<(Dctrs, Term), Failure> {
    let t = parse_term(text, &problem.vars, problem.dctrs.signature())
        .map_err(|e| Failure(format!("term: {e}")))?;
    let dctrs = problem
        .dctrs
        .clone()
        .with_symbols(t.symbols().iter().cloned())?;
    Ok((dctrs, t))
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        None => print!("{text}"),
        Some(p) if p == Path::new("-") => print!("{text}"),
        Some(p) => fs::write(p, text).map_err(|e| Failure(format!("{}: {e}", p.display())))?,
    }
    Ok(())
}

fn validate(file: &Path) -> Outcome {
    let p = read_problem(file)?;
    println!(
        "valid DCTRS: {} rules, {} conditional, {} symbols",
        p.dctrs.rules().len(),
        p.dctrs.conditional_rules().count(),
        p.dctrs.signature().len()
    );
    Ok(0)
}

fn unravel_cmd(file: &Path, cs: bool, output: Option<&Path>) -> Outcome {
    let p = read_problem(file)?;
    let text = if cs {
        print_csrs(&unravel_cs(&p.dctrs))
    } else {
        print_trs(&unravel(&p.dctrs))
    };
    write_output(output, &text)?;
    Ok(0)
}

fn show(t: &Term, infix: bool) -> String {
    if infix {
        t.infix().to_string()
    } else {
        t.to_string()
    }
}

fn show_step(st: &ReductionStep, infix: bool) -> String {
    let mut line = format!(
        "{}  [{} at {}",
        show(&st.target, infix),
        st.rule,
        st.position
    );
    if let unravel_core::ctrs::StepKind::Conditional(level) = st.kind {
        line.push_str(&format!(", level {level}"));
    }
    line.push(']');
    line
}

fn rewrite(
    file: &Path,
    term: &str,
    mu: bool,
    normalize: bool,
    dot: bool,
    infix: bool,
    fuel: Fuel,
) -> Outcome {
    let p = read_problem(file)?;
    let (dctrs, t) = read_term(&p, term)?;
    let cs = unravel_cs(&dctrs);
    if dot {
        print!("{}", explore(&t, &cs, fuel)?.graph.to_dot());
        return Ok(0);
    }
    let successors = |s: &Term| -> Result<(Vec<ReductionStep>, bool), Failure> {
        if mu {
            Ok((mu_steps(s, &cs)?, false))
        } else {
            let found = all_conditional_steps(s, &dctrs, fuel);
            Ok((found.steps, found.exhausted))
        }
    };
    if !normalize {
        let (steps, exhausted) = successors(&t)?;
        for st in &steps {
            println!("-> {}", show_step(st, infix));
        }
        if steps.is_empty() && !exhausted {
            println!("{} is a normal form", show(&t, infix));
        }
        if exhausted {
            println!("(bounds exhausted: more steps may exist)");
        }
        return Ok(0);
    }
    let mut red = Reduction::empty(t.clone());
    println!("{}", show(&t, infix));
    loop {
        if red.len() >= fuel.max_steps {
            println!("(stopped after {} steps)", red.len());
            return Ok(2);
        }
        let (steps, exhausted) = successors(red.end())?;
        match steps.into_iter().next() {
            Some(st) => {
                println!("  -> {}", show_step(&st, infix));
                red.steps.push(st);
            }
            None if exhausted => {
                println!("(bounds exhausted: normal form not established)");
                return Ok(2);
            }
            None => {
                println!("normal form after {} steps", red.len());
                return Ok(0);
            }
        }
    }
}

fn simulate(file: &Path, source: &str, fuel: Fuel) -> Outcome {
    let p = read_problem(file)?;
    let (dctrs, t) = read_term(&p, source)?;
    let cs = unravel_cs(&dctrs);
    let found = all_conditional_steps(&t, &dctrs, fuel);
    if found.steps.is_empty() {
        println!("no R-step from {t}");
    }
    let mut alarms = 0;
    for st in &found.steps {
        println!("R:    {st}");
        match check_simulation(st, &cs, fuel)? {
            SimulationOutcome::Found { reduction } => {
                println!("U_CS: {} steps", reduction.len());
                for s in &reduction.steps {
                    println!("        -> {}  [{} at {}]", s.target, s.rule, s.position);
                }
            }
            SimulationOutcome::Exhausted => println!("U_CS: bounds exhausted"),
            SimulationOutcome::Alarm => {
                alarms += 1;
                println!("U_CS: ALARM, target unreachable");
            }
        }
    }
    if found.exhausted {
        println!("(bounds exhausted: more R-steps may exist)");
    }
    Ok(if alarms > 0 { 1 } else { 0 })
}

fn prove(file: &Path, config: &ProverConfig, json_out: Option<&Path>) -> Outcome {
    let p = read_problem(file)?;
    let seeds = enumerate_seeds(p.dctrs.signature(), config.seeds);
    let outcome = prove_with(&p.dctrs, config, Some(&seeds));
    let mut text = format!("{}\n", outcome.verdict);
    for line in &outcome.provenance {
        text.push_str(&format!("  {line}\n"));
    }
    if let unravel_core::checker::prover::Certificate::Loop { reduction } = &outcome.certificate {
        text.push_str(&format!("loop:\n{reduction}\n"));
    }
    for r in &outcome.routes {
        text.push_str(&format!("{}: {} ({})\n", r.method, r.verdict, r.detail));
    }
    let to_stdout = json_out == Some(Path::new("-"));
    if !to_stdout {
        print!("{text}");
    }
    if let Some(out) = json_out {
        let body = json!({
            "system": file.file_stem().map(|s| s.to_string_lossy()),
            "verdict": outcome.verdict,
            "certificate": outcome.certificate,
            "provenance": outcome.provenance,
            "routes": outcome.routes,
            "seeds": seeds.len(),
        });
        write_output(Some(out), &to_json(&versioned("proof", &body)))?;
    }
    Ok(verdict_code(outcome.verdict))
}

fn verdict_code(v: Verdict) -> u8 {
    v.exit_code() as u8
}

fn check_witness(file: &Path, seeds_size: usize, fuel: Fuel, json_out: Option<&Path>) -> Outcome {
    let p = read_problem(file)?;
    let seeds = enumerate_seeds(p.dctrs.signature(), SeedOptions::ground(seeds_size));
    let report = validate_witness_order(&p.dctrs, &seeds, fuel)?;
    let mut out = std::io::stdout().lock();
    if json_out != Some(Path::new("-")) {
        writeln!(
            out,
            "{} seeds, {} sampled terms, {} pairs",
            seeds.len(),
            report.nodes.len(),
            report.pairs.len()
        )?;
        for o in &report.obligations {
            writeln!(
                out,
                "obligation {} ({}): {} [{} checked{}]",
                o.number,
                o.name,
                if o.passed { "PASS" } else { "FAIL" },
                o.checked,
                if o.incomplete { ", incomplete" } else { "" }
            )?;
            for f in &o.failures {
                writeln!(out, "  {f}")?;
            }
        }
        if let Some(cycle) = &report.cycle {
            let terms: Vec<String> = cycle.iter().map(|t| t.to_string()).collect();
            writeln!(out, "cycle: {}", terms.join(" > "))?;
        }
    }
    drop(out);
    if let Some(path) = json_out {
        write_output(Some(path), &to_json(&witness_json(&report, 50)))?;
    }
    Ok(if report.passed() { 0 } else { 1 })
}

fn experiment(dir: &Path, config: &ExperimentConfig, json_out: Option<&Path>) -> Outcome {
    if !dir.is_dir() {
        return Err(Failure(format!("{} is not a directory", dir.display())));
    }
    let report = run_experiment(dir, config)?;
    if json_out != Some(Path::new("-")) {
        for row in &report.systems {
            let verdict = row
                .verdict
                .map(|v| v.to_string())
                .unwrap_or_else(|| "ERROR".into());
            let detail = row
                .error
                .clone()
                .or_else(|| row.certificate.clone())
                .unwrap_or_default();
            println!("{:<24} {:<6} {detail}", row.system, verdict);
        }
        println!();
        print!("{}", report.table());
    }
    if let Some(path) = json_out {
        write_output(Some(path), &to_json(&versioned("experiment", &report)))?;
    }
    Ok(0)
}
