use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use reqont_core::diag::{has_errors, Diagnostic};
use reqont_core::dsl::{parse_model, parse_utterances, render_model, Namespace, ParsedModel};
use reqont_core::literal::Literal;
use reqont_core::report::{ClassificationSummary, Explanation, Report};
use reqont_core::solver::{
    default_candidate, parse_signature, program_for, solve, zj_mode, SolveOptions,
    DEFAULT_MAX_CANDIDATES,
};
use reqont_core::speech_act::classify_utterances;
use reqont_core::validate::ValidationOptions;
use reqont_core::Model;

const EXIT_OK: u8 = 0;
const EXIT_DOMAIN: u8 = 1;
const EXIT_IO: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(name = "reqont", version, about = "Requirements models: check, classify, solve, explain")]
struct Cli {
    /// Minimum absolute correlation for a softgoal approximation.
    #[arg(long, global = true, default_value_t = 0.5)]
    approx_threshold: f64,

    /// Write the machine-readable report to this path.
    #[arg(long, global = true, value_name = "PATH")]
    report: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a model.
    Check { model: PathBuf },
    /// Classify annotated utterances and print the resulting model skeleton.
    Classify {
        utterances: PathBuf,
        /// Model declaring elements the attitudes may refer to.
        #[arg(long)]
        registry: Option<PathBuf>,
    },
    /// Find the non-dominated specifications of a model.
    Solve {
        model: PathBuf,
        /// Report every non-dominated candidate, not only the first.
        #[arg(long)]
        all_solutions: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_CANDIDATES)]
        max_candidates: usize,
        /// Decide by classical entailment instead (strict-only models).
        #[arg(long)]
        zj: bool,
    },
    /// Print the dialectical trees deciding a literal's warrant.
    Explain {
        model: PathBuf,
        #[arg(long)]
        query: String,
        /// Candidate signature such as `g:g1;p:p1`; defaults to the first
        /// combination of compulsory elements.
        #[arg(long)]
        candidate: Option<String>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Check { .. } => "check",
            Command::Classify { .. } => "classify",
            Command::Solve { .. } => "solve",
            Command::Explain { .. } => "explain",
        }
    }
}

/// Failure to read an input, reported with exit status 2.
#[derive(Debug)]
struct InputError(PathBuf, io::Error);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "cannot read {}: {}", self.0.display(), self.1)
    }
}

impl std::error::Error for InputError {}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| InputError(path.to_path_buf(), e).into())
}

fn load_model(path: &Path, options: &ValidationOptions) -> Result<ParsedModel> {
    let text = read(path)?;
    Ok(parse_model(&text, &path.display().to_string(), options))
}

fn print_diagnostics(diagnostics: &[Diagnostic]) {
    for d in diagnostics {
        eprintln!("{d}");
    }
}

fn write_report(report: &Report, path: Option<&Path>) -> Result<()> {
    let Some(path) = path else { return Ok(()) };
    let mut json = serde_json::to_string_pretty(report).context("serializing report")?;
    json.push('\n');
    fs::write(path, json).with_context(|| format!("cannot write report to {}", path.display()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command = cli.command.name();
    let options = ValidationOptions {
        approx_threshold: cli.approx_threshold,
    };
    let result = match &cli.command {
        Command::Check { model } => check(model, &options),
        Command::Classify {
            utterances,
            registry,
        } => classify(utterances, registry.as_deref(), &options),
        Command::Solve {
            model,
            all_solutions,
            max_candidates,
            zj,
        } => {
            let solve_options = SolveOptions {
                max_candidates: *max_candidates,
                all_solutions: *all_solutions,
            };
            run_solve(model, &options, &solve_options, *zj)
        }
        Command::Explain {
            model,
            query,
            candidate,
        } => explain(model, query, candidate.as_deref(), &options),
    };
    let (report, code) = match result {
        Ok(done) => done,
        Err(e) => {
            let code = if e.downcast_ref::<InputError>().is_some() {
                EXIT_IO
            } else {
                EXIT_DOMAIN
            };
            let d = Diagnostic::error(if code == EXIT_IO { "io.read" } else { "internal" }, format!("{e:#}"));
            print_diagnostics(std::slice::from_ref(&d));
            (Report::new(command).with_diagnostics([d]), code)
        }
    };
    if let Err(e) = write_report(&report, cli.report.as_deref()) {
        eprintln!("error: {e:#}");
        return ExitCode::from(EXIT_IO);
    }
    ExitCode::from(code)
}

type Done = (Report, u8);

fn check(path: &Path, options: &ValidationOptions) -> Result<Done> {
    let pm = load_model(path, options)?;
    print_diagnostics(&pm.diagnostics);
    let code = if pm.has_errors() {
        EXIT_DOMAIN
    } else {
        let m = &pm.model;
        println!(
            "{}: ok ({} elements, {} rules, {} attitudes)",
            path.display(),
            m.elements.len(),
            m.rules.len(),
            m.attitudes.len()
        );
        EXIT_OK
    };
    Ok((Report::new("check").with_diagnostics(pm.diagnostics), code))
}

fn classify(path: &Path, registry: Option<&Path>, options: &ValidationOptions) -> Result<Done> {
    let text = read(path)?;
    let file = path.display().to_string();
    let parsed = parse_utterances(&text, &file);
    let mut diagnostics = parsed.diagnostics.clone();
    let registry_model = match registry {
        Some(r) => {
            let pm = load_model(r, options)?;
            diagnostics.extend(pm.diagnostics.iter().cloned());
            pm.model
        }
        None => Model::new(),
    };
    if has_errors(&diagnostics) {
        print_diagnostics(&diagnostics);
        return Ok((Report::new("classify").with_diagnostics(diagnostics), EXIT_DOMAIN));
    }

    let c = classify_utterances(&parsed.utterances, &parsed.qualities, &registry_model);
    for (id, r) in &c.results {
        if let Err(e) = r {
            let mut d = Diagnostic::error(e.code(), e.to_string()).about(id);
            if let Some(span) = parsed.spans.get(Namespace::Utterance, id) {
                d = d.at(span.clone());
            }
            diagnostics.push(d);
        }
    }
    print_diagnostics(&diagnostics);
    print!("{}", render_model(&c.skeleton));
    let mut report = Report::new("classify").with_diagnostics(diagnostics);
    report.classifications = Some(ClassificationSummary::all(&c));
    let code = if c.is_complete() { EXIT_OK } else { EXIT_DOMAIN };
    Ok((report, code))
}

fn list(ids: &std::collections::BTreeSet<String>) -> String {
    if ids.is_empty() {
        "-".into()
    } else {
        ids.iter().cloned().collect::<Vec<_>>().join(", ")
    }
}

fn run_solve(path: &Path, options: &ValidationOptions, solve_options: &SolveOptions, zj: bool) -> Result<Done> {
    let pm = load_model(path, options)?;
    if pm.has_errors() {
        print_diagnostics(&pm.diagnostics);
        return Ok((Report::new("solve").with_diagnostics(pm.diagnostics), EXIT_DOMAIN));
    }
    let model = &pm.model;

    if zj {
        let mut report = Report::new("solve").with_diagnostics(pm.diagnostics);
        return Ok(match zj_mode(model) {
            Ok(holds) => {
                println!(
                    "classical entailment: {}",
                    if holds { "holds" } else { "fails" }
                );
                report.classical_entailment = Some(holds);
                (report, if holds { EXIT_OK } else { EXIT_DOMAIN })
            }
            Err(e) => {
                let d = Diagnostic::error(e.code(), e.to_string());
                print_diagnostics(std::slice::from_ref(&d));
                report.diagnostics.push(d);
                (report, EXIT_DOMAIN)
            }
        });
    }

    let outcome = match solve(model, solve_options) {
        Ok(o) => o,
        Err(e) => {
            let d = Diagnostic::error(e.code(), e.to_string());
            print_diagnostics(std::slice::from_ref(&d));
            let report = Report::new("solve").with_diagnostics(pm.diagnostics.into_iter().chain([d]));
            return Ok((report, EXIT_DOMAIN));
        }
    };
    print_diagnostics(&pm.diagnostics);
    print_diagnostics(&outcome.diagnostics);
    for (i, s) in outcome.solutions.iter().enumerate() {
        let c = &s.candidate;
        println!("solution {}: {}", i + 1, c.signature());
        println!("  assumptions: {}", list(&c.assumptions));
        println!("  goals: {}", list(&c.goals));
        println!("  quality constraints: {}", list(&c.qcs));
        println!("  softgoals: {}", list(&c.softgoals));
        println!("  plans: {}", list(&c.plans));
        let verdicts: Vec<String> = s
            .verdicts
            .iter()
            .map(|v| format!("{} {}", v.condition.number(), if v.passed { "pass" } else { "fail" }))
            .collect();
        println!("  conditions: {}", verdicts.join(", "));
    }
    println!(
        "examined {} candidates: {} feasible, {} dominated{}",
        outcome.examined,
        outcome.feasible,
        outcome.dominated,
        if outcome.exhaustive { "" } else { " (budget exceeded)" }
    );
    println!("effective preferences: {}", list(&outcome.aggregate.effective));

    let code = if !outcome.solutions.is_empty() {
        EXIT_OK
    } else if !outcome.exhaustive {
        EXIT_BUDGET
    } else {
        EXIT_DOMAIN
    };
    let mut report = Report::from_outcome("solve", &outcome);
    report.diagnostics = pm.diagnostics.into_iter().chain(report.diagnostics).collect();
    Ok((report, code))
}

fn explain(path: &Path, query: &str, signature: Option<&str>, options: &ValidationOptions) -> Result<Done> {
    let pm = load_model(path, options)?;
    let fail = |pm_diags: Vec<Diagnostic>, d: Diagnostic| {
        let all: Vec<Diagnostic> = pm_diags.into_iter().chain([d]).collect();
        print_diagnostics(&all);
        Ok((Report::new("explain").with_diagnostics(all), EXIT_DOMAIN))
    };
    if pm.has_errors() {
        print_diagnostics(&pm.diagnostics);
        return Ok((Report::new("explain").with_diagnostics(pm.diagnostics), EXIT_DOMAIN));
    }
    let model = &pm.model;
    let literal: Literal = match query.parse() {
        Ok(l) => l,
        Err(e) => return fail(pm.diagnostics, Diagnostic::error("query.invalid", format!("`{query}`: {e}"))),
    };
    if !model.atoms().contains(literal.atom()) {
        return fail(
            pm.diagnostics,
            Diagnostic::error("query.unknown_atom", format!("atom `{}` does not occur in the model", literal.atom().as_str())),
        );
    }
    let candidate = match signature {
        Some(sig) => match parse_signature(model, sig) {
            Ok(c) => c,
            Err(e) => return fail(pm.diagnostics, Diagnostic::error("query.candidate", e)),
        },
        None => match default_candidate(model) {
            Ok(c) => c,
            Err(e) => return fail(pm.diagnostics, Diagnostic::error(e.code(), e.to_string())),
        },
    };
    let program = match program_for(model, &candidate) {
        Ok(p) => p,
        Err(e) => return fail(pm.diagnostics, Diagnostic::error("explain.program", e.to_string())),
    };
    let verdict = match program.warrant(&literal) {
        Ok(w) => w,
        Err(e) => return fail(pm.diagnostics, Diagnostic::error("explain.inconsistent_base", e.to_string())),
    };
    let trees = program.dialectical_trees(&literal);

    print_diagnostics(&pm.diagnostics);
    println!("candidate: {}", candidate.signature());
    if trees.is_empty() {
        println!("no argument for `{literal}`");
    }
    for t in &trees {
        print!("{}", t.render());
    }
    println!("{literal}: {verdict}");

    let mut report = Report::new("explain").with_diagnostics(pm.diagnostics);
    report.explanation = Some(Explanation {
        literal: literal.to_string(),
        candidate: candidate.signature(),
        verdict,
        trees,
    });
    Ok((report, EXIT_OK))
}
