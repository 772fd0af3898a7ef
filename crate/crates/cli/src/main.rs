//! `doxa`: belief revision over finite probability structures.
//!
//! Exit codes: 0 when the checked property holds (or the computation
//! simply succeeds), 1 when a property fails and a witness is emitted,
//! 2 on usage or input errors. Output is deterministic: identical
//! invocations produce byte-identical output.

use std::env;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use doxa_core::rational::in_unit_interval;
use doxa_core::{
    belief, check_orthogonality, check_principle, check_principle_with, check_stability,
    make_appendix, make_drawing_card, make_drawing_card_v2, make_flipping, make_hundred_flips,
    parse, parse_rational, ratio, search_countermodel, serialize, shrink, BeliefOperator,
    CardQuestion, CheckConfig, ConstraintFilter, CorpusId, FlipsQuestion, GeneratorConfig,
    Outcome, Principle, ProbabilityStructure, Proposition, Question, Rational, Verdict,
};
use serde_json::json;

mod render;
use render::{names, rational_str, report_value, verdict_text, verdict_value, violation_text,
    witness_value};

#[derive(Parser)]
#[command(name = "doxa", version, about = "Belief revision over finite probability structures")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_parser = ["text", "json"], default_value = "text")]
    format: String,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Validate a structure file and summarize it.
    Check { file: PathBuf },
    /// Compute the belief set upon a body of evidence.
    Believe {
        file: PathBuf,
        /// `{a b c}` or an index into the file's evidence list.
        #[arg(long)]
        evidence: String,
        /// `hpd` or `lk`.
        #[arg(long, default_value = "hpd")]
        operator: String,
        /// Replace the question with one read from this file
        /// (a single `question:` section over the same states).
        #[arg(long)]
        question_file: Option<PathBuf>,
    },
    /// Check revision principles, reporting witnesses for failures.
    Principles {
        file: PathBuf,
        /// `hpd` or `lk`.
        #[arg(long, default_value = "hpd")]
        operator: String,
        /// Comma-separated principle names; KLM aliases accepted.
        #[arg(long)]
        only: Option<String>,
    },
    /// Check the orthogonality and stability constraints.
    Props { file: PathBuf },
    /// Write a named corpus structure.
    Example {
        name: String,
        /// Chain length (flip examples only).
        #[arg(long)]
        n: Option<usize>,
        /// Threshold override.
        #[arg(long)]
        t: Option<String>,
        /// Question variant: q, q-prime, q-double-prime (card) or
        /// count, polar, sequence (flips).
        #[arg(long)]
        question: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Random search for a structure falsifying a principle.
    Search {
        #[arg(long)]
        principle: String,
        #[arg(long)]
        operator: String,
        /// Keep only structures satisfying `orthogonality`,
        /// `stability`, or `both`.
        #[arg(long)]
        constraint: Option<String>,
        #[arg(long)]
        budget: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        max_states: Option<usize>,
        /// Write any countermodel found to this file.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Greedily minimize a countermodel file.
    Shrink {
        file: PathBuf,
        #[arg(long)]
        principle: String,
        #[arg(long)]
        operator: String,
    },
}

#[derive(Clone, Copy, PartialEq)]
enum Format {
    Text,
    Json,
}

fn main() -> ExitCode {
    // Die quietly like any Unix filter when the consumer closes the
    // pipe early, instead of panicking on EPIPE.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let fmt = if cli.format == "json" { Format::Json } else { Format::Text };
    match run(cli.verb, fmt) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("doxa: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(verb: Verb, fmt: Format) -> Result<ExitCode, String> {
    match verb {
        Verb::Check { file } => cmd_check(&file, fmt),
        Verb::Believe { file, evidence, operator, question_file } => {
            cmd_believe(&file, &evidence, &operator, question_file.as_deref(), fmt)
        }
        Verb::Principles { file, operator, only } => {
            cmd_principles(&file, &operator, only.as_deref(), fmt)
        }
        Verb::Props { file } => cmd_props(&file, fmt),
        Verb::Example { name, n, t, question, output } => {
            cmd_example(&name, n, t.as_deref(), question.as_deref(), output.as_deref(), fmt)
        }
        Verb::Search { principle, operator, constraint, budget, seed, max_states, output } => {
            cmd_search(
                &principle,
                &operator,
                constraint.as_deref(),
                budget,
                seed,
                max_states,
                output.as_deref(),
                fmt,
            )
        }
        Verb::Shrink { file, principle, operator } => {
            cmd_shrink(&file, &principle, &operator, fmt)
        }
    }
}

fn load(path: &Path) -> Result<ProbabilityStructure, String> {
    let text =
        fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn operator_arg(s: &str) -> Result<BeliefOperator, String> {
    s.parse().map_err(|e| format!("--operator: {e}"))
}

fn principle_arg(flag: &str, s: &str) -> Result<Principle, String> {
    s.parse().map_err(|e| format!("{flag}: {e}"))
}

/// `{a b c}` (commas tolerated) or an index into the evidence list.
fn evidence_arg(m: &ProbabilityStructure, spec: &str) -> Result<Proposition, String> {
    let spec = spec.trim();
    if let Some(inner) = spec.strip_prefix('{').and_then(|r| r.strip_suffix('}')) {
        let parts = inner.split(|c: char| c.is_whitespace() || c == ',').filter(|p| !p.is_empty());
        m.proposition_from_names(parts).map_err(|e| format!("--evidence: {e}"))
    } else if let Ok(i) = spec.parse::<usize>() {
        m.evidence().get(i).cloned().ok_or_else(|| {
            format!(
                "--evidence: index {i} is out of range (the file lists {} evidence sets)",
                m.evidence().len()
            )
        })
    } else {
        Err(format!("--evidence: expected `{{a b c}}` or an index, got `{spec}`"))
    }
}

/// The partition-enumeration bound, overridable via DOXA_MAX_PARTITIONS.
fn partition_config() -> Result<CheckConfig, String> {
    match env::var("DOXA_MAX_PARTITIONS") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map(|b| CheckConfig { partition_evidence_bound: b })
            .map_err(|_| format!("DOXA_MAX_PARTITIONS: expected a number, got `{v}`")),
        Err(_) => Ok(CheckConfig::default()),
    }
}

fn pretty(v: serde_json::Value) -> String {
    serde_json::to_string_pretty(&v).expect("json encoding cannot fail")
}

fn cmd_check(file: &Path, fmt: Format) -> Result<ExitCode, String> {
    let m = load(file)?;
    match fmt {
        Format::Text => {
            println!("{}: valid structure", file.display());
            println!("states: {}", m.state_count());
            println!("answers: {}", m.question().cell_count());
            println!("evidence sets: {}", m.evidence().len());
            println!("threshold: {}", m.threshold());
        }
        Format::Json => println!(
            "{}",
            pretty(json!({
                "valid": true,
                "states": m.state_count(),
                "answers": m.question().cell_count(),
                "evidence_sets": m.evidence().len(),
                "threshold": rational_str(m.threshold()),
            }))
        ),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_believe(
    file: &Path,
    evidence: &str,
    operator: &str,
    question_file: Option<&Path>,
    fmt: Format,
) -> Result<ExitCode, String> {
    let mut m = load(file)?;
    if let Some(qf) = question_file {
        let q = read_question_file(&m, qf)?;
        m = m.with_question(q).map_err(|e| format!("--question-file: {e}"))?;
    }
    let op = operator_arg(operator)?;
    let e = evidence_arg(&m, evidence)?;
    let b = belief(&m, &e, op).map_err(|err| format!("--evidence: {err}"))?;
    match fmt {
        Format::Text => {
            println!("operator: {op}");
            println!("evidence: {}", m.render(&e));
            println!("believed: {}", m.render(&b.states));
            println!("mass: {}", b.mass_given_evidence);
        }
        Format::Json => println!(
            "{}",
            pretty(json!({
                "operator": op.to_string(),
                "evidence": names(&m, &e),
                "believed": names(&m, &b.states),
                "mass": rational_str(&b.mass_given_evidence),
            }))
        ),
    }
    Ok(ExitCode::SUCCESS)
}

/// Reads a replacement question: one `question:` section whose cells
/// are spelled with the base structure's state names.
fn read_question_file(m: &ProbabilityStructure, path: &Path) -> Result<Question, String> {
    let at = |msg: String| format!("--question-file: {}: {msg}", path.display());
    let text = fs::read_to_string(path).map_err(|e| at(e.to_string()))?;
    let mut toks: Vec<String> = Vec::new();
    for line in text.lines() {
        let code = line.split('#').next().unwrap_or("");
        let spaced = code.replace('{', " { ").replace('}', " } ").replace(':', " : ");
        toks.extend(spaced.split_whitespace().map(str::to_string));
    }
    if toks.first().map(String::as_str) != Some("question")
        || toks.get(1).map(String::as_str) != Some(":")
    {
        return Err(at("expected a single `question:` section".into()));
    }
    let mut cells = Vec::new();
    let mut i = 2;
    while i < toks.len() {
        if toks[i] != "{" {
            return Err(at(format!("expected `{{`, got `{}`", toks[i])));
        }
        i += 1;
        let mut group = Vec::new();
        while i < toks.len() && toks[i] != "}" {
            if toks[i] == "{" {
                return Err(at("nested `{`".into()));
            }
            group.push(toks[i].as_str());
            i += 1;
        }
        if i == toks.len() {
            return Err(at("unclosed `{`".into()));
        }
        i += 1;
        cells.push(m.proposition_from_names(group).map_err(|e| at(e.to_string()))?);
    }
    Question::new(m.state_count(), cells).map_err(|e| at(e.to_string()))
}

fn cmd_principles(
    file: &Path,
    operator: &str,
    only: Option<&str>,
    fmt: Format,
) -> Result<ExitCode, String> {
    let m = load(file)?;
    let op = operator_arg(operator)?;
    let cfg = partition_config()?;
    let list: Vec<Principle> = match only {
        Some(s) => {
            let mut list = Vec::new();
            for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
                list.push(principle_arg("--only", part)?);
            }
            if list.is_empty() {
                return Err("--only: no principles listed".into());
            }
            list
        }
        None => Principle::ALL.to_vec(),
    };
    let verdicts: Vec<Verdict> =
        list.iter().map(|&p| check_principle_with(&m, p, op, &cfg)).collect();
    match fmt {
        Format::Text => {
            for v in &verdicts {
                println!("{}", verdict_text(v));
            }
        }
        Format::Json => println!(
            "{}",
            pretty(json!({
                "operator": op.to_string(),
                "verdicts": verdicts.iter().map(|v| verdict_value(&m, v)).collect::<Vec<_>>(),
            }))
        ),
    }
    if verdicts.iter().any(|v| v.outcome == Outcome::Fails) {
        Ok(ExitCode::from(1))
    } else {
        Ok(ExitCode::SUCCESS)
    }
}

fn cmd_props(file: &Path, fmt: Format) -> Result<ExitCode, String> {
    let m = load(file)?;
    let orth = check_orthogonality(&m);
    let stab = check_stability(&m).map_err(|e| format!("{}: {e}", file.display()))?;
    match fmt {
        Format::Text => {
            println!("{}", violation_text(&m, &orth));
            println!("{}", violation_text(&m, &stab));
        }
        Format::Json => println!(
            "{}",
            pretty(json!({
                "orthogonality": report_value(&m, &orth),
                "stability": report_value(&m, &stab),
            }))
        ),
    }
    if orth.holds && stab.holds {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}

fn cmd_example(
    name: &str,
    n: Option<usize>,
    t: Option<&str>,
    question: Option<&str>,
    output: Option<&Path>,
    fmt: Format,
) -> Result<ExitCode, String> {
    let id: CorpusId = name.parse().map_err(|e| format!("NAME: {e}"))?;
    let t = match t {
        Some(s) => {
            let t = parse_rational(s).map_err(|e| format!("--t: {e}"))?;
            if !in_unit_interval(&t) {
                return Err(format!("--t: threshold must lie in [0, 1], got {t}"));
            }
            Some(t)
        }
        None => None,
    };
    let m = build_example(id, n, t, question)?;
    let text = serialize(&m);
    match output {
        Some(path) => {
            fs::write(path, &text).map_err(|e| format!("-o: {}: {e}", path.display()))?;
            match fmt {
                Format::Text => println!("wrote {}", path.display()),
                Format::Json => println!(
                    "{}",
                    pretty(json!({
                        "name": id.name(),
                        "path": path.display().to_string(),
                    }))
                ),
            }
        }
        None => match fmt {
            Format::Text => print!("{text}"),
            Format::Json => {
                println!("{}", pretty(json!({ "name": id.name(), "bps": text })))
            }
        },
    }
    Ok(ExitCode::SUCCESS)
}

fn build_example(
    id: CorpusId,
    n: Option<usize>,
    t: Option<Rational>,
    question: Option<&str>,
) -> Result<ProbabilityStructure, String> {
    // Flags an example does not consume are rejected, not ignored.
    let reject_n = || match n {
        Some(_) => Err(format!("--n: not applicable to `{}`", id.name())),
        None => Ok(()),
    };
    let reject_question = || match question {
        Some(_) => Err(format!("--question: not applicable to `{}`", id.name())),
        None => Ok(()),
    };
    match id {
        CorpusId::FlippingForHeads | CorpusId::FlippingWithWalkaway => {
            reject_question()?;
            let walkaway = id == CorpusId::FlippingWithWalkaway;
            make_flipping(n.unwrap_or(30), t.unwrap_or_else(|| ratio(99, 100)), walkaway)
                .map_err(|e| format!("--n: {e}"))
        }
        CorpusId::DrawingCard | CorpusId::DrawingCardQPrime | CorpusId::DrawingCardQDoublePrime => {
            reject_n()?;
            let base = match id {
                CorpusId::DrawingCardQPrime => CardQuestion::QPrime,
                CorpusId::DrawingCardQDoublePrime => CardQuestion::QDoublePrime,
                _ => CardQuestion::Q,
            };
            let m = make_drawing_card(match question {
                Some(s) => card_question(s)?,
                None => base,
            });
            match t {
                Some(t) => m.with_threshold(t).map_err(|e| format!("--t: {e}")),
                None => Ok(m),
            }
        }
        CorpusId::DrawingCardV2 => {
            reject_n()?;
            reject_question()?;
            make_drawing_card_v2(t.unwrap_or_else(|| ratio(3, 10)))
                .map_err(|e| format!("--t: {e}"))
        }
        CorpusId::HundredFlips => {
            let q = match question {
                Some(s) => flips_question(s)?,
                None => FlipsQuestion::Count,
            };
            make_hundred_flips(n.unwrap_or(100), q, t.unwrap_or_else(|| ratio(999, 1000)))
                .map_err(|e| format!("--n: {e}"))
        }
        CorpusId::PiMinusCounter | CorpusId::StabilityBoxPlus | CorpusId::StabilityDiamondMinus => {
            reject_n()?;
            reject_question()?;
            let m = make_appendix(id).expect("appendix models are fixed");
            match t {
                Some(t) => m.with_threshold(t).map_err(|e| format!("--t: {e}")),
                None => Ok(m),
            }
        }
    }
}

fn card_question(s: &str) -> Result<CardQuestion, String> {
    match s {
        "q" => Ok(CardQuestion::Q),
        "q-prime" => Ok(CardQuestion::QPrime),
        "q-double-prime" => Ok(CardQuestion::QDoublePrime),
        _ => Err(format!("--question: expected q, q-prime, or q-double-prime, got `{s}`")),
    }
}

fn flips_question(s: &str) -> Result<FlipsQuestion, String> {
    match s {
        "count" => Ok(FlipsQuestion::Count),
        "polar" => Ok(FlipsQuestion::Polar),
        "sequence" => Ok(FlipsQuestion::Sequence),
        _ => Err(format!("--question: expected count, polar, or sequence, got `{s}`")),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_search(
    principle: &str,
    operator: &str,
    constraint: Option<&str>,
    budget: u64,
    seed: u64,
    max_states: Option<usize>,
    output: Option<&Path>,
    fmt: Format,
) -> Result<ExitCode, String> {
    let pr = principle_arg("--principle", principle)?;
    let op = operator_arg(operator)?;
    let filter = match constraint {
        Some(s) => Some(s.parse::<ConstraintFilter>().map_err(|e| format!("--constraint: {e}"))?),
        None => None,
    };
    let mut cfg = GeneratorConfig { seed, ..GeneratorConfig::default() };
    if let Some(hi) = max_states {
        cfg.state_count = (cfg.state_count.0.min(hi), hi);
    }
    let result = search_countermodel(pr, op, filter, &cfg, budget)
        .map_err(|e| format!("--max-states: {e}"))?;
    match result.found {
        Some((model, w)) => {
            let text = serialize(&model);
            if let Some(path) = output {
                fs::write(path, &text).map_err(|e| format!("-o: {}: {e}", path.display()))?;
            }
            match fmt {
                Format::Text => {
                    println!(
                        "countermodel for {} under {op} after {} structures",
                        pr.name(),
                        result.structures_tried
                    );
                    match output {
                        Some(path) => println!("wrote {}", path.display()),
                        None => print!("{text}"),
                    }
                    println!("{}", w.detail);
                }
                Format::Json => println!(
                    "{}",
                    pretty(json!({
                        "principle": pr.name(),
                        "operator": op.to_string(),
                        "found": true,
                        "structures_tried": result.structures_tried,
                        "model": text,
                        "path": output.map(|p| p.display().to_string()),
                        "witness": witness_value(&model, &w),
                    }))
                ),
            }
            Ok(ExitCode::from(1))
        }
        None => {
            match fmt {
                Format::Text => println!(
                    "no countermodel for {} under {op} ({} structures tried)",
                    pr.name(),
                    result.structures_tried
                ),
                Format::Json => println!(
                    "{}",
                    pretty(json!({
                        "principle": pr.name(),
                        "operator": op.to_string(),
                        "found": false,
                        "structures_tried": result.structures_tried,
                    }))
                ),
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn cmd_shrink(file: &Path, principle: &str, operator: &str, fmt: Format) -> Result<ExitCode, String> {
    let m = load(file)?;
    let pr = principle_arg("--principle", principle)?;
    let op = operator_arg(operator)?;
    let small = shrink(&m, pr, op).map_err(|e| format!("{}: {e}", file.display()))?;
    let v = check_principle(&small, pr, op);
    let text = serialize(&small);
    match fmt {
        Format::Text => {
            // The minimized model is the whole of stdout, so it can be
            // piped straight into a file; the witness goes to stderr.
            print!("{text}");
            if let Some(w) = v.witnesses.first() {
                eprintln!("{}", w.detail);
            }
        }
        Format::Json => println!(
            "{}",
            pretty(json!({
                "principle": pr.name(),
                "operator": op.to_string(),
                "model": text,
                "witness": v.witnesses.first().map(|w| witness_value(&small, w)),
            }))
        ),
    }
    Ok(ExitCode::from(1))
}
