//! The `.bps` text format: a line-oriented description of a probability
//! structure.
//!
//! ```text
//! # one section per line, any order, each exactly once
//! states: a b c
//! prior: a=1/2 b=1/4 c=1/4      # or: prior: uniform
//! question: { a b } { c }
//! evidence: S { a b } { c }     # S abbreviates the full state set
//! threshold: 0.5
//! ```
//!
//! `#` starts a comment, blank lines are ignored, CRLF input is accepted,
//! and output always uses LF. Serialization is canonical: one structure,
//! one byte sequence. `uniform` and `S` are sugar and serialize in
//! desugared form.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::rational::{parse_rational, Rational};
use crate::structure::{
    is_identifier, ProbabilityStructure, Proposition, Question, StateId, ValidationError,
};

/// A region of the source text. Lines and columns are 1-based and counted
/// in characters, not bytes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SourceSpan {
    pub line: usize,
    pub column: usize,
    pub length: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    UnknownState,
    DuplicateState,
    BadRational,
    MissingSection,
    /// The text was well-formed but describes an invalid structure; carries
    /// the structure-level diagnostic unchanged.
    SemanticInvalid(ValidationError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {}, column {}: {message}", span.line, span.column)]
pub struct ParseError {
    pub span: SourceSpan,
    pub message: String,
    pub kind: ParseErrorKind,
}

fn syntax(span: SourceSpan, message: String) -> ParseError {
    ParseError { span, message, kind: ParseErrorKind::Syntax }
}

#[derive(Debug, Clone, Copy)]
struct Tok<'a> {
    text: &'a str,
    line: usize,
    column: usize,
    chars: usize,
}

impl Tok<'_> {
    fn span(&self) -> SourceSpan {
        SourceSpan { line: self.line, column: self.column, length: self.chars }
    }
}

fn tokenize(line: &str, line_no: usize) -> Vec<Tok<'_>> {
    let mut toks = Vec::new();
    let mut col = 0usize;
    let mut iter = line.char_indices().peekable();
    while let Some((start, c)) = iter.next() {
        col += 1;
        if c.is_whitespace() {
            continue;
        }
        if matches!(c, '{' | '}' | '=' | ':') {
            toks.push(Tok {
                text: &line[start..start + c.len_utf8()],
                line: line_no,
                column: col,
                chars: 1,
            });
            continue;
        }
        let start_col = col;
        let mut end = start + c.len_utf8();
        let mut chars = 1;
        while let Some(&(next, nc)) = iter.peek() {
            if nc.is_whitespace() || matches!(nc, '{' | '}' | '=' | ':') {
                break;
            }
            iter.next();
            col += 1;
            chars += 1;
            end = next + nc.len_utf8();
        }
        toks.push(Tok { text: &line[start..end], line: line_no, column: start_col, chars });
    }
    toks
}

const SECTION_NAMES: [&str; 5] = ["states", "prior", "question", "evidence", "threshold"];

/// Parses the text format and validates the result. Every failure carries
/// a span into `text`.
pub fn parse(text: &str) -> Result<ProbabilityStructure, ParseError> {
    let mut sections: [Option<(Tok, Vec<Tok>)>; 5] = [None, None, None, None, None];
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let content = match raw.find('#') {
            Some(cut) => &raw[..cut],
            None => raw,
        };
        let toks = tokenize(content, line_no);
        let Some((header, rest)) = toks.split_first() else {
            continue;
        };
        let Some(slot) = SECTION_NAMES.iter().position(|&n| n == header.text) else {
            return Err(syntax(header.span(), format!("unknown section `{}`", header.text)));
        };
        let Some((_, body)) = rest.split_first().filter(|(c, _)| c.text == ":") else {
            return Err(syntax(header.span(), format!("expected `:` after `{}`", header.text)));
        };
        if sections[slot].is_some() {
            return Err(syntax(
                header.span(),
                format!("section `{}` appears more than once", header.text),
            ));
        }
        sections[slot] = Some((*header, body.to_vec()));
    }
    for (slot, name) in SECTION_NAMES.iter().enumerate() {
        if sections[slot].is_none() {
            return Err(ParseError {
                span: SourceSpan { line: 1, column: 1, length: 0 },
                message: format!("missing `{name}:` section"),
                kind: ParseErrorKind::MissingSection,
            });
        }
    }
    let [states_s, prior_s, question_s, evidence_s, threshold_s] =
        sections.map(|s| s.expect("checked above"));

    // states
    let (states_hdr, state_toks) = &states_s;
    let mut names: Vec<String> = Vec::new();
    let mut name_toks: Vec<Tok> = Vec::new();
    let mut index: HashMap<&str, usize> = HashMap::new();
    for t in state_toks {
        if !is_identifier(t.text) {
            return Err(syntax(t.span(), format!("`{}` is not a valid state name", t.text)));
        }
        if index.contains_key(t.text) {
            return Err(ParseError {
                span: t.span(),
                message: format!("state `{}` already declared", t.text),
                kind: ParseErrorKind::DuplicateState,
            });
        }
        index.insert(t.text, names.len());
        names.push(t.text.to_string());
        name_toks.push(*t);
    }
    if names.is_empty() {
        return Err(ParseError {
            span: states_hdr.span(),
            message: ValidationError::EmptyStateSet.to_string(),
            kind: ParseErrorKind::SemanticInvalid(ValidationError::EmptyStateSet),
        });
    }
    let n = names.len();

    // prior
    let (prior_hdr, prior_toks) = &prior_s;
    let mut weights: Vec<Option<Rational>> = vec![None; n];
    let mut weight_toks: Vec<Option<Tok>> = vec![None; n];
    if prior_toks.len() == 1 && prior_toks[0].text == "uniform" && !index.contains_key("uniform") {
        let share = Rational::new(BigInt::one(), BigInt::from(n.max(1)));
        weights = vec![Some(share); n];
    } else {
        let mut i = 0;
        while i < prior_toks.len() {
            let name_t = prior_toks[i];
            if !is_identifier(name_t.text) {
                return Err(syntax(
                    name_t.span(),
                    format!("expected `name=value`, found `{}`", name_t.text),
                ));
            }
            let Some(&idx) = index.get(name_t.text) else {
                return Err(ParseError {
                    span: name_t.span(),
                    message: format!("unknown state `{}` in `prior:`", name_t.text),
                    kind: ParseErrorKind::UnknownState,
                });
            };
            if prior_toks.get(i + 1).map(|t| t.text) != Some("=") {
                return Err(syntax(name_t.span(), format!("expected `=` after `{}`", name_t.text)));
            }
            let Some(value_t) = prior_toks.get(i + 2) else {
                return Err(syntax(
                    prior_toks[i + 1].span(),
                    format!("expected a value after `{}=`", name_t.text),
                ));
            };
            let w = parse_rational(value_t.text).map_err(|e| ParseError {
                span: value_t.span(),
                message: e.to_string(),
                kind: ParseErrorKind::BadRational,
            })?;
            if weights[idx].is_some() {
                return Err(ParseError {
                    span: name_t.span(),
                    message: format!("state `{}` given two prior weights", name_t.text),
                    kind: ParseErrorKind::DuplicateState,
                });
            }
            weights[idx] = Some(w);
            weight_toks[idx] = Some(*value_t);
            i += 3;
        }
        if let Some(missing) = weights.iter().position(Option::is_none) {
            return Err(syntax(
                prior_hdr.span(),
                format!("prior gives no weight for state `{}`", names[missing]),
            ));
        }
    }
    let weights: Vec<Rational> =
        weights.into_iter().map(|w| w.expect("all entries filled or reported")).collect();

    // question
    let (question_hdr, question_toks) = &question_s;
    let cells = parse_groups(question_toks, &index, n, false, "question")?;
    if cells.is_empty() {
        return Err(syntax(question_hdr.span(), "expected at least one cell".into()));
    }

    // evidence
    let (evidence_hdr, evidence_toks) = &evidence_s;
    let evidence = parse_groups(evidence_toks, &index, n, true, "evidence")?;
    if evidence.is_empty() {
        return Err(syntax(evidence_hdr.span(), "expected at least one evidence set".into()));
    }

    // threshold
    let (threshold_hdr, threshold_toks) = &threshold_s;
    let [value_t] = threshold_toks.as_slice() else {
        let span = threshold_toks.get(1).map(|t| t.span()).unwrap_or(threshold_hdr.span());
        return Err(syntax(span, "expected exactly one threshold value".into()));
    };
    let threshold = parse_rational(value_t.text).map_err(|e| ParseError {
        span: value_t.span(),
        message: e.to_string(),
        kind: ParseErrorKind::BadRational,
    })?;

    let spans = SectionSpans {
        states: states_hdr.span(),
        prior: prior_hdr.span(),
        question: question_hdr.span(),
        threshold: value_t.span(),
        names: &names,
        name_toks: &name_toks,
        weight_toks: &weight_toks,
        evidence: &evidence,
    };
    let question = Question::new(n, cells.into_iter().map(|(p, _)| p).collect())
        .map_err(|e| spans.semantic(e))?;
    ProbabilityStructure::new(
        names.clone(),
        weights,
        question,
        evidence.iter().map(|(p, _)| p.clone()).collect(),
        threshold,
    )
    .map_err(|e| spans.semantic(e))
}

fn parse_groups<'a>(
    toks: &[Tok<'a>],
    index: &HashMap<&str, usize>,
    n: usize,
    allow_full_token: bool,
    section: &str,
) -> Result<Vec<(Proposition, SourceSpan)>, ParseError> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < toks.len() {
        let t = toks[i];
        if allow_full_token && t.text == "S" {
            out.push((Proposition::full(n), t.span()));
            i += 1;
            continue;
        }
        if t.text != "{" {
            return Err(syntax(
                t.span(),
                format!("expected `{{` in `{section}:`, found `{}`", t.text),
            ));
        }
        let open = t;
        let mut p = Proposition::empty(n);
        i += 1;
        let close = loop {
            let Some(&t) = toks.get(i) else {
                return Err(syntax(open.span(), "unclosed `{`".into()));
            };
            if t.text == "}" {
                break t;
            }
            if !is_identifier(t.text) {
                return Err(syntax(
                    t.span(),
                    format!("expected a state name or `}}`, found `{}`", t.text),
                ));
            }
            let Some(&idx) = index.get(t.text) else {
                return Err(ParseError {
                    span: t.span(),
                    message: format!("unknown state `{}` in `{section}:`", t.text),
                    kind: ParseErrorKind::UnknownState,
                });
            };
            if p.contains(StateId(idx)) {
                return Err(ParseError {
                    span: t.span(),
                    message: format!("state `{}` repeated in one set", t.text),
                    kind: ParseErrorKind::DuplicateState,
                });
            }
            p.insert(StateId(idx));
            i += 1;
        };
        let length = close.column + close.chars - open.column;
        out.push((p, SourceSpan { line: open.line, column: open.column, length }));
        i += 1;
    }
    Ok(out)
}

/// Maps a structure-level diagnostic back to the span that caused it.
struct SectionSpans<'a> {
    states: SourceSpan,
    prior: SourceSpan,
    question: SourceSpan,
    threshold: SourceSpan,
    names: &'a [String],
    name_toks: &'a [Tok<'a>],
    weight_toks: &'a [Option<Tok<'a>>],
    evidence: &'a [(Proposition, SourceSpan)],
}

impl SectionSpans<'_> {
    fn semantic(&self, e: ValidationError) -> ParseError {
        let by_name = |name: &str, fallback: SourceSpan| {
            self.names
                .iter()
                .position(|n| n == name)
                .map(|i| self.name_toks[i].span())
                .unwrap_or(fallback)
        };
        let span = match &e {
            ValidationError::EmptyStateSet
            | ValidationError::DuplicateState(_)
            | ValidationError::WeightCountMismatch { .. }
            | ValidationError::StateOutOfRange(_) => self.states,
            ValidationError::InvalidStateName(name) => by_name(name, self.states),
            ValidationError::NegativeWeight { state, .. } => self
                .names
                .iter()
                .position(|n| n == state)
                .and_then(|i| self.weight_toks[i].map(|t| t.span()))
                .unwrap_or(self.prior),
            ValidationError::ZeroTotalWeight => self.prior,
            ValidationError::NotAPartition(_) => self.question,
            ValidationError::EmptyEvidenceSet(i)
            | ValidationError::DuplicateEvidence(i)
            | ValidationError::ZeroProbabilityEvidence { index: i, .. } => {
                self.evidence.get(i - 1).map(|(_, s)| *s).unwrap_or(self.states)
            }
            ValidationError::ThresholdOutOfRange(_) => self.threshold,
        };
        ParseError { span, message: e.to_string(), kind: ParseErrorKind::SemanticInvalid(e) }
    }
}

/// Canonical text for a structure: sections in fixed order, states in
/// index order, weights as exact lowest-term rationals, sugar expanded.
/// `parse(serialize(m))` reproduces `m` exactly.
pub fn serialize(m: &ProbabilityStructure) -> String {
    let mut out = String::new();
    out.push_str("states:");
    for name in m.state_names() {
        let _ = write!(out, " {name}");
    }
    out.push_str("\nprior:");
    for (name, w) in m.state_names().iter().zip(m.weights()) {
        let _ = write!(out, " {name}={w}");
    }
    out.push_str("\nquestion:");
    for cell in m.question().cells() {
        push_group(&mut out, m, cell);
    }
    out.push_str("\nevidence:");
    for e in m.evidence() {
        push_group(&mut out, m, e);
    }
    let _ = write!(out, "\nthreshold: {}\n", m.threshold());
    out
}

fn push_group(out: &mut String, m: &ProbabilityStructure, p: &Proposition) {
    out.push_str(" {");
    for s in p.iter() {
        out.push(' ');
        out.push_str(m.state_name(s));
    }
    out.push_str(" }");
}
