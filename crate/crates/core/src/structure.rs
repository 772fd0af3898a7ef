//! Finite probability structures.
//!
//! A structure is a tuple of a finite state set, a prior given by
//! nonnegative rational weights, a question (a partition of the states), a
//! family of evidence propositions, and a threshold in [0, 1]. Propositions
//! are bitsets over state indices, so the set algebra the rest of the crate
//! leans on is cheap and allocation-light.

use std::cmp::Ordering;
use std::fmt;

use fixedbitset::FixedBitSet;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::rational::{in_unit_interval, Rational};

/// Index of a state within its structure. Dense in `0..state_count`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(pub usize);

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A set of states: the common currency for evidence, answers, and belief
/// sets. Backed by a fixed-width bitset over state indices.
///
/// All binary operations require both operands to come from the same
/// structure (same universe size) and panic otherwise; mixing universes is a
/// programming error, not a data error.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Proposition {
    bits: FixedBitSet,
}

impl Proposition {
    /// The empty set over a universe of `universe` states.
    pub fn empty(universe: usize) -> Self {
        Proposition { bits: FixedBitSet::with_capacity(universe) }
    }

    /// The full set over a universe of `universe` states.
    pub fn full(universe: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(universe);
        bits.insert_range(..);
        Proposition { bits }
    }

    /// Builds a set from state indices. Panics if an index is out of range.
    pub fn from_indices(universe: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut p = Proposition::empty(universe);
        for i in indices {
            assert!(i < universe, "state index {i} out of range for universe {universe}");
            p.bits.insert(i);
        }
        p
    }

    /// Number of states in the enclosing structure, not in this set.
    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    pub fn contains(&self, s: StateId) -> bool {
        self.bits.contains(s.0)
    }

    pub fn insert(&mut self, s: StateId) {
        assert!(s.0 < self.universe(), "state index {} out of range", s.0);
        self.bits.insert(s.0);
    }

    pub fn remove(&mut self, s: StateId) {
        self.bits.remove(s.0);
    }

    /// Number of member states.
    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    /// Member states in ascending index order.
    pub fn iter(&self) -> impl Iterator<Item = StateId> + '_ {
        self.bits.ones().map(StateId)
    }

    pub fn intersection(&self, other: &Proposition) -> Proposition {
        self.check_universe(other);
        let mut bits = self.bits.clone();
        bits.intersect_with(&other.bits);
        Proposition { bits }
    }

    pub fn union(&self, other: &Proposition) -> Proposition {
        self.check_universe(other);
        let mut bits = self.bits.clone();
        bits.union_with(&other.bits);
        Proposition { bits }
    }

    pub fn difference(&self, other: &Proposition) -> Proposition {
        self.check_universe(other);
        let mut bits = self.bits.clone();
        bits.difference_with(&other.bits);
        Proposition { bits }
    }

    pub fn complement(&self) -> Proposition {
        let mut bits = self.bits.clone();
        bits.toggle_range(..);
        Proposition { bits }
    }

    pub fn intersects(&self, other: &Proposition) -> bool {
        self.check_universe(other);
        !self.bits.is_disjoint(&other.bits)
    }

    pub fn is_subset(&self, other: &Proposition) -> bool {
        self.check_universe(other);
        self.bits.is_subset(&other.bits)
    }

    fn check_universe(&self, other: &Proposition) {
        assert_eq!(
            self.universe(),
            other.universe(),
            "propositions from different structures"
        );
    }
}

impl fmt::Debug for Proposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, s) in self.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", s.0)?;
        }
        write!(f, "}}")
    }
}

/// Canonical order: lexicographic comparison of the ascending member
/// indices, so `{0} < {0,1} < {1}`. Used everywhere a deterministic set
/// order is needed (witness lists, search output).
impl Ord for Proposition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.bits.ones().cmp(other.bits.ones())
    }
}

impl PartialOrd for Proposition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A question: a partition of the state set into candidate answers (cells).
///
/// Cell order is the construction order; `cell_index_of` is O(1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Question {
    cells: Vec<Proposition>,
    cell_index: Vec<usize>,
}

impl Question {
    /// Builds a question from cells, checking that they partition the
    /// universe: every cell nonempty, cells pairwise disjoint, union full.
    pub fn new(universe: usize, cells: Vec<Proposition>) -> Result<Self, ValidationError> {
        if cells.is_empty() {
            return Err(ValidationError::NotAPartition("question has no cells".into()));
        }
        let mut cell_index = vec![usize::MAX; universe];
        for (k, cell) in cells.iter().enumerate() {
            assert_eq!(cell.universe(), universe, "cell universe mismatch");
            if cell.is_empty() {
                return Err(ValidationError::NotAPartition(format!("cell #{} is empty", k + 1)));
            }
            for s in cell.iter() {
                if cell_index[s.0] != usize::MAX {
                    return Err(ValidationError::NotAPartition(format!(
                        "state {} lies in cells #{} and #{}",
                        s.0,
                        cell_index[s.0] + 1,
                        k + 1
                    )));
                }
                cell_index[s.0] = k;
            }
        }
        if let Some(missing) = cell_index.iter().position(|&k| k == usize::MAX) {
            return Err(ValidationError::NotAPartition(format!(
                "state {missing} is not covered by any cell"
            )));
        }
        Ok(Question { cells, cell_index })
    }

    /// The finest question: every state its own cell.
    pub fn singletons(universe: usize) -> Self {
        let cells = (0..universe).map(|i| Proposition::from_indices(universe, [i])).collect();
        Question::new(universe, cells).expect("singletons always partition")
    }

    pub fn cells(&self) -> &[Proposition] {
        &self.cells
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    pub fn cell_index_of(&self, s: StateId) -> usize {
        self.cell_index[s.0]
    }

    /// The cell containing `s`: the answer that is true at `s`.
    pub fn cell_of(&self, s: StateId) -> &Proposition {
        &self.cells[self.cell_index[s.0]]
    }
}

/// Why a candidate structure is not a valid probability structure.
///
/// `ProbabilityStructure::new` reports the first violation in field order:
/// states, weights, question, evidence, threshold.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("state set is empty")]
    EmptyStateSet,
    #[error("state name `{0}` appears more than once")]
    DuplicateState(String),
    #[error("state name `{0}` is not a valid identifier (letters, digits, `_`, not starting with a digit, not the reserved `S`)")]
    InvalidStateName(String),
    #[error("{got} weights given for {expected} states")]
    WeightCountMismatch { got: usize, expected: usize },
    #[error("state `{state}` has negative weight {weight}")]
    NegativeWeight { state: String, weight: Rational },
    #[error("total weight is zero; a prior needs positive mass somewhere")]
    ZeroTotalWeight,
    #[error("question is not a partition of the state set: {0}")]
    NotAPartition(String),
    #[error("evidence set #{0} is empty")]
    EmptyEvidenceSet(usize),
    #[error("evidence set #{index} {set} has zero probability; conditioning on it is undefined")]
    ZeroProbabilityEvidence { index: usize, set: String },
    #[error("evidence set #{0} duplicates an earlier evidence set")]
    DuplicateEvidence(usize),
    #[error("threshold {0} lies outside [0, 1]")]
    ThresholdOutOfRange(Rational),
    #[error("state index {0} out of range")]
    StateOutOfRange(usize),
}

/// Errors from queries against a valid structure.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("cannot condition on a zero-probability proposition")]
    ConditionOnNull,
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("proposition {0} is not in the evidence family")]
    NotEvidence(String),
}

/// Result of conditioning the evidence family on a proposition: the
/// restricted set, and whether it is itself available as evidence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Discovery {
    pub result: Proposition,
    pub admissible: bool,
}

/// A finite probability structure.
///
/// Immutable once built; the `with_*` methods return modified copies that
/// go through full validation again. State, cell, and evidence order are
/// preserved exactly as constructed (the text format round-trips them), so
/// equality is order-sensitive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbabilityStructure {
    names: Vec<String>,
    weights: Vec<Rational>,
    total: Rational,
    question: Question,
    evidence: Vec<Proposition>,
    threshold: Rational,
}

impl ProbabilityStructure {
    /// Validates and builds a structure. See [`ValidationError`] for the
    /// invariants checked, in order.
    pub fn new(
        names: Vec<String>,
        weights: Vec<Rational>,
        question: Question,
        evidence: Vec<Proposition>,
        threshold: Rational,
    ) -> Result<Self, ValidationError> {
        if names.is_empty() {
            return Err(ValidationError::EmptyStateSet);
        }
        for (i, name) in names.iter().enumerate() {
            if !valid_state_name(name) {
                return Err(ValidationError::InvalidStateName(name.clone()));
            }
            if names[..i].contains(name) {
                return Err(ValidationError::DuplicateState(name.clone()));
            }
        }
        let n = names.len();
        if weights.len() != n {
            return Err(ValidationError::WeightCountMismatch { got: weights.len(), expected: n });
        }
        for (name, w) in names.iter().zip(&weights) {
            if w.is_negative() {
                return Err(ValidationError::NegativeWeight {
                    state: name.clone(),
                    weight: w.clone(),
                });
            }
        }
        let total: Rational = weights.iter().sum();
        if total.is_zero() {
            return Err(ValidationError::ZeroTotalWeight);
        }
        assert_eq!(question.cell_index.len(), n, "question universe mismatch");
        let weight_of = |p: &Proposition| -> Rational { p.iter().map(|s| &weights[s.0]).sum() };
        for (i, e) in evidence.iter().enumerate() {
            assert_eq!(e.universe(), n, "evidence universe mismatch");
            if e.is_empty() {
                return Err(ValidationError::EmptyEvidenceSet(i + 1));
            }
            if weight_of(e).is_zero() {
                return Err(ValidationError::ZeroProbabilityEvidence {
                    index: i + 1,
                    set: format!("{e:?}"),
                });
            }
            if evidence[..i].contains(e) {
                return Err(ValidationError::DuplicateEvidence(i + 1));
            }
        }
        if !in_unit_interval(&threshold) {
            return Err(ValidationError::ThresholdOutOfRange(threshold));
        }
        Ok(ProbabilityStructure { names, weights, total, question, evidence, threshold })
    }

    pub fn state_count(&self) -> usize {
        self.names.len()
    }

    pub fn state_names(&self) -> &[String] {
        &self.names
    }

    pub fn state_name(&self, s: StateId) -> &str {
        &self.names[s.0]
    }

    pub fn state_by_name(&self, name: &str) -> Option<StateId> {
        self.names.iter().position(|n| n == name).map(StateId)
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn question(&self) -> &Question {
        &self.question
    }

    pub fn evidence(&self) -> &[Proposition] {
        &self.evidence
    }

    pub fn threshold(&self) -> &Rational {
        &self.threshold
    }

    /// The full state set as a proposition.
    pub fn all_states(&self) -> Proposition {
        Proposition::full(self.state_count())
    }

    /// Total (unnormalized) weight of a proposition.
    pub fn weight_of(&self, p: &Proposition) -> Rational {
        p.iter().map(|s| &self.weights[s.0]).sum()
    }

    /// Prior probability of a proposition.
    pub fn prior(&self, p: &Proposition) -> Rational {
        self.weight_of(p) / &self.total
    }

    /// `Pr(p | given)`, exactly. Errors if `given` has zero probability.
    pub fn conditional_probability(
        &self,
        p: &Proposition,
        given: &Proposition,
    ) -> Result<Rational, EvalError> {
        let denom = self.weight_of(given);
        if denom.is_zero() {
            return Err(EvalError::ConditionOnNull);
        }
        Ok(self.weight_of(&p.intersection(given)) / denom)
    }

    /// The answer (question cell) true at state `s`.
    pub fn answer_of(&self, s: StateId) -> Result<&Proposition, EvalError> {
        if s.0 >= self.state_count() {
            return Err(EvalError::UnknownState(format!("{s}")));
        }
        Ok(self.question.cell_of(s))
    }

    /// Restricts current evidence `e` by a newly discovered proposition `p`,
    /// and reports whether the result is itself in the evidence family.
    pub fn discover(&self, e: &Proposition, p: &Proposition) -> Discovery {
        let result = e.intersection(p);
        let admissible = self.evidence.contains(&result);
        Discovery { result, admissible }
    }

    pub fn is_evidence(&self, p: &Proposition) -> bool {
        self.evidence.contains(p)
    }

    pub fn evidence_index(&self, p: &Proposition) -> Option<usize> {
        self.evidence.iter().position(|e| e == p)
    }

    /// Same states, weights, and evidence under a different question.
    pub fn with_question(&self, question: Question) -> Result<Self, ValidationError> {
        ProbabilityStructure::new(
            self.names.clone(),
            self.weights.clone(),
            question,
            self.evidence.clone(),
            self.threshold.clone(),
        )
    }

    /// Same structure with a different threshold.
    pub fn with_threshold(&self, threshold: Rational) -> Result<Self, ValidationError> {
        ProbabilityStructure::new(
            self.names.clone(),
            self.weights.clone(),
            self.question.clone(),
            self.evidence.clone(),
            threshold,
        )
    }

    /// Builds a proposition from state names. Unknown names error.
    pub fn proposition_from_names<'a>(
        &self,
        names: impl IntoIterator<Item = &'a str>,
    ) -> Result<Proposition, EvalError> {
        let mut p = Proposition::empty(self.state_count());
        for name in names {
            let s = self
                .state_by_name(name)
                .ok_or_else(|| EvalError::UnknownState(name.to_string()))?;
            p.insert(s);
        }
        Ok(p)
    }

    /// Builds the proposition of states satisfying a predicate over
    /// `(index, name)`.
    pub fn proposition_matching(&self, mut pred: impl FnMut(StateId, &str) -> bool) -> Proposition {
        let mut p = Proposition::empty(self.state_count());
        for (i, name) in self.names.iter().enumerate() {
            if pred(StateId(i), name) {
                p.insert(StateId(i));
            }
        }
        p
    }

    /// Renders a proposition with state names: `{a b c}`.
    pub fn render(&self, p: &Proposition) -> String {
        let mut out = String::from("{");
        for (k, s) in p.iter().enumerate() {
            if k > 0 {
                out.push(' ');
            }
            out.push_str(self.state_name(s));
        }
        out.push('}');
        out
    }
}

/// State names must be usable in the text format: identifier-shaped and not
/// the reserved full-set token `S`.
fn valid_state_name(name: &str) -> bool {
    name != "S" && is_identifier(name)
}

/// Shared with the text format: `[A-Za-z_][A-Za-z0-9_]*`.
pub(crate) fn is_identifier(name: &str) -> bool {
    let Some(first) = name.bytes().next() else {
        return false;
    };
    (first.is_ascii_alphabetic() || first == b'_')
        && name.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

/// Incremental builder for [`ProbabilityStructure`], working in state
/// indices (the order `state` calls are made in).
#[derive(Debug, Clone, Default)]
pub struct StructureBuilder {
    names: Vec<String>,
    weights: Vec<Rational>,
    cells: Vec<Vec<usize>>,
    evidence: Vec<Vec<usize>>,
    full_evidence_at: Vec<usize>,
    threshold: Rational,
}

impl StructureBuilder {
    pub fn new() -> Self {
        StructureBuilder::default()
    }

    /// Adds a state; returns the builder for chaining. States are indexed
    /// in insertion order.
    pub fn state(mut self, name: impl Into<String>, weight: Rational) -> Self {
        self.names.push(name.into());
        self.weights.push(weight);
        self
    }

    /// Adds a question cell by state indices.
    pub fn cell(mut self, members: impl IntoIterator<Item = usize>) -> Self {
        self.cells.push(members.into_iter().collect());
        self
    }

    /// Adds an evidence set by state indices.
    pub fn evidence(mut self, members: impl IntoIterator<Item = usize>) -> Self {
        self.evidence.push(members.into_iter().collect());
        self
    }

    /// Adds the full state set as an evidence set.
    pub fn evidence_full(mut self) -> Self {
        self.full_evidence_at.push(self.evidence.len());
        self.evidence.push(Vec::new());
        self
    }

    pub fn threshold(mut self, t: Rational) -> Self {
        self.threshold = t;
        self
    }

    /// Validates and builds. If no cell was declared, the question defaults
    /// to singletons.
    pub fn build(mut self) -> Result<ProbabilityStructure, ValidationError> {
        let n = self.names.len();
        if n == 0 {
            return Err(ValidationError::EmptyStateSet);
        }
        for &i in &self.full_evidence_at {
            self.evidence[i] = (0..n).collect();
        }
        let to_prop = |indices: &[usize]| -> Result<Proposition, ValidationError> {
            let mut p = Proposition::empty(n);
            for &i in indices {
                if i >= n {
                    return Err(ValidationError::StateOutOfRange(i));
                }
                p.insert(StateId(i));
            }
            Ok(p)
        };
        let question = if self.cells.is_empty() {
            Question::singletons(n)
        } else {
            let cells: Result<Vec<_>, _> = self.cells.iter().map(|c| to_prop(c)).collect();
            Question::new(n, cells?)?
        };
        let evidence: Result<Vec<_>, _> = self.evidence.iter().map(|e| to_prop(e)).collect();
        ProbabilityStructure::new(self.names, self.weights, question, evidence?, self.threshold)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn abc() -> StructureBuilder {
        StructureBuilder::new()
            .state("a", ratio(9, 10))
            .state("b", ratio(9, 100))
            .state("c", ratio(1, 100))
            .threshold(ratio(9001, 10_000))
    }

    #[test]
    fn builds_with_default_singleton_question() {
        let m = abc().evidence_full().evidence([0, 1]).build().unwrap();
        assert_eq!(m.state_count(), 3);
        assert_eq!(m.question().cell_count(), 3);
        assert_eq!(m.evidence().len(), 2);
        assert_eq!(m.render(&m.evidence()[1]), "{a b}");
    }

    #[test]
    fn conditional_probability_is_exact() {
        let m = abc().evidence_full().evidence([0, 1]).build().unwrap();
        let ab = m.evidence()[1].clone();
        let a = Proposition::from_indices(3, [0]);
        // 9/10 over 99/100
        assert_eq!(m.conditional_probability(&a, &ab).unwrap(), ratio(10, 11));
        assert_eq!(m.prior(&ab), ratio(99, 100));
    }

    #[test]
    fn conditioning_on_null_errors() {
        let m = StructureBuilder::new()
            .state("a", int(1))
            .state("z", int(0))
            .threshold(ratio(1, 2))
            .evidence_full()
            .build()
            .unwrap();
        let z = Proposition::from_indices(2, [1]);
        assert_eq!(m.conditional_probability(&z, &z).unwrap_err(), EvalError::ConditionOnNull);
    }

    #[test]
    fn validation_rejects_bad_structures() {
        let err = StructureBuilder::new().threshold(ratio(1, 2)).build().unwrap_err();
        assert_eq!(err, ValidationError::EmptyStateSet);

        let err = abc().evidence([]).build().unwrap_err();
        assert_eq!(err, ValidationError::EmptyEvidenceSet(1));

        let err = StructureBuilder::new()
            .state("a", int(1))
            .state("z", int(0))
            .threshold(ratio(1, 2))
            .evidence([1])
            .build()
            .unwrap_err();
        assert_eq!(err, ValidationError::ZeroProbabilityEvidence { index: 1, set: "{1}".into() });

        let err = abc().evidence([0, 1]).evidence([0, 1]).build().unwrap_err();
        assert_eq!(err, ValidationError::DuplicateEvidence(2));

        let err = abc().threshold(ratio(3, 2)).evidence_full().build().unwrap_err();
        assert_eq!(err, ValidationError::ThresholdOutOfRange(ratio(3, 2)));

        let err = StructureBuilder::new()
            .state("a", int(1))
            .state("a", int(1))
            .threshold(ratio(1, 2))
            .evidence_full()
            .build()
            .unwrap_err();
        assert_eq!(err, ValidationError::DuplicateState("a".into()));

        let err = StructureBuilder::new()
            .state("a", int(-1))
            .threshold(ratio(1, 2))
            .evidence_full()
            .build()
            .unwrap_err();
        assert!(matches!(err, ValidationError::NegativeWeight { .. }));

        let err = StructureBuilder::new()
            .state("a", int(0))
            .threshold(ratio(1, 2))
            .evidence_full()
            .build()
            .unwrap_err();
        assert_eq!(err, ValidationError::ZeroTotalWeight);

        let err = StructureBuilder::new()
            .state("S", int(1))
            .threshold(ratio(1, 2))
            .evidence_full()
            .build()
            .unwrap_err();
        assert_eq!(err, ValidationError::InvalidStateName("S".into()));
    }

    #[test]
    fn partition_violations_are_detected() {
        let overlapping = abc().cell([0, 1]).cell([1, 2]).evidence_full().build().unwrap_err();
        assert!(matches!(overlapping, ValidationError::NotAPartition(_)));

        let gap = abc().cell([0]).cell([1]).evidence_full().build().unwrap_err();
        assert!(matches!(gap, ValidationError::NotAPartition(_)));

        let empty_cell = abc().cell([0, 1, 2]).cell([]).evidence_full().build().unwrap_err();
        assert!(matches!(empty_cell, ValidationError::NotAPartition(_)));
    }

    #[test]
    fn discover_checks_admissibility() {
        let m = abc().evidence_full().evidence([0, 1]).build().unwrap();
        let s = m.all_states();
        let ab = Proposition::from_indices(3, [0, 1]);
        let bc = Proposition::from_indices(3, [1, 2]);

        let d = m.discover(&s, &ab);
        assert_eq!(d.result, ab);
        assert!(d.admissible);

        let d = m.discover(&s, &bc);
        assert_eq!(d.result, bc);
        assert!(!d.admissible);
    }

    #[test]
    fn answer_of_reads_the_question() {
        let m = abc().cell([0, 1]).cell([2]).evidence_full().build().unwrap();
        assert_eq!(m.answer_of(StateId(1)).unwrap(), &Proposition::from_indices(3, [0, 1]));
        assert_eq!(m.answer_of(StateId(2)).unwrap(), &Proposition::from_indices(3, [2]));
        assert!(m.answer_of(StateId(9)).is_err());
    }

    #[test]
    fn canonical_order_is_lexicographic_on_indices() {
        let u = 4;
        let p0 = Proposition::from_indices(u, [0]);
        let p01 = Proposition::from_indices(u, [0, 1]);
        let p1 = Proposition::from_indices(u, [1]);
        let mut v = vec![p1.clone(), p01.clone(), p0.clone()];
        v.sort();
        assert_eq!(v, vec![p0, p01, p1]);
    }

    #[test]
    fn set_algebra_behaves() {
        let u = 5;
        let a = Proposition::from_indices(u, [0, 1, 2]);
        let b = Proposition::from_indices(u, [2, 3]);
        assert_eq!(a.intersection(&b), Proposition::from_indices(u, [2]));
        assert_eq!(a.union(&b), Proposition::from_indices(u, [0, 1, 2, 3]));
        assert_eq!(a.difference(&b), Proposition::from_indices(u, [0, 1]));
        assert_eq!(b.complement(), Proposition::from_indices(u, [0, 1, 4]));
        assert!(a.intersects(&b));
        assert!(!a.intersects(&Proposition::from_indices(u, [3, 4])));
        assert!(Proposition::from_indices(u, [2]).is_subset(&b));
        assert_eq!(format!("{a:?}"), "{0 1 2}");
    }
}
