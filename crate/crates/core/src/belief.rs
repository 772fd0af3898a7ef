//! Belief operators: question-relative belief sets from evidence.
//!
//! Given evidence `E` with positive probability, both operators pick out a
//! subset of `E` built from whole question cells (intersected with `E`):
//!
//! * [`belief_set`]: keep a state `s` iff the total conditional mass of
//!   answers strictly more probable than `s`'s own answer stays below the
//!   threshold. Equivalently, believe the smallest union of most-probable
//!   answers whose conditional probability reaches the threshold (ties
//!   included). Can be empty when `t = 0` or nonempty cells tie badly; see
//!   the threshold invariant below.
//! * [`lk_belief_set`]: keep `s` iff its answer's conditional mass is at
//!   least `t` times that of every answer, i.e. at least `t` times the
//!   maximum. Never empty for `t <= 1`.
//!
//! [`hpd_oracle`] recomputes the first operator by the sorted-prefix
//! construction instead of the per-state sum. The two routes are kept
//! deliberately independent so they can check each other.

use num_traits::Zero;

use crate::rational::Rational;
use crate::structure::{EvalError, ProbabilityStructure, Proposition};

/// Which belief operator to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BeliefOperator {
    /// Highest-posterior-density operator (threshold on accumulated answer
    /// mass).
    Hpd,
    /// Lin–Kelly tracking operator (threshold against the modal answer).
    Lk,
}

impl BeliefOperator {
    pub const ALL: [BeliefOperator; 2] = [BeliefOperator::Hpd, BeliefOperator::Lk];

    pub fn name(self) -> &'static str {
        match self {
            BeliefOperator::Hpd => "hpd",
            BeliefOperator::Lk => "lk",
        }
    }
}

impl std::str::FromStr for BeliefOperator {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "hpd" => Ok(BeliefOperator::Hpd),
            "lk" => Ok(BeliefOperator::Lk),
            other => Err(format!("unknown belief operator `{other}` (expected `hpd` or `lk`)")),
        }
    }
}

impl std::fmt::Display for BeliefOperator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A computed belief set: what is believed upon evidence `evidence`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BeliefSet {
    pub operator: BeliefOperator,
    pub evidence: Proposition,
    pub states: Proposition,
    /// `Pr(states | evidence)`, exact.
    pub mass_given_evidence: Rational,
}

/// Conditional probability of each question cell given `e`, in cell order.
/// Errors if `e` has zero probability.
fn cell_masses(m: &ProbabilityStructure, e: &Proposition) -> Result<Vec<Rational>, EvalError> {
    let denom = m.weight_of(e);
    if denom.is_zero() {
        return Err(EvalError::ConditionOnNull);
    }
    Ok(m.question()
        .cells()
        .iter()
        .map(|q| m.weight_of(&q.intersection(e)) / &denom)
        .collect())
}

/// Highest-posterior-density belief set: `s` is believed iff the answers
/// strictly more probable than `s`'s own carry conditional mass below the
/// threshold.
///
/// With `t = 0` the belief set is empty (no state clears a strict bound of
/// zero); with `t > 0` it is nonempty, since the most probable answer always
/// qualifies.
pub fn belief_set(m: &ProbabilityStructure, e: &Proposition) -> Result<BeliefSet, EvalError> {
    let masses = cell_masses(m, e)?;
    let mut states = Proposition::empty(m.state_count());
    for (k, mass) in masses.iter().enumerate() {
        let above: Rational = masses.iter().filter(|other| *other > mass).sum();
        if above < *m.threshold() {
            states = states.union(&m.question().cells()[k].intersection(e));
        }
    }
    let mass_given_evidence = m.conditional_probability(&states, e)?;
    Ok(BeliefSet { operator: BeliefOperator::Hpd, evidence: e.clone(), states, mass_given_evidence })
}

/// Independent reconstruction of [`belief_set`]: sort answers by conditional
/// mass (descending, cell order breaking ties), take the shortest prefix
/// whose mass reaches the threshold, then extend across the boundary tie.
///
/// Exists purely as a second route for differential testing.
pub fn hpd_oracle(m: &ProbabilityStructure, e: &Proposition) -> Result<BeliefSet, EvalError> {
    let mut order: Vec<(usize, Rational)> = m
        .question()
        .cells()
        .iter()
        .enumerate()
        .map(|(k, q)| Ok((k, m.conditional_probability(q, e)?)))
        .collect::<Result<_, EvalError>>()?;
    order.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));

    let mut chosen: Vec<usize> = Vec::new();
    let mut cum = Rational::zero();
    let mut i = 0;
    while i < order.len() && cum < *m.threshold() {
        cum += order[i].1.clone();
        chosen.push(order[i].0);
        i += 1;
    }
    if i > 0 {
        let boundary = order[i - 1].1.clone();
        while i < order.len() && order[i].1 == boundary {
            chosen.push(order[i].0);
            i += 1;
        }
    }

    let mut states = Proposition::empty(m.state_count());
    for k in chosen {
        states = states.union(&m.question().cells()[k].intersection(e));
    }
    let mass_given_evidence = m.conditional_probability(&states, e)?;
    Ok(BeliefSet { operator: BeliefOperator::Hpd, evidence: e.clone(), states, mass_given_evidence })
}

/// Lin–Kelly tracking belief set: `s` is believed iff its answer's
/// conditional mass is at least `t` times the maximal answer's.
///
/// Nonempty for every `t <= 1` (the modal answer always qualifies); with
/// `t = 0` it is all of `e`.
pub fn lk_belief_set(m: &ProbabilityStructure, e: &Proposition) -> Result<BeliefSet, EvalError> {
    let masses = cell_masses(m, e)?;
    let max = masses.iter().max().expect("questions have at least one cell").clone();
    let bound = m.threshold() * &max;
    let mut states = Proposition::empty(m.state_count());
    for (k, mass) in masses.iter().enumerate() {
        if *mass >= bound {
            states = states.union(&m.question().cells()[k].intersection(e));
        }
    }
    let mass_given_evidence = m.conditional_probability(&states, e)?;
    Ok(BeliefSet { operator: BeliefOperator::Lk, evidence: e.clone(), states, mass_given_evidence })
}

/// Dispatches on the operator.
pub fn belief(
    m: &ProbabilityStructure,
    e: &Proposition,
    op: BeliefOperator,
) -> Result<BeliefSet, EvalError> {
    match op {
        BeliefOperator::Hpd => belief_set(m, e),
        BeliefOperator::Lk => lk_belief_set(m, e),
    }
}

/// Whether `p` is believed upon evidence `e`: `B(e) ⊆ p`.
pub fn believes(
    m: &ProbabilityStructure,
    e: &Proposition,
    p: &Proposition,
    op: BeliefOperator,
) -> Result<bool, EvalError> {
    Ok(belief(m, e, op)?.states.is_subset(p))
}

/// Nonmonotonic consequence: `p |~ q` iff upon discovering `p` the agent
/// believes `q`. Defined only when `p` is in the evidence family.
pub fn nm_consequence(
    m: &ProbabilityStructure,
    p: &Proposition,
    q: &Proposition,
) -> Result<bool, EvalError> {
    if !m.is_evidence(p) {
        return Err(EvalError::NotEvidence(m.render(p)));
    }
    believes(m, p, q, BeliefOperator::Hpd)
}
