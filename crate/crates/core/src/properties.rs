//! Structural constraints: orthogonality and stability.
//!
//! Orthogonality: conditioning on evidence never changes the probability
//! ratio of two answers except by zeroing one. Checked per evidence set at
//! cell granularity with cross-multiplication, so no division and no
//! zero-denominator case split: for cells q, q' both meeting `E` with
//! `Pr(q'∩E) > 0`, require `Pr(q)·Pr(q'∩E) = Pr(q')·Pr(q∩E)`.
//!
//! Stability: every union of cells with prior mass at least `t` keeps
//! conditional mass at least `t` on any evidence it overlaps. Checked by
//! enumerating all `2^|Q|` cell subsets; the question size is bounded and
//! [`StabilityError::QuestionTooLarge`] reported beyond the bound.

use num_traits::Zero;
use thiserror::Error;

use crate::rational::Rational;
use crate::structure::{ProbabilityStructure, Proposition, StateId};

/// The two structural constraints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Constraint {
    Orthogonality,
    Stability,
}

impl Constraint {
    pub fn name(self) -> &'static str {
        match self {
            Constraint::Orthogonality => "orthogonality",
            Constraint::Stability => "stability",
        }
    }
}

impl std::fmt::Display for Constraint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Whether a constraint held, with every violating instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintReport {
    pub constraint: Constraint,
    pub holds: bool,
    /// Violations in canonical order (evidence set, then detail).
    pub violations: Vec<ConstraintViolation>,
    /// Instances examined: ordered cell pairs summed over evidence sets
    /// (orthogonality), or nonempty cell subsets (stability).
    pub instances_checked: usize,
}

/// One violating instance, tied to the evidence set where it shows up.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintViolation {
    pub evidence: Proposition,
    pub detail: ViolationDetail,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ViolationDetail {
    /// Conditioning on the evidence moved the ratio of two answers.
    /// `state_a`/`state_b` are representative states of the two cells
    /// (least index inside the evidence set).
    RatioShift {
        state_a: StateId,
        state_b: StateId,
        prior_ratio: Rational,
        conditional_ratio: Rational,
    },
    /// A threshold-reaching union of cells dropped below the threshold.
    UnstableUnion {
        cells: Vec<usize>,
        union: Proposition,
        prior: Rational,
        conditional: Rational,
    },
}

/// Errors from [`check_stability`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StabilityError {
    #[error(
        "question has {cells} cells; stability enumerates 2^|Q| cell unions and is bounded at \
         {bound} cells"
    )]
    QuestionTooLarge { cells: usize, bound: usize },
}

/// Largest question size [`check_stability`] will enumerate.
pub const DEFAULT_STABILITY_CELL_BOUND: usize = 20;

/// Checks orthogonality: for every evidence set and every ordered pair of
/// answers both meeting it (second one with positive conditional mass),
/// the prior ratio must survive conditioning. Division-free.
pub fn check_orthogonality(m: &ProbabilityStructure) -> ConstraintReport {
    let cells = m.question().cells();
    let prior_weight: Vec<Rational> = cells.iter().map(|q| m.weight_of(q)).collect();
    let mut violations = Vec::new();
    let mut instances = 0;
    for e in m.evidence() {
        let in_e: Vec<Proposition> = cells.iter().map(|q| q.intersection(e)).collect();
        let in_e_weight: Vec<Rational> = in_e.iter().map(|q| m.weight_of(q)).collect();
        for (a, qa) in in_e.iter().enumerate() {
            if qa.is_empty() {
                continue;
            }
            for (b, qb) in in_e.iter().enumerate() {
                if a == b || qb.is_empty() || in_e_weight[b].is_zero() {
                    continue;
                }
                instances += 1;
                // Pr(q_a)·Pr(q_b ∩ E) = Pr(q_b)·Pr(q_a ∩ E), cross-multiplied
                if &prior_weight[a] * &in_e_weight[b] != &prior_weight[b] * &in_e_weight[a] {
                    violations.push(ConstraintViolation {
                        evidence: e.clone(),
                        detail: ViolationDetail::RatioShift {
                            state_a: qa.iter().next().expect("nonempty"),
                            state_b: qb.iter().next().expect("nonempty"),
                            prior_ratio: &prior_weight[a] / &prior_weight[b],
                            conditional_ratio: &in_e_weight[a] / &in_e_weight[b],
                        },
                    });
                }
            }
        }
    }
    sort_violations(&mut violations);
    ConstraintReport {
        constraint: Constraint::Orthogonality,
        holds: violations.is_empty(),
        violations,
        instances_checked: instances,
    }
}

/// Checks stability with the default question-size bound.
pub fn check_stability(m: &ProbabilityStructure) -> Result<ConstraintReport, StabilityError> {
    check_stability_bounded(m, DEFAULT_STABILITY_CELL_BOUND)
}

/// Checks stability: for every cell subset X with `Pr(∪X) ≥ t` and every
/// evidence set E meeting ∪X, requires `Pr(∪X | E) ≥ t`.
///
/// Enumerates subsets in Gray-code order, updating running masses by the
/// one toggled cell per step.
pub fn check_stability_bounded(
    m: &ProbabilityStructure,
    max_cells: usize,
) -> Result<ConstraintReport, StabilityError> {
    let cells = m.question().cells();
    let k = cells.len();
    // 63: the subset mask lives in a u64
    if k > max_cells.min(63) {
        return Err(StabilityError::QuestionTooLarge { cells: k, bound: max_cells });
    }
    let total = m.weight_of(&m.all_states());
    let t = m.threshold();
    let prior_bound = t * &total;

    let cell_weight: Vec<Rational> = cells.iter().map(|q| m.weight_of(q)).collect();
    // per evidence set: each cell overlap's weight and set-nonemptiness,
    // plus the evidence weight itself
    struct EvidenceView {
        overlap_weight: Vec<Rational>,
        overlaps: Vec<bool>,
        weight: Rational,
        cond_bound: Rational,
    }
    let views: Vec<EvidenceView> = m
        .evidence()
        .iter()
        .map(|e| {
            let overlap: Vec<Proposition> = cells.iter().map(|q| q.intersection(e)).collect();
            let weight = m.weight_of(e);
            EvidenceView {
                overlap_weight: overlap.iter().map(|q| m.weight_of(q)).collect(),
                overlaps: overlap.iter().map(|q| !q.is_empty()).collect(),
                cond_bound: t * &weight,
                weight,
            }
        })
        .collect();

    let mut violations = Vec::new();
    let mut instances = 0;
    let mut members = vec![false; k];
    let mut prior = Rational::zero();
    let mut cond: Vec<Rational> = vec![Rational::zero(); views.len()];
    let mut overlap_count: Vec<usize> = vec![0; views.len()];

    for step in 1u64..(1u64 << k) {
        let bit = step.trailing_zeros() as usize;
        let inserting = !members[bit];
        members[bit] = inserting;
        for (v, view) in views.iter().enumerate() {
            if inserting {
                cond[v] += &view.overlap_weight[bit];
                overlap_count[v] += usize::from(view.overlaps[bit]);
            } else {
                cond[v] -= &view.overlap_weight[bit];
                overlap_count[v] -= usize::from(view.overlaps[bit]);
            }
        }
        if inserting {
            prior += &cell_weight[bit];
        } else {
            prior -= &cell_weight[bit];
        }

        instances += 1;
        if prior < prior_bound {
            continue;
        }
        for (v, view) in views.iter().enumerate() {
            // Pr(∪X | E) ≥ t  ⟺  weight(∪X ∩ E) ≥ t·weight(E)
            if overlap_count[v] > 0 && cond[v] < view.cond_bound {
                let chosen: Vec<usize> =
                    (0..k).filter(|&c| members[c]).collect();
                let mut union = Proposition::empty(m.state_count());
                for &c in &chosen {
                    union = union.union(&cells[c]);
                }
                violations.push(ConstraintViolation {
                    evidence: m.evidence()[v].clone(),
                    detail: ViolationDetail::UnstableUnion {
                        cells: chosen,
                        union,
                        prior: &prior / &total,
                        conditional: &cond[v] / &view.weight,
                    },
                });
            }
        }
    }
    sort_violations(&mut violations);
    Ok(ConstraintReport {
        constraint: Constraint::Stability,
        holds: violations.is_empty(),
        violations,
        instances_checked: instances,
    })
}

fn sort_violations(violations: &mut [ConstraintViolation]) {
    violations.sort_by(|a, b| {
        a.evidence.cmp(&b.evidence).then_with(|| match (&a.detail, &b.detail) {
            (
                ViolationDetail::RatioShift { state_a: a1, state_b: b1, .. },
                ViolationDetail::RatioShift { state_a: a2, state_b: b2, .. },
            ) => (a1, b1).cmp(&(a2, b2)),
            (
                ViolationDetail::UnstableUnion { union: u1, .. },
                ViolationDetail::UnstableUnion { union: u2, .. },
            ) => u1.cmp(u2),
            _ => std::cmp::Ordering::Equal,
        })
    });
}

/// Recomputes a reported violation from scratch: true iff it still
/// violates its constraint on `m`.
pub fn replay_violation(m: &ProbabilityStructure, v: &ConstraintViolation) -> bool {
    if !m.is_evidence(&v.evidence) {
        return false;
    }
    match &v.detail {
        ViolationDetail::RatioShift { state_a, state_b, .. } => {
            let qa = match m.answer_of(*state_a) {
                Ok(q) => q.clone(),
                Err(_) => return false,
            };
            let qb = match m.answer_of(*state_b) {
                Ok(q) => q.clone(),
                Err(_) => return false,
            };
            let e = &v.evidence;
            let qa_in = m.weight_of(&qa.intersection(e));
            let qb_in = m.weight_of(&qb.intersection(e));
            if qb_in.is_zero() || !qa.intersects(e) {
                return false;
            }
            m.weight_of(&qa) * qb_in != m.weight_of(&qb) * qa_in
        }
        ViolationDetail::UnstableUnion { union, .. } => {
            let e = &v.evidence;
            let t = m.threshold();
            m.prior(union) >= *t
                && union.intersects(e)
                && m.conditional_probability(union, e).map_or(false, |p| p < *t)
        }
    }
}

/// Dispatches on the constraint, using the default stability bound.
pub fn check_constraint(
    m: &ProbabilityStructure,
    c: Constraint,
) -> Result<ConstraintReport, StabilityError> {
    match c {
        Constraint::Orthogonality => Ok(check_orthogonality(m)),
        Constraint::Stability => check_stability(m),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use crate::structure::StructureBuilder;

    /// Cell-union evidence: {a b | c d} question, evidence S and {c d}.
    fn coarse_evidence() -> ProbabilityStructure {
        StructureBuilder::new()
            .state("a", int(3))
            .state("b", int(1))
            .state("c", int(2))
            .state("d", int(2))
            .cell([0, 1])
            .cell([2, 3])
            .threshold(ratio(1, 2))
            .evidence_full()
            .evidence([2, 3])
            .build()
            .unwrap()
    }

    #[test]
    fn cell_union_evidence_is_orthogonal() {
        let report = check_orthogonality(&coarse_evidence());
        assert!(report.holds);
        assert!(report.violations.is_empty());
    }

    #[test]
    fn cross_cutting_evidence_breaks_orthogonality() {
        // evidence {b c} cross-cuts the question: ratio ab:cd is 4:4
        // before, 1:2 after
        let m = StructureBuilder::new()
            .state("a", int(3))
            .state("b", int(1))
            .state("c", int(2))
            .state("d", int(2))
            .cell([0, 1])
            .cell([2, 3])
            .threshold(ratio(1, 2))
            .evidence_full()
            .evidence([1, 2])
            .build()
            .unwrap();
        let report = check_orthogonality(&m);
        assert!(!report.holds);
        assert_eq!(report.violations.len(), 2);
        let v = &report.violations[0];
        assert_eq!(v.evidence, Proposition::from_indices(4, [1, 2]));
        match &v.detail {
            ViolationDetail::RatioShift { state_a, state_b, prior_ratio, conditional_ratio } => {
                assert_eq!((*state_a, *state_b), (StateId(1), StateId(2)));
                assert_eq!(prior_ratio, &int(1));
                assert_eq!(conditional_ratio, &ratio(1, 2));
            }
            other => panic!("expected a ratio shift, got {other:?}"),
        }
        for v in &report.violations {
            assert!(replay_violation(&m, v));
        }
    }

    #[test]
    fn zero_mass_answers_do_not_trip_orthogonality() {
        // b has weight 0; conditioning on {a b} zeroes cell {b} but keeps
        // the a:c ratio undefined rather than shifted
        let m = StructureBuilder::new()
            .state("a", int(1))
            .state("b", int(0))
            .state("c", int(1))
            .threshold(ratio(1, 2))
            .evidence_full()
            .evidence([0, 1])
            .build()
            .unwrap();
        assert!(check_orthogonality(&m).holds);
    }

    #[test]
    fn stability_holds_when_evidence_respects_heavy_unions() {
        let m = coarse_evidence();
        // X = {ab}: prior 1/2 ≥ 1/2, but {a b} ∩ {c d} = ∅, so only E = S
        // constrains it; X = {cd}: prior 1/2, conditional on {c d} is 1.
        let report = check_stability(&m).unwrap();
        assert!(report.holds, "{:?}", report.violations);
        assert_eq!(report.instances_checked, 3);
    }

    #[test]
    fn stability_fails_on_a_demoted_union() {
        // X = {a b}: prior 6/10 ≥ 3/5, but Pr(X | {a c}) = 3/7 < 3/5;
        // X = {b c} fails the same way with 4/7.
        let m = StructureBuilder::new()
            .state("a", int(3))
            .state("b", int(3))
            .state("c", int(4))
            .threshold(ratio(3, 5))
            .evidence_full()
            .evidence([0, 2])
            .build()
            .unwrap();
        let report = check_stability(&m).unwrap();
        assert!(!report.holds);
        assert_eq!(report.violations.len(), 2);
        let v = &report.violations[0];
        assert_eq!(v.evidence, Proposition::from_indices(3, [0, 2]));
        match &v.detail {
            ViolationDetail::UnstableUnion { cells, union, prior, conditional } => {
                assert_eq!(cells, &vec![0, 1]);
                assert_eq!(union, &Proposition::from_indices(3, [0, 1]));
                assert_eq!(prior, &ratio(3, 5));
                assert_eq!(conditional, &ratio(3, 7));
            }
            other => panic!("expected an unstable union, got {other:?}"),
        }
        assert!(replay_violation(&m, v));
    }

    #[test]
    fn full_question_union_never_violates_stability() {
        // X = Q has conditional probability 1 everywhere
        let m = StructureBuilder::new()
            .state("a", int(1))
            .state("b", int(1))
            .threshold(int(1))
            .evidence_full()
            .evidence([0])
            .build()
            .unwrap();
        let report = check_stability(&m).unwrap();
        assert!(report.holds);
    }

    #[test]
    fn oversized_questions_are_refused() {
        let n = 22;
        let mut b = StructureBuilder::new();
        for i in 0..n {
            b = b.state(format!("s{i}"), int(1));
        }
        let m = b.threshold(ratio(1, 2)).evidence_full().build().unwrap();
        assert_eq!(
            check_stability(&m).unwrap_err(),
            StabilityError::QuestionTooLarge { cells: 22, bound: 20 }
        );
        assert!(check_stability_bounded(&m, 25).is_ok());
    }

    #[test]
    fn checks_are_scale_invariant() {
        let m1 = coarse_evidence();
        let m2 = StructureBuilder::new()
            .state("a", int(21))
            .state("b", int(7))
            .state("c", int(14))
            .state("d", int(14))
            .cell([0, 1])
            .cell([2, 3])
            .threshold(ratio(1, 2))
            .evidence_full()
            .evidence([2, 3])
            .build()
            .unwrap();
        assert_eq!(check_orthogonality(&m1).holds, check_orthogonality(&m2).holds);
        assert_eq!(check_stability(&m1).unwrap().holds, check_stability(&m2).unwrap().holds);
    }
}
