//! Belief-revision principle checking.
//!
//! Seven principles relate beliefs before and after a discovery. For a
//! current body of evidence `E`, discovering `p` moves the agent to
//! `E' = E ∩ p`. The pairwise principles combine a precondition on the
//! discovery (◇: compatible with current beliefs, `B(E) ∩ E' ≠ ∅`;
//! □: already believed, `B(E) ⊆ E'`) with a conclusion (−: no belief lost,
//! `B(E') ⊆ B(E)`; +: no belief gained, `B(E) ⊆ B(E')`; R: no reversal,
//! `B(E) ∩ B(E') ≠ ∅`). The partition principles Π− and ΠR require, for
//! every way the possible discoveries can partition `E`, some cell whose
//! discovery loses no belief (Π−) or reverses none (ΠR).
//!
//! Because `B(E) ⊆ E`, the pre- and postconditions depend on `p` only
//! through `E' = E ∩ p`, so checking every pair `E' ⊂ E` with both sets in
//! the evidence family is exhaustive. `E' = E` pairs are skipped as
//! vacuous.

use std::fmt;
use std::str::FromStr;

use crate::belief::{belief, BeliefOperator, BeliefSet};
use crate::structure::{ProbabilityStructure, Proposition};

/// The seven belief-revision principles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Principle {
    DiamondMinus,
    DiamondR,
    BoxPlus,
    BoxMinus,
    BoxR,
    PiMinus,
    PiR,
}

impl Principle {
    /// All principles, in the fixed reporting order.
    pub const ALL: [Principle; 7] = [
        Principle::DiamondMinus,
        Principle::DiamondR,
        Principle::BoxPlus,
        Principle::BoxMinus,
        Principle::BoxR,
        Principle::PiMinus,
        Principle::PiR,
    ];

    /// Command-line name.
    pub fn name(self) -> &'static str {
        match self {
            Principle::DiamondMinus => "diamond-minus",
            Principle::DiamondR => "diamond-r",
            Principle::BoxPlus => "box-plus",
            Principle::BoxMinus => "box-minus",
            Principle::BoxR => "box-r",
            Principle::PiMinus => "pi-minus",
            Principle::PiR => "pi-r",
        }
    }

    /// Symbolic name.
    pub fn symbol(self) -> &'static str {
        match self {
            Principle::DiamondMinus => "◇−",
            Principle::DiamondR => "◇R",
            Principle::BoxPlus => "□+",
            Principle::BoxMinus => "□−",
            Principle::BoxR => "□R",
            Principle::PiMinus => "Π−",
            Principle::PiR => "ΠR",
        }
    }

    /// The KLM-tradition name, where one exists.
    pub fn klm_alias(self) -> Option<&'static str> {
        match self {
            Principle::DiamondMinus => Some("rational monotony"),
            Principle::BoxPlus => Some("cut"),
            Principle::BoxMinus => Some("cautious monotony"),
            _ => None,
        }
    }

    fn quantifies_partitions(self) -> bool {
        matches!(self, Principle::PiMinus | Principle::PiR)
    }
}

impl fmt::Display for Principle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Principle {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "diamond-minus" | "rational-monotony" => Ok(Principle::DiamondMinus),
            "diamond-r" => Ok(Principle::DiamondR),
            "box-plus" | "cut" => Ok(Principle::BoxPlus),
            "box-minus" | "cautious-monotony" => Ok(Principle::BoxMinus),
            "box-r" => Ok(Principle::BoxR),
            "pi-minus" => Ok(Principle::PiMinus),
            "pi-r" => Ok(Principle::PiR),
            other => Err(format!(
                "unknown principle `{other}` (expected one of diamond-minus, diamond-r, \
                 box-plus, box-minus, box-r, pi-minus, pi-r, or an alias rational-monotony, \
                 cut, cautious-monotony)"
            )),
        }
    }
}

/// Whether a principle held on the structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Holds,
    Fails,
}

/// A concrete violation of a principle.
///
/// For pairwise principles, `discovery` is the refined evidence `E'` and
/// `belief_after` has one entry, `B(E')`. For partition principles,
/// `partition` lists the violating partition in canonical order,
/// `belief_after` holds one belief set per member in that order, and
/// `discovery` is the first member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub evidence: Proposition,
    pub discovery: Proposition,
    pub partition: Option<Vec<Proposition>>,
    pub belief_before: BeliefSet,
    pub belief_after: Vec<BeliefSet>,
    pub detail: String,
}

/// Result of checking one principle on one structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub principle: Principle,
    pub operator: BeliefOperator,
    pub outcome: Outcome,
    /// All violations, in canonical order (evidence, then discovery, then
    /// partition).
    pub witnesses: Vec<Witness>,
    /// Pairwise: (E, E') pairs examined, vacuous ones included.
    /// Partition: (E, Π) combinations examined.
    pub instances_checked: usize,
    /// True when partition enumeration was skipped because the evidence
    /// family exceeds the configured bound; the verdict is then only as
    /// strong as what was checked.
    pub bounded: bool,
}

/// Tunables for the checker.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckConfig {
    /// Partition principles enumerate exact covers from the evidence
    /// family, which is exponential in the worst case; families larger
    /// than this are not enumerated and the verdict is flagged `bounded`.
    pub partition_evidence_bound: usize,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig { partition_evidence_bound: 20 }
    }
}

/// All ordered pairs `(E, E')` from the evidence family with `E' ⊂ E`,
/// in canonical order. Each pair stands in for every discovery `p` with
/// `E ∩ p = E'`.
pub fn enumerate_discoveries(
    m: &ProbabilityStructure,
) -> Vec<(Proposition, Proposition)> {
    let mut pairs: Vec<(Proposition, Proposition)> = Vec::new();
    for e in m.evidence() {
        for e2 in m.evidence() {
            if e2 != e && e2.is_subset(e) {
                pairs.push((e.clone(), e2.clone()));
            }
        }
    }
    pairs.sort();
    pairs
}

/// All partitions of `e` into members of the evidence family, each
/// partition sorted canonically, the list of partitions likewise. Found by
/// exact-cover search on the lowest uncovered state. Includes the trivial
/// partition `{e}` whenever `e` is itself in the family.
pub fn enumerate_partitions(
    m: &ProbabilityStructure,
    e: &Proposition,
) -> Vec<Vec<Proposition>> {
    let candidates: Vec<&Proposition> =
        m.evidence().iter().filter(|f| f.is_subset(e)).collect();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    cover(e.clone(), &candidates, &mut chosen, &mut out);
    out.sort();
    out
}

fn cover(
    remaining: Proposition,
    candidates: &[&Proposition],
    chosen: &mut Vec<Proposition>,
    out: &mut Vec<Vec<Proposition>>,
) {
    let Some(pivot) = remaining.iter().next() else {
        let mut partition = chosen.clone();
        partition.sort();
        out.push(partition);
        return;
    };
    for c in candidates {
        if c.contains(pivot) && c.is_subset(&remaining) {
            chosen.push((*c).clone());
            cover(remaining.difference(c), candidates, chosen, out);
            chosen.pop();
        }
    }
}

/// Checks one principle with the default configuration.
pub fn check_principle(
    m: &ProbabilityStructure,
    pr: Principle,
    op: BeliefOperator,
) -> Verdict {
    check_principle_with(m, pr, op, &CheckConfig::default())
}

/// Checks one principle, collecting every violation as a witness.
pub fn check_principle_with(
    m: &ProbabilityStructure,
    pr: Principle,
    op: BeliefOperator,
    cfg: &CheckConfig,
) -> Verdict {
    let cache = belief_cache(m, op);
    let mut verdict = if pr.quantifies_partitions() {
        check_partitionwise(m, pr, op, cfg, &cache)
    } else {
        check_pairwise(m, pr, op, &cache)
    };
    verdict.witnesses.sort_by(|a, b| {
        a.evidence
            .cmp(&b.evidence)
            .then_with(|| a.discovery.cmp(&b.discovery))
            .then_with(|| a.partition.cmp(&b.partition))
    });
    verdict.outcome = if verdict.witnesses.is_empty() { Outcome::Holds } else { Outcome::Fails };
    verdict
}

/// Verdicts for all seven principles, default configuration.
pub fn check_all(m: &ProbabilityStructure, op: BeliefOperator) -> Vec<Verdict> {
    check_all_with(m, op, &CheckConfig::default())
}

/// Verdicts for all seven principles in [`Principle::ALL`] order.
pub fn check_all_with(
    m: &ProbabilityStructure,
    op: BeliefOperator,
    cfg: &CheckConfig,
) -> Vec<Verdict> {
    Principle::ALL.iter().map(|&pr| check_principle_with(m, pr, op, cfg)).collect()
}

/// One belief set per evidence-family index. Evidence sets are validated
/// to have positive probability, so this cannot fail.
fn belief_cache(m: &ProbabilityStructure, op: BeliefOperator) -> Vec<BeliefSet> {
    m.evidence()
        .iter()
        .map(|e| belief(m, e, op).expect("evidence sets have positive probability"))
        .collect()
}

fn precondition(pr: Principle, before: &BeliefSet, e2: &Proposition) -> bool {
    match pr {
        Principle::DiamondMinus | Principle::DiamondR => before.states.intersects(e2),
        Principle::BoxPlus | Principle::BoxMinus | Principle::BoxR => {
            before.states.is_subset(e2)
        }
        _ => unreachable!("partition principles have no pairwise precondition"),
    }
}

fn conclusion(pr: Principle, before: &BeliefSet, after: &BeliefSet) -> bool {
    match pr {
        Principle::DiamondMinus | Principle::BoxMinus => {
            after.states.is_subset(&before.states)
        }
        Principle::BoxPlus => before.states.is_subset(&after.states),
        Principle::DiamondR | Principle::BoxR => before.states.intersects(&after.states),
        _ => unreachable!("partition principles have no pairwise conclusion"),
    }
}

/// The Π condition a partition member must satisfy for its partition to be
/// unproblematic.
fn partition_member_ok(pr: Principle, before: &BeliefSet, member: &BeliefSet) -> bool {
    match pr {
        Principle::PiMinus => member.states.is_subset(&before.states),
        Principle::PiR => before.states.intersects(&member.states),
        _ => unreachable!("pairwise principles have no partition condition"),
    }
}

fn check_pairwise(
    m: &ProbabilityStructure,
    pr: Principle,
    op: BeliefOperator,
    cache: &[BeliefSet],
) -> Verdict {
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for (i, e) in m.evidence().iter().enumerate() {
        for (j, e2) in m.evidence().iter().enumerate() {
            if i != j && e2.is_subset(e) {
                pairs.push((i, j));
            }
        }
    }
    let mut witnesses = Vec::new();
    for &(i, j) in &pairs {
        let (before, after) = (&cache[i], &cache[j]);
        if precondition(pr, before, &m.evidence()[j]) && !conclusion(pr, before, after) {
            witnesses.push(pair_witness(m, pr, before, after));
        }
    }
    Verdict {
        principle: pr,
        operator: op,
        outcome: Outcome::Holds,
        witnesses,
        instances_checked: pairs.len(),
        bounded: false,
    }
}

fn check_partitionwise(
    m: &ProbabilityStructure,
    pr: Principle,
    op: BeliefOperator,
    cfg: &CheckConfig,
    cache: &[BeliefSet],
) -> Verdict {
    if m.evidence().len() > cfg.partition_evidence_bound {
        return Verdict {
            principle: pr,
            operator: op,
            outcome: Outcome::Holds,
            witnesses: Vec::new(),
            instances_checked: 0,
            bounded: true,
        };
    }
    let mut witnesses = Vec::new();
    let mut instances = 0;
    for (i, e) in m.evidence().iter().enumerate() {
        let before = &cache[i];
        for partition in enumerate_partitions(m, e) {
            instances += 1;
            let members: Vec<&BeliefSet> = partition
                .iter()
                .map(|p| &cache[m.evidence_index(p).expect("partition members are evidence")])
                .collect();
            if !members.iter().any(|bp| partition_member_ok(pr, before, bp)) {
                witnesses.push(partition_witness(m, pr, before, partition, &members));
            }
        }
    }
    Verdict {
        principle: pr,
        operator: op,
        outcome: Outcome::Holds,
        witnesses,
        instances_checked: instances,
        bounded: false,
    }
}

fn pair_witness(
    m: &ProbabilityStructure,
    pr: Principle,
    before: &BeliefSet,
    after: &BeliefSet,
) -> Witness {
    let detail = match pr {
        Principle::DiamondMinus | Principle::BoxMinus => {
            let gained = after.states.difference(&before.states);
            format!(
                "{} = {} is not contained in {} = {}: discovering {} makes {} newly believed",
                believed_after(m, &after.evidence),
                m.render(&after.states),
                believed_before(m, &before.evidence),
                m.render(&before.states),
                m.render(&after.evidence),
                m.render(&gained),
            )
        }
        Principle::BoxPlus => {
            let lost = before.states.difference(&after.states);
            format!(
                "{} = {} is not contained in {} = {}: discovering the already-believed {} \
                 abandons {}",
                believed_before(m, &before.evidence),
                m.render(&before.states),
                believed_after(m, &after.evidence),
                m.render(&after.states),
                m.render(&after.evidence),
                m.render(&lost),
            )
        }
        Principle::DiamondR | Principle::BoxR => format!(
            "{} = {} and {} = {} are disjoint: the discovery reverses belief",
            believed_before(m, &before.evidence),
            m.render(&before.states),
            believed_after(m, &after.evidence),
            m.render(&after.states),
        ),
        _ => unreachable!(),
    };
    Witness {
        evidence: before.evidence.clone(),
        discovery: after.evidence.clone(),
        partition: None,
        belief_before: before.clone(),
        belief_after: vec![after.clone()],
        detail,
    }
}

fn believed_before(m: &ProbabilityStructure, e: &Proposition) -> String {
    format!("B({})", m.render(e))
}

fn believed_after(m: &ProbabilityStructure, e2: &Proposition) -> String {
    format!("B({})", m.render(e2))
}

fn partition_witness(
    m: &ProbabilityStructure,
    pr: Principle,
    before: &BeliefSet,
    partition: Vec<Proposition>,
    members: &[&BeliefSet],
) -> Witness {
    let requirement = match pr {
        Principle::PiMinus => "keeps every current belief",
        Principle::PiR => "is compatible with current beliefs",
        _ => unreachable!(),
    };
    let cells = partition.iter().map(|p| m.render(p)).collect::<Vec<_>>().join(", ");
    let detail = format!(
        "no possible discovery among {{{cells}}} {requirement}: B({}) = {}, while the members \
         yield {}",
        m.render(&before.evidence),
        m.render(&before.states),
        members.iter().map(|b| m.render(&b.states)).collect::<Vec<_>>().join(", "),
    );
    Witness {
        evidence: before.evidence.clone(),
        discovery: partition[0].clone(),
        partition: Some(partition),
        belief_before: before.clone(),
        belief_after: members.iter().map(|b| (*b).clone()).collect(),
        detail,
    }
}

/// Recomputes a witness's defining condition from scratch: true iff the
/// witness still exhibits a violation on `m`.
pub fn replay_witness(
    m: &ProbabilityStructure,
    pr: Principle,
    op: BeliefOperator,
    w: &Witness,
) -> bool {
    let Ok(before) = belief(m, &w.evidence, op) else {
        return false;
    };
    if pr.quantifies_partitions() {
        let Some(partition) = &w.partition else {
            return false;
        };
        let mut union = Proposition::empty(w.evidence.universe());
        for (i, p) in partition.iter().enumerate() {
            if !m.is_evidence(p) || partition[..i].iter().any(|q| q.intersects(p)) {
                return false;
            }
            union = union.union(p);
        }
        if union != w.evidence {
            return false;
        }
        partition.iter().all(|p| match belief(m, p, op) {
            Ok(bp) => !partition_member_ok(pr, &before, &bp),
            Err(_) => false,
        })
    } else {
        if !m.is_evidence(&w.discovery) || !w.discovery.is_subset(&w.evidence) {
            return false;
        }
        let Ok(after) = belief(m, &w.discovery, op) else {
            return false;
        };
        precondition(pr, &before, &w.discovery) && !conclusion(pr, &before, &after)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use crate::structure::StructureBuilder;

    /// Evidence chain a ⊃ ab ⊃ abc with skewed weights; HPD drops beliefs
    /// on refinement, so the − principles fail somewhere.
    fn nested() -> ProbabilityStructure {
        StructureBuilder::new()
            .state("a", int(1))
            .state("b", int(2))
            .state("c", int(4))
            .threshold(ratio(3, 5))
            .evidence_full()
            .evidence([0, 1])
            .evidence([0])
            .build()
            .unwrap()
    }

    #[test]
    fn discovery_pairs_are_proper_subset_pairs() {
        let m = nested();
        let pairs = enumerate_discoveries(&m);
        let r = |p: &Proposition| m.render(p);
        let rendered: Vec<(String, String)> =
            pairs.iter().map(|(e, e2)| (r(e), r(e2))).collect();
        assert_eq!(
            rendered,
            vec![
                ("{a b}".into(), "{a}".into()),
                ("{a b c}".into(), "{a}".into()),
                ("{a b c}".into(), "{a b}".into()),
            ]
        );
    }

    #[test]
    fn single_evidence_family_has_no_discoveries() {
        let m = StructureBuilder::new()
            .state("a", int(1))
            .threshold(ratio(1, 2))
            .evidence_full()
            .build()
            .unwrap();
        assert!(enumerate_discoveries(&m).is_empty());
        assert_eq!(enumerate_partitions(&m, &m.all_states()), vec![vec![m.all_states()]]);
    }

    #[test]
    fn partitions_are_exact_covers_from_the_family() {
        let m = StructureBuilder::new()
            .state("a", int(1))
            .state("b", int(1))
            .state("c", int(1))
            .state("d", int(1))
            .threshold(ratio(1, 2))
            .evidence_full()
            .evidence([0, 1])
            .evidence([2, 3])
            .evidence([0, 2])
            .evidence([0])
            .evidence([1])
            .build()
            .unwrap();
        let partitions = enumerate_partitions(&m, &m.all_states());
        let rendered: Vec<Vec<String>> = partitions
            .iter()
            .map(|p| p.iter().map(|q| m.render(q)).collect())
            .collect();
        // {a}{b}{cd}, {ab}{cd}, S
        assert_eq!(
            rendered,
            vec![
                vec!["{a}".to_string(), "{b}".into(), "{c d}".into()],
                vec!["{a b}".to_string(), "{c d}".into()],
                vec!["{a b c d}".to_string()],
            ]
        );
    }

    /// Geometric weights 8,4,2,1 at t = 3/5 with a suffix and a prefix in
    /// the evidence family.
    ///
    /// Belief sets: B(S) = {s1 s2}, B({s2 s3 s4}) = {s2 s3},
    /// B({s1 s2}) = {s1}.
    fn mini_chain() -> ProbabilityStructure {
        StructureBuilder::new()
            .state("s1", int(8))
            .state("s2", int(4))
            .state("s3", int(2))
            .state("s4", int(1))
            .threshold(ratio(3, 5))
            .evidence_full()
            .evidence([1, 2, 3])
            .evidence([0, 1])
            .build()
            .unwrap()
    }

    #[test]
    fn diamond_minus_fails_on_the_chain_with_one_witness() {
        let m = mini_chain();
        let v = check_principle(&m, Principle::DiamondMinus, BeliefOperator::Hpd);
        assert_eq!(v.outcome, Outcome::Fails);
        assert_eq!(v.instances_checked, 2);
        let [w] = v.witnesses.as_slice() else {
            panic!("expected exactly one witness, got {}", v.witnesses.len())
        };
        assert_eq!(w.evidence, m.all_states());
        assert_eq!(w.discovery, Proposition::from_indices(4, [1, 2, 3]));
        assert_eq!(m.render(&w.belief_before.states), "{s1 s2}");
        assert_eq!(m.render(&w.belief_after[0].states), "{s2 s3}");
        assert!(replay_witness(&m, Principle::DiamondMinus, BeliefOperator::Hpd, w));
    }

    #[test]
    fn box_plus_fails_on_the_chain_with_one_witness() {
        let m = mini_chain();
        let v = check_principle(&m, Principle::BoxPlus, BeliefOperator::Hpd);
        assert_eq!(v.outcome, Outcome::Fails);
        let [w] = v.witnesses.as_slice() else {
            panic!("expected exactly one witness, got {}", v.witnesses.len())
        };
        assert_eq!(w.discovery, Proposition::from_indices(4, [0, 1]));
        assert_eq!(m.render(&w.belief_after[0].states), "{s1}");
        assert!(replay_witness(&m, Principle::BoxPlus, BeliefOperator::Hpd, w));
    }

    #[test]
    fn remaining_principles_hold_on_the_chain() {
        let m = mini_chain();
        for pr in [
            Principle::DiamondR,
            Principle::BoxMinus,
            Principle::BoxR,
            Principle::PiMinus,
            Principle::PiR,
        ] {
            let v = check_principle(&m, pr, BeliefOperator::Hpd);
            assert_eq!(v.outcome, Outcome::Holds, "{pr} should hold");
            assert!(v.witnesses.is_empty());
        }
    }

    #[test]
    fn verdict_outcome_matches_witnesses() {
        let m = nested();
        for op in BeliefOperator::ALL {
            for pr in Principle::ALL {
                let v = check_principle(&m, pr, op);
                assert_eq!(v.outcome == Outcome::Fails, !v.witnesses.is_empty());
                for w in &v.witnesses {
                    assert!(replay_witness(&m, pr, op, w), "{pr} witness must replay");
                }
            }
        }
    }

    #[test]
    fn principle_names_roundtrip() {
        for pr in Principle::ALL {
            assert_eq!(pr.name().parse::<Principle>().unwrap(), pr);
        }
        assert_eq!("rational-monotony".parse::<Principle>().unwrap(), Principle::DiamondMinus);
        assert_eq!("cut".parse::<Principle>().unwrap(), Principle::BoxPlus);
        assert_eq!("cautious-monotony".parse::<Principle>().unwrap(), Principle::BoxMinus);
        assert!("nonsense".parse::<Principle>().is_err());
    }

    #[test]
    fn klm_aliases_are_fixed() {
        assert_eq!(Principle::DiamondMinus.klm_alias(), Some("rational monotony"));
        assert_eq!(Principle::BoxPlus.klm_alias(), Some("cut"));
        assert_eq!(Principle::BoxMinus.klm_alias(), Some("cautious monotony"));
        for pr in [Principle::DiamondR, Principle::BoxR, Principle::PiMinus, Principle::PiR] {
            assert_eq!(pr.klm_alias(), None);
        }
    }

    #[test]
    fn bounded_flag_reports_skipped_partitions() {
        let m = nested();
        let cfg = CheckConfig { partition_evidence_bound: 2 };
        let v = check_principle_with(&m, Principle::PiMinus, BeliefOperator::Hpd, &cfg);
        assert!(v.bounded);
        assert_eq!(v.instances_checked, 0);
        assert_eq!(v.outcome, Outcome::Holds);
        let v = check_principle_with(&m, Principle::BoxMinus, BeliefOperator::Hpd, &cfg);
        assert!(!v.bounded);
    }
}
