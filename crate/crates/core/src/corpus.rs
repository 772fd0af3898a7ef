//! Named example structures.
//!
//! Each constructor builds one of the fixed scenarios the rest of the test
//! suite leans on: the coin-flipping chain with geometric weights, the two
//! card-drawing setups, the hundred-flips binomial family, and three small
//! models exhibiting specific principle failures. All weights are exact.

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::One;
use thiserror::Error;

use crate::rational::{ratio, Rational};
use crate::structure::{ProbabilityStructure, Proposition, Question, StructureBuilder, ValidationError};

/// The named structures shipped as fixtures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CorpusId {
    FlippingForHeads,
    FlippingWithWalkaway,
    DrawingCard,
    DrawingCardQPrime,
    DrawingCardQDoublePrime,
    DrawingCardV2,
    HundredFlips,
    PiMinusCounter,
    StabilityBoxPlus,
    StabilityDiamondMinus,
}

impl CorpusId {
    pub const ALL: [CorpusId; 10] = [
        CorpusId::FlippingForHeads,
        CorpusId::FlippingWithWalkaway,
        CorpusId::DrawingCard,
        CorpusId::DrawingCardQPrime,
        CorpusId::DrawingCardQDoublePrime,
        CorpusId::DrawingCardV2,
        CorpusId::HundredFlips,
        CorpusId::PiMinusCounter,
        CorpusId::StabilityBoxPlus,
        CorpusId::StabilityDiamondMinus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CorpusId::FlippingForHeads => "flipping-for-heads",
            CorpusId::FlippingWithWalkaway => "flipping-with-walkaway",
            CorpusId::DrawingCard => "drawing-card",
            CorpusId::DrawingCardQPrime => "drawing-card-q-prime",
            CorpusId::DrawingCardQDoublePrime => "drawing-card-q-double-prime",
            CorpusId::DrawingCardV2 => "drawing-card-v2",
            CorpusId::HundredFlips => "hundred-flips",
            CorpusId::PiMinusCounter => "pi-minus-counter",
            CorpusId::StabilityBoxPlus => "stability-box-plus",
            CorpusId::StabilityDiamondMinus => "stability-diamond-minus",
        }
    }

    /// The structure with this id's documented default parameters.
    pub fn structure(self) -> ProbabilityStructure {
        let built = match self {
            CorpusId::FlippingForHeads => make_flipping(30, ratio(99, 100), false),
            CorpusId::FlippingWithWalkaway => make_flipping(30, ratio(99, 100), true),
            CorpusId::DrawingCard => Ok(make_drawing_card(CardQuestion::Q)),
            CorpusId::DrawingCardQPrime => Ok(make_drawing_card(CardQuestion::QPrime)),
            CorpusId::DrawingCardQDoublePrime => {
                Ok(make_drawing_card(CardQuestion::QDoublePrime))
            }
            CorpusId::DrawingCardV2 => make_drawing_card_v2(ratio(3, 10)),
            CorpusId::HundredFlips => make_hundred_flips(100, FlipsQuestion::Count, ratio(999, 1000)),
            CorpusId::PiMinusCounter
            | CorpusId::StabilityBoxPlus
            | CorpusId::StabilityDiamondMinus => make_appendix(self),
        };
        built.expect("default corpus parameters are valid")
    }
}

impl std::fmt::Display for CorpusId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for CorpusId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CorpusId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = CorpusId::ALL.iter().map(|id| id.name()).collect();
                format!("unknown example `{s}` (expected one of: {})", names.join(", "))
            })
    }
}

/// Question variants for the card-drawing structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CardQuestion {
    /// Is the deck fair: {fair states | trick state}.
    Q,
    /// Is the deck fair and will the Ace of Spades be drawn.
    QPrime,
    /// Maximally fine-grained: singletons.
    QDoublePrime,
}

/// Question variants for the hundred-flips structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlipsQuestion {
    /// How many heads in total: one cell per count.
    Count,
    /// Will heads come up more than ⌈0.9n⌉ times: two cells.
    Polar,
    /// The full sequence space with a singleton question (small n only).
    Sequence,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorpusError {
    #[error("infeasible corpus parameters: {0}")]
    InfeasibleConfig(String),
    #[error("{0} is not one of the three appendix models")]
    NotAnAppendixModel(CorpusId),
    #[error(transparent)]
    Invalid(#[from] ValidationError),
}

/// Coin flipped until it lands heads, truncated to `n` states.
///
/// State `s_i` is "first heads on flip i" with weight `2^(-i)`; the last
/// state carries the whole remaining tail, `2^(-(n-1))`, so the masses sum
/// to 1. The question is maximally fine-grained and the evidence family
/// holds every suffix `{s_i, …, s_n}` ("the first i−1 flips landed tails").
/// With `walkaway`, the family additionally contains `{s1,…,s7}` ("the coin
/// landed heads within the first seven flips").
///
/// Requires `n ≥ 16` so the tail lump stays far from the believed region.
pub fn make_flipping(
    n: usize,
    t: Rational,
    walkaway: bool,
) -> Result<ProbabilityStructure, CorpusError> {
    if n < 16 {
        return Err(CorpusError::InfeasibleConfig(format!(
            "flipping needs at least 16 states, got {n}"
        )));
    }
    let mut b = StructureBuilder::new();
    for i in 1..=n {
        let exponent = if i < n { i } else { n - 1 };
        b = b.state(format!("s{i}"), Rational::new(BigInt::one(), BigInt::one() << exponent));
    }
    for i in 0..n {
        b = b.evidence(i..n);
    }
    if walkaway {
        b = b.evidence(0..7);
    }
    Ok(b.threshold(t).build()?)
}

/// Deck that is 90% likely fair, 10% likely all Aces of Spades.
///
/// States `F1..F52` (fair deck, card j drawn) with weight 9/520 each and
/// `T` (trick deck) with weight 52/520 = 1/10. Evidence: the full set, each
/// non-Ace draw `{F_j}` for j ≤ 51, and the Ace draw `{F52, T}`. Threshold
/// 17/20.
pub fn make_drawing_card(question: CardQuestion) -> ProbabilityStructure {
    let mut b = StructureBuilder::new();
    for j in 1..=52 {
        b = b.state(format!("F{j}"), ratio(9, 520));
    }
    b = b.state("T", ratio(52, 520));
    b = match question {
        CardQuestion::Q => b.cell(0..52).cell([52]),
        CardQuestion::QPrime => b.cell(0..51).cell([51]).cell([52]),
        CardQuestion::QDoublePrime => b,
    };
    b = b.evidence_full();
    for j in 0..51 {
        b = b.evidence([j]);
    }
    b = b.evidence([51, 52]);
    b.threshold(ratio(17, 20)).build().expect("fixed card model is valid")
}

/// One fair deck against 52 one-card trick decks.
///
/// States `fair_j` (fair deck, card j drawn) with weight 1/260 and
/// `trick_j` (trick deck j) with weight 4/260, so the fair deck carries 1/5
/// overall. The question is which of the 53 decks is held; discovering the
/// drawn card gives `E_j = {fair_j, trick_j}`.
pub fn make_drawing_card_v2(t: Rational) -> Result<ProbabilityStructure, CorpusError> {
    let mut b = StructureBuilder::new();
    for j in 1..=52 {
        b = b.state(format!("fair{j}"), ratio(1, 260));
    }
    for j in 1..=52 {
        b = b.state(format!("trick{j}"), ratio(4, 260));
    }
    b = b.cell(0..52);
    for j in 0..52 {
        b = b.cell([52 + j]);
    }
    b = b.evidence_full();
    for j in 0..52 {
        b = b.evidence([j, 52 + j]);
    }
    Ok(b.threshold(t).build()?)
}

/// Fair coin flipped `n` times, watched throughout.
///
/// For the `Count` and `Polar` questions, states are pairs of (first flip,
/// total heads): `H{k}` has first flip heads and `k ≥ 1` heads in total
/// (weight `C(n−1, k−1)`), `T{k}` has first flip tails and `k ≤ n−1` heads
/// (weight `C(n−1, k)`). Weights are left unnormalized; they sum to `2^n`.
/// Evidence: the full set, first flip heads, first flip tails. `Sequence`
/// instead builds the full `2^n` space of H/T strings with a singleton
/// question (capped at n = 12).
pub fn make_hundred_flips(
    n: usize,
    question: FlipsQuestion,
    t: Rational,
) -> Result<ProbabilityStructure, CorpusError> {
    match question {
        FlipsQuestion::Count | FlipsQuestion::Polar => {
            if n < 2 || n > 100 {
                return Err(CorpusError::InfeasibleConfig(format!(
                    "count/polar questions need 2 ≤ n ≤ 100 flips, got {n}"
                )));
            }
            let mut b = StructureBuilder::new();
            let choose = |k: usize| {
                Rational::from_integer(binomial(BigInt::from(n - 1), BigInt::from(k)))
            };
            for k in 1..=n {
                b = b.state(format!("H{k}"), choose(k - 1));
            }
            for k in 0..n {
                b = b.state(format!("T{k}"), choose(k));
            }
            // state index of heads-count k: H{k} at k−1, T{k} at n+k
            b = match question {
                FlipsQuestion::Count => {
                    let mut b = b.cell([n]); // k = 0: only T0
                    for k in 1..n {
                        b = b.cell([k - 1, n + k]);
                    }
                    b.cell([n - 1]) // k = n: only Hn
                }
                FlipsQuestion::Polar => {
                    let cut = (9 * n).div_ceil(10); // believe "not more than ⌈0.9n⌉ heads"
                    if cut >= n {
                        return Err(CorpusError::InfeasibleConfig(format!(
                            "polar question needs ⌈0.9n⌉ < n, got n = {n}"
                        )));
                    }
                    let high: Vec<usize> = ((cut + 1)..=n)
                        .map(|k| k - 1)
                        .chain(((cut + 1)..n).map(|k| n + k))
                        .collect();
                    let low: Vec<usize> =
                        (1..=cut).map(|k| k - 1).chain((0..=cut).map(|k| n + k)).collect();
                    b.cell(high).cell(low)
                }
                FlipsQuestion::Sequence => unreachable!(),
            };
            b = b.evidence_full().evidence(0..n).evidence(n..2 * n);
            Ok(b.threshold(t).build()?)
        }
        FlipsQuestion::Sequence => {
            if n < 1 || n > 12 {
                return Err(CorpusError::InfeasibleConfig(format!(
                    "sequence question needs 1 ≤ n ≤ 12 flips, got {n}"
                )));
            }
            let count = 1usize << n;
            let mut b = StructureBuilder::new();
            for idx in 0..count {
                let name: String = (0..n)
                    .map(|flip| if idx >> (n - 1 - flip) & 1 == 0 { 'H' } else { 'T' })
                    .collect();
                b = b.state(name, Rational::one());
            }
            b = b.evidence_full().evidence(0..count / 2).evidence(count / 2..count);
            Ok(b.threshold(t).build()?)
        }
    }
}

/// The three small principle-failure models.
///
/// * `PiMinusCounter`: six uniform states, question
///   `{s1 s2 | s3 s4 | s5 | s6}`, evidence halves `{s1 s3 s5}` and
///   `{s2 s4 s6}`, t = 13/20. Both halves force beliefs to be given up.
/// * `StabilityBoxPlus`: weights 9/10, 9/100, 1/100 over `{a b c}`,
///   singleton question, evidence `{a b}`, t = 9001/10000. Stable, yet
///   discovering the believed `{a b}` adds a belief.
/// * `StabilityDiamondMinus`: three answers A, B, C split into an in-E and
///   an out-of-E state each, weights 1/6 inside and 1/3, 2/15, 1/30
///   outside, t = 11/20. Stable but not orthogonal; discovering E keeps
///   compatibility yet drops the belief in A-or-B.
pub fn make_appendix(id: CorpusId) -> Result<ProbabilityStructure, CorpusError> {
    let m = match id {
        CorpusId::PiMinusCounter => {
            let mut b = StructureBuilder::new();
            for i in 1..=6 {
                b = b.state(format!("s{i}"), Rational::one());
            }
            b.cell([0, 1])
                .cell([2, 3])
                .cell([4])
                .cell([5])
                .evidence_full()
                .evidence([0, 2, 4])
                .evidence([1, 3, 5])
                .threshold(ratio(13, 20))
                .build()?
        }
        CorpusId::StabilityBoxPlus => StructureBuilder::new()
            .state("a", ratio(9, 10))
            .state("b", ratio(9, 100))
            .state("c", ratio(1, 100))
            .evidence_full()
            .evidence([0, 1])
            .threshold(ratio(9001, 10_000))
            .build()?,
        CorpusId::StabilityDiamondMinus => StructureBuilder::new()
            .state("A_in", ratio(1, 6))
            .state("A_out", ratio(1, 3))
            .state("B_in", ratio(1, 6))
            .state("B_out", ratio(2, 15))
            .state("C_in", ratio(1, 6))
            .state("C_out", ratio(1, 30))
            .cell([0, 1])
            .cell([2, 3])
            .cell([4, 5])
            .evidence_full()
            .evidence([0, 2, 4])
            .threshold(ratio(11, 20))
            .build()?,
        other => return Err(CorpusError::NotAnAppendixModel(other)),
    };
    Ok(m)
}

/// Helper for tests and the CLI: the proposition of all states whose name
/// passes a predicate.
pub fn states_named(
    m: &ProbabilityStructure,
    pred: impl Fn(&str) -> bool,
) -> Proposition {
    m.proposition_matching(|_, name| pred(name))
}

/// The question of a structure replaced by singletons (used to realize the
/// card model's finest-grained variant in tests).
pub fn with_singleton_question(
    m: &ProbabilityStructure,
) -> Result<ProbabilityStructure, ValidationError> {
    m.with_question(Question::singletons(m.state_count()))
}
