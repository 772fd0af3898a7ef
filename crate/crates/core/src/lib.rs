//! Question-relative belief revision over finite probability structures.

pub mod belief;
pub mod corpus;
pub mod dsl;
pub mod principles;
pub mod properties;
pub mod rational;
pub mod search;
pub mod structure;

pub use belief::{belief, believes, belief_set, hpd_oracle, lk_belief_set, BeliefOperator, BeliefSet};
pub use corpus::{
    make_appendix, make_drawing_card, make_drawing_card_v2, make_flipping, make_hundred_flips,
    CardQuestion, CorpusError, CorpusId, FlipsQuestion,
};
pub use dsl::{parse, serialize, ParseError, ParseErrorKind, SourceSpan};
pub use principles::{
    check_all, check_all_with, check_principle, check_principle_with, enumerate_discoveries,
    enumerate_partitions, replay_witness, CheckConfig, Outcome, Principle, Verdict, Witness,
};
pub use properties::{
    check_constraint, check_orthogonality, check_stability, check_stability_bounded,
    replay_violation, Constraint, ConstraintReport, ConstraintViolation, StabilityError,
    ViolationDetail,
};
pub use rational::{parse_rational, ratio, Rational};
pub use search::{
    generate_random, search_countermodel, shrink, ConstraintFilter, GenError, GenMode,
    GeneratorConfig, SearchResult, ShrinkError,
};
pub use structure::{
    Discovery, EvalError, ProbabilityStructure, Proposition, Question, StateId, StructureBuilder,
    ValidationError,
};
