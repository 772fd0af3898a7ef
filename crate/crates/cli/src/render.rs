//! Text and JSON rendering for every verb.
//!
//! JSON is the machine interface: rationals appear as exact `"p/q"`
//! strings (never floats), sets as arrays of state names in index
//! order. Text output is line oriented and stable; nothing in either
//! format depends on wall-clock time.

use doxa_core::{
    BeliefSet, ConstraintReport, ProbabilityStructure, Proposition, Rational, Verdict,
    ViolationDetail, Witness,
};
use serde_json::{json, Value};

/// Exact `p/q` form, denominator always explicit.
pub fn rational_str(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn names(m: &ProbabilityStructure, p: &Proposition) -> Vec<String> {
    p.iter().map(|s| m.state_name(s).to_string()).collect()
}

fn belief_value(m: &ProbabilityStructure, b: &BeliefSet) -> Value {
    json!({
        "states": names(m, &b.states),
        "mass": rational_str(&b.mass_given_evidence),
    })
}

pub fn witness_value(m: &ProbabilityStructure, w: &Witness) -> Value {
    let partition: Value = match &w.partition {
        Some(ps) => Value::Array(ps.iter().map(|p| json!(names(m, p))).collect()),
        None => Value::Null,
    };
    json!({
        "evidence": names(m, &w.evidence),
        "discovery": names(m, &w.discovery),
        "partition": partition,
        "belief_before": belief_value(m, &w.belief_before),
        "belief_after": w.belief_after.iter().map(|b| belief_value(m, b)).collect::<Vec<_>>(),
        "detail": w.detail,
    })
}

pub fn verdict_value(m: &ProbabilityStructure, v: &Verdict) -> Value {
    json!({
        "principle": v.principle.name(),
        "symbol": v.principle.symbol(),
        "outcome": if v.witnesses.is_empty() { "holds" } else { "fails" },
        "instances_checked": v.instances_checked,
        "bounded": v.bounded,
        "witnesses": v.witnesses.iter().map(|w| witness_value(m, w)).collect::<Vec<_>>(),
    })
}

pub fn verdict_text(v: &Verdict) -> String {
    let mut line = format!("{} {}: ", v.principle.name(), v.principle.symbol());
    if v.witnesses.is_empty() {
        line.push_str(&format!("holds ({} instances)", v.instances_checked));
    } else {
        line.push_str(&format!(
            "fails ({} witness{}, {} instances)",
            v.witnesses.len(),
            if v.witnesses.len() == 1 { "" } else { "es" },
            v.instances_checked
        ));
    }
    if v.bounded {
        line.push_str(" [partition enumeration bounded]");
    }
    for w in &v.witnesses {
        line.push_str("\n  ");
        line.push_str(&w.detail);
    }
    line
}

pub fn violation_text(m: &ProbabilityStructure, r: &ConstraintReport) -> String {
    let mut out = if r.holds {
        format!("{}: holds ({} instances)", r.constraint, r.instances_checked)
    } else {
        format!(
            "{}: fails ({} violation{}, {} instances)",
            r.constraint,
            r.violations.len(),
            if r.violations.len() == 1 { "" } else { "s" },
            r.instances_checked
        )
    };
    for v in &r.violations {
        match &v.detail {
            ViolationDetail::RatioShift { state_a, state_b, prior_ratio, conditional_ratio } => {
                out.push_str(&format!(
                    "\n  upon {}: answers at {} and {} had prior ratio {}, conditional ratio {}",
                    m.render(&v.evidence),
                    m.state_name(*state_a),
                    m.state_name(*state_b),
                    prior_ratio,
                    conditional_ratio
                ));
            }
            ViolationDetail::UnstableUnion { cells, union, prior, conditional } => {
                let ids: Vec<String> = cells.iter().map(|k| format!("#{}", k + 1)).collect();
                out.push_str(&format!(
                    "\n  upon {}: union {} of cells {} had prior mass {}, conditional mass {}",
                    m.render(&v.evidence),
                    m.render(union),
                    ids.join(" "),
                    prior,
                    conditional
                ));
            }
        }
    }
    out
}

pub fn report_value(m: &ProbabilityStructure, r: &ConstraintReport) -> Value {
    let violations: Vec<Value> = r
        .violations
        .iter()
        .map(|v| {
            let mut obj = match &v.detail {
                ViolationDetail::RatioShift {
                    state_a,
                    state_b,
                    prior_ratio,
                    conditional_ratio,
                } => json!({
                    "kind": "ratio-shift",
                    "state_a": m.state_name(*state_a),
                    "state_b": m.state_name(*state_b),
                    "prior_ratio": rational_str(prior_ratio),
                    "conditional_ratio": rational_str(conditional_ratio),
                }),
                ViolationDetail::UnstableUnion { cells, union, prior, conditional } => json!({
                    "kind": "unstable-union",
                    "cells": cells,
                    "union": names(m, union),
                    "prior": rational_str(prior),
                    "conditional": rational_str(conditional),
                }),
            };
            obj.as_object_mut()
                .expect("violation objects are maps")
                .insert("evidence".into(), json!(names(m, &v.evidence)));
            obj
        })
        .collect();
    json!({
        "holds": r.holds,
        "instances_checked": r.instances_checked,
        "violations": violations,
    })
}
