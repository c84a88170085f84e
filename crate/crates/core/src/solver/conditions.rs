use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::diag::Diagnostic;
use crate::engine::DefeasibleProgram;
use crate::literal::Literal;
use crate::ontology::{ElementKind, Model};

use super::candidate::Candidate;
use super::preference::AggregatePreference;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    /// Facts and rules warrant every goal and quality constraint without
    /// contradicting an assumption.
    Entailment,
    /// No other compulsory combination is preferred.
    CompulsoryOptimality,
    /// No candidate on the same combination has more optional content or
    /// better satisfies the preferences.
    OptionalMaximality,
    /// Every chosen softgoal is approximated by a chosen quality constraint.
    ApproxCoverage,
    /// Softgoal preferences are mirrored by quality-constraint preferences.
    PreferenceProjection,
}

impl Condition {
    pub const ALL: [Condition; 5] = [
        Condition::Entailment,
        Condition::CompulsoryOptimality,
        Condition::OptionalMaximality,
        Condition::ApproxCoverage,
        Condition::PreferenceProjection,
    ];

    pub fn number(self) -> u8 {
        self as u8 + 1
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "condition {}", self.number())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub condition: Condition,
    pub passed: bool,
    pub diagnostics: Vec<Diagnostic>,
}

impl Verdict {
    pub fn pass(condition: Condition) -> Self {
        Verdict {
            condition,
            passed: true,
            diagnostics: Vec::new(),
        }
    }

    fn from_diagnostics(condition: Condition, diagnostics: Vec<Diagnostic>) -> Self {
        Verdict {
            condition,
            passed: diagnostics.is_empty(),
            diagnostics,
        }
    }
}

/// Literals whose warrant decides the entailment condition for any
/// candidate: those of goals and quality constraints, and the complements of
/// assumption literals.
pub(crate) fn needed_literals(model: &Model) -> BTreeSet<Literal> {
    let mut out = BTreeSet::new();
    for e in model.elements.values() {
        match e.kind {
            ElementKind::Goal | ElementKind::QualityConstraint => {
                out.extend(model.ground_literals(e));
            }
            ElementKind::DomainAssumption => {
                out.extend(model.ground_literals(e).iter().map(Literal::complement));
            }
            _ => {}
        }
    }
    out
}

/// Warrant results for one set of facts.
#[derive(Debug, Clone)]
pub(crate) enum FactsEval {
    Warrant(BTreeMap<Literal, bool>),
    Inconsistent(Literal),
    Invalid(String),
}

pub(crate) fn evaluate_facts(
    model: &Model,
    facts: &BTreeSet<Literal>,
    needed: &BTreeSet<Literal>,
) -> FactsEval {
    let program = match DefeasibleProgram::from_model(model, facts.iter().cloned()) {
        Ok(p) => p,
        Err(e) => return FactsEval::Invalid(e.to_string()),
    };
    match program.warrant_all(needed) {
        Ok(w) => FactsEval::Warrant(
            needed
                .iter()
                .cloned()
                .zip(w.into_iter().map(|w| w.is_warranted()))
                .collect(),
        ),
        Err(e) => FactsEval::Inconsistent(e.0),
    }
}

pub(crate) fn entailment_verdict(model: &Model, cand: &Candidate, eval: &FactsEval) -> Verdict {
    let warrant = match eval {
        FactsEval::Warrant(w) => w,
        FactsEval::Inconsistent(l) => {
            return Verdict::from_diagnostics(
                Condition::Entailment,
                vec![Diagnostic::error(
                    "cond1.inconsistent_base",
                    format!("facts and strict rules derive both `{l}` and `{}`", l.complement()),
                )],
            )
        }
        FactsEval::Invalid(msg) => {
            return Verdict::from_diagnostics(
                Condition::Entailment,
                vec![Diagnostic::error("cond1.invalid_program", msg.clone())],
            )
        }
    };
    let is = |l: &Literal| warrant.get(l).copied().unwrap_or(false);
    let mut diags = Vec::new();
    for id in cand.goals.iter().chain(&cand.qcs) {
        let e = &model.elements[id];
        for l in model.ground_literals(e) {
            if !is(&l) {
                diags.push(
                    Diagnostic::error(
                        "cond1.unwarranted_goal",
                        format!("`{l}` ({} `{id}`) is not warranted", e.kind),
                    )
                    .about(id),
                );
            }
        }
    }
    for id in &cand.assumptions {
        for l in model.ground_literals(&model.elements[id]) {
            if is(&l.complement()) {
                diags.push(
                    Diagnostic::error(
                        "cond1.assumption_violated",
                        format!("`{}` is warranted, contradicting assumption `{id}`", l.complement()),
                    )
                    .about(id),
                );
            }
        }
    }
    Verdict::from_diagnostics(Condition::Entailment, diags)
}

/// Condition 1: builds the program over the candidate's facts and checks
/// warrant of its goals and quality constraints and of no assumption's
/// complement.
pub fn check_entailment(model: &Model, cand: &Candidate) -> Verdict {
    let eval = evaluate_facts(model, &cand.facts(model), &needed_literals(model));
    entailment_verdict(model, cand, &eval)
}

/// Condition 4: every chosen softgoal has an approximation by a chosen
/// quality constraint.
pub fn check_approx_coverage(model: &Model, cand: &Candidate) -> Verdict {
    let diags = cand
        .softgoals
        .iter()
        .filter(|sg| {
            !model
                .approximations
                .keys()
                .any(|(s, q)| s == *sg && cand.qcs.contains(q))
        })
        .map(|sg| {
            Diagnostic::error(
                "cond4.uncovered_softgoal",
                format!("softgoal `{sg}` is not approximated by any chosen quality constraint"),
            )
            .about(sg)
        })
        .collect();
    Verdict::from_diagnostics(Condition::ApproxCoverage, diags)
}

/// Condition 5: each retained preference between two chosen softgoals is
/// mirrored by a retained preference between chosen quality constraints that
/// approximate them.
pub fn check_preference_projection(
    model: &Model,
    agg: &AggregatePreference,
    cand: &Candidate,
) -> Verdict {
    let approximating = |sg: &str| -> Vec<&String> {
        model
            .approximations
            .keys()
            .filter(|(s, q)| s == sg && cand.qcs.contains(q))
            .map(|(_, q)| q)
            .collect()
    };
    let diags = agg
        .orders
        .iter()
        .filter(|o| o.kind == ElementKind::Softgoal)
        .filter(|o| cand.softgoals.contains(&o.preferred) && cand.softgoals.contains(&o.dispreferred))
        .filter(|o| {
            let (qa, qb) = (approximating(&o.preferred), approximating(&o.dispreferred));
            !qa.iter()
                .any(|a| qb.iter().any(|b| agg.prefers(a, b)))
        })
        .map(|o| {
            Diagnostic::error(
                "cond5.unprojected_preference",
                format!(
                    "softgoal preference `{}` ({} over {}) has no matching preference between \
                     approximating quality constraints",
                    o.id, o.preferred, o.dispreferred
                ),
            )
            .about(&o.id)
        })
        .collect();
    Verdict::from_diagnostics(Condition::PreferenceProjection, diags)
}
