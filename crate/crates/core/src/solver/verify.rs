//! Independent audit of solutions.
//!
//! Shares no enumeration or condition code with [`super::solve`]: candidates
//! come from a plain bitmask scan, warrant from the brute-force reference
//! engine, and the coverage and projection conditions are recomputed here.
//! Preference resolution and the dominance relation itself are shared, since
//! they define what a solution is.

use std::collections::{BTreeMap, BTreeSet};

use crate::engine::reference::{ReferenceEngine, ReferenceError};
use crate::engine::DefeasibleProgram;
use crate::literal::Literal;
use crate::ontology::{ElementKind, Model, Optionality};

use super::candidate::{group_label, Candidate, CompulsoryCombo};
use super::preference::{dominates, resolve_meta_preferences, AggregatePreference};
use super::Solution;

/// Largest number of optional elements the bitmask scan accepts.
const MAX_OPTIONAL: usize = 20;

fn closure(facts: &BTreeSet<Literal>, model: &Model) -> BTreeSet<Literal> {
    let mut known = facts.clone();
    loop {
        let before = known.len();
        for r in model.strict_rules() {
            if r.body.iter().all(|b| known.contains(b)) {
                known.insert(r.head.clone());
            }
        }
        if known.len() == before {
            return known;
        }
    }
}

fn literals_of<'a>(model: &Model, ids: impl IntoIterator<Item = &'a String>) -> BTreeSet<Literal> {
    ids.into_iter()
        .filter_map(|id| model.elements.get(id))
        .flat_map(|e| model.ground_literals(e))
        .collect()
}

/// Every structurally valid candidate, or `None` when there are more than
/// 20 optional elements.
pub fn all_candidates(model: &Model) -> Option<Vec<Candidate>> {
    let compulsory: Vec<&String> = model
        .elements
        .values()
        .filter(|e| model.optionality_of(e) == Optionality::Compulsory)
        .map(|e| &e.id)
        .collect();
    let optional: Vec<&String> = model
        .elements
        .values()
        .filter(|e| model.optionality_of(e) == Optionality::Optional)
        .map(|e| &e.id)
        .collect();
    if optional.len() > MAX_OPTIONAL {
        return None;
    }

    // combinations of compulsory choices, by recursion over the groups
    let groups: Vec<&BTreeSet<String>> = model
        .alternatives
        .iter()
        .filter(|g| g.iter().any(|m| compulsory.contains(&m)))
        .collect();
    let fixed: BTreeSet<String> = compulsory
        .iter()
        .filter(|id| !model.alternatives.iter().any(|g| g.contains(**id)))
        .map(|id| (*id).clone())
        .collect();
    let mut combos: Vec<CompulsoryCombo> = Vec::new();
    fn pick(
        model: &Model,
        compulsory: &[&String],
        groups: &[&BTreeSet<String>],
        chosen: &mut BTreeMap<String, String>,
        fixed: &BTreeSet<String>,
        out: &mut Vec<CompulsoryCombo>,
    ) {
        let Some((g, rest)) = groups.split_first() else {
            let ids: Vec<&String> = fixed.iter().chain(chosen.values()).collect();
            let cl = closure(&literals_of(model, ids), model);
            if !cl.iter().any(|l| cl.contains(&l.complement())) {
                out.push(CompulsoryCombo {
                    chosen: chosen.clone(),
                    fixed: fixed.clone(),
                });
            }
            return;
        };
        for m in g.iter().filter(|m| compulsory.contains(m)) {
            chosen.insert(group_label(g), m.clone());
            pick(model, compulsory, rest, chosen, fixed, out);
        }
        chosen.remove(&group_label(g));
    }
    pick(model, &compulsory, &groups, &mut BTreeMap::new(), &fixed, &mut combos);

    let mut out = Vec::new();
    for combo in &combos {
        'mask: for mask in 0u32..(1 << optional.len()) {
            let extra: Vec<&str> = optional
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, id)| id.as_str())
                .collect();
            for g in &model.alternatives {
                let taken = g.iter().filter(|m| combo.contains(m)).count()
                    + extra.iter().filter(|id| g.contains(**id)).count();
                if taken > 1 {
                    continue 'mask;
                }
            }
            out.push(Candidate::new(model, combo.clone(), extra));
        }
    }
    Some(out)
}

/// Warranted literals for the candidate's facts, via the reference engine
/// when it is small enough. `None` when the facts are contradictory.
fn reference_consequences(model: &Model, cand: &Candidate) -> Option<BTreeSet<Literal>> {
    let program = DefeasibleProgram::from_model(model, cand.facts(model)).ok()?;
    match ReferenceEngine::new(&program) {
        Ok(r) => Some(r.consequences()),
        Err(ReferenceError::Inconsistent(_)) => None,
        Err(ReferenceError::TooLarge(_)) => program.consequences().ok(),
    }
}

fn entailment_holds(model: &Model, cand: &Candidate, warranted: &BTreeSet<Literal>) -> bool {
    let required = literals_of(model, cand.goals.iter().chain(&cand.qcs));
    let assumed = literals_of(model, &cand.assumptions);
    required.is_subset(warranted) && !assumed.iter().any(|k| warranted.contains(&k.complement()))
}

fn coverage_holds(model: &Model, cand: &Candidate) -> bool {
    cand.softgoals.iter().all(|sg| {
        model
            .approximations
            .values()
            .any(|a| &a.softgoal == sg && cand.qcs.contains(&a.qc))
    })
}

fn projection_holds(model: &Model, agg: &AggregatePreference, cand: &Candidate) -> bool {
    let approx: Vec<(&String, &String)> = model
        .approximations
        .values()
        .filter(|a| cand.softgoals.contains(&a.softgoal) && cand.qcs.contains(&a.qc))
        .map(|a| (&a.softgoal, &a.qc))
        .collect();
    agg.orders
        .iter()
        .filter(|o| o.kind == ElementKind::Softgoal)
        .filter(|o| cand.softgoals.contains(&o.preferred) && cand.softgoals.contains(&o.dispreferred))
        .all(|o| {
            approx.iter().any(|(sa, qa)| {
                **sa == o.preferred
                    && approx
                        .iter()
                        .any(|(sb, qb)| **sb == o.dispreferred && agg.prefers(qa, qb))
            })
        })
}

/// Re-checks a solution from scratch: its candidate is well formed, all five
/// verdicts pass, its warranted set matches the reference engine, conditions
/// 1, 4 and 5 hold, and no feasible candidate dominates it.
pub fn verify_solution(model: &Model, s: &Solution) -> bool {
    let Some(all) = all_candidates(model) else {
        return false;
    };
    let cand = &s.candidate;
    if !all.contains(cand) {
        return false;
    }
    if s.verdicts.len() != 5 || s.verdicts.iter().any(|v| !v.passed) {
        return false;
    }
    let (agg, _) = resolve_meta_preferences(model);
    let Some(warranted) = reference_consequences(model, cand) else {
        return false;
    };
    if warranted != s.warranted
        || !entailment_holds(model, cand, &warranted)
        || !coverage_holds(model, cand)
        || !projection_holds(model, &agg, cand)
    {
        return false;
    }
    let mut cache: BTreeMap<BTreeSet<Literal>, Option<BTreeSet<Literal>>> = BTreeMap::new();
    for other in &all {
        if other == cand || !dominates(other, cand, &agg) {
            continue;
        }
        if !coverage_holds(model, other) || !projection_holds(model, &agg, other) {
            continue;
        }
        let w = cache
            .entry(other.facts(model))
            .or_insert_with(|| reference_consequences(model, other));
        if w.as_ref().is_some_and(|w| entailment_holds(model, other, w)) {
            return false;
        }
    }
    true
}
