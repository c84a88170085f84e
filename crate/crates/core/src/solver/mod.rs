//! Selecting specifications.
//!
//! A candidate picks one compulsory member per alternatives group, all other
//! compulsory elements, and some optional ones. It is feasible when its
//! assumptions and plans warrant its goals and quality constraints without
//! contradicting an assumption (condition 1), every chosen softgoal is
//! approximated by a chosen quality constraint (condition 4), and softgoal
//! preferences are mirrored by quality-constraint preferences (condition 5).
//! Solutions are the feasible candidates no other feasible candidate
//! dominates (conditions 2 and 3).

mod candidate;
mod conditions;
mod enumerate;
mod preference;
mod verify;
mod zj;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::ops::ControlFlow;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::diag::Diagnostic;
use crate::engine::{DefeasibleProgram, ProgramError};
use crate::literal::Literal;
use crate::ontology::Model;

pub use candidate::{parse_signature, Candidate, CompulsoryCombo};
pub use conditions::{
    check_approx_coverage, check_entailment, check_preference_projection, Condition, Verdict,
};
pub use enumerate::enumerate_compulsory_combinations;
pub use preference::{dominates, resolve_meta_preferences, AggregatePreference, PreferenceOrder};
pub use verify::{all_candidates, verify_solution};
pub use zj::{classically_entails, zj_mode, ZjError};

use conditions::{entailment_verdict, evaluate_facts, needed_literals, FactsEval};

pub const DEFAULT_MAX_CANDIDATES: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    /// Stop after examining this many candidates.
    pub max_candidates: usize,
    /// Return every non-dominated candidate rather than the first one.
    pub all_solutions: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            max_candidates: DEFAULT_MAX_CANDIDATES,
            all_solutions: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("no combination of compulsory elements is consistent")]
    UnsatisfiableCore,
}

impl SolveError {
    pub fn code(&self) -> &'static str {
        match self {
            SolveError::UnsatisfiableCore => "solve.unsatisfiable_core",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Solution {
    pub candidate: Candidate,
    /// One verdict per condition, in condition order.
    pub verdicts: Vec<Verdict>,
    /// Every literal warranted by the candidate's facts and the model rules.
    pub warranted: BTreeSet<Literal>,
}

#[derive(Debug, Clone)]
pub struct SolveOutcome {
    /// Sorted by candidate signature.
    pub solutions: Vec<Solution>,
    pub aggregate: AggregatePreference,
    pub diagnostics: Vec<Diagnostic>,
    /// False when the candidate budget cut enumeration short.
    pub exhaustive: bool,
    pub examined: usize,
    pub feasible: usize,
    pub dominated: usize,
}

impl SolveOutcome {
    pub fn budget_exceeded(&self) -> bool {
        !self.exhaustive
    }
}

fn progress(v: &[Verdict; 3]) -> usize {
    v.iter().take_while(|v| v.passed).count()
}

pub fn solve(model: &Model, options: &SolveOptions) -> Result<SolveOutcome, SolveError> {
    let (agg, mut diagnostics) = resolve_meta_preferences(model);
    let combos = enumerate_compulsory_combinations(model)?;

    let mut cands: Vec<Candidate> = Vec::new();
    let mut exhaustive = true;
    enumerate::for_each_candidate(model, &combos, |c| {
        if cands.len() >= options.max_candidates {
            exhaustive = false;
            return ControlFlow::Break(());
        }
        cands.push(c);
        ControlFlow::Continue(())
    });

    // candidates sharing facts share one warrant computation
    let needed = needed_literals(model);
    let facts: Vec<BTreeSet<Literal>> = cands.iter().map(|c| c.facts(model)).collect();
    let distinct: Vec<&BTreeSet<Literal>> = facts.iter().collect::<BTreeSet<_>>().into_iter().collect();
    let evals: HashMap<&BTreeSet<Literal>, FactsEval> = distinct
        .par_iter()
        .map(|f| (*f, evaluate_facts(model, f, &needed)))
        .collect();
    let checked: Vec<[Verdict; 3]> = cands
        .par_iter()
        .zip(facts.par_iter())
        .map(|(c, f)| {
            [
                entailment_verdict(model, c, &evals[f]),
                check_approx_coverage(model, c),
                check_preference_projection(model, &agg, c),
            ]
        })
        .collect();

    let feasible: Vec<usize> = (0..cands.len())
        .filter(|&i| checked[i].iter().all(|v| v.passed))
        .collect();
    let mut winners: Vec<usize> = feasible
        .par_iter()
        .copied()
        .filter(|&i| {
            !feasible
                .iter()
                .any(|&j| j != i && dominates(&cands[j], &cands[i], &agg))
        })
        .collect();
    winners.sort_by_cached_key(|&i| cands[i].signature());
    let dominated = feasible.len() - winners.len();
    if !options.all_solutions {
        winners.truncate(1);
    }

    if !exhaustive {
        diagnostics.push(Diagnostic::warning(
            "solve.budget_exceeded",
            format!(
                "stopped after {} candidates; results are not exhaustive",
                options.max_candidates
            ),
        ));
    }
    if feasible.is_empty() {
        diagnostics.push(Diagnostic::error(
            "solve.no_solution",
            "no candidate satisfies conditions 1, 4 and 5",
        ));
        // per combination, report the candidate that got furthest
        let mut best: BTreeMap<&CompulsoryCombo, usize> = BTreeMap::new();
        for (i, c) in cands.iter().enumerate() {
            let e = best.entry(&c.combo).or_insert(i);
            if progress(&checked[i]) > progress(&checked[*e]) {
                *e = i;
            }
        }
        for (combo, i) in best {
            let failing = checked[i].iter().find(|v| !v.passed).expect("infeasible");
            for d in &failing.diagnostics {
                let mut d = d.clone();
                d.message = format!(
                    "combination [{}]: {} fails: {}",
                    combo.label(),
                    failing.condition,
                    d.message
                );
                diagnostics.push(d);
            }
        }
    }

    let solutions = winners
        .into_iter()
        .map(|i| {
            let c = &cands[i];
            let warranted = DefeasibleProgram::from_model(model, facts[i].iter().cloned())
                .ok()
                .and_then(|p| p.consequences().ok())
                .unwrap_or_default();
            let [c1, c4, c5] = checked[i].clone();
            Solution {
                candidate: c.clone(),
                verdicts: vec![
                    c1,
                    Verdict::pass(Condition::CompulsoryOptimality),
                    Verdict::pass(Condition::OptionalMaximality),
                    c4,
                    c5,
                ],
                warranted,
            }
        })
        .collect();

    Ok(SolveOutcome {
        solutions,
        aggregate: agg,
        diagnostics,
        exhaustive,
        examined: cands.len(),
        feasible: feasible.len(),
        dominated,
    })
}

/// The first compulsory combination with no optional content.
pub fn default_candidate(model: &Model) -> Result<Candidate, SolveError> {
    let combos = enumerate_compulsory_combinations(model)?;
    let combo = combos.into_iter().next().expect("at least one combination");
    Ok(Candidate::new(model, combo, std::iter::empty()))
}

/// The defeasible program a candidate reasons with.
pub fn program_for(model: &Model, cand: &Candidate) -> Result<DefeasibleProgram, ProgramError> {
    DefeasibleProgram::from_model(model, cand.facts(model))
}
