//! Aggregate preference: meta-preference resolution and candidate dominance.
//!
//! Each element-level preference `a ≻ b` is read as a boolean criterion: a
//! candidate satisfies it iff it contains `a`. Candidates are compared by
//! Pareto dominance over the retained criteria.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::diag::Diagnostic;
use crate::engine::consistent;
use crate::literal::Literal;
use crate::ontology::{AttitudeForm, ElementKind, Model, Optionality};

use super::candidate::Candidate;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PreferenceOrder {
    pub id: String,
    pub preferred: String,
    pub dispreferred: String,
    pub kind: ElementKind,
    pub optionality: Optionality,
}

/// Preferences retained after conflict resolution, with what dominance needs
/// to know about optional elements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AggregatePreference {
    pub effective: BTreeSet<String>,
    /// Dropped preference to the preference it lost against.
    pub dropped: BTreeMap<String, String>,
    /// Conflicting pairs no meta-preference or optionality decides.
    pub unresolved: BTreeSet<(String, String)>,
    /// Effective orders, by id.
    pub orders: Vec<PreferenceOrder>,
    /// Optional elements of kinds whose inclusion is maximized.
    pub gains: BTreeSet<String>,
    /// Optional elements some stakeholder disfavors.
    pub penalties: BTreeSet<String>,
}

impl AggregatePreference {
    pub fn is_effective(&self, id: &str) -> bool {
        self.effective.contains(id)
    }

    /// Is there an effective preference `preferred ≻ dispreferred`?
    pub fn prefers(&self, preferred: &str, dispreferred: &str) -> bool {
        self.orders
            .iter()
            .any(|o| o.preferred == preferred && o.dispreferred == dispreferred)
    }
}

/// Kinds whose optional members count toward maximality.
const MAXIMIZED: [ElementKind; 3] = [
    ElementKind::DomainAssumption,
    ElementKind::Goal,
    ElementKind::QualityConstraint,
];

/// Kinds whose preferences rank candidates. Softgoal preferences act through
/// the projection condition instead.
fn ranks(kind: ElementKind) -> bool {
    kind != ElementKind::Softgoal
}

fn ground(model: &Model, id: &str) -> Vec<Literal> {
    model
        .elements
        .get(id)
        .map(|e| model.ground_literals(e))
        .unwrap_or_default()
}

/// Two preferences conflict when their preferred elements cannot be chosen
/// together: they differ and either share an alternatives group or their
/// literals are jointly inconsistent under the strict rules.
fn conflicting(model: &Model, a: &PreferenceOrder, b: &PreferenceOrder) -> bool {
    if a.preferred == b.preferred {
        return false;
    }
    if model
        .group_of(&a.preferred)
        .is_some_and(|g| g.contains(&b.preferred))
    {
        return true;
    }
    let lits: Vec<Literal> = ground(model, &a.preferred)
        .into_iter()
        .chain(ground(model, &b.preferred))
        .collect();
    !consistent(&lits, model.strict_rules())
}

/// Resolves conflicts between element-level preferences.
///
/// For every conflicting pair: if a meta-preference (transitively) ranks one
/// above the other, the lower one is dropped; otherwise an optional
/// preference gives way to a compulsory one; otherwise both are kept and an
/// `preference.unresolved_conflict` warning is emitted.
pub fn resolve_meta_preferences(model: &Model) -> (AggregatePreference, Vec<Diagnostic>) {
    let all: Vec<PreferenceOrder> = model
        .attitudes
        .values()
        .filter_map(|a| match &a.form {
            AttitudeForm::Preference {
                preferred,
                dispreferred,
            } => Some(PreferenceOrder {
                id: a.id.clone(),
                preferred: preferred.clone(),
                dispreferred: dispreferred.clone(),
                kind: model.kind_of(preferred)?,
                optionality: a.optionality,
            }),
            _ => None,
        })
        .collect();

    // transitive closure of the meta-preference graph
    let mut above: BTreeSet<(String, String)> = model
        .attitudes
        .values()
        .filter_map(|a| match &a.form {
            AttitudeForm::MetaPreference {
                preferred,
                dispreferred,
            } => Some((preferred.clone(), dispreferred.clone())),
            _ => None,
        })
        .collect();
    loop {
        let extra: Vec<(String, String)> = above
            .iter()
            .flat_map(|(a, b)| {
                above
                    .iter()
                    .filter(move |(c, _)| c == b)
                    .map(move |(_, d)| (a.clone(), d.clone()))
            })
            .filter(|p| !above.contains(p))
            .collect();
        if extra.is_empty() {
            break;
        }
        above.extend(extra);
    }

    let mut dropped = BTreeMap::new();
    let mut unresolved = BTreeSet::new();
    let mut diags = Vec::new();
    for (i, a) in all.iter().enumerate() {
        for b in &all[i + 1..] {
            if !conflicting(model, a, b) {
                continue;
            }
            let rank = |x: &str, y: &str| above.contains(&(x.to_string(), y.to_string()));
            let (winner, loser) = if rank(&a.id, &b.id) {
                (a, b)
            } else if rank(&b.id, &a.id) {
                (b, a)
            } else {
                match (a.optionality, b.optionality) {
                    (Optionality::Compulsory, Optionality::Optional) => (a, b),
                    (Optionality::Optional, Optionality::Compulsory) => (b, a),
                    _ => {
                        unresolved.insert((a.id.clone(), b.id.clone()));
                        diags.push(
                            Diagnostic::warning(
                                "preference.unresolved_conflict",
                                format!(
                                    "preferences `{}` and `{}` conflict and no meta-preference \
                                     orders them; both are kept",
                                    a.id, b.id
                                ),
                            )
                            .about(&a.id),
                        );
                        continue;
                    }
                }
            };
            dropped
                .entry(loser.id.clone())
                .or_insert_with(|| winner.id.clone());
        }
    }

    let orders: Vec<PreferenceOrder> = all
        .into_iter()
        .filter(|o| !dropped.contains_key(&o.id))
        .collect();
    let part = model.partition_by_optionality();
    let optional: BTreeSet<&String> = MAXIMIZED
        .iter()
        .flat_map(|k| part.cell(*k, Optionality::Optional))
        .collect();
    let penalties: BTreeSet<String> = optional
        .iter()
        .filter(|id| model.is_disfavored(id))
        .map(|id| (*id).clone())
        .collect();
    let gains: BTreeSet<String> = optional
        .into_iter()
        .filter(|id| !penalties.contains(*id))
        .cloned()
        .collect();
    (
        AggregatePreference {
            effective: orders.iter().map(|o| o.id.clone()).collect(),
            dropped,
            unresolved,
            orders,
            gains,
            penalties,
        },
        diags,
    )
}

/// Pareto comparison of two element sets over the ranking preferences.
/// Returns (some criterion favors `a`, some criterion favors `b`).
fn pareto<F, G>(agg: &AggregatePreference, a: F, b: G) -> (bool, bool)
where
    F: Fn(&str) -> bool,
    G: Fn(&str) -> bool,
{
    let (mut better, mut worse) = (false, false);
    for o in agg.orders.iter().filter(|o| ranks(o.kind)) {
        match (a(&o.preferred), b(&o.preferred)) {
            (true, false) => better = true,
            (false, true) => worse = true,
            _ => {}
        }
    }
    (better, worse)
}

/// Does `c1` dominate `c2`?
///
/// Different compulsory combinations are compared by Pareto dominance over
/// the retained preferences, looking only at the combinations' members.
/// Candidates extending the same combination are compared on two criteria,
/// combined by Pareto: inclusion of optional assumptions, goals and quality
/// constraints (more is better, disfavored ones count against), and the
/// retained preferences over the whole candidate.
pub fn dominates(c1: &Candidate, c2: &Candidate, agg: &AggregatePreference) -> bool {
    if c1.combo != c2.combo {
        let (better, worse) = pareto(
            agg,
            |id| c1.combo.contains(id),
            |id| c2.combo.contains(id),
        );
        return better && !worse;
    }
    let opt = |c: &Candidate, set: &BTreeSet<String>| -> BTreeSet<String> {
        MAXIMIZED
            .iter()
            .flat_map(|k| c.of(*k).iter())
            .filter(|id| set.contains(*id))
            .cloned()
            .collect()
    };
    let (g1, g2) = (opt(c1, &agg.gains), opt(c2, &agg.gains));
    let (p1, p2) = (opt(c1, &agg.penalties), opt(c2, &agg.penalties));
    let no_worse_a = g1.is_superset(&g2) && p1.is_subset(&p2);
    let better_a = no_worse_a && (g1 != g2 || p1 != p2);
    let (better_b, worse_b) = pareto(agg, |id| c1.contains(id), |id| c2.contains(id));
    no_worse_a && !worse_b && (better_a || better_b)
}
