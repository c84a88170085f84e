use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::literal::Literal;
use crate::ontology::{ElementKind, Model, Optionality};

/// One choice per alternatives group among the compulsory elements, plus the
/// compulsory elements outside any group.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CompulsoryCombo {
    /// Group label (members joined by `|`) to the chosen member.
    pub chosen: BTreeMap<String, String>,
    pub fixed: BTreeSet<String>,
}

impl CompulsoryCombo {
    pub fn members(&self) -> BTreeSet<&str> {
        self.fixed
            .iter()
            .chain(self.chosen.values())
            .map(String::as_str)
            .collect()
    }

    pub fn contains(&self, id: &str) -> bool {
        self.fixed.contains(id) || self.chosen.values().any(|c| c == id)
    }

    /// Short human label: the chosen members, or `-` when nothing is chosen.
    pub fn label(&self) -> String {
        if self.chosen.is_empty() {
            "-".into()
        } else {
            self.chosen.values().cloned().collect::<Vec<_>>().join(",")
        }
    }
}

pub(crate) fn group_label(group: &BTreeSet<String>) -> String {
    group.iter().cloned().collect::<Vec<_>>().join("|")
}

/// A candidate specification: the elements of each kind it commits to.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Candidate {
    pub combo: CompulsoryCombo,
    pub assumptions: BTreeSet<String>,
    pub goals: BTreeSet<String>,
    pub qcs: BTreeSet<String>,
    pub softgoals: BTreeSet<String>,
    pub plans: BTreeSet<String>,
}

impl Candidate {
    /// The combo's members plus `extra`, sorted into kinds. Unknown ids are
    /// ignored.
    pub fn new<'a>(model: &Model, combo: CompulsoryCombo, extra: impl IntoIterator<Item = &'a str>) -> Self {
        let mut c = Candidate {
            assumptions: BTreeSet::new(),
            goals: BTreeSet::new(),
            qcs: BTreeSet::new(),
            softgoals: BTreeSet::new(),
            plans: BTreeSet::new(),
            combo: CompulsoryCombo::default(),
        };
        let mut ids: Vec<String> = combo.members().into_iter().map(str::to_string).collect();
        ids.extend(extra.into_iter().map(str::to_string));
        for id in ids {
            if let Some(kind) = model.kind_of(&id) {
                c.of_mut(kind).insert(id);
            }
        }
        c.combo = combo;
        c
    }

    pub fn of(&self, kind: ElementKind) -> &BTreeSet<String> {
        match kind {
            ElementKind::DomainAssumption => &self.assumptions,
            ElementKind::Goal => &self.goals,
            ElementKind::QualityConstraint => &self.qcs,
            ElementKind::Softgoal => &self.softgoals,
            ElementKind::Plan => &self.plans,
        }
    }

    fn of_mut(&mut self, kind: ElementKind) -> &mut BTreeSet<String> {
        match kind {
            ElementKind::DomainAssumption => &mut self.assumptions,
            ElementKind::Goal => &mut self.goals,
            ElementKind::QualityConstraint => &mut self.qcs,
            ElementKind::Softgoal => &mut self.softgoals,
            ElementKind::Plan => &mut self.plans,
        }
    }

    pub fn contains(&self, id: &str) -> bool {
        ElementKind::ALL.iter().any(|k| self.of(*k).contains(id))
    }

    pub fn ids(&self) -> impl Iterator<Item = &String> {
        ElementKind::ALL.into_iter().flat_map(move |k| self.of(k).iter())
    }

    /// Elements beyond the compulsory combo.
    pub fn optional_ids(&self) -> impl Iterator<Item = &String> {
        self.ids().filter(move |id| !self.combo.contains(id))
    }

    /// Ground `holds` literals of the assumptions and plans: the facts the
    /// candidate reasons from.
    pub fn facts(&self, model: &Model) -> BTreeSet<Literal> {
        self.assumptions
            .iter()
            .chain(&self.plans)
            .filter_map(|id| model.elements.get(id))
            .flat_map(|e| model.ground_literals(e))
            .collect()
    }

    /// Stable text form, e.g. `k:k1;g:g1,g2;q:;s:;p:p1`.
    pub fn signature(&self) -> String {
        ElementKind::ALL
            .iter()
            .map(|k| {
                let ids: Vec<&str> = self.of(*k).iter().map(String::as_str).collect();
                format!("{}:{}", k.symbol(), ids.join(","))
            })
            .collect::<Vec<_>>()
            .join(";")
    }
}

impl fmt::Display for Candidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.signature())
    }
}

/// Rebuilds a candidate from its signature. Kind prefixes may be omitted
/// or given in any order; the element ids decide the kinds.
pub fn parse_signature(model: &Model, sig: &str) -> Result<Candidate, String> {
    let mut ids: BTreeSet<String> = BTreeSet::new();
    for part in sig.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let list = match part.split_once(':') {
            Some((k, rest)) => {
                let k = k.trim();
                let ok = k.chars().count() == 1
                    && k.chars().next().and_then(ElementKind::from_symbol).is_some();
                if !ok {
                    return Err(format!("unknown kind prefix `{k}`"));
                }
                rest
            }
            None => part,
        };
        for id in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            if model.kind_of(id).is_none() {
                return Err(format!("unknown element `{id}`"));
            }
            ids.insert(id.to_string());
        }
    }
    let part = model.partition_by_optionality();
    let compulsory: BTreeSet<&String> = part.compulsory.values().flatten().collect();
    let mut combo = CompulsoryCombo::default();
    for id in &compulsory {
        if model.group_of(id).is_none() {
            if !ids.contains(*id) {
                return Err(format!("compulsory element `{id}` is missing"));
            }
            combo.fixed.insert((*id).clone());
        }
    }
    for g in &model.alternatives {
        let members: Vec<&String> = g.iter().filter(|m| ids.contains(*m)).collect();
        if members.len() > 1 {
            return Err(format!("alternatives {} chosen more than once", group_label(g)));
        }
        let restricted: Vec<&String> = g.iter().filter(|m| compulsory.contains(m)).collect();
        if restricted.is_empty() {
            continue;
        }
        match members.first() {
            Some(m) if compulsory.contains(m) => {
                combo.chosen.insert(group_label(g), (*m).clone());
            }
            _ => {
                return Err(format!(
                    "one compulsory member of {} must be chosen",
                    group_label(g)
                ))
            }
        }
    }
    let extra: Vec<&str> = ids
        .iter()
        .filter(|id| !combo.contains(id))
        .map(String::as_str)
        .collect();
    for id in &extra {
        let e = &model.elements[*id];
        if model.optionality_of(e) != Optionality::Optional {
            return Err(format!("`{id}` is compulsory but not part of any valid choice"));
        }
    }
    Ok(Candidate::new(model, combo, extra))
}
