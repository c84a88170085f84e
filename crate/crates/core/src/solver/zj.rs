//! Classical reduction for models without attitudes, softgoals, optional
//! elements, alternatives or defeasible rules: the requirements hold iff the
//! assumptions and plans, together with the strict rules read as material
//! implications, are satisfiable and entail every goal and quality
//! constraint.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::literal::{Atom, Literal};
use crate::ontology::{ElementKind, Model, Optionality, Rule};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ZjError {
    #[error("classical mode does not apply: model has {0}")]
    NotApplicable(&'static str),
}

impl ZjError {
    pub fn code(&self) -> &'static str {
        "zj.not_applicable"
    }
}

type Clause = Vec<(usize, bool)>;

struct Cnf {
    atoms: BTreeMap<Atom, usize>,
    clauses: Vec<Clause>,
}

impl Cnf {
    fn var(&mut self, a: &Atom) -> usize {
        let n = self.atoms.len();
        *self.atoms.entry(a.clone()).or_insert(n)
    }

    fn lit(&mut self, l: &Literal) -> (usize, bool) {
        (self.var(l.atom()), !l.is_negated())
    }

    fn new<'a>(facts: impl IntoIterator<Item = &'a Literal>, rules: &[&Rule]) -> Self {
        let mut cnf = Cnf {
            atoms: BTreeMap::new(),
            clauses: Vec::new(),
        };
        for f in facts {
            let l = cnf.lit(f);
            cnf.clauses.push(vec![l]);
        }
        for r in rules {
            let mut c: Clause = r
                .body
                .iter()
                .map(|b| {
                    let (v, pos) = cnf.lit(b);
                    (v, !pos)
                })
                .collect();
            c.push(cnf.lit(&r.head));
            cnf.clauses.push(c);
        }
        cnf
    }

    fn satisfiable(&self) -> bool {
        let mut assign = vec![None; self.atoms.len()];
        dpll(&self.clauses, &mut assign)
    }
}

fn dpll(clauses: &[Clause], assign: &mut Vec<Option<bool>>) -> bool {
    // unit propagation
    let mut trail = Vec::new();
    loop {
        let mut unit = None;
        for c in clauses {
            let mut open = None;
            let mut n_open = 0;
            let mut sat = false;
            for &(v, pos) in c {
                match assign[v] {
                    Some(val) if val == pos => {
                        sat = true;
                        break;
                    }
                    Some(_) => {}
                    None => {
                        n_open += 1;
                        open = Some((v, pos));
                    }
                }
            }
            if sat {
                continue;
            }
            if n_open == 0 {
                for v in trail {
                    assign[v] = None;
                }
                return false;
            }
            if n_open == 1 {
                unit = open;
                break;
            }
        }
        match unit {
            Some((v, pos)) => {
                assign[v] = Some(pos);
                trail.push(v);
            }
            None => break,
        }
    }
    let Some(v) = assign.iter().position(Option::is_none) else {
        return true;
    };
    for val in [true, false] {
        assign[v] = Some(val);
        if dpll(clauses, assign) {
            return true;
        }
    }
    assign[v] = None;
    for v in trail {
        assign[v] = None;
    }
    false
}

/// Do the facts and rules (as implications) classically entail `goal`?
pub fn classically_entails<'a>(
    facts: impl IntoIterator<Item = &'a Literal>,
    rules: &[&Rule],
    goal: &Literal,
) -> bool {
    let mut all: Vec<&Literal> = facts.into_iter().collect();
    let negated = goal.complement();
    all.push(&negated);
    let cnf = Cnf::new(all, rules);
    !cnf.satisfiable()
}

pub fn zj_mode(model: &Model) -> Result<bool, ZjError> {
    if !model.attitudes.is_empty() {
        return Err(ZjError::NotApplicable("attitudes"));
    }
    if model.elements_of(ElementKind::Softgoal).next().is_some() {
        return Err(ZjError::NotApplicable("softgoals"));
    }
    if model
        .elements
        .values()
        .any(|e| model.optionality_of(e) == Optionality::Optional)
    {
        return Err(ZjError::NotApplicable("optional elements"));
    }
    if !model.alternatives.is_empty() {
        return Err(ZjError::NotApplicable("alternatives"));
    }
    if model.rules.values().any(|r| !r.is_strict()) {
        return Err(ZjError::NotApplicable("defeasible rules"));
    }
    let facts: Vec<Literal> = model
        .elements
        .values()
        .filter(|e| matches!(e.kind, ElementKind::DomainAssumption | ElementKind::Plan))
        .flat_map(|e| model.ground_literals(e))
        .collect();
    let rules: Vec<&Rule> = model.rules.values().collect();
    if !Cnf::new(&facts, &rules).satisfiable() {
        return Ok(false);
    }
    Ok(model
        .elements
        .values()
        .filter(|e| matches!(e.kind, ElementKind::Goal | ElementKind::QualityConstraint))
        .flat_map(|e| model.ground_literals(e))
        .all(|g| classically_entails(&facts, &rules, &g)))
}
