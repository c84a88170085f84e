//! Brute-force reference implementation of warrant.
//!
//! Shares no code with the main engine: arguments come from enumerating every
//! subset of defeasible rules, and every dialectical tree is built in full
//! before it is marked. Exponential in the number of defeasible rules; meant
//! for auditing desk-scale programs.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::{DefeasibleProgram, Warrant};
use crate::literal::Literal;
use crate::ontology::Rule;

/// Upper bound on defeasible rules the reference engine will enumerate.
pub const MAX_DEFEASIBLE_RULES: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReferenceError {
    #[error("strict knowledge derives both `{0}` and its complement")]
    Inconsistent(Literal),
    #[error("{0} defeasible rules exceed the reference engine limit of {MAX_DEFEASIBLE_RULES}")]
    TooLarge(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefArgument {
    pub conclusion: Literal,
    pub support: BTreeSet<String>,
    mask: u32,
    commitments: BTreeSet<Literal>,
}

pub struct ReferenceEngine<'p> {
    facts: BTreeSet<Literal>,
    strict: Vec<&'p Rule>,
    defeasible: Vec<&'p Rule>,
    /// (higher, lower) pairs, transitively closed.
    outranks: BTreeSet<(String, String)>,
    base: BTreeSet<Literal>,
    arguments: Vec<RefArgument>,
}

impl<'p> ReferenceEngine<'p> {
    pub fn new(program: &'p DefeasibleProgram) -> Result<Self, ReferenceError> {
        let defeasible: Vec<&Rule> = program.defeasible_rules().iter().collect();
        if defeasible.len() > MAX_DEFEASIBLE_RULES {
            return Err(ReferenceError::TooLarge(defeasible.len()));
        }
        let mut outranks: BTreeSet<(String, String)> = program
            .priorities()
            .iter()
            .map(|p| (p.higher.clone(), p.lower.clone()))
            .collect();
        loop {
            let extra: Vec<(String, String)> = outranks
                .iter()
                .flat_map(|(a, b)| {
                    outranks
                        .iter()
                        .filter(move |(c, _)| c == b)
                        .map(move |(_, d)| (a.clone(), d.clone()))
                })
                .filter(|pair| !outranks.contains(pair))
                .collect();
            if extra.is_empty() {
                break;
            }
            outranks.extend(extra);
        }
        let mut engine = ReferenceEngine {
            facts: program.facts().clone(),
            strict: program.strict_rules().iter().collect(),
            defeasible,
            outranks,
            base: BTreeSet::new(),
            arguments: Vec::new(),
        };
        engine.base = engine.closure(0);
        if let Some(l) = contradiction(&engine.base) {
            return Err(ReferenceError::Inconsistent(l));
        }
        engine.arguments = engine.enumerate();
        Ok(engine)
    }

    fn closure(&self, mask: u32) -> BTreeSet<Literal> {
        let mut known = self.facts.clone();
        let rules: Vec<&Rule> = self
            .strict
            .iter()
            .copied()
            .chain(
                self.defeasible
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, r)| *r),
            )
            .collect();
        let mut grew = true;
        while grew {
            grew = false;
            for r in &rules {
                if !known.contains(&r.head) && r.body.iter().all(|b| known.contains(b)) {
                    known.insert(r.head.clone());
                    grew = true;
                }
            }
        }
        known
    }

    fn enumerate(&self) -> Vec<RefArgument> {
        let n = self.defeasible.len();
        let mut derivers: BTreeMap<Literal, Vec<u32>> = BTreeMap::new();
        let mut closures = BTreeMap::new();
        for mask in 0..(1u32 << n) {
            let cl = self.closure(mask);
            if contradiction(&cl).is_some() {
                continue;
            }
            for l in &cl {
                derivers.entry(l.clone()).or_default().push(mask);
            }
            closures.insert(mask, cl);
        }
        let mut out = Vec::new();
        for (l, masks) in derivers {
            for &m in &masks {
                let minimal = !masks.iter().any(|&o| o != m && o & m == o);
                if minimal {
                    let commitments = closures[&m].difference(&self.base).cloned().collect();
                    out.push(RefArgument {
                        conclusion: l.clone(),
                        support: self.ids(m),
                        mask: m,
                        commitments,
                    });
                }
            }
        }
        out
    }

    fn ids(&self, mask: u32) -> BTreeSet<String> {
        self.defeasible
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, r)| r.id.clone())
            .collect()
    }

    pub fn arguments(&self) -> &[RefArgument] {
        &self.arguments
    }

    pub fn arguments_for(&self, l: &Literal) -> Vec<&RefArgument> {
        self.arguments.iter().filter(|a| a.conclusion == *l).collect()
    }

    fn strictly_weaker(&self, attacker: &BTreeSet<String>, attacked: &BTreeSet<String>) -> bool {
        let below = attacker.iter().any(|a| {
            attacked
                .iter()
                .any(|b| self.outranks.contains(&(b.clone(), a.clone())))
        });
        let above = attacker.iter().any(|a| {
            attacked
                .iter()
                .any(|b| self.outranks.contains(&(a.clone(), b.clone())))
        });
        below && !above
    }

    pub fn defeats(&self, attacker: &RefArgument, target: &RefArgument) -> bool {
        let hit = attacker.conclusion.complement();
        if !target.commitments.contains(&hit) {
            return false;
        }
        self.arguments
            .iter()
            .filter(|s| s.conclusion == hit && s.mask & target.mask == s.mask)
            .any(|s| !self.strictly_weaker(&attacker.support, &s.support))
    }

    fn build(&self, node: usize, line: &mut Vec<usize>) -> Node {
        let mut children = Vec::new();
        for d in 0..self.arguments.len() {
            if !line.contains(&d) && self.defeats(&self.arguments[d], &self.arguments[node]) {
                line.push(d);
                children.push(self.build(d, line));
                line.pop();
            }
        }
        Node { children }
    }

    pub fn warrant(&self, l: &Literal) -> Warrant {
        let warranted = (0..self.arguments.len())
            .filter(|&i| self.arguments[i].conclusion == *l)
            .any(|i| self.build(i, &mut vec![i]).undefeated());
        warranted.into()
    }

    pub fn consequences(&self) -> BTreeSet<Literal> {
        let mut atoms = BTreeSet::new();
        for l in &self.facts {
            atoms.insert(l.atom().clone());
        }
        for r in self.strict.iter().chain(&self.defeasible) {
            atoms.insert(r.head.atom().clone());
            atoms.extend(r.body.iter().map(|b| b.atom().clone()));
        }
        atoms
            .into_iter()
            .flat_map(|a| [Literal::new(a.clone(), false), Literal::new(a, true)])
            .filter(|l| self.warrant(l).is_warranted())
            .collect()
    }
}

struct Node {
    children: Vec<Node>,
}

impl Node {
    fn undefeated(&self) -> bool {
        let marks: Vec<bool> = self.children.iter().map(Node::undefeated).collect();
        marks.iter().all(|m| !m)
    }
}

fn contradiction(lits: &BTreeSet<Literal>) -> Option<Literal> {
    lits.iter()
        .find(|l| !l.is_negated() && lits.contains(&l.complement()))
        .cloned()
}
