use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use super::bits::BitSet;
use crate::literal::{Atom, Literal};
use crate::ontology::{Model, Priority, Rule, Strength};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProgramError {
    #[error("duplicate rule id `{0}`")]
    DuplicateRule(String),
    #[error("rule `{0}` has an empty body")]
    EmptyBody(String),
    #[error("priority references unknown defeasible rule `{0}`")]
    UnknownPriorityRule(String),
    #[error("rule priorities are not a strict partial order (cycle through `{0}`)")]
    PriorityCycle(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("strict knowledge is contradictory: both `{0}` and its complement are derivable")]
pub struct InconsistentBase(pub Literal);

/// Facts, strict rules, defeasible rules and a strict partial order of
/// priorities over the defeasible rules.
#[derive(Debug, Clone)]
pub struct DefeasibleProgram {
    facts: BTreeSet<Literal>,
    strict_rules: Vec<Rule>,
    defeasible_rules: Vec<Rule>,
    priorities: BTreeSet<Priority>,
    pub(crate) compiled: Compiled,
}

impl DefeasibleProgram {
    pub fn new(
        facts: impl IntoIterator<Item = Literal>,
        rules: impl IntoIterator<Item = Rule>,
        priorities: impl IntoIterator<Item = Priority>,
    ) -> Result<Self, ProgramError> {
        let facts: BTreeSet<Literal> = facts.into_iter().collect();
        let mut seen = BTreeSet::new();
        let (mut strict_rules, mut defeasible_rules) = (Vec::new(), Vec::new());
        for r in rules {
            if !seen.insert(r.id.clone()) {
                return Err(ProgramError::DuplicateRule(r.id));
            }
            if r.body.is_empty() {
                return Err(ProgramError::EmptyBody(r.id));
            }
            match r.strength {
                Strength::Strict => strict_rules.push(r),
                Strength::Defeasible => defeasible_rules.push(r),
            }
        }
        strict_rules.sort_by(|a, b| a.id.cmp(&b.id));
        defeasible_rules.sort_by(|a, b| a.id.cmp(&b.id));
        let priorities: BTreeSet<Priority> = priorities.into_iter().collect();
        let compiled = Compiled::build(&facts, &strict_rules, &defeasible_rules, &priorities)?;
        Ok(DefeasibleProgram {
            facts,
            strict_rules,
            defeasible_rules,
            priorities,
            compiled,
        })
    }

    /// Program over a model's rules and priorities with the given facts.
    pub fn from_model(
        model: &Model,
        facts: impl IntoIterator<Item = Literal>,
    ) -> Result<Self, ProgramError> {
        DefeasibleProgram::new(
            facts,
            model.rules.values().cloned(),
            model.priorities.iter().cloned(),
        )
    }

    pub fn facts(&self) -> &BTreeSet<Literal> {
        &self.facts
    }

    pub fn strict_rules(&self) -> &[Rule] {
        &self.strict_rules
    }

    pub fn defeasible_rules(&self) -> &[Rule] {
        &self.defeasible_rules
    }

    pub fn priorities(&self) -> &BTreeSet<Priority> {
        &self.priorities
    }

    /// Atoms mentioned by facts or rules.
    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.compiled.atoms.iter()
    }

    pub fn check_consistent(&self) -> Result<(), InconsistentBase> {
        match self.compiled.contradiction(&self.compiled.base_closure) {
            None => Ok(()),
            Some(l) => Err(InconsistentBase(self.compiled.literal(l))),
        }
    }

    pub fn is_consistent(&self) -> bool {
        self.check_consistent().is_ok()
    }
}

/// True iff the strict closure of `facts` has no complementary pair.
pub fn consistent<'a>(
    facts: impl IntoIterator<Item = &'a Literal>,
    strict_rules: impl IntoIterator<Item = &'a Rule>,
) -> bool {
    let rules: Vec<Rule> = strict_rules
        .into_iter()
        .filter(|r| r.is_strict())
        .cloned()
        .collect();
    let facts: BTreeSet<Literal> = facts.into_iter().cloned().collect();
    // Rule ids may repeat or be absent when callers pass ad-hoc rule sets;
    // only bodies and heads matter here.
    let rules = rules.into_iter().enumerate().map(|(i, mut r)| {
        r.id = format!("r{i}");
        r
    });
    match Compiled::build(&facts, &rules.collect::<Vec<_>>(), &[], &BTreeSet::new()) {
        Ok(c) => c.contradiction(&c.base_closure).is_none(),
        Err(_) => unreachable!("strict-only programs without priorities always compile"),
    }
}

/// Index of a literal: `atom * 2 + negated`.
pub(crate) type Lit = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum RuleRef {
    Strict(usize),
    Defeasible(usize),
}

#[derive(Debug, Clone)]
pub(crate) struct CRule {
    pub body: Vec<Lit>,
    pub head: Lit,
}

#[derive(Debug, Clone)]
pub(crate) struct Compiled {
    pub atoms: Vec<Atom>,
    pub atom_index: HashMap<Atom, usize>,
    pub facts: Vec<Lit>,
    pub strict: Vec<CRule>,
    pub defeasible: Vec<CRule>,
    pub strict_ids: Vec<String>,
    pub defeasible_ids: Vec<String>,
    pub by_head: Vec<Vec<RuleRef>>,
    /// `above[r]`: defeasible rules strictly above `r` (transitively).
    pub above: Vec<BitSet>,
    pub base_closure: Vec<bool>,
}

impl Compiled {
    fn build(
        facts: &BTreeSet<Literal>,
        strict_rules: &[Rule],
        defeasible_rules: &[Rule],
        priorities: &BTreeSet<Priority>,
    ) -> Result<Self, ProgramError> {
        let mut atoms: BTreeSet<Atom> = facts.iter().map(|l| l.atom().clone()).collect();
        for r in strict_rules.iter().chain(defeasible_rules) {
            atoms.insert(r.head.atom().clone());
            atoms.extend(r.body.iter().map(|l| l.atom().clone()));
        }
        let atoms: Vec<Atom> = atoms.into_iter().collect();
        let atom_index: HashMap<Atom, usize> =
            atoms.iter().enumerate().map(|(i, a)| (a.clone(), i)).collect();
        let index = |l: &Literal| atom_index[l.atom()] * 2 + usize::from(l.is_negated());
        let compile = |r: &Rule| CRule {
            body: r.body.iter().map(index).collect(),
            head: index(&r.head),
        };
        let strict: Vec<CRule> = strict_rules.iter().map(compile).collect();
        let defeasible: Vec<CRule> = defeasible_rules.iter().map(compile).collect();
        let mut by_head = vec![Vec::new(); atoms.len() * 2];
        for (i, r) in strict.iter().enumerate() {
            by_head[r.head].push(RuleRef::Strict(i));
        }
        for (i, r) in defeasible.iter().enumerate() {
            by_head[r.head].push(RuleRef::Defeasible(i));
        }

        let defeasible_ids: Vec<String> = defeasible_rules.iter().map(|r| r.id.clone()).collect();
        let pos: BTreeMap<&str, usize> = defeasible_ids
            .iter()
            .enumerate()
            .map(|(i, id)| (id.as_str(), i))
            .collect();
        // direct[r] = rules directly above r
        let mut direct = vec![Vec::new(); defeasible.len()];
        for p in priorities {
            let hi = *pos
                .get(p.higher.as_str())
                .ok_or_else(|| ProgramError::UnknownPriorityRule(p.higher.clone()))?;
            let lo = *pos
                .get(p.lower.as_str())
                .ok_or_else(|| ProgramError::UnknownPriorityRule(p.lower.clone()))?;
            direct[lo].push(hi);
        }
        let mut above = Vec::with_capacity(defeasible.len());
        for r in 0..defeasible.len() {
            let mut seen = BitSet::new();
            let mut stack = direct[r].clone();
            while let Some(x) = stack.pop() {
                if !seen.contains(x) {
                    seen.insert(x);
                    stack.extend(&direct[x]);
                }
            }
            if seen.contains(r) {
                return Err(ProgramError::PriorityCycle(defeasible_ids[r].clone()));
            }
            above.push(seen);
        }

        let mut compiled = Compiled {
            facts: facts.iter().map(index).collect(),
            atoms,
            atom_index,
            strict,
            defeasible,
            strict_ids: strict_rules.iter().map(|r| r.id.clone()).collect(),
            defeasible_ids,
            by_head,
            above,
            base_closure: Vec::new(),
        };
        compiled.base_closure = compiled.closure(&BitSet::new());
        Ok(compiled)
    }

    pub fn lit_index(&self, l: &Literal) -> Option<Lit> {
        self.atom_index
            .get(l.atom())
            .map(|a| a * 2 + usize::from(l.is_negated()))
    }

    pub fn literal(&self, l: Lit) -> Literal {
        Literal::new(self.atoms[l / 2].clone(), l % 2 == 1)
    }

    pub fn literal_count(&self) -> usize {
        self.atoms.len() * 2
    }

    pub fn rule(&self, r: RuleRef) -> &CRule {
        match r {
            RuleRef::Strict(i) => &self.strict[i],
            RuleRef::Defeasible(i) => &self.defeasible[i],
        }
    }

    /// Forward-chaining closure of the facts under the strict rules and the
    /// defeasible rules in `support`.
    pub fn closure(&self, support: &BitSet) -> Vec<bool> {
        let mut known = vec![false; self.literal_count()];
        for &f in &self.facts {
            known[f] = true;
        }
        let active: Vec<&CRule> = self
            .strict
            .iter()
            .chain(support.iter().map(|i| &self.defeasible[i]))
            .collect();
        loop {
            let mut changed = false;
            for r in &active {
                if !known[r.head] && r.body.iter().all(|&b| known[b]) {
                    known[r.head] = true;
                    changed = true;
                }
            }
            if !changed {
                return known;
            }
        }
    }

    /// Some literal whose complement is also in `closure`.
    pub fn contradiction(&self, closure: &[bool]) -> Option<Lit> {
        (0..self.atoms.len())
            .map(|a| a * 2)
            .find(|&l| closure[l] && closure[l + 1])
    }

    /// True iff some rule in `attacker` is below some rule in `attacked` and
    /// none is above any.
    pub fn weaker(&self, attacker: &BitSet, attacked: &BitSet) -> bool {
        let some_below = attacker.iter().any(|a| self.above[a].intersects(attacked));
        let some_above = attacked.iter().any(|b| self.above[b].intersects(attacker));
        some_below && !some_above
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lits(xs: &[&str]) -> Vec<Literal> {
        xs.iter().map(|x| Literal::lit(x)).collect()
    }

    #[test]
    fn consistency_examples() {
        assert!(consistent(&lits(&["a"]), &[]));
        assert!(!consistent(&lits(&["a", "~a"]), &[]));
        let rules = [Rule::strict("r1", &["a"], "b"), Rule::strict("r2", &["a"], "~b")];
        assert!(!consistent(&lits(&["a"]), &rules));
        assert!(consistent(&lits(&["c"]), &rules));
    }

    #[test]
    fn consistent_ignores_defeasible_rules() {
        let rules = [
            Rule::defeasible("r1", &["a"], "b"),
            Rule::defeasible("r2", &["a"], "~b"),
        ];
        assert!(consistent(&lits(&["a"]), &rules));
    }

    #[test]
    fn priority_cycles_are_rejected() {
        let rules = [
            Rule::defeasible("r1", &["a"], "b"),
            Rule::defeasible("r2", &["a"], "~b"),
        ];
        let err = DefeasibleProgram::new(
            lits(&["a"]),
            rules,
            [Priority::new("r1", "r2"), Priority::new("r2", "r1")],
        )
        .unwrap_err();
        assert!(matches!(err, ProgramError::PriorityCycle(_)));
    }

    #[test]
    fn priorities_are_transitive() {
        let rules = [
            Rule::defeasible("r1", &["a"], "b"),
            Rule::defeasible("r2", &["a"], "c"),
            Rule::defeasible("r3", &["a"], "d"),
        ];
        let p = DefeasibleProgram::new(
            lits(&["a"]),
            rules,
            [Priority::new("r1", "r2"), Priority::new("r2", "r3")],
        )
        .unwrap();
        let c = &p.compiled;
        assert!(c.above[2].contains(0));
        assert!(c.weaker(&BitSet::singleton(2), &BitSet::singleton(0)));
        assert!(!c.weaker(&BitSet::singleton(0), &BitSet::singleton(2)));
        // mixed strength: r1 above r3 but r3 below r1 as well -> not weaker
        let both: BitSet = [0, 2].into_iter().collect();
        assert!(!c.weaker(&both, &BitSet::singleton(1)));
    }
}
