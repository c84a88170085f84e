//! Argument construction, defeat and dialectical-tree marking.
//!
//! An argument for `L` is a set `A` of defeasible rules such that the facts,
//! the strict rules and `A` derive `L`, the derivation is free of
//! complementary pairs, and no proper subset of `A` derives `L`.
//!
//! `X` attacks `Y` when the complement of `X`'s conclusion is among the
//! literals `Y` commits to beyond strict knowledge (its attack points). The
//! attack is a defeat unless `X` is strictly weaker than the sub-argument of
//! `Y` it hits; equally strong or incomparable arguments block each other.
//!
//! Warrant marking: a node is undefeated iff every defeater of it that does
//! not already occur on the line from the root is defeated.

use std::collections::HashMap;
use std::rc::Rc;

use super::bits::BitSet;
use super::program::{Compiled, Lit, RuleRef};
use super::{Argument, Derivation, DialecticalTree, Mark, Step};
use crate::literal::Literal;

pub(crate) type ArgId = usize;

#[derive(Debug)]
pub(crate) struct Arg {
    pub conclusion: Lit,
    pub support: BitSet,
    /// Literals derived with the support that strict knowledge alone does
    /// not give, sorted.
    pub points: Vec<Lit>,
}

/// Query-local caches over one compiled program.
pub(crate) struct Session<'p> {
    c: &'p Compiled,
    supports: HashMap<Lit, Rc<Vec<BitSet>>>,
    consistent: HashMap<BitSet, bool>,
    args: Vec<Arg>,
    arg_ids: HashMap<(Lit, BitSet), ArgId>,
    args_for: HashMap<Lit, Rc<Vec<ArgId>>>,
    defeaters: HashMap<ArgId, Rc<Vec<ArgId>>>,
    marks: HashMap<(ArgId, BitSet), bool>,
}

impl<'p> Session<'p> {
    pub fn new(c: &'p Compiled) -> Self {
        Session {
            c,
            supports: HashMap::new(),
            consistent: HashMap::new(),
            args: Vec::new(),
            arg_ids: HashMap::new(),
            args_for: HashMap::new(),
            defeaters: HashMap::new(),
            marks: HashMap::new(),
        }
    }

    fn is_consistent(&mut self, support: &BitSet) -> bool {
        if let Some(&v) = self.consistent.get(support) {
            return v;
        }
        let v = self.c.contradiction(&self.c.closure(support)).is_none();
        self.consistent.insert(support.clone(), v);
        v
    }

    /// Minimal consistent supports for `l`, avoiding literals on `stack`.
    /// The flag reports whether the stack cut off some derivation; only
    /// results independent of the stack are cached.
    fn supports_rec(&mut self, l: Lit, stack: &mut Vec<bool>) -> (Rc<Vec<BitSet>>, bool) {
        if self.c.base_closure[l] {
            return (Rc::new(vec![BitSet::new()]), false);
        }
        if let Some(s) = self.supports.get(&l) {
            return (s.clone(), false);
        }
        if stack[l] {
            return (Rc::new(Vec::new()), true);
        }
        stack[l] = true;
        let mut blocked = false;
        let mut found: Vec<BitSet> = Vec::new();
        let c = self.c;
        for &r in &c.by_head[l] {
            let rule = c.rule(r);
            let mut partial = vec![match r {
                RuleRef::Strict(_) => BitSet::new(),
                RuleRef::Defeasible(i) => BitSet::singleton(i),
            }];
            for &b in &rule.body {
                let (sub, cut) = self.supports_rec(b, stack);
                blocked |= cut;
                let mut next = Vec::new();
                for p in &partial {
                    for s in sub.iter() {
                        let u = p.union(s);
                        if self.is_consistent(&u) {
                            next.push(u);
                        }
                    }
                }
                partial = minimal(next);
                if partial.is_empty() {
                    break;
                }
            }
            found.extend(partial);
        }
        stack[l] = false;
        let found = Rc::new(minimal(found));
        if !blocked {
            self.supports.insert(l, found.clone());
        }
        (found, blocked)
    }

    fn supports_for(&mut self, l: Lit) -> Rc<Vec<BitSet>> {
        let mut stack = vec![false; self.c.literal_count()];
        self.supports_rec(l, &mut stack).0
    }

    fn intern(&mut self, conclusion: Lit, support: BitSet) -> ArgId {
        if let Some(&id) = self.arg_ids.get(&(conclusion, support.clone())) {
            return id;
        }
        let closure = self.c.closure(&support);
        let points = (0..closure.len())
            .filter(|&x| closure[x] && !self.c.base_closure[x])
            .collect();
        let id = self.args.len();
        self.args.push(Arg {
            conclusion,
            support: support.clone(),
            points,
        });
        self.arg_ids.insert((conclusion, support), id);
        id
    }

    /// All arguments for `l`, ordered by support.
    pub fn arguments_for(&mut self, l: Lit) -> Rc<Vec<ArgId>> {
        if let Some(a) = self.args_for.get(&l) {
            return a.clone();
        }
        let mut supports: Vec<BitSet> = self.supports_for(l).iter().cloned().collect();
        supports.sort_by_key(|s| s.iter().collect::<Vec<_>>());
        let ids: Vec<ArgId> = supports.into_iter().map(|s| self.intern(l, s)).collect();
        let ids = Rc::new(ids);
        self.args_for.insert(l, ids.clone());
        ids
    }

    pub fn find_argument(&mut self, conclusion: Lit, support: &BitSet) -> Option<ArgId> {
        let ids = self.arguments_for(conclusion);
        ids.iter().copied().find(|&a| self.args[a].support == *support)
    }

    pub fn defeats(&mut self, attacker: ArgId, target: ArgId) -> bool {
        let hit = self.args[attacker].conclusion ^ 1;
        if self.args[target].points.binary_search(&hit).is_err() {
            return false;
        }
        // sub-arguments of the target concluding the attacked literal
        let subs = self.arguments_for(hit);
        let (att, tgt) = (&self.args[attacker].support, &self.args[target].support);
        subs.iter()
            .map(|&s| &self.args[s].support)
            .filter(|s| s.is_subset(tgt))
            .any(|s| !self.c.weaker(att, s))
    }

    pub fn defeaters(&mut self, target: ArgId) -> Rc<Vec<ArgId>> {
        if let Some(d) = self.defeaters.get(&target) {
            return d.clone();
        }
        let mut out = Vec::new();
        let points = self.args[target].points.clone();
        for p in points {
            let attackers = self.arguments_for(p ^ 1);
            for &a in attackers.iter() {
                if self.defeats(a, target) {
                    out.push(a);
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        let out = Rc::new(out);
        self.defeaters.insert(target, out.clone());
        out
    }

    /// Marks `node` given the arguments already on its line (`line` includes
    /// `node`). Lines only grow by arguments not yet on them, so recursion
    /// depth is bounded by the number of arguments.
    fn undefeated(&mut self, node: ArgId, line: &mut BitSet) -> bool {
        let key = (node, line.clone());
        if let Some(&m) = self.marks.get(&key) {
            return m;
        }
        let defeaters = self.defeaters(node);
        let mut result = true;
        for &d in defeaters.iter() {
            if line.contains(d) {
                continue;
            }
            line.insert(d);
            let d_undefeated = self.undefeated(d, line);
            line.remove(d);
            if d_undefeated {
                result = false;
                break;
            }
        }
        self.marks.insert(key, result);
        result
    }

    pub fn is_warranted_by(&mut self, root: ArgId) -> bool {
        let mut line = BitSet::singleton(root);
        self.undefeated(root, &mut line)
    }

    pub fn warranted(&mut self, l: Lit) -> bool {
        let args = self.arguments_for(l);
        args.iter().any(|&a| self.is_warranted_by(a))
    }

    /// Full dialectical tree rooted at `root`, without short-circuiting.
    pub fn tree(&mut self, root: ArgId) -> DialecticalTree {
        let mut line = BitSet::singleton(root);
        self.tree_rec(root, &mut line)
    }

    fn tree_rec(&mut self, node: ArgId, line: &mut BitSet) -> DialecticalTree {
        let defeaters = self.defeaters(node);
        let mut children = Vec::new();
        for &d in defeaters.iter() {
            if line.contains(d) {
                continue;
            }
            line.insert(d);
            children.push(self.tree_rec(d, line));
            line.remove(d);
        }
        let mark = if children.iter().all(|c| c.mark == Mark::Defeated) {
            Mark::Undefeated
        } else {
            Mark::Defeated
        };
        DialecticalTree {
            argument: self.export(node),
            mark,
            defeaters: children,
        }
    }

    pub fn export(&self, id: ArgId) -> Argument {
        let a = &self.args[id];
        Argument {
            conclusion: self.c.literal(a.conclusion),
            support: a
                .support
                .iter()
                .map(|i| self.c.defeasible_ids[i].clone())
                .collect(),
            derivation: self.derivation(a.conclusion, &a.support),
        }
    }

    /// A derivation tree for `l` from the facts, strict rules and `support`.
    /// Each literal is justified by the first rule (strict before defeasible,
    /// then by id) that fires for it during forward chaining.
    fn derivation(&self, l: Lit, support: &BitSet) -> Derivation {
        let c = self.c;
        let mut why: Vec<Option<Option<RuleRef>>> = vec![None; c.literal_count()];
        for &f in &c.facts {
            why[f] = Some(None);
        }
        let active: Vec<RuleRef> = (0..c.strict.len())
            .map(RuleRef::Strict)
            .chain(support.iter().map(RuleRef::Defeasible))
            .collect();
        loop {
            let mut changed = false;
            for &r in &active {
                let rule = c.rule(r);
                if why[rule.head].is_none() && rule.body.iter().all(|&b| why[b].is_some()) {
                    why[rule.head] = Some(Some(r));
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        fn build(c: &Compiled, why: &[Option<Option<RuleRef>>], l: Lit) -> Derivation {
            match why[l] {
                Some(Some(r)) => {
                    let (id, strict) = match r {
                        RuleRef::Strict(i) => (c.strict_ids[i].clone(), true),
                        RuleRef::Defeasible(i) => (c.defeasible_ids[i].clone(), false),
                    };
                    Derivation {
                        literal: c.literal(l),
                        step: if strict {
                            Step::Strict(id)
                        } else {
                            Step::Defeasible(id)
                        },
                        premises: c.rule(r).body.iter().map(|&b| build(c, why, b)).collect(),
                    }
                }
                _ => Derivation {
                    literal: c.literal(l),
                    step: Step::Fact,
                    premises: Vec::new(),
                },
            }
        }
        build(c, &why, l)
    }
}

/// Keeps the inclusion-minimal sets, deduplicated.
fn minimal(mut sets: Vec<BitSet>) -> Vec<BitSet> {
    sets.sort_by_key(BitSet::len);
    let mut out: Vec<BitSet> = Vec::new();
    for s in sets {
        if !out.iter().any(|m| m.is_subset(&s)) {
            out.push(s);
        }
    }
    out
}

pub(crate) fn literal_index(c: &Compiled, l: &Literal) -> Option<Lit> {
    c.lit_index(l)
}
