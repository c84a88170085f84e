//! Non-monotonic consequence over ground propositional programs: argument
//! construction, defeat by explicit rule priorities, and warrant through
//! dialectical trees.

mod bits;
mod program;
pub mod reference;
mod session;

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

pub use program::{consistent, DefeasibleProgram, InconsistentBase, ProgramError};

use bits::BitSet;
use session::{literal_index, Session};

use crate::literal::Literal;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Warrant {
    Warranted,
    NotWarranted,
}

impl Warrant {
    pub fn is_warranted(self) -> bool {
        self == Warrant::Warranted
    }
}

impl From<bool> for Warrant {
    fn from(b: bool) -> Self {
        if b {
            Warrant::Warranted
        } else {
            Warrant::NotWarranted
        }
    }
}

impl fmt::Display for Warrant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Warrant::Warranted => "warranted",
            Warrant::NotWarranted => "not_warranted",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Step {
    Fact,
    Strict(String),
    Defeasible(String),
}

/// Proof tree of a literal: the rule applied and the derivations of its body.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Derivation {
    pub literal: Literal,
    pub step: Step,
    pub premises: Vec<Derivation>,
}

impl Derivation {
    /// Every literal in the tree, root first.
    pub fn literals(&self) -> Vec<&Literal> {
        let mut out = vec![&self.literal];
        for p in &self.premises {
            out.extend(p.literals());
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Argument {
    pub conclusion: Literal,
    /// Ids of the defeasible rules used; minimal.
    pub support: BTreeSet<String>,
    pub derivation: Derivation,
}

impl fmt::Display for Argument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let support: Vec<&str> = self.support.iter().map(String::as_str).collect();
        write!(f, "<{{{}}}, {}>", support.join(", "), self.conclusion)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mark {
    Undefeated,
    Defeated,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DialecticalTree {
    pub argument: Argument,
    pub mark: Mark,
    pub defeaters: Vec<DialecticalTree>,
}

impl DialecticalTree {
    pub fn node_count(&self) -> usize {
        1 + self.defeaters.iter().map(Self::node_count).sum::<usize>()
    }

    /// Indented rendering, one node per line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(&mut out, 0);
        out
    }

    fn render_into(&self, out: &mut String, depth: usize) {
        let mark = match self.mark {
            Mark::Undefeated => "U",
            Mark::Defeated => "D",
        };
        let role = if depth == 0 { "argument" } else { "defeated by" };
        out.push_str(&format!(
            "{}{} {} [{}]\n",
            "  ".repeat(depth),
            role,
            self.argument,
            mark
        ));
        for d in &self.defeaters {
            d.render_into(out, depth + 1);
        }
    }
}

impl DefeasibleProgram {
    /// All minimal, consistent arguments concluding `l`, ordered by support.
    pub fn arguments_for(&self, l: &Literal) -> Vec<Argument> {
        let Some(li) = literal_index(&self.compiled, l) else {
            return Vec::new();
        };
        let mut s = Session::new(&self.compiled);
        let ids = s.arguments_for(li);
        ids.iter().map(|&a| s.export(a)).collect()
    }

    /// Whether `attacker` defeats `target`; both must be arguments of this
    /// program.
    pub fn defeats(&self, attacker: &Argument, target: &Argument) -> bool {
        let mut s = Session::new(&self.compiled);
        match (self.locate(&mut s, attacker), self.locate(&mut s, target)) {
            (Some(a), Some(t)) => s.defeats(a, t),
            _ => false,
        }
    }

    fn locate(&self, s: &mut Session<'_>, arg: &Argument) -> Option<usize> {
        let c = &self.compiled;
        let l = literal_index(c, &arg.conclusion)?;
        let support: Option<BitSet> = arg
            .support
            .iter()
            .map(|id| c.defeasible_ids.binary_search(id).ok())
            .collect();
        s.find_argument(l, &support?)
    }

    pub fn warrant(&self, l: &Literal) -> Result<Warrant, InconsistentBase> {
        self.check_consistent()?;
        let Some(li) = literal_index(&self.compiled, l) else {
            return Ok(Warrant::NotWarranted);
        };
        Ok(Session::new(&self.compiled).warranted(li).into())
    }

    /// Warrant status of several literals, sharing one session.
    pub fn warrant_all<'a>(
        &self,
        literals: impl IntoIterator<Item = &'a Literal>,
    ) -> Result<Vec<Warrant>, InconsistentBase> {
        self.check_consistent()?;
        let mut s = Session::new(&self.compiled);
        Ok(literals
            .into_iter()
            .map(|l| match literal_index(&self.compiled, l) {
                Some(li) => s.warranted(li).into(),
                None => Warrant::NotWarranted,
            })
            .collect())
    }

    /// Every warranted literal over the atoms of the program.
    pub fn consequences(&self) -> Result<BTreeSet<Literal>, InconsistentBase> {
        self.check_consistent()?;
        let c = &self.compiled;
        let mut s = Session::new(c);
        Ok((0..c.literal_count())
            .filter(|&l| s.warranted(l))
            .map(|l| c.literal(l))
            .collect())
    }

    /// One dialectical tree per argument for `l`.
    pub fn dialectical_trees(&self, l: &Literal) -> Vec<DialecticalTree> {
        let Some(li) = literal_index(&self.compiled, l) else {
            return Vec::new();
        };
        let mut s = Session::new(&self.compiled);
        let ids = s.arguments_for(li);
        ids.iter().map(|&a| s.tree(a)).collect()
    }
}

#[cfg(test)]
mod tests;
