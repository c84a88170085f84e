//! Ground propositional literals.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LiteralError {
    #[error("empty identifier")]
    Empty,
    #[error("identifier `{0}` must start with a lowercase letter")]
    BadStart(String),
    #[error("identifier `{0}` may only contain lowercase letters, digits and `_`")]
    BadChar(String),
}

/// Checks the identifier grammar shared by atoms and declaration ids:
/// `[a-z][a-z0-9_]*`.
pub fn check_identifier(s: &str) -> Result<(), LiteralError> {
    let mut chars = s.chars();
    match chars.next() {
        None => return Err(LiteralError::Empty),
        Some(c) if c.is_ascii_lowercase() => {}
        Some(_) => return Err(LiteralError::BadStart(s.to_string())),
    }
    if chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_') {
        Ok(())
    } else {
        Err(LiteralError::BadChar(s.to_string()))
    }
}

/// A propositional atom. Always a valid identifier.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Atom(String);

impl Atom {
    pub fn new(name: impl Into<String>) -> Result<Self, LiteralError> {
        let name = name.into();
        check_identifier(&name)?;
        Ok(Atom(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// An atom or its negation, written `~atom`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    atom: Atom,
    negated: bool,
}

impl Literal {
    pub fn new(atom: Atom, negated: bool) -> Self {
        Literal { atom, negated }
    }

    pub fn positive(atom: Atom) -> Self {
        Literal::new(atom, false)
    }

    /// Convenience constructor for tests and fixtures; panics on a bad literal.
    pub fn lit(s: &str) -> Self {
        s.parse().unwrap_or_else(|e| panic!("bad literal `{s}`: {e}"))
    }

    pub fn atom(&self) -> &Atom {
        &self.atom
    }

    pub fn is_negated(&self) -> bool {
        self.negated
    }

    pub fn complement(&self) -> Self {
        Literal {
            atom: self.atom.clone(),
            negated: !self.negated,
        }
    }
}

impl FromStr for Literal {
    type Err = LiteralError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        match s.strip_prefix('~') {
            Some(rest) => Ok(Literal::new(Atom::new(rest)?, true)),
            None => Ok(Literal::new(Atom::new(s)?, false)),
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            f.write_str("~")?;
        }
        f.write_str(self.atom.as_str())
    }
}

impl Serialize for Literal {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}
