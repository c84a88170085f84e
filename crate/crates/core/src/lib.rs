//! Requirements-modeling workbench.
//!
//! Stakeholder statements are classified into domain assumptions, goals,
//! quality constraints, softgoals, plans and attitudes ([`speech_act`],
//! [`ontology`]). Models are written in a small line-oriented language
//! ([`dsl`]). Candidate specifications are evaluated with a defeasible
//! consequence relation ([`engine`]) and the non-dominated ones are selected
//! under stakeholder optionality and preferences ([`solver`]).

pub mod diag;
pub mod dsl;
pub mod engine;
pub mod literal;
pub mod ontology;
pub mod report;
pub mod solver;
pub mod speech_act;
pub mod validate;

pub use diag::{Diagnostic, Severity, SourceSpan};
pub use literal::{Atom, Literal};
pub use ontology::Model;
