//! Machine-readable command report.
//!
//! Every list is sorted or kept in a deterministic order so that identical
//! inputs serialize to identical bytes.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::diag::Diagnostic;
use crate::engine::{DialecticalTree, Warrant};
use crate::ontology::AttitudeForm;
use crate::solver::{AggregatePreference, Condition, Solution, SolveOutcome};
use crate::speech_act::{Classification, Classified};

pub const REPORT_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub version: &'static str,
    pub command: String,
    pub diagnostics: Vec<Diagnostic>,
    pub solutions: Vec<SolutionSummary>,
    pub exhaustive: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stats: Option<SolveStats>,
    /// Preference ids retained after meta-preference resolution.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub effective_preferences: Option<Vec<String>>,
    /// Outcome of the classical reduction, when it was requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classical_entailment: Option<bool>,
    /// Per utterance leaf, in document order.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classifications: Option<Vec<ClassificationSummary>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub explanation: Option<Explanation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationSummary {
    pub utterance: String,
    /// Element kind keyword or attitude form; absent when classification
    /// failed.
    pub instance: Option<String>,
}

impl ClassificationSummary {
    pub fn all(c: &Classification) -> Vec<Self> {
        c.results
            .iter()
            .map(|(id, r)| ClassificationSummary {
                utterance: id.clone(),
                instance: r.as_ref().ok().map(|c| match c {
                    Classified::Element(e) => e.kind.keyword().to_string(),
                    Classified::Attitude(a) => match a.form {
                        AttitudeForm::Evaluation { .. } => "evaluation".into(),
                        AttitudeForm::Preference { .. } => "preference".into(),
                        AttitudeForm::MetaPreference { .. } => "meta_preference".into(),
                    },
                }),
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Explanation {
    pub literal: String,
    /// Signature of the candidate whose facts were used.
    pub candidate: String,
    pub verdict: Warrant,
    pub trees: Vec<DialecticalTree>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolveStats {
    pub examined: usize,
    pub feasible: usize,
    pub dominated: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionVerdict {
    pub condition: Condition,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolutionSummary {
    pub signature: String,
    pub assumptions: Vec<String>,
    pub goals: Vec<String>,
    pub quality_constraints: Vec<String>,
    pub softgoals: Vec<String>,
    pub plans: Vec<String>,
    pub verdicts: Vec<ConditionVerdict>,
    /// Effective preferences mentioning an element of this solution.
    pub preferences: Vec<String>,
    pub warranted: Vec<String>,
}

fn sorted(set: &BTreeSet<String>) -> Vec<String> {
    set.iter().cloned().collect()
}

impl SolutionSummary {
    pub fn new(s: &Solution, agg: &AggregatePreference) -> Self {
        let c = &s.candidate;
        let preferences = agg
            .orders
            .iter()
            .filter(|o| c.contains(&o.preferred) || c.contains(&o.dispreferred))
            .map(|o| o.id.clone())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        SolutionSummary {
            signature: c.signature(),
            assumptions: sorted(&c.assumptions),
            goals: sorted(&c.goals),
            quality_constraints: sorted(&c.qcs),
            softgoals: sorted(&c.softgoals),
            plans: sorted(&c.plans),
            verdicts: s
                .verdicts
                .iter()
                .map(|v| ConditionVerdict {
                    condition: v.condition,
                    passed: v.passed,
                })
                .collect(),
            preferences,
            warranted: s.warranted.iter().map(ToString::to_string).collect(),
        }
    }
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report {
            version: REPORT_VERSION,
            command: command.into(),
            diagnostics: Vec::new(),
            solutions: Vec::new(),
            exhaustive: true,
            stats: None,
            effective_preferences: None,
            classical_entailment: None,
            classifications: None,
            explanation: None,
        }
    }

    pub fn with_diagnostics(mut self, diagnostics: impl IntoIterator<Item = Diagnostic>) -> Self {
        self.diagnostics.extend(diagnostics);
        self
    }

    pub fn from_outcome(command: impl Into<String>, outcome: &SolveOutcome) -> Self {
        let agg = &outcome.aggregate;
        Report {
            diagnostics: outcome.diagnostics.clone(),
            solutions: outcome
                .solutions
                .iter()
                .map(|s| SolutionSummary::new(s, agg))
                .collect(),
            exhaustive: outcome.exhaustive,
            stats: Some(SolveStats {
                examined: outcome.examined,
                feasible: outcome.feasible,
                dominated: outcome.dominated,
            }),
            effective_preferences: Some(sorted(&agg.effective)),
            ..Report::new(command)
        }
    }

    pub fn has_errors(&self) -> bool {
        crate::diag::has_errors(&self.diagnostics)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_model;
    use crate::solver::{solve, SolveOptions};
    use crate::validate::ValidationOptions;

    #[test]
    fn summary_lists_solution_content() {
        let pm = parse_model(
            "plan p1 { holds: a }\ngoal g1 { holds: b }\nplan p2 { holds: c }\nrule r: a => b\n\
             prefer x: p1 > p2\nalternatives { p1 | p2 }\n",
            "t.req",
            &ValidationOptions::default(),
        );
        let outcome = solve(&pm.model, &SolveOptions::default()).unwrap();
        let r = Report::from_outcome("solve", &outcome);
        assert_eq!(r.version, "1");
        assert_eq!(r.solutions.len(), 1);
        let s = &r.solutions[0];
        assert_eq!(s.plans, ["p1"]);
        assert_eq!(s.goals, ["g1"]);
        assert_eq!(s.verdicts.len(), 5);
        assert_eq!(s.preferences, ["x"]);
        assert_eq!(s.warranted, ["a", "b"]);
        assert_eq!(r.effective_preferences.as_deref(), Some(&["x".to_string()][..]));
        assert!(r.exhaustive && !r.has_errors());
    }
}
