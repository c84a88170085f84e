//! Core requirements ontology: domain assumptions, goals, quality
//! constraints, softgoals, plans and the attitudes stakeholders hold toward
//! them.
//!
//! A [`Model`] is plain data. Cross-reference and invariant checking lives in
//! [`crate::validate`]; everything downstream assumes a validated model.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::literal::{Atom, Literal};

/// Default minimum absolute correlation for a justified approximation.
pub const DEFAULT_APPROX_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasurementLevel {
    Nominal,
    Ordinal,
    Interval,
    Ratio,
}

impl MeasurementLevel {
    pub const ALL: [MeasurementLevel; 4] = [
        MeasurementLevel::Nominal,
        MeasurementLevel::Ordinal,
        MeasurementLevel::Interval,
        MeasurementLevel::Ratio,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            MeasurementLevel::Nominal => "nominal",
            MeasurementLevel::Ordinal => "ordinal",
            MeasurementLevel::Interval => "interval",
            MeasurementLevel::Ratio => "ratio",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|l| l.keyword() == s)
    }
}

/// Whether a quality space is precise enough to verify constraints against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QualityStructure {
    WellDefinedShared,
    SubjectiveIllDefined,
}

impl QualityStructure {
    pub fn keyword(self) -> &'static str {
        match self {
            QualityStructure::WellDefinedShared => "well_defined_shared",
            QualityStructure::SubjectiveIllDefined => "subjective_ill_defined",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Self> {
        match s {
            "well_defined_shared" => Some(QualityStructure::WellDefinedShared),
            "subjective_ill_defined" => Some(QualityStructure::SubjectiveIllDefined),
            _ => None,
        }
    }
}

/// Value range of a quality space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QualityDomain {
    /// Inclusive integer range `lo..hi`.
    Range(i64, i64),
    /// Enumerated values, e.g. `[low, medium, high]`.
    Values(Vec<String>),
    /// Free-form description.
    Text(String),
}

impl QualityDomain {
    pub fn is_empty(&self) -> bool {
        match self {
            QualityDomain::Range(lo, hi) => lo > hi,
            QualityDomain::Values(v) => v.is_empty(),
            QualityDomain::Text(t) => t.trim().is_empty(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QualityType {
    pub id: String,
    pub level: MeasurementLevel,
    pub structure: QualityStructure,
    pub domain: Option<QualityDomain>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ElementKind {
    DomainAssumption,
    Goal,
    QualityConstraint,
    Softgoal,
    Plan,
}

impl ElementKind {
    pub const ALL: [ElementKind; 5] = [
        ElementKind::DomainAssumption,
        ElementKind::Goal,
        ElementKind::QualityConstraint,
        ElementKind::Softgoal,
        ElementKind::Plan,
    ];

    /// Declaration keyword in the model language.
    pub fn keyword(self) -> &'static str {
        match self {
            ElementKind::DomainAssumption => "assumption",
            ElementKind::Goal => "goal",
            ElementKind::QualityConstraint => "qc",
            ElementKind::Softgoal => "softgoal",
            ElementKind::Plan => "plan",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.keyword() == s)
    }

    /// One-letter symbol used in candidate signatures (`k`, `g`, `q`, `s`, `p`).
    pub fn symbol(self) -> char {
        match self {
            ElementKind::DomainAssumption => 'k',
            ElementKind::Goal => 'g',
            ElementKind::QualityConstraint => 'q',
            ElementKind::Softgoal => 's',
            ElementKind::Plan => 'p',
        }
    }

    pub fn from_symbol(c: char) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.symbol() == c)
    }
}

impl fmt::Display for ElementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ElementKind::DomainAssumption => "domain assumption",
            ElementKind::Goal => "goal",
            ElementKind::QualityConstraint => "quality constraint",
            ElementKind::Softgoal => "softgoal",
            ElementKind::Plan => "plan",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Optionality {
    Compulsory,
    Optional,
}

impl Optionality {
    pub fn keyword(self) -> &'static str {
        match self {
            Optionality::Compulsory => "compulsory",
            Optionality::Optional => "optional",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Self> {
        match s {
            "compulsory" => Some(Optionality::Compulsory),
            "optional" => Some(Optionality::Optional),
            _ => None,
        }
    }
}

/// One classified concept instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Element {
    pub id: String,
    pub kind: ElementKind,
    /// Declared optionality. `None` means "derive from evaluations", see
    /// [`Model::optionality_of`].
    pub optionality: Option<Optionality>,
    /// Literal made true when the element is satisfied or obtains.
    pub holds: Literal,
    pub quality: Option<String>,
    pub constraint: Option<String>,
    /// Parameter names of a generic goal `r(x)`.
    pub params: Vec<String>,
    pub source: Option<String>,
}

impl Element {
    pub fn new(id: impl Into<String>, kind: ElementKind, holds: Literal) -> Self {
        Element {
            id: id.into(),
            kind,
            optionality: None,
            holds,
            quality: None,
            constraint: None,
            params: Vec::new(),
            source: None,
        }
    }

    pub fn with_optionality(mut self, optionality: Optionality) -> Self {
        self.optionality = Some(optionality);
        self
    }

    pub fn with_quality(mut self, quality: impl Into<String>) -> Self {
        self.quality = Some(quality.into());
        self
    }

    pub fn with_constraint(mut self, constraint: impl Into<String>) -> Self {
        self.constraint = Some(constraint.into());
        self
    }
}

/// Finite value set for a goal parameter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParamDomain {
    pub name: String,
    pub values: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JustifiedApproximation {
    pub softgoal: String,
    pub qc: String,
    pub correlation: f64,
    pub justification: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Favor,
    Disfavor,
}

impl Sign {
    pub fn keyword(self) -> &'static str {
        match self {
            Sign::Favor => "favor",
            Sign::Disfavor => "disfavor",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Self> {
        match s {
            "favor" => Some(Sign::Favor),
            "disfavor" => Some(Sign::Disfavor),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "form")]
pub enum AttitudeForm {
    Evaluation { target: String, sign: Sign },
    /// `preferred ≻ dispreferred` over two elements of the same kind.
    Preference {
        preferred: String,
        dispreferred: String,
    },
    /// `preferred ≻ dispreferred` over two preference attitudes.
    MetaPreference {
        preferred: String,
        dispreferred: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Attitude {
    pub id: String,
    pub form: AttitudeForm,
    pub optionality: Optionality,
}

impl Attitude {
    pub fn evaluation(id: impl Into<String>, sign: Sign, target: impl Into<String>) -> Self {
        Attitude {
            id: id.into(),
            form: AttitudeForm::Evaluation {
                target: target.into(),
                sign,
            },
            optionality: Optionality::Compulsory,
        }
    }

    pub fn preference(
        id: impl Into<String>,
        preferred: impl Into<String>,
        dispreferred: impl Into<String>,
    ) -> Self {
        Attitude {
            id: id.into(),
            form: AttitudeForm::Preference {
                preferred: preferred.into(),
                dispreferred: dispreferred.into(),
            },
            optionality: Optionality::Compulsory,
        }
    }

    pub fn meta_preference(
        id: impl Into<String>,
        preferred: impl Into<String>,
        dispreferred: impl Into<String>,
    ) -> Self {
        Attitude {
            id: id.into(),
            form: AttitudeForm::MetaPreference {
                preferred: preferred.into(),
                dispreferred: dispreferred.into(),
            },
            optionality: Optionality::Compulsory,
        }
    }

    pub fn with_optionality(mut self, optionality: Optionality) -> Self {
        self.optionality = optionality;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Strength {
    Strict,
    Defeasible,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rule {
    pub id: String,
    pub body: BTreeSet<Literal>,
    pub head: Literal,
    pub strength: Strength,
}

impl Rule {
    pub fn new(
        id: impl Into<String>,
        body: impl IntoIterator<Item = Literal>,
        head: Literal,
        strength: Strength,
    ) -> Self {
        Rule {
            id: id.into(),
            body: body.into_iter().collect(),
            head,
            strength,
        }
    }

    pub fn strict(id: &str, body: &[&str], head: &str) -> Self {
        Rule::new(id, body.iter().map(|b| Literal::lit(b)), Literal::lit(head), Strength::Strict)
    }

    pub fn defeasible(id: &str, body: &[&str], head: &str) -> Self {
        Rule::new(
            id,
            body.iter().map(|b| Literal::lit(b)),
            Literal::lit(head),
            Strength::Defeasible,
        )
    }

    pub fn is_strict(&self) -> bool {
        self.strength == Strength::Strict
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.body.iter().map(Literal::to_string).collect();
        let arrow = if self.is_strict() { "->" } else { "=>" };
        write!(f, "{}: {} {} {}", self.id, body.join(" & "), arrow, self.head)
    }
}

/// `higher > lower` between two defeasible rule ids.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Priority {
    pub higher: String,
    pub lower: String,
}

impl Priority {
    pub fn new(higher: impl Into<String>, lower: impl Into<String>) -> Self {
        Priority {
            higher: higher.into(),
            lower: lower.into(),
        }
    }
}

/// The full set of declared ontology instances and the rules connecting them.
///
/// Collections are keyed by id so that two models holding the same
/// declarations compare equal regardless of declaration order.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Model {
    pub params: BTreeMap<String, ParamDomain>,
    pub qualities: BTreeMap<String, QualityType>,
    pub elements: BTreeMap<String, Element>,
    /// Keyed by `(softgoal, qc)`.
    pub approximations: BTreeMap<(String, String), JustifiedApproximation>,
    pub attitudes: BTreeMap<String, Attitude>,
    pub rules: BTreeMap<String, Rule>,
    pub priorities: BTreeSet<Priority>,
    /// Groups of mutually exclusive element ids.
    pub alternatives: BTreeSet<BTreeSet<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("quality `{0}` is not declared")]
    UnknownQuality(String),
    #[error("constraint expression required for well-defined quality `{0}`")]
    ConstraintRequired(String),
}

/// Desired content handed to the directive trichotomy.
#[derive(Debug, Clone, Copy)]
pub struct DirectiveContent<'a> {
    pub holds: &'a Literal,
    pub quality: Option<&'a str>,
    pub constraint: Option<&'a str>,
}

/// Goal / quality constraint / softgoal trichotomy for desired content.
///
/// No quality means a goal. A well-defined shared quality space with a
/// constraint gives a quality constraint; a subjective or ill-defined one
/// gives a softgoal.
pub fn classify_directive_content(
    content: DirectiveContent<'_>,
    registry: &BTreeMap<String, QualityType>,
) -> Result<ElementKind, ClassifyError> {
    let Some(qid) = content.quality else {
        return Ok(ElementKind::Goal);
    };
    let quality = registry
        .get(qid)
        .ok_or_else(|| ClassifyError::UnknownQuality(qid.to_string()))?;
    match quality.structure {
        QualityStructure::SubjectiveIllDefined => Ok(ElementKind::Softgoal),
        QualityStructure::WellDefinedShared => match content.constraint {
            Some(c) if !c.trim().is_empty() => Ok(ElementKind::QualityConstraint),
            _ => Err(ClassifyError::ConstraintRequired(qid.to_string())),
        },
    }
}

/// Compulsory/optional split of every element kind and of the attitudes.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct OptionalityPartition {
    pub compulsory: BTreeMap<ElementKind, BTreeSet<String>>,
    pub optional: BTreeMap<ElementKind, BTreeSet<String>>,
    pub attitudes_compulsory: BTreeSet<String>,
    pub attitudes_optional: BTreeSet<String>,
}

impl OptionalityPartition {
    pub fn cell(&self, kind: ElementKind, optionality: Optionality) -> &BTreeSet<String> {
        static EMPTY: BTreeSet<String> = BTreeSet::new();
        let map = match optionality {
            Optionality::Compulsory => &self.compulsory,
            Optionality::Optional => &self.optional,
        };
        map.get(&kind).unwrap_or(&EMPTY)
    }

    pub fn is_optional(&self, kind: ElementKind, id: &str) -> bool {
        self.cell(kind, Optionality::Optional).contains(id)
    }
}

impl Model {
    pub fn new() -> Self {
        Model::default()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
            && self.qualities.is_empty()
            && self.elements.is_empty()
            && self.approximations.is_empty()
            && self.attitudes.is_empty()
            && self.rules.is_empty()
            && self.priorities.is_empty()
            && self.alternatives.is_empty()
    }

    pub fn add_quality(&mut self, q: QualityType) {
        self.qualities.insert(q.id.clone(), q);
    }

    pub fn add_element(&mut self, e: Element) {
        self.elements.insert(e.id.clone(), e);
    }

    pub fn add_rule(&mut self, r: Rule) {
        self.rules.insert(r.id.clone(), r);
    }

    pub fn add_attitude(&mut self, a: Attitude) {
        self.attitudes.insert(a.id.clone(), a);
    }

    pub fn add_approximation(&mut self, a: JustifiedApproximation) {
        self.approximations
            .insert((a.softgoal.clone(), a.qc.clone()), a);
    }

    pub fn add_alternatives<I, S>(&mut self, group: I)
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.alternatives
            .insert(group.into_iter().map(Into::into).collect());
    }

    pub fn elements_of(&self, kind: ElementKind) -> impl Iterator<Item = &Element> {
        self.elements.values().filter(move |e| e.kind == kind)
    }

    pub fn kind_of(&self, id: &str) -> Option<ElementKind> {
        self.elements.get(id).map(|e| e.kind)
    }

    /// Evaluations targeting `id`, in attitude id order.
    pub fn evaluations_of<'a>(&'a self, id: &'a str) -> impl Iterator<Item = Sign> + 'a {
        self.attitudes.values().filter_map(move |a| match &a.form {
            AttitudeForm::Evaluation { target, sign } if target == id => Some(*sign),
            _ => None,
        })
    }

    /// Effective optionality: the declared value if any; otherwise optional
    /// when some evaluation targets the element, compulsory when none does.
    pub fn optionality_of(&self, element: &Element) -> Optionality {
        match element.optionality {
            Some(o) => o,
            None if self.evaluations_of(&element.id).next().is_some() => Optionality::Optional,
            None => Optionality::Compulsory,
        }
    }

    /// An element is disfavored when some evaluation of it is negative.
    pub fn is_disfavored(&self, id: &str) -> bool {
        self.evaluations_of(id).any(|s| s == Sign::Disfavor)
    }

    pub fn partition_by_optionality(&self) -> OptionalityPartition {
        let mut part = OptionalityPartition::default();
        for kind in ElementKind::ALL {
            part.compulsory.insert(kind, BTreeSet::new());
            part.optional.insert(kind, BTreeSet::new());
        }
        for e in self.elements.values() {
            let cell = match self.optionality_of(e) {
                Optionality::Compulsory => part.compulsory.get_mut(&e.kind),
                Optionality::Optional => part.optional.get_mut(&e.kind),
            };
            cell.expect("all kinds seeded").insert(e.id.clone());
        }
        for a in self.attitudes.values() {
            match a.optionality {
                Optionality::Compulsory => part.attitudes_compulsory.insert(a.id.clone()),
                Optionality::Optional => part.attitudes_optional.insert(a.id.clone()),
            };
        }
        part
    }

    /// The alternatives group containing `id`, if any.
    pub fn group_of(&self, id: &str) -> Option<&BTreeSet<String>> {
        self.alternatives.iter().find(|g| g.contains(id))
    }

    /// Ground literals an element stands for. Unparameterized elements yield
    /// their `holds` literal; a generic goal yields one literal per parameter
    /// assignment, named `<atom>_<v1>_<v2>...` in parameter order.
    pub fn ground_literals(&self, element: &Element) -> Vec<Literal> {
        if element.params.is_empty() {
            return vec![element.holds.clone()];
        }
        let mut names = vec![element.holds.atom().as_str().to_string()];
        for p in &element.params {
            let Some(domain) = self.params.get(p) else {
                // unresolved parameters are reported by validation
                return vec![element.holds.clone()];
            };
            names = names
                .iter()
                .flat_map(|n| domain.values.iter().map(move |v| format!("{n}_{v}")))
                .collect();
        }
        names
            .into_iter()
            .filter_map(|n| Atom::new(n).ok())
            .map(|a| Literal::new(a, element.holds.is_negated()))
            .collect()
    }

    /// Every atom mentioned by an element or a rule, after grounding.
    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut atoms = BTreeSet::new();
        for e in self.elements.values() {
            atoms.extend(self.ground_literals(e).into_iter().map(|l| l.atom().clone()));
        }
        for r in self.rules.values() {
            atoms.insert(r.head.atom().clone());
            atoms.extend(r.body.iter().map(|l| l.atom().clone()));
        }
        atoms
    }

    pub fn strict_rules(&self) -> impl Iterator<Item = &Rule> {
        self.rules.values().filter(|r| r.is_strict())
    }

    pub fn preferences(&self) -> impl Iterator<Item = (&str, &str, &Attitude)> {
        self.attitudes.values().filter_map(|a| match &a.form {
            AttitudeForm::Preference {
                preferred,
                dispreferred,
            } => Some((preferred.as_str(), dispreferred.as_str(), a)),
            _ => None,
        })
    }
}
