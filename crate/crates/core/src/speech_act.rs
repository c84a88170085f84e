//! From annotated stakeholder utterances to ontology instances.
//!
//! Illocutionary force is input metadata. Each force determines a modality
//! (belief, desire, intention, attitude) and the modality determines the kind
//! of instance the content becomes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::literal::Literal;
use crate::ontology::{
    classify_directive_content, Attitude, AttitudeForm, ClassifyError, DirectiveContent, Element,
    ElementKind, Model, QualityType, Sign,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Force {
    Assertive,
    Declarative,
    RepresentativeDeclarative,
    Directive,
    Commissive,
    Expressive,
}

impl Force {
    pub const ALL: [Force; 6] = [
        Force::Assertive,
        Force::Declarative,
        Force::RepresentativeDeclarative,
        Force::Directive,
        Force::Commissive,
        Force::Expressive,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            Force::Assertive => "assertive",
            Force::Declarative => "declarative",
            Force::RepresentativeDeclarative => "representative_declarative",
            Force::Directive => "directive",
            Force::Commissive => "commissive",
            Force::Expressive => "expressive",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.keyword() == s)
    }

    pub fn modality(self) -> Modality {
        match self {
            Force::Assertive | Force::Declarative | Force::RepresentativeDeclarative => {
                Modality::Belief
            }
            Force::Directive => Modality::Desire,
            Force::Commissive => Modality::Intention,
            Force::Expressive => Modality::Attitude,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Modality {
    #[serde(rename = "B")]
    Belief,
    #[serde(rename = "D")]
    Desire,
    #[serde(rename = "I")]
    Intention,
    #[serde(rename = "A")]
    Attitude,
}

impl fmt::Display for Modality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Modality::Belief => "B",
            Modality::Desire => "D",
            Modality::Intention => "I",
            Modality::Attitude => "A",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Connective {
    And,
    Or,
    IfThen,
}

impl Connective {
    pub fn keyword(self) -> &'static str {
        match self {
            Connective::And => "and",
            Connective::Or => "or",
            Connective::IfThen => "if_then",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Self> {
        match s {
            "and" => Some(Connective::And),
            "or" => Some(Connective::Or),
            "if_then" => Some(Connective::IfThen),
            _ => None,
        }
    }
}

/// Propositional content of a leaf utterance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "type")]
pub enum Payload {
    Holds {
        holds: Literal,
        quality: Option<String>,
        constraint: Option<String>,
        params: Vec<String>,
    },
    Evaluation {
        sign: Sign,
        target: String,
    },
    Preference {
        preferred: String,
        dispreferred: String,
    },
    MetaPreference {
        preferred: String,
        dispreferred: String,
    },
}

impl Payload {
    pub fn holds(holds: Literal) -> Self {
        Payload::Holds {
            holds,
            quality: None,
            constraint: None,
            params: Vec::new(),
        }
    }

    pub fn is_attitudinal(&self) -> bool {
        !matches!(self, Payload::Holds { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UtteranceBody {
    Leaf { force: Force, payload: Payload },
    Compound {
        connective: Connective,
        children: Vec<Utterance>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Utterance {
    pub id: String,
    pub text: Option<String>,
    pub body: UtteranceBody,
}

impl Utterance {
    pub fn leaf(id: impl Into<String>, force: Force, payload: Payload) -> Self {
        Utterance {
            id: id.into(),
            text: None,
            body: UtteranceBody::Leaf { force, payload },
        }
    }

    pub fn compound(id: impl Into<String>, connective: Connective, children: Vec<Utterance>) -> Self {
        Utterance {
            id: id.into(),
            text: None,
            body: UtteranceBody::Compound {
                connective,
                children,
            },
        }
    }

    pub fn with_text(mut self, text: impl Into<String>) -> Self {
        self.text = Some(text.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModalContent {
    pub modality: Modality,
    pub force: Force,
    pub payload: Payload,
    pub source: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpeechActError {
    #[error("compound utterance `{id}` needs {expected} children, found {found}")]
    MalformedCompound {
        id: String,
        expected: &'static str,
        found: usize,
    },
    #[error("utterance `{0}` is compound; only leaves carry content")]
    NotALeaf(String),
    #[error("utterance `{id}`: {modality} content needs a {expected} payload")]
    PayloadMismatch {
        id: String,
        modality: Modality,
        expected: &'static str,
    },
    #[error("utterance `{id}`: {kind} content may not reference a quality")]
    UnexpectedQuality { id: String, kind: ElementKind },
    #[error("utterance `{id}`: {source}")]
    Directive { id: String, source: ClassifyError },
    #[error("utterance `{id}` references unknown {what} `{target}`")]
    DanglingReference {
        id: String,
        what: &'static str,
        target: String,
    },
    #[error("utterance `{id}` orders a {preferred} against a {dispreferred}; mixed orders are not supported")]
    MixedOrder {
        id: String,
        preferred: ElementKind,
        dispreferred: ElementKind,
    },
}

impl SpeechActError {
    pub fn code(&self) -> &'static str {
        match self {
            SpeechActError::MalformedCompound { .. } => "utterance.malformed",
            SpeechActError::NotALeaf(_) => "utterance.not_leaf",
            SpeechActError::PayloadMismatch { .. } => "utterance.payload",
            SpeechActError::UnexpectedQuality { .. } => "utterance.quality",
            SpeechActError::Directive { .. } => "utterance.directive",
            SpeechActError::DanglingReference { .. } => "ref.dangling",
            SpeechActError::MixedOrder { .. } => "attitude.mixed_order",
        }
    }
}

/// A leaf together with the connectives of the compounds enclosing it,
/// outermost first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecomposedLeaf<'a> {
    pub leaf: &'a Utterance,
    pub connectives: Vec<Connective>,
}

/// Leaves of an utterance tree in document order.
pub fn decompose(u: &Utterance) -> Result<Vec<DecomposedLeaf<'_>>, SpeechActError> {
    fn walk<'a>(
        u: &'a Utterance,
        path: &mut Vec<Connective>,
        out: &mut Vec<DecomposedLeaf<'a>>,
    ) -> Result<(), SpeechActError> {
        match &u.body {
            UtteranceBody::Leaf { .. } => {
                out.push(DecomposedLeaf {
                    leaf: u,
                    connectives: path.clone(),
                });
                Ok(())
            }
            UtteranceBody::Compound {
                connective,
                children,
            } => {
                let ok = match connective {
                    Connective::IfThen => children.len() == 2,
                    _ => children.len() >= 2,
                };
                if !ok {
                    return Err(SpeechActError::MalformedCompound {
                        id: u.id.clone(),
                        expected: if *connective == Connective::IfThen {
                            "exactly 2"
                        } else {
                            "at least 2"
                        },
                        found: children.len(),
                    });
                }
                path.push(*connective);
                for c in children {
                    walk(c, path, out)?;
                }
                path.pop();
                Ok(())
            }
        }
    }
    let mut out = Vec::new();
    walk(u, &mut Vec::new(), &mut out)?;
    Ok(out)
}

pub fn modalize(u: &Utterance) -> Result<ModalContent, SpeechActError> {
    match &u.body {
        UtteranceBody::Leaf { force, payload } => Ok(ModalContent {
            modality: force.modality(),
            force: *force,
            payload: payload.clone(),
            source: u.id.clone(),
        }),
        UtteranceBody::Compound { .. } => Err(SpeechActError::NotALeaf(u.id.clone())),
    }
}

/// What classification can refer to: quality spaces, known elements (by
/// kind) and known element-level preferences.
#[derive(Debug, Clone, Default)]
pub struct ClassificationContext {
    pub qualities: BTreeMap<String, QualityType>,
    pub elements: BTreeMap<String, ElementKind>,
    pub preferences: BTreeSet<String>,
}

impl ClassificationContext {
    pub fn from_model(model: &Model) -> Self {
        ClassificationContext {
            qualities: model.qualities.clone(),
            elements: model
                .elements
                .values()
                .map(|e| (e.id.clone(), e.kind))
                .collect(),
            preferences: model.preferences().map(|(_, _, a)| a.id.clone()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "instance")]
pub enum Classified {
    Element(Element),
    Attitude(Attitude),
}

impl Classified {
    pub fn id(&self) -> &str {
        match self {
            Classified::Element(e) => &e.id,
            Classified::Attitude(a) => &a.id,
        }
    }
}

pub fn classify(
    mc: &ModalContent,
    ctx: &ClassificationContext,
) -> Result<Classified, SpeechActError> {
    let id = mc.source.clone();
    match (mc.modality, &mc.payload) {
        (
            Modality::Belief | Modality::Intention,
            Payload::Holds {
                holds,
                quality,
                constraint,
                ..
            },
        ) => {
            let kind = if mc.modality == Modality::Belief {
                ElementKind::DomainAssumption
            } else {
                ElementKind::Plan
            };
            if quality.is_some() || constraint.is_some() {
                return Err(SpeechActError::UnexpectedQuality { id, kind });
            }
            let mut e = Element::new(id.clone(), kind, holds.clone());
            e.source = Some(id);
            Ok(Classified::Element(e))
        }
        (
            Modality::Desire,
            Payload::Holds {
                holds,
                quality,
                constraint,
                params,
            },
        ) => {
            let kind = classify_directive_content(
                DirectiveContent {
                    holds,
                    quality: quality.as_deref(),
                    constraint: constraint.as_deref(),
                },
                &ctx.qualities,
            )
            .map_err(|source| SpeechActError::Directive {
                id: id.clone(),
                source,
            })?;
            let mut e = Element::new(id.clone(), kind, holds.clone());
            e.quality = quality.clone();
            if kind == ElementKind::QualityConstraint {
                e.constraint = constraint.clone();
            }
            e.params = params.clone();
            e.source = Some(id);
            Ok(Classified::Element(e))
        }
        (Modality::Attitude, Payload::Evaluation { sign, target }) => {
            if !ctx.elements.contains_key(target) {
                return Err(SpeechActError::DanglingReference {
                    id,
                    what: "element",
                    target: target.clone(),
                });
            }
            Ok(Classified::Attitude(Attitude::evaluation(id, *sign, target)))
        }
        (
            Modality::Attitude,
            Payload::Preference {
                preferred,
                dispreferred,
            },
        ) => {
            let kind = |t: &String| {
                ctx.elements
                    .get(t)
                    .copied()
                    .ok_or_else(|| SpeechActError::DanglingReference {
                        id: id.clone(),
                        what: "element",
                        target: t.clone(),
                    })
            };
            let (kp, kd) = (kind(preferred)?, kind(dispreferred)?);
            if kp != kd {
                return Err(SpeechActError::MixedOrder {
                    id,
                    preferred: kp,
                    dispreferred: kd,
                });
            }
            Ok(Classified::Attitude(Attitude::preference(
                id,
                preferred,
                dispreferred,
            )))
        }
        (
            Modality::Attitude,
            Payload::MetaPreference {
                preferred,
                dispreferred,
            },
        ) => {
            for t in [preferred, dispreferred] {
                if !ctx.preferences.contains(t) {
                    return Err(SpeechActError::DanglingReference {
                        id,
                        what: "preference",
                        target: t.clone(),
                    });
                }
            }
            Ok(Classified::Attitude(Attitude::meta_preference(
                id,
                preferred,
                dispreferred,
            )))
        }
        (modality, _) => Err(SpeechActError::PayloadMismatch {
            id,
            modality,
            expected: if modality == Modality::Attitude {
                "favor/disfavor/prefer"
            } else {
                "holds"
            },
        }),
    }
}

/// Result of classifying a batch of utterances.
#[derive(Debug, Clone)]
pub struct Classification {
    /// Per leaf, in document order.
    pub results: Vec<(String, Result<Classified, SpeechActError>)>,
    /// Classified instances plus whatever they reference from the registry.
    pub skeleton: Model,
}

impl Classification {
    pub fn failures(&self) -> impl Iterator<Item = &SpeechActError> {
        self.results.iter().filter_map(|(_, r)| r.as_ref().err())
    }

    pub fn is_complete(&self) -> bool {
        self.failures().next().is_none()
    }
}

/// Decomposes, modalizes and classifies every utterance. Non-attitudes are
/// classified first so that attitudes may refer to them; element-level
/// preferences come before meta-preferences.
pub fn classify_utterances(
    utterances: &[Utterance],
    qualities: &BTreeMap<String, QualityType>,
    registry: &Model,
) -> Classification {
    let mut ctx = ClassificationContext::from_model(registry);
    for (id, q) in qualities {
        ctx.qualities.entry(id.clone()).or_insert_with(|| q.clone());
    }

    let mut slots: Vec<(String, Option<Result<Classified, SpeechActError>>)> = Vec::new();
    let mut pending: Vec<(usize, ModalContent)> = Vec::new();
    for u in utterances {
        match decompose(u) {
            Err(e) => slots.push((u.id.clone(), Some(Err(e)))),
            Ok(leaves) => {
                for l in leaves {
                    let idx = slots.len();
                    match modalize(l.leaf) {
                        Ok(mc) => {
                            slots.push((l.leaf.id.clone(), None));
                            pending.push((idx, mc));
                        }
                        Err(e) => slots.push((l.leaf.id.clone(), Some(Err(e)))),
                    }
                }
            }
        }
    }

    let phase = |mc: &ModalContent| match &mc.payload {
        Payload::Holds { .. } => 0,
        Payload::Evaluation { .. } | Payload::Preference { .. } => 1,
        Payload::MetaPreference { .. } => 2,
    };
    pending.sort_by_key(|(idx, mc)| (phase(mc), *idx));
    for (idx, mc) in pending {
        let r = classify(&mc, &ctx);
        match &r {
            Ok(Classified::Element(e)) => {
                ctx.elements.insert(e.id.clone(), e.kind);
            }
            Ok(Classified::Attitude(a)) if matches!(a.form, AttitudeForm::Preference { .. }) => {
                ctx.preferences.insert(a.id.clone());
            }
            _ => {}
        }
        slots[idx].1 = Some(r);
    }

    let results: Vec<(String, Result<Classified, SpeechActError>)> = slots
        .into_iter()
        .map(|(id, r)| (id, r.expect("every slot is classified")))
        .collect();
    let skeleton = build_skeleton(&results, &ctx.qualities, registry);
    Classification { results, skeleton }
}

fn build_skeleton(
    results: &[(String, Result<Classified, SpeechActError>)],
    qualities: &BTreeMap<String, QualityType>,
    registry: &Model,
) -> Model {
    let mut m = Model::new();
    for (_, r) in results {
        match r {
            Ok(Classified::Element(e)) => m.add_element(e.clone()),
            Ok(Classified::Attitude(a)) => m.add_attitude(a.clone()),
            Err(_) => {}
        }
    }
    // pull in referenced registry preferences, then elements, then qualities
    let metas: Vec<String> = m
        .attitudes
        .values()
        .filter_map(|a| match &a.form {
            AttitudeForm::MetaPreference {
                preferred,
                dispreferred,
            } => Some([preferred.clone(), dispreferred.clone()]),
            _ => None,
        })
        .flatten()
        .collect();
    for id in metas {
        if !m.attitudes.contains_key(&id) {
            if let Some(a) = registry.attitudes.get(&id) {
                m.add_attitude(a.clone());
            }
        }
    }
    let targets: Vec<String> = m
        .attitudes
        .values()
        .flat_map(|a| match &a.form {
            AttitudeForm::Evaluation { target, .. } => vec![target.clone()],
            AttitudeForm::Preference {
                preferred,
                dispreferred,
            } => vec![preferred.clone(), dispreferred.clone()],
            AttitudeForm::MetaPreference { .. } => vec![],
        })
        .collect();
    for id in targets {
        if !m.elements.contains_key(&id) {
            if let Some(e) = registry.elements.get(&id) {
                m.add_element(e.clone());
            }
        }
    }
    let used: BTreeSet<String> = m.elements.values().filter_map(|e| e.quality.clone()).collect();
    for q in used {
        if let Some(qt) = qualities.get(&q) {
            m.add_quality(qt.clone());
        }
    }
    let params: BTreeSet<String> = m.elements.values().flat_map(|e| e.params.clone()).collect();
    for p in params {
        if let Some(d) = registry.params.get(&p) {
            m.params.insert(p, d.clone());
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::{MeasurementLevel, QualityDomain, QualityStructure};

    fn directive(id: &str, holds: &str) -> Utterance {
        Utterance::leaf(id, Force::Directive, Payload::holds(Literal::lit(holds)))
    }

    #[test]
    fn force_table() {
        use Modality::*;
        let table: Vec<(Force, Modality)> = Force::ALL.iter().map(|f| (*f, f.modality())).collect();
        assert_eq!(
            table,
            [
                (Force::Assertive, Belief),
                (Force::Declarative, Belief),
                (Force::RepresentativeDeclarative, Belief),
                (Force::Directive, Desire),
                (Force::Commissive, Intention),
                (Force::Expressive, Attitude),
            ]
        );
        // onto all four modalities
        let image: BTreeSet<Modality> = table.iter().map(|(_, m)| *m).collect();
        assert_eq!(image.len(), 4);
    }

    #[test]
    fn leaf_decomposes_to_itself() {
        let u = directive("u1", "booking_confirmed");
        let leaves = decompose(&u).unwrap();
        assert_eq!(leaves.len(), 1);
        assert_eq!(leaves[0].leaf, &u);
        assert!(leaves[0].connectives.is_empty());
    }

    #[test]
    fn conditional_decomposes_into_both_acts() {
        let a = Utterance::leaf(
            "a",
            Force::Assertive,
            Payload::holds(Literal::lit("payment_confirmed")),
        );
        let b = directive("b", "flight_booked");
        let u = Utterance::compound("c", Connective::IfThen, vec![a, b]);
        let ids: Vec<&str> = decompose(&u)
            .unwrap()
            .iter()
            .map(|l| l.leaf.id.as_str())
            .collect();
        assert_eq!(ids, ["a", "b"]);
    }

    #[test]
    fn nested_compounds_flatten_in_order() {
        let inner = Utterance::compound(
            "inner",
            Connective::And,
            vec![
                Utterance::leaf("c", Force::Commissive, Payload::holds(Literal::lit("x"))),
                Utterance::leaf(
                    "e",
                    Force::Expressive,
                    Payload::Evaluation {
                        sign: Sign::Favor,
                        target: "d".into(),
                    },
                ),
            ],
        );
        let u = Utterance::compound("outer", Connective::And, vec![directive("d", "y"), inner]);
        let leaves = decompose(&u).unwrap();
        let ids: Vec<&str> = leaves.iter().map(|l| l.leaf.id.as_str()).collect();
        assert_eq!(ids, ["d", "c", "e"]);
        assert_eq!(leaves[2].connectives, [Connective::And, Connective::And]);
    }

    #[test]
    fn malformed_compounds() {
        let one = Utterance::compound("c", Connective::Or, vec![directive("d", "y")]);
        assert!(matches!(
            decompose(&one),
            Err(SpeechActError::MalformedCompound { found: 1, .. })
        ));
        let three = Utterance::compound(
            "c",
            Connective::IfThen,
            vec![directive("a", "x"), directive("b", "y"), directive("d", "z")],
        );
        assert!(matches!(
            decompose(&three),
            Err(SpeechActError::MalformedCompound { found: 3, .. })
        ));
    }

    #[test]
    fn modalize_rejects_compounds() {
        let u = Utterance::compound(
            "c",
            Connective::And,
            vec![directive("a", "x"), directive("b", "y")],
        );
        assert_eq!(modalize(&u), Err(SpeechActError::NotALeaf("c".into())));
    }

    fn ctx() -> ClassificationContext {
        let mut ctx = ClassificationContext::default();
        ctx.qualities.insert(
            "screens".into(),
            QualityType {
                id: "screens".into(),
                level: MeasurementLevel::Ordinal,
                structure: QualityStructure::WellDefinedShared,
                domain: Some(QualityDomain::Range(1, 50)),
            },
        );
        ctx.elements.insert("g1".into(), ElementKind::Goal);
        ctx.elements.insert("p1".into(), ElementKind::Plan);
        ctx.elements.insert("p2".into(), ElementKind::Plan);
        ctx
    }

    #[test]
    fn mixed_order_is_rejected() {
        let u = Utterance::leaf(
            "x",
            Force::Expressive,
            Payload::Preference {
                preferred: "g1".into(),
                dispreferred: "p1".into(),
            },
        );
        let r = classify(&modalize(&u).unwrap(), &ctx());
        assert!(matches!(r, Err(SpeechActError::MixedOrder { .. })));
        assert_eq!(r.unwrap_err().code(), "attitude.mixed_order");
    }

    #[test]
    fn dangling_attitude_target() {
        let u = Utterance::leaf(
            "x",
            Force::Expressive,
            Payload::Evaluation {
                sign: Sign::Favor,
                target: "nope".into(),
            },
        );
        let r = classify(&modalize(&u).unwrap(), &ctx());
        assert!(matches!(r, Err(SpeechActError::DanglingReference { .. })));
    }

    #[test]
    fn payload_must_match_modality() {
        let u = Utterance::leaf("x", Force::Expressive, Payload::holds(Literal::lit("a")));
        assert!(matches!(
            classify(&modalize(&u).unwrap(), &ctx()),
            Err(SpeechActError::PayloadMismatch { .. })
        ));
        let u = Utterance::leaf(
            "x",
            Force::Directive,
            Payload::Evaluation {
                sign: Sign::Favor,
                target: "g1".into(),
            },
        );
        assert!(matches!(
            classify(&modalize(&u).unwrap(), &ctx()),
            Err(SpeechActError::PayloadMismatch { .. })
        ));
    }

    #[test]
    fn plan_preference_is_classified() {
        let u = Utterance::leaf(
            "ex10",
            Force::Expressive,
            Payload::Preference {
                preferred: "p1".into(),
                dispreferred: "p2".into(),
            },
        );
        let r = classify(&modalize(&u).unwrap(), &ctx()).unwrap();
        assert_eq!(r, Classified::Attitude(Attitude::preference("ex10", "p1", "p2")));
    }

    #[test]
    fn batch_resolves_forward_references() {
        // the evaluation precedes its target in the document
        let us = vec![
            Utterance::leaf(
                "ev",
                Force::Expressive,
                Payload::Evaluation {
                    sign: Sign::Disfavor,
                    target: "k1".into(),
                },
            ),
            Utterance::leaf("k1", Force::Assertive, Payload::holds(Literal::lit("a"))),
        ];
        let c = classify_utterances(&us, &BTreeMap::new(), &Model::new());
        assert!(c.is_complete());
        assert_eq!(c.results[0].0, "ev");
        assert_eq!(c.skeleton.elements.len(), 1);
        assert_eq!(c.skeleton.attitudes.len(), 1);
    }
}
