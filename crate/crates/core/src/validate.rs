//! Model invariant checks. Problems are reported as diagnostics; validation
//! never aborts.

use std::collections::{BTreeMap, BTreeSet};

use crate::diag::Diagnostic;
use crate::literal::check_identifier;
use crate::ontology::{AttitudeForm, ElementKind, Model, QualityStructure};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationOptions {
    /// Minimum |correlation| for a justified approximation.
    pub approx_threshold: f64,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        ValidationOptions {
            approx_threshold: crate::ontology::DEFAULT_APPROX_THRESHOLD,
        }
    }
}

pub fn validate_model(model: &Model, options: &ValidationOptions) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    check_identifiers(model, &mut out);
    check_qualities(model, &mut out);
    check_elements(model, &mut out);
    check_approximations(model, options, &mut out);
    check_attitudes(model, &mut out);
    check_rules(model, &mut out);
    check_alternatives(model, &mut out);
    out
}

fn check_identifiers(model: &Model, out: &mut Vec<Diagnostic>) {
    let ids = model
        .params
        .keys()
        .chain(model.qualities.keys())
        .chain(model.elements.keys())
        .chain(model.attitudes.keys())
        .chain(model.rules.keys());
    for id in ids {
        if let Err(e) = check_identifier(id) {
            out.push(Diagnostic::error("id.invalid", e.to_string()).about(id));
        }
    }
    for p in model.params.values() {
        if p.values.is_empty() {
            out.push(
                Diagnostic::error("param.empty_domain", "parameter has no values").about(&p.name),
            );
        }
        let distinct: BTreeSet<_> = p.values.iter().collect();
        if distinct.len() != p.values.len() {
            out.push(
                Diagnostic::error("param.duplicate_value", "parameter values must be distinct")
                    .about(&p.name),
            );
        }
        for v in &p.values {
            if check_identifier(v).is_err() {
                out.push(
                    Diagnostic::error(
                        "param.invalid_value",
                        format!("parameter value `{v}` is not an identifier"),
                    )
                    .about(&p.name),
                );
            }
        }
    }
}

fn check_qualities(model: &Model, out: &mut Vec<Diagnostic>) {
    for q in model.qualities.values() {
        if q.structure == QualityStructure::WellDefinedShared
            && q.domain.as_ref().is_none_or(|d| d.is_empty())
        {
            out.push(
                Diagnostic::error(
                    "quality.missing_domain",
                    "well-defined shared quality space requires a non-empty domain",
                )
                .about(&q.id),
            );
        }
    }
}

fn check_elements(model: &Model, out: &mut Vec<Diagnostic>) {
    for e in model.elements.values() {
        let quality = e.quality.as_ref().map(|qid| (qid, model.qualities.get(qid)));
        match e.kind {
            ElementKind::QualityConstraint => match quality {
                None => out.push(
                    Diagnostic::error(
                        "element.qc_quality",
                        "quality constraint requires a quality reference",
                    )
                    .about(&e.id),
                ),
                Some((qid, None)) => out.push(dangling(&e.id, "quality", qid)),
                Some((_, Some(q))) if q.structure != QualityStructure::WellDefinedShared => out
                    .push(
                        Diagnostic::error(
                            "element.qc_quality",
                            "quality constraint requires well-defined shared quality space",
                        )
                        .about(&e.id),
                    ),
                Some(_) => {}
            },
            ElementKind::Softgoal => match quality {
                None => out.push(
                    Diagnostic::error(
                        "element.softgoal_quality",
                        "softgoal requires a quality reference",
                    )
                    .about(&e.id),
                ),
                Some((qid, None)) => out.push(dangling(&e.id, "quality", qid)),
                Some((_, Some(q))) if q.structure != QualityStructure::SubjectiveIllDefined => out
                    .push(
                        Diagnostic::error(
                            "element.softgoal_quality",
                            "softgoal requires subjective quality space",
                        )
                        .about(&e.id),
                    ),
                Some(_) => {}
            },
            _ => {
                if e.quality.is_some() {
                    out.push(
                        Diagnostic::error(
                            "element.unexpected_quality",
                            format!("a {} may not reference a quality", e.kind),
                        )
                        .about(&e.id),
                    );
                }
            }
        }
        match (e.kind, &e.constraint) {
            (ElementKind::QualityConstraint, None) => out.push(
                Diagnostic::error(
                    "element.missing_constraint",
                    "constraint expression required",
                )
                .about(&e.id),
            ),
            (ElementKind::QualityConstraint, Some(c)) if c.trim().is_empty() => out.push(
                Diagnostic::error(
                    "element.missing_constraint",
                    "constraint expression required",
                )
                .about(&e.id),
            ),
            (ElementKind::QualityConstraint, Some(_)) | (_, None) => {}
            (_, Some(_)) => out.push(
                Diagnostic::error(
                    "element.unexpected_constraint",
                    format!("a {} may not carry a constraint expression", e.kind),
                )
                .about(&e.id),
            ),
        }
        if !e.params.is_empty() {
            if e.kind != ElementKind::Goal {
                out.push(
                    Diagnostic::error(
                        "element.unexpected_params",
                        "only goals take parameters",
                    )
                    .about(&e.id),
                );
            }
            let mut seen = BTreeSet::new();
            for p in &e.params {
                if !seen.insert(p) {
                    out.push(
                        Diagnostic::error(
                            "element.duplicate_param",
                            format!("parameter `{p}` listed twice"),
                        )
                        .about(&e.id),
                    );
                }
                if !model.params.contains_key(p) {
                    out.push(dangling(&e.id, "parameter", p));
                }
            }
        }
    }
}

fn check_approximations(model: &Model, options: &ValidationOptions, out: &mut Vec<Diagnostic>) {
    for a in model.approximations.values() {
        let subject = format!("{}<-{}", a.softgoal, a.qc);
        match model.kind_of(&a.softgoal) {
            None => out.push(dangling(&subject, "softgoal", &a.softgoal)),
            Some(ElementKind::Softgoal) => {}
            Some(k) => out.push(
                Diagnostic::error(
                    "approx.kind",
                    format!("`{}` is a {k}, not a softgoal", a.softgoal),
                )
                .about(&subject),
            ),
        }
        match model.kind_of(&a.qc) {
            None => out.push(dangling(&subject, "quality constraint", &a.qc)),
            Some(ElementKind::QualityConstraint) => {}
            Some(k) => out.push(
                Diagnostic::error(
                    "approx.kind",
                    format!("`{}` is a {k}, not a quality constraint", a.qc),
                )
                .about(&subject),
            ),
        }
        if !a.correlation.is_finite() || a.correlation.abs() > 1.0 {
            out.push(
                Diagnostic::error("approx.correlation_range", "correlation must lie in [-1, 1]")
                    .about(&subject),
            );
        } else if a.correlation.abs() < options.approx_threshold {
            out.push(
                Diagnostic::error(
                    "approx.insufficient_correlation",
                    format!(
                        "insufficient correlation: |{}| < {}",
                        a.correlation, options.approx_threshold
                    ),
                )
                .about(&subject),
            );
        }
        if a.justification.trim().is_empty() {
            out.push(
                Diagnostic::error(
                    "approx.missing_justification",
                    "justified approximation requires a justification record",
                )
                .about(&subject),
            );
        }
    }
}

fn check_attitudes(model: &Model, out: &mut Vec<Diagnostic>) {
    let mut meta_edges: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for a in model.attitudes.values() {
        match &a.form {
            AttitudeForm::Evaluation { target, .. } => {
                if !model.elements.contains_key(target) {
                    out.push(dangling(&a.id, "element", target));
                }
            }
            AttitudeForm::Preference {
                preferred,
                dispreferred,
            } => {
                let kp = model.kind_of(preferred);
                let kd = model.kind_of(dispreferred);
                if kp.is_none() {
                    out.push(dangling(&a.id, "element", preferred));
                }
                if kd.is_none() {
                    out.push(dangling(&a.id, "element", dispreferred));
                }
                if let (Some(kp), Some(kd)) = (kp, kd) {
                    if kp != kd {
                        out.push(
                            Diagnostic::error(
                                "attitude.mixed_order",
                                format!("preference orders a {kp} against a {kd}"),
                            )
                            .about(&a.id),
                        );
                    }
                }
                if preferred == dispreferred {
                    out.push(
                        Diagnostic::error(
                            "attitude.reflexive",
                            "an element cannot be preferred to itself",
                        )
                        .about(&a.id),
                    );
                }
            }
            AttitudeForm::MetaPreference {
                preferred,
                dispreferred,
            } => {
                for end in [preferred, dispreferred] {
                    match model.attitudes.get(end).map(|x| &x.form) {
                        None => out.push(dangling(&a.id, "preference", end)),
                        Some(AttitudeForm::Preference { .. }) => {}
                        Some(_) => out.push(
                            Diagnostic::error(
                                "attitude.meta_endpoint",
                                format!("`{end}` is not an element-level preference"),
                            )
                            .about(&a.id),
                        ),
                    }
                }
                meta_edges
                    .entry(preferred.as_str())
                    .or_default()
                    .push(dispreferred.as_str());
            }
        }
    }
    if let Some(node) = find_cycle(&meta_edges) {
        out.push(
            Diagnostic::error(
                "attitude.meta_cycle",
                "meta-preference graph contains a directed cycle",
            )
            .about(node),
        );
    }
}

fn check_rules(model: &Model, out: &mut Vec<Diagnostic>) {
    for r in model.rules.values() {
        if r.body.is_empty() {
            out.push(
                Diagnostic::error(
                    "rule.empty_body",
                    "rules need a non-empty body; facts come from chosen elements",
                )
                .about(&r.id),
            );
        }
    }
    let mut edges: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for p in &model.priorities {
        for id in [&p.higher, &p.lower] {
            match model.rules.get(id) {
                None => out.push(dangling(&format!("{}>{}", p.higher, p.lower), "rule", id)),
                Some(r) if r.is_strict() => out.push(
                    Diagnostic::error(
                        "priority.strict_rule",
                        format!("priorities apply to defeasible rules only; `{id}` is strict"),
                    )
                    .about(id),
                ),
                Some(_) => {}
            }
        }
        if p.higher == p.lower {
            out.push(
                Diagnostic::error("priority.reflexive", "a rule cannot outrank itself")
                    .about(&p.higher),
            );
        }
        edges.entry(&p.higher).or_default().push(&p.lower);
    }
    if let Some(node) = find_cycle(&edges) {
        out.push(
            Diagnostic::error("priority.cycle", "rule priorities contain a cycle").about(node),
        );
    }
}

fn check_alternatives(model: &Model, out: &mut Vec<Diagnostic>) {
    let mut owner: BTreeMap<&str, usize> = BTreeMap::new();
    for (i, group) in model.alternatives.iter().enumerate() {
        let subject = group.iter().cloned().collect::<Vec<_>>().join("|");
        if group.len() < 2 {
            out.push(
                Diagnostic::error(
                    "alternatives.too_small",
                    "an alternatives group needs at least two elements",
                )
                .about(&subject),
            );
        }
        let mut kinds = BTreeSet::new();
        for id in group {
            match model.kind_of(id) {
                None => out.push(dangling(&subject, "element", id)),
                Some(k) => {
                    kinds.insert(k);
                }
            }
            if owner.insert(id, i).is_some() {
                out.push(
                    Diagnostic::error(
                        "alternatives.overlap",
                        format!("`{id}` belongs to more than one alternatives group"),
                    )
                    .about(id),
                );
            }
        }
        if kinds.len() > 1 {
            out.push(
                Diagnostic::error(
                    "alternatives.mixed_kinds",
                    "alternatives must all be of the same kind",
                )
                .about(&subject),
            );
        }
    }
}

fn dangling(subject: &str, what: &str, target: &str) -> Diagnostic {
    Diagnostic::error(
        "ref.dangling",
        format!("reference to undeclared {what} `{target}`"),
    )
    .about(subject)
}

/// Returns a node on some directed cycle, if the graph has one.
fn find_cycle<'a>(edges: &BTreeMap<&'a str, Vec<&'a str>>) -> Option<&'a str> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Open,
        Done,
    }
    fn visit<'a>(
        n: &'a str,
        edges: &BTreeMap<&'a str, Vec<&'a str>>,
        marks: &mut BTreeMap<&'a str, Mark>,
    ) -> Option<&'a str> {
        match marks.get(n) {
            Some(Mark::Open) => return Some(n),
            Some(Mark::Done) => return None,
            None => {}
        }
        marks.insert(n, Mark::Open);
        for &m in edges.get(n).into_iter().flatten() {
            if let Some(c) = visit(m, edges, marks) {
                return Some(c);
            }
        }
        marks.insert(n, Mark::Done);
        None
    }
    let mut marks = BTreeMap::new();
    edges.keys().find_map(|&n| visit(n, edges, &mut marks))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::literal::Literal;
    use crate::ontology::*;

    fn base() -> Model {
        let mut m = Model::new();
        m.add_quality(QualityType {
            id: "screens".into(),
            level: MeasurementLevel::Ordinal,
            structure: QualityStructure::WellDefinedShared,
            domain: Some(QualityDomain::Range(1, 50)),
        });
        m.add_quality(QualityType {
            id: "convenience".into(),
            level: MeasurementLevel::Ordinal,
            structure: QualityStructure::SubjectiveIllDefined,
            domain: None,
        });
        m.add_element(
            Element::new("q1", ElementKind::QualityConstraint, Literal::lit("few_screens"))
                .with_quality("screens")
                .with_constraint("< 5"),
        );
        m.add_element(
            Element::new("sg1", ElementKind::Softgoal, Literal::lit("convenient"))
                .with_quality("convenience"),
        );
        m
    }

    fn codes(m: &Model) -> Vec<&'static str> {
        validate_model(m, &ValidationOptions::default())
            .into_iter()
            .map(|d| d.code)
            .collect()
    }

    #[test]
    fn base_model_is_clean() {
        assert!(codes(&base()).is_empty());
    }

    #[test]
    fn softgoal_on_well_defined_quality() {
        let mut m = base();
        m.elements.get_mut("sg1").unwrap().quality = Some("screens".into());
        let d = validate_model(&m, &ValidationOptions::default());
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].message, "softgoal requires subjective quality space");
        assert_eq!(d[0].subject.as_deref(), Some("sg1"));
    }

    #[test]
    fn insufficient_correlation() {
        let mut m = base();
        m.add_approximation(JustifiedApproximation {
            softgoal: "sg1".into(),
            qc: "q1".into(),
            correlation: 0.1,
            justification: "usability study".into(),
        });
        let d = validate_model(&m, &ValidationOptions { approx_threshold: 0.5 });
        assert_eq!(d.len(), 1);
        assert!(d[0].message.starts_with("insufficient correlation"));
        // a negative correlation of sufficient magnitude is fine
        m.approximations.values_mut().next().unwrap().correlation = -0.8;
        assert!(codes(&m).is_empty());
    }

    #[test]
    fn threshold_is_configurable() {
        let mut m = base();
        m.add_approximation(JustifiedApproximation {
            softgoal: "sg1".into(),
            qc: "q1".into(),
            correlation: 0.3,
            justification: "pilot".into(),
        });
        assert!(validate_model(&m, &ValidationOptions { approx_threshold: 0.25 }).is_empty());
        assert_eq!(codes(&m), ["approx.insufficient_correlation"]);
    }

    #[test]
    fn kind_field_constraints() {
        let mut m = base();
        m.add_element(
            Element::new("g1", ElementKind::Goal, Literal::lit("a")).with_quality("screens"),
        );
        m.add_element(
            Element::new("q2", ElementKind::QualityConstraint, Literal::lit("b"))
                .with_quality("screens"),
        );
        m.add_element(
            Element::new("p1", ElementKind::Plan, Literal::lit("c")).with_constraint("< 3"),
        );
        let mut c = codes(&m);
        c.sort();
        assert_eq!(
            c,
            [
                "element.missing_constraint",
                "element.unexpected_constraint",
                "element.unexpected_quality"
            ]
        );
    }

    #[test]
    fn well_defined_quality_needs_domain() {
        let mut m = base();
        m.qualities.get_mut("screens").unwrap().domain = None;
        assert_eq!(codes(&m), ["quality.missing_domain"]);
    }

    #[test]
    fn mixed_order_and_meta_cycle() {
        let mut m = base();
        m.add_element(Element::new("g1", ElementKind::Goal, Literal::lit("a")));
        m.add_element(Element::new("g2", ElementKind::Goal, Literal::lit("b")));
        m.add_attitude(Attitude::preference("pm", "q1", "g1"));
        m.add_attitude(Attitude::preference("pa", "g1", "g2"));
        m.add_attitude(Attitude::preference("pb", "g2", "g1"));
        m.add_attitude(Attitude::meta_preference("m1", "pa", "pb"));
        m.add_attitude(Attitude::meta_preference("m2", "pb", "pa"));
        let mut c = codes(&m);
        c.sort();
        assert_eq!(c, ["attitude.meta_cycle", "attitude.mixed_order"]);
    }

    #[test]
    fn rule_and_priority_checks() {
        let mut m = base();
        m.add_rule(Rule::new("r0", [], Literal::lit("a"), Strength::Strict));
        m.add_rule(Rule::defeasible("r1", &["a"], "b"));
        m.add_rule(Rule::defeasible("r2", &["a"], "~b"));
        m.add_rule(Rule::strict("r3", &["a"], "c"));
        m.priorities.insert(Priority::new("r1", "r2"));
        m.priorities.insert(Priority::new("r2", "r1"));
        m.priorities.insert(Priority::new("r3", "r1"));
        m.priorities.insert(Priority::new("r1", "r9"));
        let mut c = codes(&m);
        c.sort();
        assert_eq!(
            c,
            [
                "priority.cycle",
                "priority.strict_rule",
                "ref.dangling",
                "rule.empty_body"
            ]
        );
    }

    #[test]
    fn alternatives_checks() {
        let mut m = base();
        m.add_element(Element::new("g1", ElementKind::Goal, Literal::lit("a")));
        m.add_alternatives(["g1", "q1"]);
        m.add_alternatives(["g1"]);
        m.add_alternatives(["sg1", "nope"]);
        let mut c = codes(&m);
        c.sort();
        assert_eq!(
            c,
            [
                "alternatives.mixed_kinds",
                "alternatives.overlap",
                "alternatives.too_small",
                "ref.dangling"
            ]
        );
    }

    #[test]
    fn goal_params_must_be_declared() {
        let mut m = base();
        let mut g = Element::new("g1", ElementKind::Goal, Literal::lit("booked"));
        g.params = vec!["route".into()];
        m.add_element(g);
        assert_eq!(codes(&m), ["ref.dangling"]);
        m.params.insert(
            "route".into(),
            ParamDomain {
                name: "route".into(),
                values: vec!["domestic".into()],
            },
        );
        assert!(codes(&m).is_empty());
    }
}
