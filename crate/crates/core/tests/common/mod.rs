//! Shared random generators for integration tests.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use reqont_core::engine::DefeasibleProgram;
use reqont_core::literal::{Atom, Literal};
use reqont_core::ontology::{Priority, Rule, Strength};

pub fn random_literal<R: Rng>(rng: &mut R, atoms: usize) -> Literal {
    let a = Atom::new(format!("a{}", rng.gen_range(0..atoms))).unwrap();
    Literal::new(a, rng.gen_bool(0.4))
}

/// A random program with at most `max_rules` rules over at most `max_atoms`
/// atoms whose strict base is consistent.
pub fn random_program<R: Rng>(rng: &mut R, max_rules: usize, max_atoms: usize) -> DefeasibleProgram {
    loop {
        let atoms = rng.gen_range(2..=max_atoms);
        let n_rules = rng.gen_range(1..=max_rules);
        let n_facts = rng.gen_range(1..=3);
        let facts: Vec<Literal> = (0..n_facts).map(|_| random_literal(rng, atoms)).collect();
        let mut rules = Vec::new();
        for i in 0..n_rules {
            let body_len = rng.gen_range(1..=2);
            let body: Vec<Literal> = (0..body_len).map(|_| random_literal(rng, atoms)).collect();
            let head = random_literal(rng, atoms);
            let strength = if rng.gen_bool(0.25) {
                Strength::Strict
            } else {
                Strength::Defeasible
            };
            rules.push(Rule::new(format!("r{i}"), body, head, strength));
        }
        let defeasible: Vec<String> = rules
            .iter()
            .filter(|r| !r.is_strict())
            .map(|r| r.id.clone())
            .collect();
        // random priorities consistent with a random linear order
        let mut order = defeasible.clone();
        order.shuffle(rng);
        let mut priorities = Vec::new();
        for i in 0..order.len() {
            for j in (i + 1)..order.len() {
                if rng.gen_bool(0.2) {
                    priorities.push(Priority::new(order[i].clone(), order[j].clone()));
                }
            }
        }
        let p = DefeasibleProgram::new(facts, rules, priorities).unwrap();
        if p.is_consistent() {
            return p;
        }
    }
}

pub fn fixture_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn fixture(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Parses a model fixture that must be free of diagnostics.
pub fn fixture_model(name: &str) -> reqont_core::Model {
    let pm = reqont_core::dsl::parse_model(
        &fixture(name),
        name,
        &reqont_core::validate::ValidationOptions::default(),
    );
    assert!(pm.diagnostics.is_empty(), "{name}: {:?}", pm.diagnostics);
    pm.model
}

pub const MODEL_FIXTURES: [&str; 8] = [
    "flight_booking.req",
    "flight_booking_registry.req",
    "uncovered_softgoal.req",
    "unprojected_preference.req",
    "classical.req",
    "blocked.req",
    "retraction.req",
    "retraction_defeated.req",
];

/// Size limits for [`random_model`].
#[derive(Debug, Clone, Copy)]
pub struct ModelShape {
    pub atoms: usize,
    /// Upper bound on elements per kind.
    pub per_kind: usize,
    pub rules: usize,
    pub attitudes: usize,
    /// Declare parameters, generic goals and quality domains of every form.
    pub decorations: bool,
    /// Add rules deriving most goals and quality constraints from plans.
    pub connect: bool,
}

impl ModelShape {
    pub const SMALL: ModelShape = ModelShape {
        atoms: 8,
        per_kind: 2,
        rules: 4,
        attitudes: 4,
        decorations: false,
        connect: true,
    };

    pub const WIDE: ModelShape = ModelShape {
        atoms: 10,
        per_kind: 4,
        rules: 10,
        attitudes: 8,
        decorations: true,
        connect: false,
    };
}

/// A random model that passes validation.
pub fn random_model<R: Rng>(rng: &mut R, shape: ModelShape) -> reqont_core::Model {
    use reqont_core::ontology::*;

    let mut m = Model::new();
    let domain = if shape.decorations {
        match rng.gen_range(0..3) {
            0 => QualityDomain::Range(rng.gen_range(-5..5), rng.gen_range(5..100)),
            1 => QualityDomain::Values(vec!["low".into(), "high".into()]),
            _ => QualityDomain::Text("seconds, \"wall clock\"".into()),
        }
    } else {
        QualityDomain::Range(1, 50)
    };
    m.add_quality(QualityType {
        id: "qw".into(),
        level: *MeasurementLevel::ALL.choose(rng).unwrap(),
        structure: QualityStructure::WellDefinedShared,
        domain: Some(domain),
    });
    m.add_quality(QualityType {
        id: "qs".into(),
        level: MeasurementLevel::Ordinal,
        structure: QualityStructure::SubjectiveIllDefined,
        domain: None,
    });
    if shape.decorations {
        m.params.insert(
            "route".into(),
            ParamDomain {
                name: "route".into(),
                values: vec!["dom".into(), "intl".into()],
            },
        );
    }

    let prefix = |k: ElementKind| match k {
        ElementKind::DomainAssumption => "k",
        ElementKind::Goal => "g",
        ElementKind::QualityConstraint => "q",
        ElementKind::Softgoal => "s",
        ElementKind::Plan => "p",
    };
    for kind in ElementKind::ALL {
        for i in 0..rng.gen_range(0..=shape.per_kind) {
            let mut e = Element::new(format!("{}{i}", prefix(kind)), kind, random_literal(rng, shape.atoms));
            match kind {
                ElementKind::QualityConstraint => {
                    e = e.with_quality("qw").with_constraint(format!("< {}", rng.gen_range(1..10)));
                }
                ElementKind::Softgoal => e = e.with_quality("qs"),
                ElementKind::Goal if shape.decorations && rng.gen_bool(0.2) => {
                    e.params = vec!["route".into()];
                }
                _ => {}
            }
            e.optionality = match rng.gen_range(0..4) {
                0 => Some(Optionality::Compulsory),
                1 => Some(Optionality::Optional),
                _ => None,
            };
            m.add_element(e);
        }
    }

    let softgoals: Vec<String> = m.elements_of(ElementKind::Softgoal).map(|e| e.id.clone()).collect();
    let qcs: Vec<String> = m.elements_of(ElementKind::QualityConstraint).map(|e| e.id.clone()).collect();
    for s in &softgoals {
        for q in &qcs {
            if rng.gen_bool(0.5) {
                let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                m.add_approximation(JustifiedApproximation {
                    softgoal: s.clone(),
                    qc: q.clone(),
                    correlation: sign * rng.gen_range(0.5..=1.0),
                    justification: "measured in user study".into(),
                });
            }
        }
    }

    // disjoint same-kind pairs
    for kind in ElementKind::ALL {
        let mut ids: Vec<String> = m.elements_of(kind).map(|e| e.id.clone()).collect();
        ids.shuffle(rng);
        for pair in ids.chunks(2) {
            if pair.len() == 2 && rng.gen_bool(0.4) {
                m.add_alternatives(pair.to_vec());
            }
        }
    }

    for i in 0..rng.gen_range(0..=shape.rules) {
        let body: Vec<Literal> = (0..rng.gen_range(1..=2)).map(|_| random_literal(rng, shape.atoms)).collect();
        let strength = if rng.gen_bool(0.3) { Strength::Strict } else { Strength::Defeasible };
        m.add_rule(Rule::new(format!("r{i}"), body, random_literal(rng, shape.atoms), strength));
    }
    if shape.connect {
        let plans: Vec<Literal> = m.elements_of(ElementKind::Plan).map(|e| e.holds.clone()).collect();
        let wanted: Vec<Literal> = m
            .elements
            .values()
            .filter(|e| matches!(e.kind, ElementKind::Goal | ElementKind::QualityConstraint))
            .map(|e| e.holds.clone())
            .collect();
        for (i, w) in wanted.into_iter().enumerate() {
            if let Some(p) = plans.choose(rng) {
                if rng.gen_bool(0.7) {
                    let strength = if rng.gen_bool(0.5) { Strength::Strict } else { Strength::Defeasible };
                    m.add_rule(Rule::new(format!("c{i}"), [p.clone()], w, strength));
                }
            }
        }
    }
    let mut defeasible: Vec<String> =
        m.rules.values().filter(|r| !r.is_strict()).map(|r| r.id.clone()).collect();
    defeasible.shuffle(rng);
    for i in 0..defeasible.len() {
        for j in i + 1..defeasible.len() {
            if rng.gen_bool(0.15) {
                m.priorities.insert(Priority::new(defeasible[i].clone(), defeasible[j].clone()));
            }
        }
    }

    let ids: Vec<String> = m.elements.keys().cloned().collect();
    let mut prefs: Vec<String> = Vec::new();
    for i in 0..rng.gen_range(0..=shape.attitudes) {
        let Some(a) = ids.choose(rng) else { break };
        if rng.gen_bool(0.4) {
            let sign = if rng.gen_bool(0.5) { Sign::Favor } else { Sign::Disfavor };
            m.add_attitude(Attitude::evaluation(format!("e{i}"), sign, a.clone()));
            continue;
        }
        let kind = m.elements[a].kind;
        let same: Vec<&String> = ids.iter().filter(|b| *b != a && m.elements[*b].kind == kind).collect();
        let Some(b) = same.choose(rng) else { continue };
        let id = format!("x{i}");
        let optionality = if rng.gen_bool(0.3) { Optionality::Optional } else { Optionality::Compulsory };
        m.add_attitude(Attitude::preference(id.clone(), a.clone(), (*b).clone()).with_optionality(optionality));
        prefs.push(id);
    }
    // meta-preferences follow a random linear order, so they never cycle
    prefs.shuffle(rng);
    let mut n = 0;
    for i in 0..prefs.len() {
        for j in i + 1..prefs.len() {
            if rng.gen_bool(0.3) {
                m.add_attitude(Attitude::meta_preference(format!("m{n}"), prefs[i].clone(), prefs[j].clone()));
                n += 1;
            }
        }
    }

    let diags = reqont_core::validate::validate_model(&m, &reqont_core::validate::ValidationOptions::default());
    assert!(diags.is_empty(), "generator produced an invalid model: {diags:?}");
    m
}

/// A strict-only model over positive-bodied rules and positive goals, with
/// no attitudes, softgoals, optional elements or alternatives.
pub fn random_classical_model<R: Rng>(rng: &mut R, atoms: usize) -> reqont_core::Model {
    use reqont_core::ontology::*;

    let positive = |rng: &mut R| Literal::new(Atom::new(format!("a{}", rng.gen_range(0..atoms))).unwrap(), false);
    let mut m = Model::new();
    for i in 0..rng.gen_range(1..=3) {
        m.add_element(Element::new(format!("k{i}"), ElementKind::DomainAssumption, random_literal(rng, atoms)));
    }
    for i in 0..rng.gen_range(0..=2) {
        m.add_element(Element::new(format!("p{i}"), ElementKind::Plan, random_literal(rng, atoms)));
    }
    for i in 0..rng.gen_range(0..=6) {
        let body: Vec<Literal> = (0..rng.gen_range(1..=2)).map(|_| positive(rng)).collect();
        m.add_rule(Rule::new(format!("r{i}"), body, random_literal(rng, atoms), Strength::Strict));
    }
    // goals are often something the base mentions positively
    let mentioned: Vec<Literal> = m
        .elements
        .values()
        .map(|e| e.holds.clone())
        .chain(m.rules.values().map(|r| r.head.clone()))
        .filter(|l| !l.is_negated())
        .collect();
    for i in 0..rng.gen_range(1..=2) {
        let holds = match mentioned.choose(rng) {
            Some(l) if rng.gen_bool(0.7) => l.clone(),
            _ => positive(rng),
        };
        m.add_element(Element::new(format!("g{i}"), ElementKind::Goal, holds));
    }
    m
}
