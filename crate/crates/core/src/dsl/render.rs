use std::fmt::Write;

use crate::ontology::{AttitudeForm, ElementKind, Model, Optionality, QualityDomain};

pub const HEADER: &str = "// reqont model v1";

/// Canonical text for a model. Parsing the output yields an equal model.
pub fn render_model(m: &Model) -> String {
    let mut out = String::new();
    out.push_str(HEADER);
    out.push('\n');
    let section = |out: &mut String, lines: Vec<String>| {
        if !lines.is_empty() {
            out.push('\n');
            for l in lines {
                out.push_str(&l);
                out.push('\n');
            }
        }
    };

    section(
        &mut out,
        m.params
            .values()
            .map(|p| format!("param {} {{ values: [{}] }}", p.name, p.values.join(", ")))
            .collect(),
    );

    section(
        &mut out,
        m.qualities
            .values()
            .map(|q| {
                let mut s = format!(
                    "quality {} {{ level: {}, structure: {}",
                    q.id,
                    q.level.keyword(),
                    q.structure.keyword()
                );
                match &q.domain {
                    Some(QualityDomain::Range(lo, hi)) => write!(s, ", domain: {lo}..{hi}"),
                    Some(QualityDomain::Values(v)) => write!(s, ", domain: [{}]", v.join(", ")),
                    Some(QualityDomain::Text(t)) => write!(s, ", domain: {}", quote(t)),
                    None => Ok(()),
                }
                .expect("writing to a String");
                s.push_str(" }");
                s
            })
            .collect(),
    );

    for kind in ElementKind::ALL {
        section(
            &mut out,
            m.elements_of(kind)
                .map(|e| {
                    let mut s = format!("{} {}", kind.keyword(), e.id);
                    if let Some(o) = e.optionality {
                        s.push(' ');
                        s.push_str(o.keyword());
                    }
                    let mut fields = vec![format!("holds: {}", e.holds)];
                    if let Some(q) = &e.quality {
                        fields.push(format!("quality: {q}"));
                    }
                    if let Some(c) = &e.constraint {
                        fields.push(format!("constraint: {}", quote(c)));
                    }
                    if !e.params.is_empty() {
                        fields.push(format!("params: [{}]", e.params.join(", ")));
                    }
                    if let Some(src) = &e.source {
                        fields.push(format!("source: {src}"));
                    }
                    format!("{s} {{ {} }}", fields.join(", "))
                })
                .collect(),
        );
    }

    section(
        &mut out,
        m.alternatives
            .iter()
            .map(|g| {
                let members: Vec<&str> = g.iter().map(String::as_str).collect();
                format!("alternatives {{ {} }}", members.join(" | "))
            })
            .collect(),
    );

    section(
        &mut out,
        m.rules.values().map(|r| format!("rule {r}")).collect(),
    );

    section(
        &mut out,
        m.priorities
            .iter()
            .map(|p| format!("priority {} > {}", p.higher, p.lower))
            .collect(),
    );

    section(
        &mut out,
        m.approximations
            .values()
            .map(|a| {
                format!(
                    "approx {} <- {} {{ correlation: {}, justification: {} }}",
                    a.softgoal,
                    a.qc,
                    a.correlation,
                    quote(&a.justification)
                )
            })
            .collect(),
    );

    section(
        &mut out,
        m.attitudes
            .values()
            .map(|a| {
                let opt = match a.optionality {
                    Optionality::Optional => " optional",
                    Optionality::Compulsory => "",
                };
                match &a.form {
                    AttitudeForm::Evaluation { target, sign } => {
                        format!("evaluate {}{opt}: {} {target}", a.id, sign.keyword())
                    }
                    AttitudeForm::Preference {
                        preferred,
                        dispreferred,
                    } => format!("prefer {}{opt}: {preferred} > {dispreferred}", a.id),
                    AttitudeForm::MetaPreference {
                        preferred,
                        dispreferred,
                    } => format!("prefer {}{opt}: pref {preferred} > {dispreferred}", a.id),
                }
            })
            .collect(),
    );
    out
}

pub(crate) fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}
