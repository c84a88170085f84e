use std::collections::BTreeMap;

use crate::diag::{Diagnostic, SourceSpan};
use crate::literal::Literal;
use crate::ontology::{
    Attitude, Element, ElementKind, JustifiedApproximation, MeasurementLevel, Model, Optionality,
    ParamDomain, Priority, QualityDomain, QualityStructure, QualityType, Rule, Sign, Strength,
};
use crate::validate::{validate_model, ValidationOptions};

use super::lexer::Tok;
use super::parser::{Fields, PResult, Parser, Value};

const KEYWORDS: &[&str] = &[
    "param",
    "quality",
    "assumption",
    "goal",
    "qc",
    "softgoal",
    "plan",
    "rule",
    "priority",
    "approx",
    "prefer",
    "evaluate",
    "alternatives",
];

/// Kinds of declaration, each with its own id space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Namespace {
    Element,
    Attitude,
    Rule,
    Quality,
    Param,
    Approximation,
    Alternatives,
    Priority,
    Utterance,
}

impl Namespace {
    fn noun(self) -> &'static str {
        match self {
            Namespace::Element => "element",
            Namespace::Attitude => "attitude",
            Namespace::Rule => "rule",
            Namespace::Quality => "quality",
            Namespace::Param => "parameter",
            Namespace::Approximation => "approximation",
            Namespace::Alternatives => "alternatives group",
            Namespace::Priority => "priority",
            Namespace::Utterance => "utterance",
        }
    }
}

/// Where each declaration starts. Kept beside the model rather than inside
/// it so that models compare by content only.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SpanTable {
    entries: BTreeMap<(Namespace, String), SourceSpan>,
}

impl SpanTable {
    pub fn get(&self, ns: Namespace, key: &str) -> Option<&SourceSpan> {
        self.entries.get(&(ns, key.to_string()))
    }

    /// Span of whatever declaration a diagnostic subject names.
    pub fn lookup(&self, subject: &str) -> Option<&SourceSpan> {
        use Namespace::*;
        [
            Element,
            Attitude,
            Rule,
            Quality,
            Param,
            Approximation,
            Alternatives,
            Priority,
            Utterance,
        ]
        .into_iter()
        .find_map(|ns| self.get(ns, subject))
    }

    /// Records a declaration; returns the earlier span on a clash.
    pub(crate) fn declare(
        &mut self,
        ns: Namespace,
        key: String,
        span: SourceSpan,
    ) -> Result<(), SourceSpan> {
        match self.entries.get(&(ns, key.clone())) {
            Some(prev) => Err(prev.clone()),
            None => {
                self.entries.insert((ns, key), span);
                Ok(())
            }
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct ParsedModel {
    pub model: Model,
    pub spans: SpanTable,
    /// Syntax errors, duplicate declarations and, when the text parsed
    /// cleanly, validation findings.
    pub diagnostics: Vec<Diagnostic>,
}

impl ParsedModel {
    pub fn has_errors(&self) -> bool {
        crate::diag::has_errors(&self.diagnostics)
    }
}

/// Parses model text. Parsing recovers at the next declaration after an
/// error, so one call reports every syntax error it can find.
pub fn parse_model(src: &str, file: &str, options: &ValidationOptions) -> ParsedModel {
    let mut p = Parser::new(src, file);
    let mut b = Builder {
        model: Model::new(),
        spans: SpanTable::default(),
    };
    while !p.at_end() {
        let start = p.position();
        if declaration(&mut p, &mut b).is_err() {
            p.recover(start, KEYWORDS);
        }
    }
    let mut diagnostics = p.diags;
    let syntax_ok = !crate::diag::has_errors(&diagnostics);
    if syntax_ok {
        for mut d in validate_model(&b.model, options) {
            if d.span.is_none() {
                d.span = d.subject.as_deref().and_then(|s| b.spans.lookup(s)).cloned();
            }
            diagnostics.push(d);
        }
    }
    ParsedModel {
        model: b.model,
        spans: b.spans,
        diagnostics,
    }
}

struct Builder {
    model: Model,
    spans: SpanTable,
}

impl Builder {
    fn declare(&mut self, p: &mut Parser<'_>, ns: Namespace, key: &str, span: SourceSpan) -> bool {
        match self.spans.declare(ns, key.to_string(), span.clone()) {
            Ok(()) => true,
            Err(prev) => {
                p.push(
                    Diagnostic::error(
                        "decl.duplicate",
                        format!("duplicate {} `{key}`, first declared at {prev}", ns.noun()),
                    )
                    .about(key)
                    .at(span),
                );
                false
            }
        }
    }
}

fn declaration(p: &mut Parser<'_>, b: &mut Builder) -> PResult<()> {
    let span = p.span();
    let kw = p.word("declaration keyword")?;
    match kw.as_str() {
        "param" => param(p, b, span),
        "quality" => {
            let q = quality(p)?;
            if b.declare(p, Namespace::Quality, &q.id, span) {
                b.model.add_quality(q);
            }
            Ok(())
        }
        "rule" => rule(p, b, span),
        "priority" => {
            let higher = p.ident("rule id")?;
            p.expect(Tok::Gt)?;
            let lower = p.ident("rule id")?;
            let key = format!("{higher}>{lower}");
            // restating a priority is harmless
            let _ = b.spans.declare(Namespace::Priority, key, span);
            b.model.priorities.insert(Priority::new(higher, lower));
            Ok(())
        }
        "approx" => approx(p, b, span),
        "prefer" => prefer(p, b, span),
        "evaluate" => evaluate(p, b, span),
        "alternatives" => alternatives(p, b, span),
        other => match ElementKind::from_keyword(other) {
            Some(kind) => element(p, b, kind, span),
            None => p.error_at(span, format!("unknown declaration `{other}`")),
        },
    }
}

fn optionality(p: &mut Parser<'_>) -> Option<Optionality> {
    let o = p.peek_ident().and_then(Optionality::from_keyword);
    if o.is_some() {
        p.advance();
    }
    o
}

fn param(p: &mut Parser<'_>, b: &mut Builder, span: SourceSpan) -> PResult<()> {
    let name = p.ident("parameter name")?;
    let mut f = p.fields()?;
    let values = f.list(p, "values");
    if values.is_none() && !f.has("values") {
        f.missing(p, "values", "param");
    }
    f.finish(p, "param");
    if let Some(values) = values {
        if b.declare(p, Namespace::Param, &name, span) {
            b.model
                .params
                .insert(name.clone(), ParamDomain { name, values });
        }
    }
    Ok(())
}

pub(crate) fn quality(p: &mut Parser<'_>) -> PResult<QualityType> {
    let id = p.ident("quality id")?;
    let mut f = p.fields()?;
    let level = keyword_field(p, &mut f, "level", "quality", MeasurementLevel::from_keyword);
    let structure = keyword_field(p, &mut f, "structure", "quality", QualityStructure::from_keyword);
    let domain = match f.value("domain") {
        None => None,
        Some((Value::Range(lo, hi), span)) => match (lo.parse::<i64>(), hi.parse::<i64>()) {
            (Ok(lo), Ok(hi)) => Some(QualityDomain::Range(lo, hi)),
            _ => {
                p.push(Diagnostic::error("syntax", "range bounds must be integers").at(span));
                None
            }
        },
        Some((Value::List(v), _)) => Some(QualityDomain::Values(v)),
        Some((Value::Str(s), _)) => Some(QualityDomain::Text(s)),
        Some((_, span)) => {
            p.push(
                Diagnostic::error("syntax", "domain expects a range, a value list or a string")
                    .at(span),
            );
            None
        }
    };
    f.finish(p, "quality");
    match (level, structure) {
        (Some(level), Some(structure)) => Ok(QualityType {
            id,
            level,
            structure,
            domain,
        }),
        _ => Err(super::parser::Bail),
    }
}

fn keyword_field<T>(
    p: &mut Parser<'_>,
    f: &mut Fields,
    key: &str,
    decl: &str,
    from: impl Fn(&str) -> Option<T>,
) -> Option<T> {
    if !f.has(key) {
        f.missing(p, key, decl);
        return None;
    }
    let (value, span) = f.value(key)?;
    match &value {
        Value::Ident(s) => match from(s) {
            Some(t) => Some(t),
            None => {
                p.push(Diagnostic::error("syntax", format!("unknown {key} `{s}`")).at(span));
                None
            }
        },
        _ => {
            p.push(Diagnostic::error("syntax", format!("field `{key}` expects a keyword")).at(span));
            None
        }
    }
}

fn element(p: &mut Parser<'_>, b: &mut Builder, kind: ElementKind, span: SourceSpan) -> PResult<()> {
    let id = p.ident("element id")?;
    let opt = optionality(p);
    let mut f = p.fields()?;
    let decl = kind.keyword();
    let holds = f.literal(p, "holds");
    if holds.is_none() && !f.has("holds") {
        f.missing(p, "holds", decl);
    }
    let quality = f.ident(p, "quality");
    let constraint = f.string(p, "constraint");
    let params = f.list(p, "params").unwrap_or_default();
    let source = f.ident(p, "source");
    f.finish(p, decl);
    let Some(holds) = holds else {
        return Ok(());
    };
    let e = Element {
        id: id.clone(),
        kind,
        optionality: opt,
        holds,
        quality,
        constraint,
        params,
        source,
    };
    if b.declare(p, Namespace::Element, &id, span) {
        b.model.add_element(e);
    }
    Ok(())
}

fn rule(p: &mut Parser<'_>, b: &mut Builder, span: SourceSpan) -> PResult<()> {
    let id = p.ident("rule id")?;
    p.expect(Tok::Colon)?;
    let mut body: Vec<Literal> = vec![p.literal()?];
    while p.eat(&Tok::Amp) {
        body.push(p.literal()?);
    }
    let strength = if p.eat(&Tok::Arrow) {
        Strength::Strict
    } else if p.eat(&Tok::FatArrow) {
        Strength::Defeasible
    } else {
        return p.error_here("expected `->` or `=>`");
    };
    let head = p.literal()?;
    if b.declare(p, Namespace::Rule, &id, span) {
        b.model.add_rule(Rule::new(id, body, head, strength));
    }
    Ok(())
}

fn approx(p: &mut Parser<'_>, b: &mut Builder, span: SourceSpan) -> PResult<()> {
    let softgoal = p.ident("softgoal id")?;
    p.expect(Tok::BackArrow)?;
    let qc = p.ident("quality constraint id")?;
    let mut f = p.fields()?;
    let correlation = f.number(p, "correlation");
    if correlation.is_none() && !f.has("correlation") {
        f.missing(p, "correlation", "approx");
    }
    let justification = f.string(p, "justification").unwrap_or_default();
    f.finish(p, "approx");
    let Some(correlation) = correlation else {
        return Ok(());
    };
    let key = format!("{softgoal}<-{qc}");
    if b.declare(p, Namespace::Approximation, &key, span) {
        b.model.add_approximation(JustifiedApproximation {
            softgoal,
            qc,
            correlation,
            justification,
        });
    }
    Ok(())
}

fn prefer(p: &mut Parser<'_>, b: &mut Builder, span: SourceSpan) -> PResult<()> {
    let id = p.ident("attitude id")?;
    let opt = optionality(p);
    p.expect(Tok::Colon)?;
    let meta = p.peek_ident() == Some("pref") && matches!(p.peek_at(1), Some(Tok::Ident(_)));
    if meta {
        p.advance();
    }
    let preferred = p.ident("preferred id")?;
    p.expect(Tok::Gt)?;
    let dispreferred = p.ident("dispreferred id")?;
    let mut a = if meta {
        Attitude::meta_preference(id.clone(), preferred, dispreferred)
    } else {
        Attitude::preference(id.clone(), preferred, dispreferred)
    };
    if let Some(o) = opt {
        a = a.with_optionality(o);
    }
    if b.declare(p, Namespace::Attitude, &id, span) {
        b.model.add_attitude(a);
    }
    Ok(())
}

fn evaluate(p: &mut Parser<'_>, b: &mut Builder, span: SourceSpan) -> PResult<()> {
    let id = p.ident("attitude id")?;
    let opt = optionality(p);
    p.expect(Tok::Colon)?;
    let sign_span = p.span();
    let sign = p.word("`favor` or `disfavor`")?;
    let Some(sign) = Sign::from_keyword(&sign) else {
        return p.error_at(sign_span, format!("expected `favor` or `disfavor`, found `{sign}`"));
    };
    let target = p.ident("element id")?;
    let mut a = Attitude::evaluation(id.clone(), sign, target);
    if let Some(o) = opt {
        a = a.with_optionality(o);
    }
    if b.declare(p, Namespace::Attitude, &id, span) {
        b.model.add_attitude(a);
    }
    Ok(())
}

fn alternatives(p: &mut Parser<'_>, b: &mut Builder, span: SourceSpan) -> PResult<()> {
    p.expect(Tok::LBrace)?;
    let mut members = vec![p.ident("element id")?];
    while p.eat(&Tok::Pipe) {
        members.push(p.ident("element id")?);
    }
    p.expect(Tok::RBrace)?;
    let group: std::collections::BTreeSet<String> = members.iter().cloned().collect();
    if group.len() != members.len() {
        return p.error_at(span, "alternatives group lists an element twice");
    }
    let key = group.iter().cloned().collect::<Vec<_>>().join("|");
    let _ = b.spans.declare(Namespace::Alternatives, key, span);
    b.model.alternatives.insert(group);
    Ok(())
}
