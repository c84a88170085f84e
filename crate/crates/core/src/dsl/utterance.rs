use std::collections::{BTreeMap, BTreeSet};

use crate::diag::{Diagnostic, SourceSpan};
use crate::ontology::{QualityType, Sign};
use crate::speech_act::{Connective, Force, Payload, Utterance, UtteranceBody};

use super::lexer::Tok;
use super::model::{Namespace, SpanTable};
use super::parser::{PResult, Parser, Value};

const KEYWORDS: &[&str] = &["quality", "utterance", "compound"];

#[derive(Debug, Clone)]
pub struct ParsedUtterances {
    /// Top-level utterances (those no compound refers to), in document order.
    pub utterances: Vec<Utterance>,
    pub qualities: BTreeMap<String, QualityType>,
    pub spans: SpanTable,
    pub diagnostics: Vec<Diagnostic>,
}

impl ParsedUtterances {
    pub fn has_errors(&self) -> bool {
        crate::diag::has_errors(&self.diagnostics)
    }
}

enum Decl {
    Leaf {
        force: Force,
        payload: Payload,
        text: Option<String>,
    },
    Compound {
        connective: Connective,
        children: Vec<(String, SourceSpan)>,
        text: Option<String>,
    },
}

/// Parses an annotated utterance file:
///
/// ```text
/// quality screens { level: ordinal, structure: well_defined_shared }
/// utterance u1 force directive { holds: flight_booked, text: "..." }
/// utterance u2 force expressive { prefer: g1 > g2 }
/// compound c1 if_then [u3, u4]
/// ```
pub fn parse_utterances(src: &str, file: &str) -> ParsedUtterances {
    let mut p = Parser::new(src, file);
    let mut spans = SpanTable::default();
    let mut qualities = BTreeMap::new();
    let mut decls: Vec<(String, SourceSpan, Decl)> = Vec::new();
    while !p.at_end() {
        let start = p.position();
        let r = declaration(&mut p, &mut spans, &mut qualities, &mut decls);
        if r.is_err() {
            p.recover(start, KEYWORDS);
        }
    }
    let mut diagnostics = p.diags;
    let utterances = assemble(decls, &mut diagnostics);
    ParsedUtterances {
        utterances,
        qualities,
        spans,
        diagnostics,
    }
}

fn declaration(
    p: &mut Parser<'_>,
    spans: &mut SpanTable,
    qualities: &mut BTreeMap<String, QualityType>,
    decls: &mut Vec<(String, SourceSpan, Decl)>,
) -> PResult<()> {
    let span = p.span();
    let kw = p.word("declaration keyword")?;
    let (id, decl) = match kw.as_str() {
        "quality" => {
            let q = super::model::quality(p)?;
            if let Err(prev) = spans.declare(Namespace::Quality, q.id.clone(), span.clone()) {
                return duplicate(p, "quality", &q.id, prev, span);
            }
            qualities.insert(q.id.clone(), q);
            return Ok(());
        }
        "utterance" => {
            let id = p.ident("utterance id")?;
            if !p.eat_keyword("force") {
                return p.error_here("expected `force`");
            }
            let fspan = p.span();
            let word = p.word("illocutionary force")?;
            let Some(force) = Force::from_keyword(&word) else {
                p.push(
                    Diagnostic::error("utterance.unknown_force", format!("unknown force `{word}`"))
                        .about(&id)
                        .at(fspan),
                );
                return Err(super::parser::Bail);
            };
            let (payload, text) = leaf_fields(p, &id, &span)?;
            (id, Decl::Leaf {
                force,
                payload,
                text,
            })
        }
        "compound" => {
            let id = p.ident("utterance id")?;
            let cspan = p.span();
            let word = p.word("connective")?;
            let Some(connective) = Connective::from_keyword(&word) else {
                return p.error_at(cspan, format!("unknown connective `{word}`"));
            };
            p.expect(Tok::LBracket)?;
            let mut children = Vec::new();
            while !p.eat(&Tok::RBracket) {
                let s = p.span();
                children.push((p.ident("utterance id")?, s));
                if !p.eat(&Tok::Comma) {
                    p.expect(Tok::RBracket)?;
                    break;
                }
            }
            let mut text = None;
            if p.peek() == Some(&Tok::LBrace) {
                let mut f = p.fields()?;
                text = f.string(p, "text");
                f.finish(p, "compound");
            }
            (id, Decl::Compound {
                connective,
                children,
                text,
            })
        }
        other => return p.error_at(span, format!("unknown declaration `{other}`")),
    };
    if let Err(prev) = spans.declare(Namespace::Utterance, id.clone(), span.clone()) {
        return duplicate(p, "utterance", &id, prev, span);
    }
    decls.push((id, span, decl));
    Ok(())
}

fn duplicate(
    p: &mut Parser<'_>,
    what: &str,
    id: &str,
    prev: SourceSpan,
    span: SourceSpan,
) -> PResult<()> {
    p.push(
        Diagnostic::error(
            "decl.duplicate",
            format!("duplicate {what} `{id}`, first declared at {prev}"),
        )
        .about(id)
        .at(span),
    );
    Ok(())
}

fn leaf_fields(
    p: &mut Parser<'_>,
    id: &str,
    span: &SourceSpan,
) -> PResult<(Payload, Option<String>)> {
    let mut f = p.fields()?;
    let text = f.string(p, "text");
    let present: Vec<&str> = ["holds", "favor", "disfavor", "prefer"]
        .into_iter()
        .filter(|k| f.has(k))
        .collect();
    let payload = match present.as_slice() {
        [] => {
            p.push(
                Diagnostic::error(
                    "utterance.missing_payload",
                    "utterance has no content: expected one of holds, favor, disfavor, prefer",
                )
                .about(id)
                .at(span.clone()),
            );
            None
        }
        ["holds"] => f.literal(p, "holds").map(|holds| Payload::Holds {
            holds,
            quality: f.ident(p, "quality"),
            constraint: f.string(p, "constraint"),
            params: f.list(p, "params").unwrap_or_default(),
        }),
        [sign @ ("favor" | "disfavor")] => f.ident(p, sign).map(|target| Payload::Evaluation {
            sign: Sign::from_keyword(sign).expect("favor or disfavor"),
            target,
        }),
        ["prefer"] => match f.value("prefer") {
            Some((
                Value::Order {
                    meta,
                    preferred,
                    dispreferred,
                },
                _,
            )) => Some(if meta {
                Payload::MetaPreference {
                    preferred,
                    dispreferred,
                }
            } else {
                Payload::Preference {
                    preferred,
                    dispreferred,
                }
            }),
            Some((_, vspan)) => {
                p.push(
                    Diagnostic::error("syntax", "field `prefer` expects `a > b` or `pref a > b`")
                        .at(vspan),
                );
                None
            }
            None => None,
        },
        _ => {
            p.push(
                Diagnostic::error(
                    "utterance.payload",
                    format!("utterance has several payloads: {}", present.join(", ")),
                )
                .about(id)
                .at(span.clone()),
            );
            None
        }
    };
    f.finish(p, "utterance");
    match payload {
        Some(pl) => Ok((pl, text)),
        None => Err(super::parser::Bail),
    }
}

/// Links compounds to their children and returns the roots.
fn assemble(decls: Vec<(String, SourceSpan, Decl)>, diags: &mut Vec<Diagnostic>) -> Vec<Utterance> {
    let order: Vec<String> = decls.iter().map(|(id, _, _)| id.clone()).collect();
    let mut spans: BTreeMap<String, SourceSpan> = BTreeMap::new();
    let mut table: BTreeMap<String, Decl> = BTreeMap::new();
    for (id, span, d) in decls {
        spans.insert(id.clone(), span);
        table.insert(id, d);
    }
    let mut referenced: BTreeSet<String> = BTreeSet::new();
    for (id, d) in &table {
        if let Decl::Compound {
            connective,
            children,
            ..
        } = d
        {
            for (c, cspan) in children {
                if !table.contains_key(c) {
                    diags.push(
                        Diagnostic::error("ref.dangling", format!("unknown utterance `{c}`"))
                            .about(id)
                            .at(cspan.clone()),
                    );
                } else if !referenced.insert(c.clone()) {
                    diags.push(
                        Diagnostic::error(
                            "utterance.shared_child",
                            format!("utterance `{c}` is part of more than one compound"),
                        )
                        .about(id)
                        .at(cspan.clone()),
                    );
                }
            }
            if *connective == Connective::IfThen && children.len() != 2 {
                diags.push(
                    Diagnostic::error(
                        "utterance.malformed",
                        format!("if_then needs exactly 2 parts, found {}", children.len()),
                    )
                    .about(id)
                    .at(spans[id].clone()),
                );
            } else if children.len() < 2 {
                diags.push(
                    Diagnostic::error(
                        "utterance.malformed",
                        format!("{} needs at least 2 parts", connective.keyword()),
                    )
                    .about(id)
                    .at(spans[id].clone()),
                );
            }
        }
    }

    fn build(
        id: &str,
        table: &BTreeMap<String, Decl>,
        visiting: &mut BTreeSet<String>,
    ) -> Option<Utterance> {
        if !visiting.insert(id.to_string()) {
            return None;
        }
        let u = match table.get(id)? {
            Decl::Leaf {
                force,
                payload,
                text,
            } => Utterance {
                id: id.to_string(),
                text: text.clone(),
                body: UtteranceBody::Leaf {
                    force: *force,
                    payload: payload.clone(),
                },
            },
            Decl::Compound {
                connective,
                children,
                text,
            } => Utterance {
                id: id.to_string(),
                text: text.clone(),
                body: UtteranceBody::Compound {
                    connective: *connective,
                    children: children
                        .iter()
                        .filter_map(|(c, _)| build(c, table, visiting))
                        .collect(),
                },
            },
        };
        visiting.remove(id);
        Some(u)
    }

    let mut roots = Vec::new();
    for id in &order {
        if referenced.contains(id) {
            continue;
        }
        if let Some(u) = build(id, &table, &mut BTreeSet::new()) {
            roots.push(u);
        }
    }
    // utterances only reachable through a cycle never become roots
    let mut reached = BTreeSet::new();
    fn collect(u: &Utterance, out: &mut BTreeSet<String>) {
        out.insert(u.id.clone());
        if let UtteranceBody::Compound { children, .. } = &u.body {
            for c in children {
                collect(c, out);
            }
        }
    }
    for r in &roots {
        collect(r, &mut reached);
    }
    for id in &order {
        if !reached.contains(id) {
            diags.push(
                Diagnostic::error("utterance.cycle", "compound utterances form a cycle")
                    .about(id)
                    .at(spans[id].clone()),
            );
            break;
        }
    }
    roots
}
