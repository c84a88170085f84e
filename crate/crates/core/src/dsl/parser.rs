//! Token-stream helpers shared by the model and utterance grammars.

use crate::diag::{Diagnostic, SourceSpan};
use crate::literal::{check_identifier, Atom, Literal};

use super::lexer::{lex, Tok, Token};

/// Raised after a diagnostic has been recorded; the caller resynchronizes.
#[derive(Debug)]
pub(crate) struct Bail;

pub(crate) type PResult<T> = Result<T, Bail>;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Value {
    Ident(String),
    Literal(Literal),
    Str(String),
    Number(String),
    Range(String, String),
    List(Vec<String>),
    /// `a > b`, or `pref a > b` when `meta` is set.
    Order { meta: bool, preferred: String, dispreferred: String },
}

impl Value {
    fn describe(&self) -> &'static str {
        match self {
            Value::Ident(_) => "identifier",
            Value::Literal(_) => "literal",
            Value::Str(_) => "string",
            Value::Number(_) => "number",
            Value::Range(..) => "range",
            Value::List(_) => "list",
            Value::Order { .. } => "ordering",
        }
    }
}

#[derive(Debug)]
pub(crate) struct Field {
    pub key: String,
    pub span: SourceSpan,
    pub value: Value,
    used: bool,
}

/// The `{ key: value, ... }` block of a declaration.
#[derive(Debug, Default)]
pub(crate) struct Fields {
    fields: Vec<Field>,
    pub span: Option<SourceSpan>,
}

pub(crate) struct Parser<'a> {
    toks: Vec<Token>,
    /// Whether each token is the first on its line.
    line_start: Vec<bool>,
    pos: usize,
    file: &'a str,
    pub diags: Vec<Diagnostic>,
}

impl<'a> Parser<'a> {
    pub fn new(src: &str, file: &'a str) -> Self {
        let (toks, errs) = lex(src);
        let mut line_start = Vec::with_capacity(toks.len());
        let mut last_line = 0;
        for t in &toks {
            line_start.push(t.line != last_line);
            last_line = t.line;
        }
        let diags = errs
            .into_iter()
            .map(|e| {
                Diagnostic::error("syntax.lexical", e.message)
                    .at(SourceSpan::new(file, e.line as u32, e.column as u32))
            })
            .collect();
        Parser {
            toks,
            line_start,
            pos: 0,
            file,
            diags,
        }
    }

    pub fn position(&self) -> usize {
        self.pos
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    pub fn peek_at(&self, n: usize) -> Option<&Tok> {
        self.toks.get(self.pos + n).map(|t| &t.tok)
    }

    pub fn peek_ident(&self) -> Option<&str> {
        match self.peek() {
            Some(Tok::Ident(s)) => Some(s),
            _ => None,
        }
    }

    /// Span of the current token, or of the last one at end of input.
    pub fn span(&self) -> SourceSpan {
        let t = self.toks.get(self.pos).or(self.toks.last());
        match t {
            Some(t) => SourceSpan::new(self.file, t.line as u32, t.column as u32),
            None => SourceSpan::new(self.file, 1, 1),
        }
    }

    pub fn advance(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.tok.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    pub fn error_here<T>(&mut self, message: impl Into<String>) -> PResult<T> {
        let span = self.span();
        self.error_at(span, message)
    }

    pub fn error_at<T>(&mut self, span: SourceSpan, message: impl Into<String>) -> PResult<T> {
        self.diags
            .push(Diagnostic::error("syntax", message).at(span));
        Err(Bail)
    }

    fn found(&self) -> String {
        match self.peek() {
            Some(t) => t.to_string(),
            None => "end of input".into(),
        }
    }

    pub fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, tok: Tok) -> PResult<()> {
        if self.eat(&tok) {
            Ok(())
        } else {
            let found = self.found();
            self.error_here(format!("expected {tok}, found {found}"))
        }
    }

    pub fn eat_keyword(&mut self, kw: &str) -> bool {
        if self.peek_ident() == Some(kw) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    /// Any identifier token, unchecked.
    pub fn word(&mut self, what: &str) -> PResult<String> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => {
                let found = self.found();
                self.error_here(format!("expected {what}, found {found}"))
            }
        }
    }

    /// An identifier obeying `[a-z][a-z0-9_]*`.
    pub fn ident(&mut self, what: &str) -> PResult<String> {
        let span = self.span();
        let s = self.word(what)?;
        match check_identifier(&s) {
            Ok(()) => Ok(s),
            Err(e) => self.error_at(span, e.to_string()),
        }
    }

    pub fn literal(&mut self) -> PResult<Literal> {
        let negated = self.eat(&Tok::Tilde);
        let span = self.span();
        let s = self.word("literal")?;
        match Atom::new(s) {
            Ok(a) => Ok(Literal::new(a, negated)),
            Err(e) => self.error_at(span, e.to_string()),
        }
    }

    /// `[a, b, c]`
    pub fn ident_list(&mut self) -> PResult<Vec<String>> {
        self.expect(Tok::LBracket)?;
        let mut out = Vec::new();
        if self.eat(&Tok::RBracket) {
            return Ok(out);
        }
        loop {
            out.push(self.ident("identifier")?);
            if self.eat(&Tok::Comma) {
                if self.eat(&Tok::RBracket) {
                    return Ok(out);
                }
                continue;
            }
            self.expect(Tok::RBracket)?;
            return Ok(out);
        }
    }

    fn value(&mut self) -> PResult<Value> {
        match self.peek().cloned() {
            Some(Tok::Tilde) => Ok(Value::Literal(self.literal()?)),
            Some(Tok::Str(s)) => {
                self.pos += 1;
                Ok(Value::Str(s))
            }
            Some(Tok::Number(lo)) => {
                self.pos += 1;
                if self.eat(&Tok::DotDot) {
                    match self.peek().cloned() {
                        Some(Tok::Number(hi)) => {
                            self.pos += 1;
                            Ok(Value::Range(lo, hi))
                        }
                        _ => self.error_here("expected upper bound of range"),
                    }
                } else {
                    Ok(Value::Number(lo))
                }
            }
            Some(Tok::LBracket) => Ok(Value::List(self.ident_list()?)),
            Some(Tok::Ident(w)) => {
                let meta = w == "pref"
                    && matches!(self.peek_at(1), Some(Tok::Ident(_)))
                    && self.peek_at(2) == Some(&Tok::Gt);
                if meta || self.peek_at(1) == Some(&Tok::Gt) {
                    if meta {
                        self.pos += 1;
                    }
                    let preferred = self.ident("preferred id")?;
                    self.expect(Tok::Gt)?;
                    let dispreferred = self.ident("dispreferred id")?;
                    Ok(Value::Order {
                        meta,
                        preferred,
                        dispreferred,
                    })
                } else {
                    let span = self.span();
                    self.pos += 1;
                    match check_identifier(&w) {
                        Ok(()) => Ok(Value::Ident(w)),
                        Err(e) => self.error_at(span, e.to_string()),
                    }
                }
            }
            _ => {
                let found = self.found();
                self.error_here(format!("expected a value, found {found}"))
            }
        }
    }

    /// `{ key: value, ... }` with an optional trailing comma.
    pub fn fields(&mut self) -> PResult<Fields> {
        let open = self.span();
        self.expect(Tok::LBrace)?;
        let mut fields = Fields {
            fields: Vec::new(),
            span: Some(open),
        };
        loop {
            if self.eat(&Tok::RBrace) {
                return Ok(fields);
            }
            let span = self.span();
            let key = self.word("field name")?;
            self.expect(Tok::Colon)?;
            let value = self.value()?;
            if fields.fields.iter().any(|f| f.key == key) {
                self.diags.push(
                    Diagnostic::error("syntax", format!("field `{key}` given twice"))
                        .at(span.clone()),
                );
            } else {
                fields.fields.push(Field {
                    key,
                    span,
                    value,
                    used: false,
                });
            }
            if !self.eat(&Tok::Comma) {
                self.expect(Tok::RBrace)?;
                return Ok(fields);
            }
        }
    }

    /// Skips to the next token that can start a declaration: one of
    /// `keywords` at the start of a line. `start` is where the failed
    /// declaration began; at least one token past it is consumed.
    pub fn recover(&mut self, start: usize, keywords: &[&str]) {
        if self.pos == start && !self.at_end() {
            self.pos += 1;
        }
        while let Some(t) = self.toks.get(self.pos) {
            if self.line_start[self.pos] {
                if let Tok::Ident(w) = &t.tok {
                    if keywords.contains(&w.as_str()) {
                        return;
                    }
                }
            }
            self.pos += 1;
        }
    }

    pub fn push(&mut self, d: Diagnostic) {
        self.diags.push(d);
    }
}

impl Fields {
    fn take(&mut self, key: &str) -> Option<&mut Field> {
        let f = self.fields.iter_mut().find(|f| f.key == key)?;
        f.used = true;
        Some(f)
    }

    fn mismatch(p: &mut Parser<'_>, f: &Field, want: &str) {
        p.push(
            Diagnostic::error(
                "syntax",
                format!("field `{}` expects {want}, found {}", f.key, f.value.describe()),
            )
            .at(f.span.clone()),
        );
    }

    pub fn literal(&mut self, p: &mut Parser<'_>, key: &str) -> Option<Literal> {
        let f = self.take(key)?;
        match &f.value {
            Value::Literal(l) => Some(l.clone()),
            Value::Ident(s) => Some(Literal::positive(Atom::new(s.clone()).ok()?)),
            _ => {
                Self::mismatch(p, f, "a literal");
                None
            }
        }
    }

    pub fn ident(&mut self, p: &mut Parser<'_>, key: &str) -> Option<String> {
        let f = self.take(key)?;
        match &f.value {
            Value::Ident(s) => Some(s.clone()),
            _ => {
                Self::mismatch(p, f, "an identifier");
                None
            }
        }
    }

    pub fn string(&mut self, p: &mut Parser<'_>, key: &str) -> Option<String> {
        let f = self.take(key)?;
        match &f.value {
            Value::Str(s) => Some(s.clone()),
            _ => {
                Self::mismatch(p, f, "a string");
                None
            }
        }
    }

    pub fn number(&mut self, p: &mut Parser<'_>, key: &str) -> Option<f64> {
        let f = self.take(key)?;
        match &f.value {
            Value::Number(s) => match s.parse::<f64>() {
                Ok(x) if x.is_finite() => Some(x),
                _ => {
                    Self::mismatch(p, f, "a finite number");
                    None
                }
            },
            _ => {
                Self::mismatch(p, f, "a number");
                None
            }
        }
    }

    pub fn list(&mut self, p: &mut Parser<'_>, key: &str) -> Option<Vec<String>> {
        let f = self.take(key)?;
        match &f.value {
            Value::List(v) => Some(v.clone()),
            _ => {
                Self::mismatch(p, f, "a list");
                None
            }
        }
    }

    /// The raw value, for fields accepting several shapes.
    pub fn value(&mut self, key: &str) -> Option<(Value, SourceSpan)> {
        self.take(key).map(|f| (f.value.clone(), f.span.clone()))
    }

    pub fn has(&self, key: &str) -> bool {
        self.fields.iter().any(|f| f.key == key)
    }

    /// Reports fields nobody asked for.
    pub fn finish(self, p: &mut Parser<'_>, decl: &str) {
        for f in self.fields.into_iter().filter(|f| !f.used) {
            p.push(
                Diagnostic::error("syntax", format!("unknown field `{}` in {decl}", f.key))
                    .at(f.span),
            );
        }
    }

    pub fn missing(&self, p: &mut Parser<'_>, key: &str, decl: &str) {
        let span = self.span.clone().unwrap_or_else(|| p.span());
        p.push(Diagnostic::error("syntax", format!("{decl} is missing field `{key}`")).at(span));
    }
}
