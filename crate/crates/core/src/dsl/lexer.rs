use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    Ident(String),
    /// Numeric literal, kept as source text.
    Number(String),
    Str(String),
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Colon,
    Comma,
    Pipe,
    Amp,
    Tilde,
    Gt,
    /// `->`
    Arrow,
    /// `=>`
    FatArrow,
    /// `<-`
    BackArrow,
    /// `..`
    DotDot,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Number(s) => write!(f, "number `{s}`"),
            Tok::Str(_) => f.write_str("string"),
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::LBracket => f.write_str("`[`"),
            Tok::RBracket => f.write_str("`]`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Pipe => f.write_str("`|`"),
            Tok::Amp => f.write_str("`&`"),
            Tok::Tilde => f.write_str("`~`"),
            Tok::Gt => f.write_str("`>`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::FatArrow => f.write_str("`=>`"),
            Tok::BackArrow => f.write_str("`<-`"),
            Tok::DotDot => f.write_str("`..`"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct LexError {
    pub message: String,
    pub line: usize,
    pub column: usize,
}

/// Splits `src` into tokens. Lexing continues past errors; the offending
/// characters are skipped.
pub(crate) fn lex(src: &str) -> (Vec<Token>, Vec<LexError>) {
    let chars: Vec<char> = src.chars().collect();
    let mut toks = Vec::new();
    let mut errs = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);

    macro_rules! bump {
        () => {{
            let c = chars[i];
            i += 1;
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        }};
    }

    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let peek = chars.get(i + 1).copied();
        let push = |toks: &mut Vec<Token>, tok| {
            toks.push(Token {
                tok,
                line: l0,
                column: c0,
            })
        };
        if c.is_whitespace() {
            bump!();
        } else if c == '/' && peek == Some('/') {
            while i < chars.len() && chars[i] != '\n' {
                bump!();
            }
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                s.push(bump!());
            }
            push(&mut toks, Tok::Ident(s));
        } else if c.is_ascii_digit() || (c == '-' && peek.is_some_and(|p| p.is_ascii_digit())) {
            let mut s = String::new();
            if c == '-' {
                s.push(bump!());
            }
            macro_rules! digits {
                () => {
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        s.push(bump!());
                    }
                };
            }
            digits!();
            // a fraction, but not the `..` of a range
            if i + 1 < chars.len() && chars[i] == '.' && chars[i + 1].is_ascii_digit() {
                s.push(bump!());
                digits!();
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let sign = chars.get(i + 1).is_some_and(|&x| x == '+' || x == '-');
                let d = chars.get(i + 1 + sign as usize);
                if d.is_some_and(|x| x.is_ascii_digit()) {
                    s.push(bump!());
                    if sign {
                        s.push(bump!());
                    }
                    digits!();
                }
            }
            push(&mut toks, Tok::Number(s));
        } else if c == '"' {
            bump!();
            let mut s = String::new();
            let mut closed = false;
            while i < chars.len() {
                let ch = bump!();
                match ch {
                    '"' => {
                        closed = true;
                        break;
                    }
                    '\n' => break,
                    '\\' if i < chars.len() => {
                        let (el, ec) = (line, col);
                        match bump!() {
                            'n' => s.push('\n'),
                            't' => s.push('\t'),
                            '\\' => s.push('\\'),
                            '"' => s.push('"'),
                            other => errs.push(LexError {
                                message: format!("unknown escape `\\{other}`"),
                                line: el,
                                column: ec - 1,
                            }),
                        }
                    }
                    ch => s.push(ch),
                }
            }
            if closed {
                push(&mut toks, Tok::Str(s));
            } else {
                errs.push(LexError {
                    message: "unterminated string".into(),
                    line: l0,
                    column: c0,
                });
            }
        } else {
            let two = |a: char, b: char| c == a && peek == Some(b);
            let tok = if two('-', '>') {
                Some((Tok::Arrow, 2))
            } else if two('=', '>') {
                Some((Tok::FatArrow, 2))
            } else if two('<', '-') {
                Some((Tok::BackArrow, 2))
            } else if two('.', '.') {
                Some((Tok::DotDot, 2))
            } else {
                match c {
                    '{' => Some((Tok::LBrace, 1)),
                    '}' => Some((Tok::RBrace, 1)),
                    '[' => Some((Tok::LBracket, 1)),
                    ']' => Some((Tok::RBracket, 1)),
                    ':' => Some((Tok::Colon, 1)),
                    ',' => Some((Tok::Comma, 1)),
                    '|' => Some((Tok::Pipe, 1)),
                    '&' => Some((Tok::Amp, 1)),
                    '~' => Some((Tok::Tilde, 1)),
                    '>' => Some((Tok::Gt, 1)),
                    _ => None,
                }
            };
            match tok {
                Some((t, n)) => {
                    for _ in 0..n {
                        bump!();
                    }
                    push(&mut toks, t);
                }
                None => {
                    bump!();
                    errs.push(LexError {
                        message: format!("unexpected character `{c}`"),
                        line: l0,
                        column: c0,
                    });
                }
            }
        }
    }
    (toks, errs)
}
