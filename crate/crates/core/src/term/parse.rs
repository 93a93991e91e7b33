use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use super::Term;
use crate::names::{self, Name};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    Lam,
    Dot,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Lolli,
    Bang,
    Ident(String),
}

#[derive(Debug, Clone)]
pub(crate) struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

pub(crate) fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

pub(crate) fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

/// Shared lexer for the term and type grammars.
pub(crate) fn lex(text: &str) -> Result<(Vec<Spanned>, (usize, usize)), ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let adv =|n: usize, i: &mut usize, col: &mut usize| {
            *i += n;
            *col += n;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
                continue;
            }
            c if c.is_whitespace() => adv(1, &mut i, &mut col),
            '-' if chars.get(i + 1) == Some(&'-') => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '-' if chars.get(i + 1) == Some(&'o') => {
                out.push(Spanned { tok: Tok::Lolli, line: l0, col: c0 });
                adv(2, &mut i, &mut col);
            }
            '\\' | 'λ' => {
                out.push(Spanned { tok: Tok::Lam, line: l0, col: c0 });
                adv(1, &mut i, &mut col);
            }
            '⊸' => {
                out.push(Spanned { tok: Tok::Lolli, line: l0, col: c0 });
                adv(1, &mut i, &mut col);
            }
            '.' | '(' | ')' | '{' | '}' | ',' | '!' => {
                let tok = match c {
                    '.' => Tok::Dot,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '{' => Tok::LBrace,
                    '}' => Tok::RBrace,
                    ',' => Tok::Comma,
                    _ => Tok::Bang,
                };
                out.push(Spanned { tok, line: l0, col: c0 });
                adv(1, &mut i, &mut col);
            }
            c if is_ident_start(c) => {
                let start = i;
                while i < chars.len() && is_ident_char(chars[i]) {
                    i += 1;
                }
                col += i - start;
                let s: String = chars[start..i].iter().collect();
                out.push(Spanned { tok: Tok::Ident(s), line: l0, col: c0 });
            }
            _ => {
                return Err(ParseError {
                    line,
                    col,
                    msg: format!("unexpected character {c:?}"),
                })
            }
        }
    }
    Ok((out, (line, col)))
}

/// Parse a term. Binders are renamed apart so that no two binders share a
/// name and no binder shadows a free variable.
pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    parse_term_with(text, false)
}

/// Like [`parse_term`]; with `allow_reserved` generated names are accepted
/// (used when reloading serialized derivations).
pub fn parse_term_with(text: &str, allow_reserved: bool) -> Result<Term, ParseError> {
    let (toks, end) = lex(text)?;
    let mut p = Parser { toks, pos: 0, end, allow_reserved };
    let t = p.term()?;
    if let Some(s) = p.toks.get(p.pos) {
        return Err(ParseError { line: s.line, col: s.col, msg: "trailing input".into() });
    }
    Ok(rename_apart(&t))
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    end: (usize, usize),
    allow_reserved: bool,
}

impl Parser {
    fn err(&self, msg: &str) -> ParseError {
        let (line, col) = match self.toks.get(self.pos) {
            Some(s) => (s.line, s.col),
            None => self.end,
        };
        ParseError { line, col, msg: msg.into() }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn ident(&mut self) -> Result<Name, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                if !self.allow_reserved && names::is_reserved(s) {
                    return Err(self.err(&format!("identifier {s:?} uses the reserved prefix")));
                }
                let n = names::name(s);
                if self.allow_reserved {
                    names::reserve(s);
                }
                self.pos += 1;
                Ok(n)
            }
            _ => Err(self.err("expected identifier")),
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        if self.peek() == Some(&Tok::Lam) {
            self.pos += 1;
            let mut binders = vec![self.ident()?];
            while let Some(Tok::Ident(_)) = self.peek() {
                binders.push(self.ident()?);
            }
            if self.peek() != Some(&Tok::Dot) {
                return Err(self.err("expected '.'"));
            }
            self.pos += 1;
            let body = self.term()?;
            return Ok(Term::lams(binders, body));
        }
        let mut t = self.atom()?;
        loop {
            match self.peek() {
                Some(Tok::Ident(_)) | Some(Tok::LParen) => {
                    let a = self.atom()?;
                    t = Term::app(t, a);
                }
                // A trailing lambda without parentheses is not in the grammar.
                _ => return Ok(t),
            }
        }
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Some(Tok::Ident(_)) => Ok(Term::Var(self.ident()?)),
            Some(Tok::LParen) => {
                self.pos += 1;
                let t = self.term()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(t)
            }
            _ => Err(self.err("expected identifier or '('")),
        }
    }
}

/// Rename binders apart, choosing primed variants of the original names.
fn rename_apart(t: &Term) -> Term {
    let mut used = BTreeSet::new();
    t.all_names(&mut used);
    let mut seen: BTreeSet<Name> = t.free_vars();
    fn go(
        t: &Term,
        env: &mut HashMap<Name, Vec<Name>>,
        seen: &mut BTreeSet<Name>,
        used: &mut BTreeSet<Name>,
    ) -> Term {
        match t {
            Term::Var(x) => match env.get(x).and_then(|v| v.last()) {
                Some(y) => Term::Var(y.clone()),
                None => t.clone(),
            },
            Term::App(f, a) => Term::app(go(f, env, seen, used), go(a, env, seen, used)),
            Term::Abs(x, b) => {
                let y = if seen.contains(x) {
                    let mut cand = format!("{x}'");
                    while used.contains(cand.as_str()) {
                        cand.push('\'');
                    }
                    let cand: Name = cand.into();
                    used.insert(cand.clone());
                    cand
                } else {
                    x.clone()
                };
                seen.insert(y.clone());
                env.entry(x.clone()).or_default().push(y.clone());
                let body = go(b, env, seen, used);
                env.get_mut(x).unwrap().pop();
                Term::abs(y, body)
            }
        }
    }
    go(t, &mut HashMap::new(), &mut seen, &mut used)
}
