use super::{Type, TypeError};
use crate::names::{self, Name};
use crate::term::ParseError;
use crate::term::{lex, Spanned, Tok};

pub fn parse_type(text: &str) -> Result<Type, ParseError> {
    parse_type_with(text, false)
}

/// With `allow_reserved`, generated type variable names are accepted.
pub fn parse_type_with(text: &str, allow_reserved: bool) -> Result<Type, ParseError> {
    let (toks, end) = lex(text)?;
    let mut p = TypeParser { toks, pos: 0, end, allow_reserved, bang: false };
    let t = p.lin_or_strat()?;
    p.finish()?;
    Ok(t)
}

/// Parser shared with the STA type grammar, which adds a `!` prefix.
pub(crate) struct TypeParser {
    pub toks: Vec<Spanned>,
    pub pos: usize,
    pub end: (usize, usize),
    pub allow_reserved: bool,
    pub bang: bool,
}

/// Parsed surface type before it is mapped into a concrete type system.
#[derive(Debug, Clone)]
pub(crate) enum Surface {
    Var(Name),
    Arrow(Box<Surface>, Box<Surface>),
    Forall(Name, Box<Surface>),
    Set(Vec<Surface>),
    Bang(Box<Surface>),
}

impl TypeParser {
    pub fn err(&self, msg: &str) -> ParseError {
        let (line, col) = match self.toks.get(self.pos) {
            Some(s) => (s.line, s.col),
            None => self.end,
        };
        ParseError { line, col, msg: msg.into() }
    }

    pub fn finish(&self) -> Result<(), ParseError> {
        if self.pos < self.toks.len() {
            return Err(self.err("trailing input"));
        }
        Ok(())
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn tyvar(&mut self) -> Result<Name, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) if s != "forall" => {
                if names::is_reserved(s) {
                    if !self.allow_reserved {
                        return Err(self.err(&format!("identifier {s:?} uses the reserved prefix")));
                    }
                    names::reserve(s);
                }
                let n = names::name(s);
                self.pos += 1;
                Ok(n)
            }
            _ => Err(self.err("expected type variable")),
        }
    }

    pub fn surface(&mut self) -> Result<Surface, ParseError> {
        if let Some(Tok::Ident(s)) = self.peek() {
            if s == "forall" {
                self.pos += 1;
                let mut vars = vec![self.tyvar()?];
                while let Some(Tok::Ident(s)) = self.peek() {
                    if s == "forall" {
                        break;
                    }
                    vars.push(self.tyvar()?);
                }
                if self.peek() != Some(&Tok::Dot) {
                    return Err(self.err("expected '.'"));
                }
                self.pos += 1;
                let body = self.surface()?;
                return Ok(vars.into_iter().rev().fold(body, |b, a| Surface::Forall(a, Box::new(b))));
            }
        }
        let left = self.atom()?;
        if self.peek() == Some(&Tok::Lolli) {
            self.pos += 1;
            let right = self.surface()?;
            return Ok(Surface::Arrow(Box::new(left), Box::new(right)));
        }
        Ok(left)
    }

    fn atom(&mut self) -> Result<Surface, ParseError> {
        match self.peek() {
            Some(Tok::LBrace) => {
                self.pos += 1;
                let mut cs = vec![self.surface()?];
                while self.peek() == Some(&Tok::Comma) {
                    self.pos += 1;
                    cs.push(self.surface()?);
                }
                if self.peek() != Some(&Tok::RBrace) {
                    return Err(self.err("expected '}' or ','"));
                }
                self.pos += 1;
                Ok(Surface::Set(cs))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let t = self.surface()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(t)
            }
            Some(Tok::Bang) if self.bang => {
                self.pos += 1;
                Ok(Surface::Bang(Box::new(self.atom()?)))
            }
            _ => Ok(Surface::Var(self.tyvar()?)),
        }
    }

    fn lin_or_strat(&mut self) -> Result<Type, ParseError> {
        let start = self.pos;
        let s = self.surface()?;
        to_type(&s).map_err(|e| {
            self.pos = start;
            self.err(&e.to_string())
        })
    }
}

fn to_type(s: &Surface) -> Result<Type, TypeError> {
    match s {
        Surface::Var(a) => Ok(Type::Var(a.clone())),
        Surface::Arrow(a, r) => Type::arrow(to_type(a)?, to_type(r)?),
        Surface::Forall(a, b) => Type::forall(a.clone(), to_type(b)?),
        Surface::Set(cs) => Type::strat(cs.iter().map(to_type).collect::<Result<_, _>>()?),
        Surface::Bang(_) => Err(TypeError::NotLinear("!".into())),
    }
}
