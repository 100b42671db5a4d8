//! Concrete syntax:
//!
//! ```text
//! Type ::= "o" | Type "->" Type | "(" Type ")"         (arrows associate right)
//! Term ::= ident | "\" ident ":" Type "." Term | Term Term | "(" Term ")"
//! ```

use super::{KernelError, Name, Raw, Result, Signature, SimpleType, Term, TypingEnv};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Lambda,
    Ident(String),
    Colon,
    Dot,
    LParen,
    RParen,
    Arrow,
    Eof,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let mut out = Vec::new();
    let mut it = text.char_indices().peekable();
    while let Some(&(pos, c)) = it.peek() {
        match c {
            c if c.is_whitespace() => {
                it.next();
            }
            '\\' | 'λ' => {
                it.next();
                out.push((Tok::Lambda, pos));
            }
            ':' => {
                it.next();
                out.push((Tok::Colon, pos));
            }
            '.' => {
                it.next();
                out.push((Tok::Dot, pos));
            }
            '(' => {
                it.next();
                out.push((Tok::LParen, pos));
            }
            ')' => {
                it.next();
                out.push((Tok::RParen, pos));
            }
            '-' => {
                it.next();
                match it.next() {
                    Some((_, '>')) => out.push((Tok::Arrow, pos)),
                    _ => {
                        return Err(KernelError::Syntax {
                            pos,
                            msg: "expected `->`".into(),
                        })
                    }
                }
            }
            c if c.is_ascii_alphabetic() || c == '#' => {
                let mut s = String::new();
                s.push(c);
                it.next();
                while let Some(&(_, c)) = it.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        s.push(c);
                        it.next();
                    } else {
                        break;
                    }
                }
                out.push((Tok::Ident(s), pos));
            }
            other => {
                return Err(KernelError::Syntax {
                    pos,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    out.push((Tok::Eof, text.len()));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    sig: &'a Signature,
    env: &'a TypingEnv,
    bound: Vec<String>,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) {
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(KernelError::Syntax {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected {what}"))
        }
    }

    fn ty(&mut self) -> Result<SimpleType> {
        let dom = match self.peek() {
            Tok::Ident(s) if s == "o" => {
                self.bump();
                SimpleType::Ground
            }
            Tok::LParen => {
                self.bump();
                let t = self.ty()?;
                self.expect(Tok::RParen, "`)`")?;
                t
            }
            _ => return self.error("expected a type"),
        };
        if *self.peek() == Tok::Arrow {
            self.bump();
            Ok(SimpleType::arrow(dom, self.ty()?))
        } else {
            Ok(dom)
        }
    }

    fn term(&mut self) -> Result<Raw> {
        if *self.peek() == Tok::Lambda {
            return self.lambda();
        }
        let mut acc = self.atom()?;
        loop {
            match self.peek() {
                Tok::Ident(_) | Tok::LParen => {
                    let a = self.atom()?;
                    acc = Raw::app(acc, a);
                }
                Tok::Lambda => {
                    let a = self.lambda()?;
                    return Ok(Raw::app(acc, a));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn lambda(&mut self) -> Result<Raw> {
        self.expect(Tok::Lambda, "`\\`")?;
        let name = match self.peek() {
            Tok::Ident(s) if !s.starts_with('#') => s.clone(),
            _ => return self.error("expected a binder name"),
        };
        self.bump();
        self.expect(Tok::Colon, "`:`")?;
        let ty = self.ty()?;
        self.expect(Tok::Dot, "`.`")?;
        self.bound.push(name);
        let body = self.term();
        self.bound.pop();
        Ok(Raw::lam(ty, body?))
    }

    fn atom(&mut self) -> Result<Raw> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                self.resolve(&s, pos)
            }
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            _ => self.error("expected a term"),
        }
    }

    fn resolve(&self, s: &str, pos: usize) -> Result<Raw> {
        if let Some(i) = self.bound.iter().rev().position(|b| b == s) {
            return Ok(Raw::Var(i));
        }
        if self.env.get(s).is_some() {
            return Ok(Raw::Free(Name::from(s)));
        }
        if self.sig.contains(s) {
            return Ok(Raw::Const(Name::from(s)));
        }
        Err(KernelError::UnknownIdent {
            name: s.to_string(),
            pos,
        })
    }

    fn finish(&self) -> Result<()> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            self.error("unexpected trailing input")
        }
    }
}

pub fn parse_type(text: &str) -> Result<SimpleType> {
    let sig = Signature::new(["o"])?;
    let env = TypingEnv::new();
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
        sig: &sig,
        env: &env,
        bound: Vec::new(),
    };
    let t = p.ty()?;
    p.finish()?;
    Ok(t)
}

/// Parses without normalizing or typechecking.
pub fn parse_raw(text: &str, sig: &Signature, env: &TypingEnv) -> Result<Raw> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
        sig,
        env,
        bound: Vec::new(),
    };
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

/// Parses a closed term over `sig` into canonical form.
pub fn parse_term(text: &str, sig: &Signature) -> Result<Term> {
    parse_term_in(text, sig, &TypingEnv::new())
}

/// Like [`parse_term`] but names in `env` are free variables.
pub fn parse_term_in(text: &str, sig: &Signature, env: &TypingEnv) -> Result<Term> {
    parse_raw(text, sig, env)?.canonical(env)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::print_term;

    #[test]
    fn types() {
        assert_eq!(parse_type("o").unwrap(), SimpleType::Ground);
        assert_eq!(
            parse_type("o->o->o").unwrap(),
            SimpleType::arrow(
                SimpleType::Ground,
                SimpleType::arrow(SimpleType::Ground, SimpleType::Ground)
            )
        );
        let f = SimpleType::arrow(
            SimpleType::arrow(SimpleType::Ground, SimpleType::Ground),
            SimpleType::Ground,
        );
        assert_eq!(
            parse_type("((o->o)->o)->((o->o)->o)").unwrap(),
            SimpleType::arrow(f.clone(), f)
        );
        assert!(matches!(parse_type("o->"), Err(KernelError::Syntax { pos: 3, .. })));
        assert!(parse_type("p").is_err());
    }

    #[test]
    fn terms() {
        let sig = Signature::parse("a").unwrap();
        assert_eq!(print_term(&parse_term("\\y:o. y", &sig).unwrap()), "\\y0:o. y0");
        assert_eq!(print_term(&parse_term("(\\x:o. x) a", &sig).unwrap()), "a");
        let t = parse_term(
            "\\y1:(o->o)->o. \\y2:(o->o)->o. y1 (\\z:o. y2 (\\w:o. z))",
            &sig,
        )
        .unwrap();
        assert_eq!(t.ty().to_string(), "((o->o)->o)->((o->o)->o)->o");
        // trailing lambda argument without parentheses
        let u = parse_term("\\y:(o->o)->o. y \\z:o. z", &sig).unwrap();
        assert_eq!(print_term(&u), "\\y0:(o->o)->o. y0 (\\y1:o. y1)");
    }

    #[test]
    fn term_errors() {
        let sig = Signature::parse("a").unwrap();
        assert!(matches!(
            parse_term("\\y:o. q", &sig),
            Err(KernelError::UnknownIdent { pos: 6, .. })
        ));
        assert!(matches!(parse_term("a a", &sig), Err(KernelError::Type(_))));
        assert!(matches!(parse_term("(a", &sig), Err(KernelError::Syntax { .. })));
        assert!(matches!(parse_term("#d", &sig), Err(KernelError::UnknownIdent { .. })));
        assert!(matches!(parse_term("\\#d:o. a", &sig), Err(KernelError::Syntax { .. })));
    }
}
