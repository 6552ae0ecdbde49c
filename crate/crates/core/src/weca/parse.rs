use thiserror::Error;

use crate::syntax::name;

use super::{UConst, UTerm};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("column {col}: {message}")]
pub struct UParseError {
    pub col: usize,
    pub message: String,
}

/// Parses untyped syntax: `\x y. b` (or `λ`), application, parentheses,
/// the constants `J refl pair pi1 pi2` (also `π1 π2`), the abbreviations
/// `K K* I`, and `[name]` references resolved by `lookup`. Other unbound
/// identifiers are free variables.
pub fn parse_uterm(
    src: &str,
    lookup: &mut dyn FnMut(&str) -> Option<UTerm>,
) -> Result<UTerm, UParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut p = P {
        chars,
        i: 0,
        scope: Vec::new(),
        lookup,
    };
    let t = p.term()?;
    p.ws();
    if p.i < p.chars.len() {
        return p.err("unexpected trailing input");
    }
    Ok(t)
}

/// Parses without corpus references.
pub fn parse_uterm_plain(src: &str) -> Result<UTerm, UParseError> {
    parse_uterm(src, &mut |_| None)
}

struct P<'a> {
    chars: Vec<char>,
    i: usize,
    scope: Vec<String>,
    lookup: &'a mut dyn FnMut(&str) -> Option<UTerm>,
}

fn ident_char(c: char) -> bool {
    (c.is_alphanumeric() || matches!(c, '_' | '\'' | '#' | '*')) && c != 'λ'
}

impl P<'_> {
    fn err<T>(&self, msg: &str) -> Result<T, UParseError> {
        Err(UParseError {
            col: self.i + 1,
            message: msg.to_string(),
        })
    }

    fn ws(&mut self) {
        while self.i < self.chars.len() && self.chars[self.i].is_whitespace() {
            self.i += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.ws();
        self.chars.get(self.i).copied()
    }

    fn ident(&mut self) -> Result<String, UParseError> {
        self.ws();
        let start = self.i;
        while self.i < self.chars.len() && ident_char(self.chars[self.i]) {
            self.i += 1;
        }
        if start == self.i {
            return self.err("expected identifier");
        }
        Ok(self.chars[start..self.i].iter().collect())
    }

    fn term(&mut self) -> Result<UTerm, UParseError> {
        if matches!(self.peek(), Some('\\' | 'λ')) {
            self.i += 1;
            let mut names = Vec::new();
            while self.peek() != Some('.') {
                names.push(self.ident()?);
            }
            if names.is_empty() {
                return self.err("expected binder");
            }
            self.i += 1;
            let n = self.scope.len();
            self.scope.extend(names.iter().cloned());
            let body = self.term();
            self.scope.truncate(n);
            let mut body = body?;
            for x in names.iter().rev() {
                body = UTerm::lam(x, body);
            }
            return Ok(body);
        }
        let mut t = self.atom()?;
        while let Some(c) = self.peek() {
            if c == ')' || c == ']' {
                break;
            }
            if c == '\\' || c == 'λ' {
                let a = self.term()?;
                t = UTerm::app(t, a);
                break;
            }
            let a = self.atom()?;
            t = UTerm::app(t, a);
        }
        Ok(t)
    }

    fn atom(&mut self) -> Result<UTerm, UParseError> {
        match self.peek() {
            Some('(') => {
                self.i += 1;
                let t = self.term()?;
                if self.peek() != Some(')') {
                    return self.err("expected `)`");
                }
                self.i += 1;
                Ok(t)
            }
            Some('[') => {
                self.i += 1;
                let n = self.ident()?;
                if self.peek() != Some(']') {
                    return self.err("expected `]`");
                }
                self.i += 1;
                match (self.lookup)(&n) {
                    Some(t) => Ok(t),
                    None => self.err(&format!("unknown corpus entry `{n}`")),
                }
            }
            Some(_) => {
                let x = self.ident()?;
                if let Some(k) = self.scope.iter().rev().position(|n| *n == x) {
                    return Ok(UTerm::Var(k));
                }
                Ok(match x.as_str() {
                    "J" => UTerm::Const(UConst::J),
                    "refl" => UTerm::Const(UConst::Refl),
                    "pair" => UTerm::Const(UConst::Pair),
                    "pi1" | "π1" => UTerm::Const(UConst::Proj1),
                    "pi2" | "π2" => UTerm::Const(UConst::Proj2),
                    "K" => UTerm::k(),
                    "K*" => UTerm::k_star(),
                    "I" => UTerm::i(),
                    _ => UTerm::Free(name(&x)),
                })
            }
            None => self.err("unexpected end of input"),
        }
    }
}
