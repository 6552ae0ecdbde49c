use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use super::term::{name, JElim, Name, Sort, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, PartialOrd, Ord)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("{pos}: parse error: expected {}, found {found}", .expected.join(" or "))]
pub struct ParseError {
    pub pos: Pos,
    pub expected: Vec<String>,
    pub found: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Star,
    KindSym,
    Pi,
    Lam,
    Sigma,
    Proj1,
    Proj2,
    Refl,
    IdKw,
    JKw,
    Postulate,
    Dot,
    Colon,
    Assign,
    Comma,
    LParen,
    RParen,
    LBrack,
    RBrack,
    LBrace,
    RBrace,
    LAngle,
    RAngle,
    Arrow,
    Eq,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(s) => return write!(f, "identifier `{s}`"),
            Tok::Star => "`*`",
            Tok::KindSym => "`□`",
            Tok::Pi => "`Π`",
            Tok::Lam => "`λ`",
            Tok::Sigma => "`Σ`",
            Tok::Proj1 => "`π1`",
            Tok::Proj2 => "`π2`",
            Tok::Refl => "`refl`",
            Tok::IdKw => "`Id`",
            Tok::JKw => "`J`",
            Tok::Postulate => "`postulate`",
            Tok::Dot => "`.`",
            Tok::Colon => "`:`",
            Tok::Assign => "`:=`",
            Tok::Comma => "`,`",
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::LBrack => "`[`",
            Tok::RBrack => "`]`",
            Tok::LBrace => "`{`",
            Tok::RBrace => "`}`",
            Tok::LAngle => "`⟨`",
            Tok::RAngle => "`⟩`",
            Tok::Arrow => "`→`",
            Tok::Eq => "`=`",
            Tok::Eof => "end of input",
        };
        f.write_str(s)
    }
}

fn is_ident_start(c: char) -> bool {
    (c.is_alphabetic() || c == '_') && !matches!(c, 'λ' | 'Π' | 'Σ')
}

fn is_ident_char(c: char) -> bool {
    (c.is_alphanumeric() || c == '_' || c == '\'') && !matches!(c, 'λ' | 'Π' | 'Σ')
}

fn lex(src: &str, first_line: usize) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let mut out = Vec::new();
    for (li, line) in src.lines().enumerate() {
        let lineno = first_line + li;
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let pos = Pos {
                line: lineno,
                col: i + 1,
            };
            let next = chars.get(i + 1).copied();
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            if c == '-' && next == Some('-') {
                break;
            }
            let (tok, len) = match c {
                '*' | '⋆' => (Tok::Star, 1),
                '□' => (Tok::KindSym, 1),
                'Π' | '∀' => (Tok::Pi, 1),
                'λ' | '\\' => (Tok::Lam, 1),
                'Σ' => (Tok::Sigma, 1),
                '.' => (Tok::Dot, 1),
                ':' if next == Some('=') => (Tok::Assign, 2),
                ':' => (Tok::Colon, 1),
                ',' => (Tok::Comma, 1),
                '(' => (Tok::LParen, 1),
                ')' => (Tok::RParen, 1),
                '[' => (Tok::LBrack, 1),
                ']' => (Tok::RBrack, 1),
                '{' => (Tok::LBrace, 1),
                '}' => (Tok::RBrace, 1),
                '⟨' | '<' => (Tok::LAngle, 1),
                '⟩' | '>' => (Tok::RAngle, 1),
                '→' => (Tok::Arrow, 1),
                '-' if next == Some('>') => (Tok::Arrow, 2),
                '=' => (Tok::Eq, 1),
                c if is_ident_start(c) => {
                    let mut j = i;
                    while j < chars.len() && is_ident_char(chars[j]) {
                        j += 1;
                    }
                    let word: String = chars[i..j].iter().collect();
                    let tok = match word.as_str() {
                        "forall" => Tok::Pi,
                        "sig" => Tok::Sigma,
                        "KIND" => Tok::KindSym,
                        "refl" => Tok::Refl,
                        "Id" => Tok::IdKw,
                        "J" => Tok::JKw,
                        "postulate" => Tok::Postulate,
                        "π1" | "pi1" => Tok::Proj1,
                        "π2" | "pi2" => Tok::Proj2,
                        _ => Tok::Ident(word),
                    };
                    (tok, j - i)
                }
                other => {
                    return Err(ParseError {
                        pos,
                        expected: vec!["a token".into()],
                        found: format!("`{other}`"),
                    })
                }
            };
            out.push((tok, pos));
            i += len;
        }
    }
    Ok(out)
}

/// A top-level entry of a source file.
#[derive(Clone, Debug, PartialEq)]
pub enum Decl {
    Def {
        name: Name,
        ty: Option<Term>,
        body: Term,
        pos: Pos,
    },
    Postulate {
        name: Name,
        ty: Term,
        pos: Pos,
    },
}

impl Decl {
    pub fn name(&self) -> &Name {
        match self {
            Decl::Def { name, .. } | Decl::Postulate { name, .. } => name,
        }
    }

    pub fn pos(&self) -> Pos {
        match self {
            Decl::Def { pos, .. } | Decl::Postulate { pos, .. } => *pos,
        }
    }
}

/// A parsed `.lp2` file: the `#ext` pragma words and the declarations.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct DeclarationFile {
    pub extensions: Vec<String>,
    pub decls: Vec<Decl>,
}

struct Parser<'a> {
    toks: &'a [(Tok, Pos)],
    i: usize,
    end: Pos,
    scope: Vec<Name>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        self.toks.get(self.i).map(|t| &t.0).unwrap_or(&Tok::Eof)
    }

    fn pos(&self) -> Pos {
        self.toks.get(self.i).map(|t| t.1).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Tok {
        let t = self.peek().clone();
        self.i += 1;
        t
    }

    fn error<T>(&self, expected: &[&str]) -> Result<T, ParseError> {
        Err(ParseError {
            pos: self.pos(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().to_string(),
        })
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.i += 1;
            Ok(())
        } else {
            self.error(&[&tok.to_string()])
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.i += 1;
                Ok(s)
            }
            _ => self.error(&["identifier"]),
        }
    }

    fn resolve(&self, x: &str) -> Term {
        match self.scope.iter().rev().position(|n| &**n == x) {
            Some(k) => Term::Var(k),
            None => Term::Const(name(x)),
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Tok::Pi | Tok::Lam | Tok::Sigma => self.binder(),
            _ => self.arrow(),
        }
    }

    /// `Πx y:A (z:B). body`, likewise for λ and Σ.
    fn binder(&mut self) -> Result<Term, ParseError> {
        let kind = self.bump();
        let mut groups: Vec<(Vec<String>, Term)> = Vec::new();
        let pushed_before = self.scope.len();
        loop {
            match self.peek() {
                Tok::Ident(_) if groups.is_empty() => {
                    let names = self.binder_names()?;
                    self.expect(Tok::Colon)?;
                    let dom = self.domain()?;
                    self.scope.extend(names.iter().map(|n| name(n)));
                    groups.push((names, dom));
                }
                Tok::LParen => {
                    self.bump();
                    let names = self.binder_names()?;
                    self.expect(Tok::Colon)?;
                    let dom = self.term()?;
                    self.expect(Tok::RParen)?;
                    self.scope.extend(names.iter().map(|n| name(n)));
                    groups.push((names, dom));
                }
                _ if groups.is_empty() => return self.error(&["binder"]),
                _ => break,
            }
        }
        self.expect(Tok::Dot)?;
        let mut body = self.term()?;
        self.scope.truncate(pushed_before);
        for (names, dom) in groups.into_iter().rev() {
            for (j, x) in names.iter().enumerate().rev() {
                // the domain was parsed before its own group was bound
                let d = dom.shift(j as isize, 0);
                body = match kind {
                    Tok::Pi => Term::Pi(name(x), Arc::new(d), Arc::new(body)),
                    Tok::Lam => Term::Lam(name(x), Arc::new(d), Arc::new(body)),
                    _ => Term::Sigma(name(x), Arc::new(d), Arc::new(body)),
                };
            }
        }
        Ok(body)
    }

    fn binder_names(&mut self) -> Result<Vec<String>, ParseError> {
        let mut names = vec![self.ident()?];
        loop {
            match self.peek() {
                Tok::Ident(_) => names.push(self.ident()?),
                Tok::Comma => {
                    self.bump();
                    names.push(self.ident()?);
                }
                _ => break,
            }
        }
        Ok(names)
    }

    fn domain(&mut self) -> Result<Term, ParseError> {
        if matches!(self.peek(), Tok::Dot) {
            return self.error(&["domain"]);
        }
        self.term()
    }

    fn arrow(&mut self) -> Result<Term, ParseError> {
        let lhs = self.equality()?;
        if matches!(self.peek(), Tok::Arrow) {
            self.bump();
            self.scope.push(name("_"));
            let rhs = self.term();
            self.scope.pop();
            let rhs = rhs?;
            Ok(Term::Pi(name("_"), Arc::new(lhs), Arc::new(rhs)))
        } else {
            Ok(lhs)
        }
    }

    /// `a ={σ} b`
    fn equality(&mut self) -> Result<Term, ParseError> {
        let lhs = self.application()?;
        if matches!(self.peek(), Tok::Eq) {
            self.bump();
            self.expect(Tok::LBrace)?;
            let ty = self.term()?;
            self.expect(Tok::RBrace)?;
            let rhs = self.application()?;
            Ok(Term::id(ty, lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(
            self.peek(),
            Tok::Ident(_)
                | Tok::Star
                | Tok::KindSym
                | Tok::LParen
                | Tok::Refl
                | Tok::IdKw
                | Tok::JKw
                | Tok::LAngle
                | Tok::Proj1
                | Tok::Proj2
        )
    }

    fn application(&mut self) -> Result<Term, ParseError> {
        let mut t = self.argument()?;
        while self.starts_atom() {
            let a = self.argument()?;
            t = Term::app(t, a);
        }
        Ok(t)
    }

    fn argument(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Tok::Proj1 => {
                self.bump();
                Ok(Term::Proj1(Arc::new(self.argument()?)))
            }
            Tok::Proj2 => {
                self.bump();
                Ok(Term::Proj2(Arc::new(self.argument()?)))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        match self.bump() {
            Tok::Ident(x) => Ok(self.resolve(&x)),
            Tok::Star => Ok(Term::Sort(Sort::Star)),
            Tok::KindSym => Ok(Term::Sort(Sort::Kind)),
            Tok::Refl => Ok(Term::Refl),
            Tok::LParen => {
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Tok::IdKw => {
                self.expect(Tok::LParen)?;
                let ty = self.term()?;
                self.expect(Tok::Comma)?;
                let lhs = self.term()?;
                self.expect(Tok::Comma)?;
                let rhs = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(Term::id(ty, lhs, rhs))
            }
            Tok::LAngle => {
                let fst = self.term()?;
                self.expect(Tok::Comma)?;
                let snd = self.term()?;
                self.expect(Tok::RAngle)?;
                let ann = if matches!(self.peek(), Tok::LBrack) {
                    self.bump();
                    let t = self.term()?;
                    self.expect(Tok::RBrack)?;
                    Some(t)
                } else {
                    None
                };
                Ok(Term::pair(fst, snd, ann))
            }
            Tok::JKw => self.j_elim(),
            _ => {
                self.i -= 1;
                self.error(&["term"])
            }
        }
    }

    /// `J[x y p : σ. τ](c, a, b, q)`
    fn j_elim(&mut self) -> Result<Term, ParseError> {
        self.expect(Tok::LBrack)?;
        let x = self.ident()?;
        let y = self.ident()?;
        let p = self.ident()?;
        self.expect(Tok::Colon)?;
        let dom = self.domain()?;
        self.expect(Tok::Dot)?;
        let depth = self.scope.len();
        self.scope.extend([name(&x), name(&y), name(&p)]);
        let motive = self.term();
        self.scope.truncate(depth);
        let motive = motive?;
        self.expect(Tok::RBrack)?;
        self.expect(Tok::LParen)?;
        let base = self.term()?;
        self.expect(Tok::Comma)?;
        let lhs = self.term()?;
        self.expect(Tok::Comma)?;
        let rhs = self.term()?;
        self.expect(Tok::Comma)?;
        let proof = self.term()?;
        self.expect(Tok::RParen)?;
        Ok(Term::J(Arc::new(JElim {
            names: [name(&x), name(&y), name(&p)],
            dom,
            motive,
            base,
            lhs,
            rhs,
            proof,
        })))
    }

    fn finish(&self) -> Result<(), ParseError> {
        if self.i < self.toks.len() {
            self.error(&["end of input"])
        } else {
            Ok(())
        }
    }
}

/// Parses a single term. Identifiers bound by `ctx` (innermost last) become
/// variables; any other free identifier becomes a global constant.
pub fn parse_term_in(src: &str, ctx: &[Name]) -> Result<Term, ParseError> {
    let toks = lex(src, 1)?;
    let end = toks
        .last()
        .map(|(_, p)| Pos {
            line: p.line,
            col: p.col + 1,
        })
        .unwrap_or(Pos { line: 1, col: 1 });
    let mut p = Parser {
        toks: &toks,
        i: 0,
        end,
        scope: ctx.to_vec(),
    };
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    parse_term_in(src, &[])
}

/// Parses a declaration file. Every declaration starts in column 1;
/// continuation lines are indented.
pub fn parse(src: &str) -> Result<DeclarationFile, ParseError> {
    let mut file = DeclarationFile::default();
    let mut body = String::new();
    for (i, line) in src.lines().enumerate() {
        let trimmed = line.trim_start();
        if let Some(rest) = trimmed.strip_prefix("#ext") {
            file.extensions
                .extend(rest.split_whitespace().map(str::to_string));
            body.push('\n');
            continue;
        }
        if trimmed.starts_with('#') {
            return Err(ParseError {
                pos: Pos {
                    line: i + 1,
                    col: line.len() - trimmed.len() + 1,
                },
                expected: vec!["`#ext` pragma".into()],
                found: format!("`{}`", trimmed.split_whitespace().next().unwrap_or("#")),
            });
        }
        body.push_str(line);
        body.push('\n');
    }
    let toks = lex(&body, 1)?;
    let mut starts: Vec<usize> = toks
        .iter()
        .enumerate()
        .filter(|(_, (_, p))| p.col == 1)
        .map(|(i, _)| i)
        .collect();
    if let Some((_, p)) = toks.first() {
        if p.col != 1 {
            return Err(ParseError {
                pos: *p,
                expected: vec!["declaration in column 1".into()],
                found: toks[0].0.to_string(),
            });
        }
    }
    starts.push(toks.len());
    for w in starts.windows(2) {
        let chunk = &toks[w[0]..w[1]];
        let end = chunk
            .last()
            .map(|(_, p)| Pos {
                line: p.line,
                col: p.col + 1,
            })
            .unwrap_or_default();
        let mut p = Parser {
            toks: chunk,
            i: 0,
            end,
            scope: Vec::new(),
        };
        file.decls.push(decl(&mut p)?);
    }
    Ok(file)
}

fn decl(p: &mut Parser<'_>) -> Result<Decl, ParseError> {
    let pos = p.pos();
    if matches!(p.peek(), Tok::Postulate) {
        p.bump();
        let n = p.ident()?;
        p.expect(Tok::Colon)?;
        let ty = p.term()?;
        p.finish()?;
        return Ok(Decl::Postulate {
            name: name(&n),
            ty,
            pos,
        });
    }
    let n = p.ident()?;
    let ty = match p.peek() {
        Tok::Colon => {
            p.bump();
            Some(p.term()?)
        }
        Tok::Assign => None,
        _ => return p.error(&["`:`", "`:=`"]),
    };
    p.expect(Tok::Assign)?;
    let body = p.term()?;
    p.finish()?;
    Ok(Decl::Def {
        name: name(&n),
        ty,
        body,
        pos,
    })
}
