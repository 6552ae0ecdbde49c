use super::term::{Name, Term};

/// Whether a context variable ranges over terms (classified by a type) or
/// over constructors (classified by a kind).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarClass {
    Term,
    Constructor,
}

/// An ordered list of declarations `v1 : T1, …, vn : Tn`. Each classifier is
/// expressed in the context of the declarations before it.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Context {
    entries: Vec<(Name, Term)>,
}

impl Context {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn push(&mut self, x: Name, ty: Term) {
        self.entries.push((x, ty));
    }

    pub fn pop(&mut self) -> Option<(Name, Term)> {
        self.entries.pop()
    }

    pub fn extended(&self, x: Name, ty: Term) -> Context {
        let mut c = self.clone();
        c.push(x, ty);
        c
    }

    /// The classifier of de Bruijn index `k`, shifted into the full context.
    pub fn lookup(&self, k: usize) -> Option<Term> {
        let i = self.entries.len().checked_sub(k + 1)?;
        Some(self.entries[i].1.shift(k as isize + 1, 0))
    }

    pub fn name_of(&self, k: usize) -> Option<&Name> {
        let i = self.entries.len().checked_sub(k + 1)?;
        Some(&self.entries[i].0)
    }

    pub fn names(&self) -> Vec<Name> {
        self.entries.iter().map(|(n, _)| n.clone()).collect()
    }

    pub fn entries(&self) -> &[(Name, Term)] {
        &self.entries
    }

    pub fn truncate(&mut self, len: usize) {
        self.entries.truncate(len);
    }

    /// Parses `x:A, y:B, …`-style declarations, each in the scope of the
    /// ones before it.
    pub fn parse(decls: &[(&str, &str)]) -> Result<Context, super::ParseError> {
        let mut ctx = Context::new();
        for (x, ty) in decls {
            let t = super::parse_term_in(ty, &ctx.names())?;
            ctx.push(super::name(x), t);
        }
        Ok(ctx)
    }
}
