use std::sync::Arc;

use crate::syntax::{name, Context, Sort, Term};
use crate::typecheck::{Checker, ExtensionFlags, Globals};
use crate::weca::{Eraser, UTerm};

use super::ModelError;

/// Constructors compiled for evaluation. Binders are numbered by level
/// (outermost binder of the context is level 0). Terms occurring inside
/// constructors are erased; the term variable at level `l` appears in them
/// as the free variable `$l`.
#[derive(Clone, Debug, PartialEq)]
pub enum Con {
    Var(usize),
    /// `Πx:dom. cod` with `x` a term variable.
    Pi(Arc<Con>, Arc<Con>),
    /// `Πα:kind. body` with `α` a constructor variable.
    All(Arc<KindIr>, Arc<Con>),
    Sigma(Arc<Con>, Arc<Con>),
    Lam(Arc<Con>, Arc<Con>),
    App(Arc<Con>, UTerm),
    Id(Arc<Con>, UTerm, UTerm),
}

#[derive(Clone, Debug, PartialEq)]
pub enum KindIr {
    Star,
    Pi(Arc<Con>, Arc<KindIr>),
}

impl KindIr {
    pub fn arity(&self) -> usize {
        match self {
            KindIr::Star => 0,
            KindIr::Pi(_, k) => 1 + k.arity(),
        }
    }
}

impl Con {
    /// Whether the binder at `level` is referenced.
    pub fn uses_level(&self, level: usize) -> bool {
        let var = format!("${level}");
        fn term_uses(u: &UTerm, var: &str) -> bool {
            u.free_names().iter().any(|n| **n == *var)
        }
        fn go(c: &Con, level: usize, var: &str) -> bool {
            match c {
                Con::Var(l) => *l == level,
                Con::Pi(a, b) | Con::Sigma(a, b) | Con::Lam(a, b) => {
                    go(a, level, var) || go(b, level, var)
                }
                Con::All(k, b) => kind_uses(k, level, var) || go(b, level, var),
                Con::App(f, u) => go(f, level, var) || term_uses(u, var),
                Con::Id(t, a, b) => go(t, level, var) || term_uses(a, var) || term_uses(b, var),
            }
        }
        fn kind_uses(k: &KindIr, level: usize, var: &str) -> bool {
            match k {
                KindIr::Star => false,
                KindIr::Pi(d, c) => go(d, level, var) || kind_uses(c, level, var),
            }
        }
        go(self, level, &var)
    }
}

/// Placeholder for the term variable bound at `level`.
pub fn level_var(level: usize) -> UTerm {
    UTerm::free(&format!("${level}"))
}

/// Translates normalized λP2 constructors and kinds into the IR.
pub struct Compiler<'g> {
    checker: Checker<'g>,
    eraser: Eraser<'g>,
}

impl<'g> Compiler<'g> {
    pub fn new(globals: &'g Globals) -> Self {
        Compiler {
            checker: Checker::new(globals, ExtensionFlags::ALL).with_fuel(u64::MAX / 4),
            eraser: Eraser::new(globals),
        }
    }

    pub fn normalize(&mut self, t: &Term) -> Result<Term, ModelError> {
        Ok(self.checker.normalize(t)?)
    }

    pub fn is_kind(&mut self, ctx: &Context, t: &Term) -> Result<bool, ModelError> {
        Ok(self.checker.is_kind(ctx, t)?)
    }

    /// Erases a term in `ctx`, mapping each variable to its level placeholder.
    pub fn erase(&mut self, ctx: &Context, t: &Term) -> Result<UTerm, ModelError> {
        let rho: Vec<Option<UTerm>> = (0..ctx.len()).map(|l| Some(level_var(l))).collect();
        Ok(self.eraser.erase(ctx, t, &rho)?)
    }

    /// Compiles a type or type family (normalized first).
    pub fn constructor(&mut self, ctx: &Context, t: &Term) -> Result<Con, ModelError> {
        let n = self.normalize(t)?;
        let mut ctx = ctx.clone();
        self.con(&mut ctx, &n)
    }

    /// Compiles a kind (normalized first).
    pub fn kind(&mut self, ctx: &Context, k: &Term) -> Result<KindIr, ModelError> {
        if !self.is_kind(ctx, k)? {
            return Err(ModelError::NotAKind(crate::syntax::print_in(
                k,
                &ctx.names(),
            )));
        }
        let n = self.normalize(k)?;
        let mut ctx = ctx.clone();
        self.kind_ir(&mut ctx, &n)
    }

    fn under<T>(
        &mut self,
        ctx: &mut Context,
        x: &crate::syntax::Name,
        ty: &Term,
        f: impl FnOnce(&mut Self, &mut Context) -> Result<T, ModelError>,
    ) -> Result<T, ModelError> {
        ctx.push(x.clone(), ty.clone());
        let r = f(self, ctx);
        ctx.pop();
        r
    }

    fn con(&mut self, ctx: &mut Context, t: &Term) -> Result<Con, ModelError> {
        match t {
            Term::Var(k) => Ok(Con::Var(ctx.len() - 1 - k)),
            Term::Pi(x, a, b) => {
                if self.is_kind(ctx, a)? {
                    let k = self.kind_ir(ctx, a)?;
                    let body = self.under(ctx, x, a, |s, c| s.con(c, b))?;
                    Ok(Con::All(Arc::new(k), Arc::new(body)))
                } else {
                    let d = self.con(ctx, a)?;
                    let body = self.under(ctx, x, a, |s, c| s.con(c, b))?;
                    Ok(Con::Pi(Arc::new(d), Arc::new(body)))
                }
            }
            Term::Sigma(x, a, b) => {
                let d = self.con(ctx, a)?;
                let body = self.under(ctx, x, a, |s, c| s.con(c, b))?;
                Ok(Con::Sigma(Arc::new(d), Arc::new(body)))
            }
            Term::Lam(x, a, b) => {
                let d = self.con(ctx, a)?;
                let body = self.under(ctx, x, a, |s, c| s.con(c, b))?;
                Ok(Con::Lam(Arc::new(d), Arc::new(body)))
            }
            Term::App(f, a) => {
                let f = self.con(ctx, f)?;
                let a = self.erase(ctx, a)?;
                Ok(Con::App(Arc::new(f), a))
            }
            Term::Id { ty, lhs, rhs } => {
                let ty = self.con(ctx, ty)?;
                let a = self.erase(ctx, lhs)?;
                let b = self.erase(ctx, rhs)?;
                Ok(Con::Id(Arc::new(ty), a, b))
            }
            Term::Const(n) => Err(ModelError::Unsupported(format!(
                "opaque constructor constant `{n}`"
            ))),
            other => Err(ModelError::NotAConstructor(crate::syntax::print_in(
                other,
                &ctx.names(),
            ))),
        }
    }

    fn kind_ir(&mut self, ctx: &mut Context, k: &Term) -> Result<KindIr, ModelError> {
        match k {
            Term::Sort(Sort::Star) => Ok(KindIr::Star),
            Term::Pi(x, a, b) => {
                let d = self.con(ctx, a)?;
                let cod = self.under(ctx, x, a, |s, c| s.kind_ir(c, b))?;
                Ok(KindIr::Pi(Arc::new(d), Arc::new(cod)))
            }
            other => Err(ModelError::NotAKind(crate::syntax::print_in(
                other,
                &ctx.names(),
            ))),
        }
    }
}

/// Name used for the `i`-th fresh observer of a kind.
pub fn observer(prefix: &str, i: usize) -> UTerm {
    UTerm::Free(name(&format!("#{prefix}{i}")))
}
