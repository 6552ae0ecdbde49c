use std::collections::HashMap;

use thiserror::Error;

use crate::syntax::{Context, Name, Term};
use crate::typecheck::{Checker, ExtensionFlags, Globals, TypeError};

use super::{UConst, UTerm};

#[derive(Clone, Debug, Error, PartialEq)]
pub enum EraseError {
    #[error("no value assigned to term variable `{0}`")]
    UnassignedVariable(Name),
    #[error("`{0}` is not a term")]
    NotATerm(String),
    #[error(transparent)]
    Type(#[from] TypeError),
}

#[derive(Clone, Debug)]
enum Slot {
    /// A constructor variable; it has no computational content.
    Dropped,
    /// Bound by an erased abstraction at this nesting level.
    Bound(usize),
    /// A value supplied by the valuation.
    Value(UTerm),
}

/// Erasure of λP2 terms into the untyped calculus. Type abstractions and
/// applications to constructors are dropped, term abstractions are kept,
/// and the extension formers become applications of the untyped constants.
pub struct Eraser<'g> {
    checker: Checker<'g>,
    cache: HashMap<Name, UTerm>,
}

impl<'g> Eraser<'g> {
    pub fn new(globals: &'g Globals) -> Self {
        Eraser {
            checker: Checker::new(globals, ExtensionFlags::ALL).with_fuel(u64::MAX / 4),
            cache: HashMap::new(),
        }
    }

    /// Erases a closed term.
    pub fn erase_closed(&mut self, t: &Term) -> Result<UTerm, EraseError> {
        self.erase(&Context::new(), t, &[])
    }

    /// Erases `t` in `ctx`. `rho[i]` is the value of the `i`-th declared
    /// variable (outermost first); it is only consulted for term variables
    /// that occur in computationally relevant positions.
    pub fn erase(
        &mut self,
        ctx: &Context,
        t: &Term,
        rho: &[Option<UTerm>],
    ) -> Result<UTerm, EraseError> {
        let mut slots = Vec::with_capacity(ctx.len());
        let mut prefix = Context::new();
        for (i, (x, ty)) in ctx.entries().iter().enumerate() {
            let slot = if self.checker.is_kind(&prefix, ty)? {
                Slot::Dropped
            } else {
                match rho.get(i).cloned().flatten() {
                    Some(v) if v.is_locally_closed() => Slot::Value(v),
                    Some(_) => return Err(EraseError::NotATerm(format!("valuation of `{x}`"))),
                    None => Slot::Bound(usize::MAX),
                }
            };
            slots.push((slot, x.clone()));
            prefix.push(x.clone(), ty.clone());
        }
        let mut st = State {
            ctx: ctx.clone(),
            slots,
            depth: 0,
        };
        self.go(&mut st, t)
    }

    /// Erases `t` with every term variable of `ctx` mapped to a free
    /// variable of the same name.
    pub fn erase_open(&mut self, ctx: &Context, t: &Term) -> Result<UTerm, EraseError> {
        let rho = default_valuation(ctx);
        self.erase(ctx, t, &rho)
    }

    pub fn erase_constant(&mut self, n: &Name) -> Result<UTerm, EraseError> {
        if let Some(u) = self.cache.get(n) {
            return Ok(u.clone());
        }
        let g = self.checker.globals;
        let u = match g.body_of(n) {
            Some(body) => {
                let body = body.clone();
                self.erase_closed(&body)?
            }
            None => UTerm::Const(UConst::Named(n.clone())),
        };
        self.cache.insert(n.clone(), u.clone());
        Ok(u)
    }

    fn go(&mut self, st: &mut State, t: &Term) -> Result<UTerm, EraseError> {
        match t {
            Term::Var(k) => {
                let i = st
                    .slots
                    .len()
                    .checked_sub(k + 1)
                    .ok_or_else(|| EraseError::NotATerm(format!("#{k}")))?;
                let (slot, x) = &st.slots[i];
                match slot {
                    Slot::Bound(usize::MAX) => Err(EraseError::UnassignedVariable(x.clone())),
                    Slot::Bound(level) => Ok(UTerm::Var(st.depth - 1 - level)),
                    Slot::Value(v) => Ok(v.clone()),
                    Slot::Dropped => Err(EraseError::NotATerm(x.to_string())),
                }
            }
            Term::Const(n) => self.erase_constant(n),
            Term::Lam(x, dom, body) => {
                if self.checker.is_kind(&st.ctx, dom)? {
                    st.enter(x, dom, Slot::Dropped);
                    let r = self.go(st, body);
                    st.leave();
                    r
                } else {
                    let level = st.depth;
                    st.enter(x, dom, Slot::Bound(level));
                    st.depth += 1;
                    let r = self.go(st, body);
                    st.depth -= 1;
                    st.leave();
                    Ok(UTerm::Lam(x.clone(), std::sync::Arc::new(r?)))
                }
            }
            Term::App(f, a) => {
                let fty = self.checker.infer(&st.ctx, f)?;
                let drop_arg = match self.checker.whnf(&fty)? {
                    Term::Pi(_, dom, _) => self.checker.is_kind(&st.ctx, &dom)?,
                    other => {
                        return Err(TypeError::NotAFunction {
                            term: crate::typecheck::show(f, &st.ctx),
                            ty: crate::typecheck::show(&other, &st.ctx),
                        }
                        .into())
                    }
                };
                let uf = self.go(st, f)?;
                if drop_arg {
                    Ok(uf)
                } else {
                    Ok(UTerm::app(uf, self.go(st, a)?))
                }
            }
            Term::Pair { fst, snd, .. } => {
                let a = self.go(st, fst)?;
                let b = self.go(st, snd)?;
                Ok(UTerm::apps(UTerm::Const(UConst::Pair), [a, b]))
            }
            Term::Proj1(p) => Ok(UTerm::app(UTerm::Const(UConst::Proj1), self.go(st, p)?)),
            Term::Proj2(p) => Ok(UTerm::app(UTerm::Const(UConst::Proj2), self.go(st, p)?)),
            Term::Refl => Ok(UTerm::refl()),
            Term::J(j) => {
                let parts = [&j.base, &j.lhs, &j.rhs, &j.proof];
                let mut args = Vec::with_capacity(4);
                for p in parts {
                    args.push(self.go(st, p)?);
                }
                Ok(UTerm::apps(UTerm::Const(UConst::J), args))
            }
            Term::Sort(_) | Term::Pi(..) | Term::Sigma(..) | Term::Id { .. } => {
                Err(EraseError::NotATerm(crate::typecheck::show(t, &st.ctx)))
            }
        }
    }
}

struct State {
    ctx: Context,
    slots: Vec<(Slot, Name)>,
    depth: usize,
}

impl State {
    fn enter(&mut self, x: &Name, dom: &Term, slot: Slot) {
        self.ctx.push(x.clone(), dom.clone());
        self.slots.push((slot, x.clone()));
    }

    fn leave(&mut self) {
        self.ctx.pop();
        self.slots.pop();
    }
}

/// Maps each variable of `ctx` to a free variable of the same name.
pub fn default_valuation(ctx: &Context) -> Vec<Option<UTerm>> {
    ctx.entries()
        .iter()
        .map(|(x, _)| Some(UTerm::Free(x.clone())))
        .collect()
}

/// Erases a closed term over `globals`.
pub fn erase(globals: &Globals, t: &Term) -> Result<UTerm, EraseError> {
    Eraser::new(globals).erase_closed(t)
}
