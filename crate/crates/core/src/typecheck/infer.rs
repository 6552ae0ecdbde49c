use std::sync::Arc;

use crate::syntax::{name, Context, Sort, Term};

use super::reduce::{convertible, normalize, whnf, Fuel};
use super::{show, ExtensionFlags, Globals, SortClass, TypeError};

/// A checking session: the signature, the enabled extensions and a fuel
/// budget for conversion.
pub struct Checker<'g> {
    pub globals: &'g Globals,
    pub flags: ExtensionFlags,
    pub fuel: Fuel,
}

impl<'g> Checker<'g> {
    pub fn new(globals: &'g Globals, flags: ExtensionFlags) -> Self {
        Checker {
            globals,
            flags,
            fuel: Fuel::default(),
        }
    }

    pub fn with_fuel(mut self, steps: u64) -> Self {
        self.fuel = Fuel::new(steps);
        self
    }

    pub fn whnf(&mut self, t: &Term) -> Result<Term, TypeError> {
        whnf(self.globals, t, &mut self.fuel)
    }

    pub fn normalize(&mut self, t: &Term) -> Result<Term, TypeError> {
        normalize(self.globals, t, &mut self.fuel)
    }

    pub fn convertible(&mut self, t: &Term, u: &Term) -> Result<bool, TypeError> {
        convertible(self.globals, t, u, &mut self.fuel)
    }

    fn require(&self, on: bool, what: &str) -> Result<(), TypeError> {
        if on {
            Ok(())
        } else {
            Err(TypeError::ExtensionDisabled(format!(
                "{what} requires the `{}` extension",
                if what.starts_with('Σ') || what.contains("pair") || what.contains("projection") {
                    "sigma"
                } else {
                    "id"
                }
            )))
        }
    }

    /// The sort classifying `t`, which must be a type or a kind.
    pub fn sort_of(&mut self, ctx: &Context, t: &Term) -> Result<Sort, TypeError> {
        let ty = self.infer(ctx, t)?;
        match self.whnf(&ty)? {
            Term::Sort(s) => Ok(s),
            other => Err(TypeError::NotWellTyped(format!(
                "`{}` is expected to be a type or a kind, but its classifier is `{}`",
                show(t, ctx),
                show(&other, ctx)
            ))),
        }
    }

    /// True if `a` (well-formed in `ctx`) is a kind, i.e. reduces to
    /// `Πx1:σ1 … Πxn:σn. *`.
    pub fn is_kind(&mut self, ctx: &Context, a: &Term) -> Result<bool, TypeError> {
        match self.whnf(a)? {
            Term::Sort(Sort::Star) => Ok(true),
            Term::Pi(x, dom, cod) => {
                let inner = ctx.extended(x, (*dom).clone());
                self.is_kind(&inner, &cod)
            }
            _ => Ok(false),
        }
    }

    pub fn infer(&mut self, ctx: &Context, t: &Term) -> Result<Term, TypeError> {
        match t {
            Term::Sort(Sort::Star) => Ok(Term::kind()),
            Term::Sort(Sort::Kind) => Err(TypeError::NotWellTyped("□ has no classifier".into())),
            Term::Var(k) => ctx
                .lookup(*k)
                .ok_or_else(|| TypeError::UnboundVariable(format!("#{k}"))),
            Term::Const(n) => self
                .globals
                .type_of(n, self.flags)
                .ok_or_else(|| TypeError::UnboundVariable(n.to_string())),
            Term::Pi(x, a, b) => {
                let s1 = self.sort_of(ctx, a)?;
                let inner = ctx.extended(x.clone(), (**a).clone());
                let s2 = self.sort_of(&inner, b)?;
                if s1 == Sort::Kind && s2 == Sort::Kind {
                    return Err(TypeError::ForbiddenPiFormation(format!(
                        "Π{}:{}. {}",
                        x,
                        show(a, ctx),
                        show(b, &inner)
                    )));
                }
                Ok(Term::Sort(s2))
            }
            Term::Lam(x, a, b) => {
                self.sort_of(ctx, a)?;
                let inner = ctx.extended(x.clone(), (**a).clone());
                let bt = self.infer(&inner, b)?;
                let pi = Term::Pi(x.clone(), a.clone(), Arc::new(bt));
                // the product must itself be well-sorted
                self.sort_of(ctx, &pi)?;
                Ok(pi)
            }
            Term::App(f, a) => {
                let ft = self.infer(ctx, f)?;
                match self.whnf(&ft)? {
                    Term::Pi(_, dom, cod) => {
                        self.check_argument(ctx, a, &dom)?;
                        Ok(cod.instantiate(a))
                    }
                    other => Err(TypeError::NotAFunction {
                        term: show(f, ctx),
                        ty: show(&other, ctx),
                    }),
                }
            }
            Term::Sigma(x, a, b) => {
                self.require(self.flags.sigma, "Σ-types")?;
                self.expect_type(ctx, a)?;
                let inner = ctx.extended(x.clone(), (**a).clone());
                self.expect_type(&inner, b)?;
                Ok(Term::star())
            }
            Term::Pair { fst, snd, ann } => {
                self.require(self.flags.sigma, "Σ pairs")?;
                match ann {
                    Some(ann) => {
                        self.expect_type(ctx, ann)?;
                        self.check_pair(ctx, fst, snd, ann)?;
                        Ok((**ann).clone())
                    }
                    None => Err(TypeError::CannotInferPair),
                }
            }
            Term::Proj1(p) | Term::Proj2(p) => {
                self.require(self.flags.sigma, "Σ projections")?;
                let pt = self.infer(ctx, p)?;
                match self.whnf(&pt)? {
                    Term::Sigma(_, a, b) => Ok(if matches!(t, Term::Proj1(_)) {
                        (*a).clone()
                    } else {
                        b.instantiate(&Term::Proj1(p.clone()))
                    }),
                    other => Err(TypeError::NotWellTyped(format!(
                        "projection from `{}` of non-Σ type `{}`",
                        show(p, ctx),
                        show(&other, ctx)
                    ))),
                }
            }
            Term::Id { ty, lhs, rhs } => {
                self.require(self.flags.identity, "identity types")?;
                self.expect_type(ctx, ty)?;
                self.check(ctx, lhs, ty)?;
                self.check(ctx, rhs, ty)?;
                Ok(Term::star())
            }
            Term::Refl => {
                self.require(self.flags.identity, "refl")?;
                Err(TypeError::CannotInferRefl)
            }
            Term::J(j) => {
                self.require(self.flags.identity, "J")?;
                self.expect_type(ctx, &j.dom)?;
                let [x, y, p] = j.names.clone();
                let mctx = ctx
                    .extended(x, j.dom.clone())
                    .extended(y, j.dom.shift(1, 0))
                    .extended(p, Term::id(j.dom.shift(2, 0), Term::Var(1), Term::Var(0)));
                self.expect_type(&mctx, &j.motive)?;
                // c : Πz:σ. τ[x, y := z, p := refl]
                let diag = j.motive.shift(1, 3).instantiate_many(&[
                    Term::Var(0),
                    Term::Var(0),
                    Term::Refl,
                ]);
                let base_ty = Term::Pi(name("z"), Arc::new(j.dom.clone()), Arc::new(diag));
                self.check(ctx, &j.base, &base_ty)?;
                self.check(ctx, &j.lhs, &j.dom)?;
                self.check(ctx, &j.rhs, &j.dom)?;
                let id = Term::id(j.dom.clone(), j.lhs.clone(), j.rhs.clone());
                self.check(ctx, &j.proof, &id)?;
                Ok(j.motive
                    .instantiate_many(&[j.lhs.clone(), j.rhs.clone(), j.proof.clone()]))
            }
        }
    }

    fn expect_type(&mut self, ctx: &Context, t: &Term) -> Result<(), TypeError> {
        match self.sort_of(ctx, t)? {
            Sort::Star => Ok(()),
            Sort::Kind => Err(TypeError::NotWellTyped(format!(
                "`{}` is a kind where a type is required",
                show(t, ctx)
            ))),
        }
    }

    fn check_pair(
        &mut self,
        ctx: &Context,
        fst: &Term,
        snd: &Term,
        sigma: &Term,
    ) -> Result<(), TypeError> {
        match self.whnf(sigma)? {
            Term::Sigma(_, a, b) => {
                self.check(ctx, fst, &a)?;
                self.check(ctx, snd, &b.instantiate(fst))
            }
            other => Err(TypeError::NotWellTyped(format!(
                "a pair cannot have the non-Σ type `{}`",
                show(&other, ctx)
            ))),
        }
    }

    /// Argument checking for application: mismatches are reported as
    /// `DomainMismatch`.
    fn check_argument(&mut self, ctx: &Context, a: &Term, dom: &Term) -> Result<(), TypeError> {
        if matches!(a, Term::Refl | Term::Pair { ann: None, .. }) {
            return self.check(ctx, a, dom);
        }
        let at = self.infer(ctx, a)?;
        if self.convertible(&at, dom)? {
            Ok(())
        } else {
            Err(TypeError::DomainMismatch {
                arg: show(a, ctx),
                expected: self.shown_normal(dom, ctx),
                found: self.shown_normal(&at, ctx),
            })
        }
    }

    fn shown_normal(&mut self, t: &Term, ctx: &Context) -> String {
        let mut fuel = Fuel::default();
        match normalize(self.globals, t, &mut fuel) {
            Ok(n) => show(&n, ctx),
            Err(_) => show(t, ctx),
        }
    }

    pub fn check(&mut self, ctx: &Context, t: &Term, ty: &Term) -> Result<(), TypeError> {
        match t {
            Term::Lam(x, a, b) => {
                if let Term::Pi(_, dom, cod) = self.whnf(ty)? {
                    self.sort_of(ctx, a)?;
                    if !self.convertible(a, &dom)? {
                        return Err(self.mismatch(
                            ctx,
                            t,
                            ty,
                            &Term::Pi(x.clone(), a.clone(), Arc::new(Term::star())),
                        ));
                    }
                    let inner = ctx.extended(x.clone(), (**a).clone());
                    return self.check(&inner, b, &cod);
                }
            }
            Term::Pair {
                fst,
                snd,
                ann: None,
            } => {
                self.require(self.flags.sigma, "Σ pairs")?;
                return self.check_pair(ctx, fst, snd, ty);
            }
            Term::Refl => {
                self.require(self.flags.identity, "refl")?;
                return match self.whnf(ty)? {
                    Term::Id { ty: s, lhs, rhs } => {
                        if self.convertible(&lhs, &rhs)? {
                            Ok(())
                        } else {
                            let found = Term::Id {
                                ty: s,
                                lhs: lhs.clone(),
                                rhs: lhs,
                            };
                            Err(self.mismatch(ctx, t, ty, &found))
                        }
                    }
                    other => Err(TypeError::NotWellTyped(format!(
                        "refl cannot have the non-identity type `{}`",
                        show(&other, ctx)
                    ))),
                };
            }
            _ => {}
        }
        let found = self.infer(ctx, t)?;
        if self.convertible(&found, ty)? {
            Ok(())
        } else {
            Err(self.mismatch(ctx, t, ty, &found))
        }
    }

    fn mismatch(&mut self, ctx: &Context, t: &Term, expected: &Term, found: &Term) -> TypeError {
        TypeError::ConversionFailure {
            term: show(t, ctx),
            expected: self.shown_normal(expected, ctx),
            found: self.shown_normal(found, ctx),
        }
    }

    pub fn wf_context(&mut self, ctx: &Context) -> Result<(), TypeError> {
        let mut prefix = Context::new();
        for (x, ty) in ctx.entries() {
            if prefix.names().iter().any(|n| n == x) {
                return Err(TypeError::DuplicateVariable(x.to_string()));
            }
            match self.sort_of(&prefix, ty) {
                Ok(_) => {}
                Err(e @ TypeError::FuelExhausted(_)) => return Err(e),
                Err(e) => {
                    return Err(TypeError::IllFormedClassifier {
                        var: x.to_string(),
                        reason: e.to_string(),
                    })
                }
            }
            prefix.push(x.clone(), ty.clone());
        }
        Ok(())
    }

    pub fn classify(&mut self, ctx: &Context, t: &Term) -> Result<SortClass, TypeError> {
        if *t == Term::kind() {
            return Ok(SortClass::KindSort);
        }
        let ty = self
            .infer(ctx, t)
            .map_err(|e| TypeError::NotWellTyped(e.to_string()))?;
        if self.whnf(&ty)? == Term::kind() {
            return Ok(SortClass::KindExpr);
        }
        Ok(match self.sort_of(ctx, &ty)? {
            Sort::Kind => SortClass::ConstructorExpr,
            Sort::Star => SortClass::TermExpr,
        })
    }
}

pub fn infer(
    g: &Globals,
    ctx: &Context,
    t: &Term,
    flags: ExtensionFlags,
) -> Result<Term, TypeError> {
    Checker::new(g, flags).infer(ctx, t)
}

pub fn check(
    g: &Globals,
    ctx: &Context,
    t: &Term,
    ty: &Term,
    flags: ExtensionFlags,
) -> Result<(), TypeError> {
    Checker::new(g, flags).check(ctx, t, ty)
}

pub fn classify(
    g: &Globals,
    ctx: &Context,
    t: &Term,
    flags: ExtensionFlags,
) -> Result<SortClass, TypeError> {
    Checker::new(g, flags).classify(ctx, t)
}

pub fn wf_context(g: &Globals, ctx: &Context, flags: ExtensionFlags) -> Result<(), TypeError> {
    Checker::new(g, flags).wf_context(ctx)
}

pub fn is_kind(g: &Globals, ctx: &Context, a: &Term) -> Result<bool, TypeError> {
    Checker::new(g, ExtensionFlags::ALL).is_kind(ctx, a)
}
