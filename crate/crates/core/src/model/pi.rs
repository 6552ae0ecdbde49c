use std::fmt;

use serde::Serialize;

use crate::syntax::{Context, Term};
use crate::typecheck::Globals;

use super::ir::{Compiler, Con, KindIr};
use super::ModelError;

/// Values of the proof-irrelevance model. A type denotes either the empty
/// set or the whole one-point carrier; a family over `σ` is the empty
/// function when `⟦σ⟧` is empty and otherwise a single value.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PiVal {
    Set(bool),
    Fun(Option<Box<PiVal>>),
}

impl PiVal {
    fn truth(&self) -> Result<bool, ModelError> {
        match self {
            PiVal::Set(b) => Ok(*b),
            PiVal::Fun(_) => Err(ModelError::NotAType("a family was used as a type".into())),
        }
    }
}

impl fmt::Display for PiVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PiVal::Set(false) => f.write_str("∅"),
            PiVal::Set(true) => f.write_str("{•}"),
            PiVal::Fun(None) => f.write_str("λ∅"),
            PiVal::Fun(Some(v)) => write!(f, "λ•.{v}"),
        }
    }
}

#[derive(Clone, Debug)]
enum Slot {
    Term,
    Con(PiVal),
}

/// Exact verdict of the proof-irrelevance model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PiVerdict {
    Inhabited,
    Empty,
}

impl fmt::Display for PiVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PiVerdict::Inhabited => "Inhabited",
            PiVerdict::Empty => "Empty",
        })
    }
}

fn eval(c: &Con, env: &mut Vec<Slot>) -> Result<PiVal, ModelError> {
    Ok(match c {
        Con::Var(l) => match env.get(*l) {
            Some(Slot::Con(v)) => v.clone(),
            _ => return Err(ModelError::NotAConstructor(format!("level {l}"))),
        },
        Con::Pi(d, b) => {
            if !eval(d, env)?.truth()? {
                PiVal::Set(true)
            } else {
                env.push(Slot::Term);
                let r = eval(b, env);
                env.pop();
                PiVal::Set(r?.truth()?)
            }
        }
        Con::All(k, b) => {
            let mut all = true;
            for v in kind_values_in(k, env)? {
                env.push(Slot::Con(v));
                let r = eval(b, env);
                env.pop();
                if !r?.truth()? {
                    all = false;
                    break;
                }
            }
            PiVal::Set(all)
        }
        Con::Sigma(d, b) => {
            if !eval(d, env)?.truth()? {
                PiVal::Set(false)
            } else {
                env.push(Slot::Term);
                let r = eval(b, env);
                env.pop();
                PiVal::Set(r?.truth()?)
            }
        }
        Con::Lam(d, b) => {
            if !eval(d, env)?.truth()? {
                PiVal::Fun(None)
            } else {
                env.push(Slot::Term);
                let r = eval(b, env);
                env.pop();
                PiVal::Fun(Some(Box::new(r?)))
            }
        }
        Con::App(f, _) => match eval(f, env)? {
            PiVal::Fun(Some(v)) => *v,
            PiVal::Fun(None) => {
                return Err(ModelError::NotAType(
                    "application of a family over an empty domain".into(),
                ))
            }
            PiVal::Set(_) => return Err(ModelError::NotAConstructor("applied a type".into())),
        },
        Con::Id(..) => PiVal::Set(true),
    })
}

fn kind_values_in(k: &KindIr, env: &mut Vec<Slot>) -> Result<Vec<PiVal>, ModelError> {
    match k {
        KindIr::Star => Ok(vec![PiVal::Set(false), PiVal::Set(true)]),
        KindIr::Pi(d, cod) => {
            if !eval(d, env)?.truth()? {
                return Ok(vec![PiVal::Fun(None)]);
            }
            env.push(Slot::Term);
            let vs = kind_values_in(cod, env);
            env.pop();
            Ok(vs?
                .into_iter()
                .map(|v| PiVal::Fun(Some(Box::new(v))))
                .collect())
        }
    }
}

enum Entry {
    Term(Con),
    Con(KindIr),
}

/// The proof-irrelevance model: every type denotes `∅` or `{•}`, so all
/// kind values are finite and evaluation is exact.
pub struct PiModel<'g> {
    compiler: Compiler<'g>,
}

impl<'g> PiModel<'g> {
    pub fn new(globals: &'g Globals) -> Self {
        PiModel {
            compiler: Compiler::new(globals),
        }
    }

    fn compile_context(&mut self, ctx: &Context) -> Result<Vec<Entry>, ModelError> {
        let mut prefix = Context::new();
        let mut out = Vec::new();
        for (x, ty) in ctx.entries() {
            if self.compiler.is_kind(&prefix, ty)? {
                out.push(Entry::Con(self.compiler.kind(&prefix, ty)?));
            } else {
                out.push(Entry::Term(self.compiler.constructor(&prefix, ty)?));
            }
            prefix.push(x.clone(), ty.clone());
        }
        Ok(out)
    }

    /// All elements of the interpretation of a closed kind.
    pub fn kind_values(&mut self, k: &Term) -> Result<Vec<PiVal>, ModelError> {
        let ctx = Context::new();
        if !self.compiler.is_kind(&ctx, k)? {
            return Err(ModelError::NotAKind(crate::syntax::print(k)));
        }
        let ir = self.compiler.kind(&ctx, k)?;
        kind_values_in(&ir, &mut Vec::new())
    }

    /// Interpretation of a closed type or type family.
    pub fn interp(&mut self, t: &Term) -> Result<PiVal, ModelError> {
        let ir = self.compiler.constructor(&Context::new(), t)?;
        eval(&ir, &mut Vec::new())
    }

    /// Decides `σ` over `Γ`: `Inhabited` iff `⟦σ⟧` is the one-point set
    /// under every valuation modelling `Γ`.
    pub fn decide(&mut self, ctx: &Context, ty: &Term) -> Result<PiVerdict, ModelError> {
        if self.compiler.is_kind(ctx, ty)? {
            return Err(ModelError::NotAType(crate::syntax::print_in(
                ty,
                &ctx.names(),
            )));
        }
        let entries = self.compile_context(ctx)?;
        let target = self.compiler.constructor(ctx, ty)?;
        let mut env = Vec::new();
        let ok = all_valuations(&entries, &mut env, &mut |env| eval(&target, env)?.truth())?;
        Ok(if ok {
            PiVerdict::Inhabited
        } else {
            PiVerdict::Empty
        })
    }
}

fn all_valuations(
    entries: &[Entry],
    env: &mut Vec<Slot>,
    k: &mut dyn FnMut(&mut Vec<Slot>) -> Result<bool, ModelError>,
) -> Result<bool, ModelError> {
    let i = env.len();
    let Some(e) = entries.get(i) else {
        return k(env);
    };
    match e {
        Entry::Term(ty) => {
            if !eval(ty, env)?.truth()? {
                // No term valuation models this declaration.
                return Ok(true);
            }
            env.push(Slot::Term);
            let r = all_valuations(entries, env, k);
            env.pop();
            r
        }
        Entry::Con(kind) => {
            for v in kind_values_in(kind, env)? {
                env.push(Slot::Con(v));
                let r = all_valuations(entries, env, k);
                env.pop();
                if !r? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

/// `pi_model_decide` for a type over a context.
pub fn pi_model_decide(
    globals: &Globals,
    ctx: &Context,
    ty: &Term,
) -> Result<PiVerdict, ModelError> {
    PiModel::new(globals).decide(ctx, ty)
}
