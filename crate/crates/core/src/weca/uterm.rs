use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::syntax::{name, Name};

/// Constants of the untyped signatures.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum UConst {
    J,
    Refl,
    Pair,
    Proj1,
    Proj2,
    /// Opaque constants: erased postulates and the absorbing constants of
    /// Λ(C).
    Named(Name),
}

impl UConst {
    pub fn label(&self) -> &str {
        match self {
            UConst::J => "J",
            UConst::Refl => "refl",
            UConst::Pair => "pair",
            UConst::Proj1 => "π1",
            UConst::Proj2 => "π2",
            UConst::Named(n) => n,
        }
    }
}

/// Untyped λ-terms over a constant signature. Bound variables are de Bruijn
/// indices; `Free` variables are named (they serve as observers and as the
/// values of context variables).
#[derive(Clone, Debug)]
pub enum UTerm {
    Var(usize),
    Free(Name),
    Lam(Name, Arc<UTerm>),
    App(Arc<UTerm>, Arc<UTerm>),
    Const(UConst),
}

impl PartialEq for UTerm {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (UTerm::Var(a), UTerm::Var(b)) => a == b,
            (UTerm::Free(a), UTerm::Free(b)) => a == b,
            (UTerm::Lam(_, a), UTerm::Lam(_, b)) => a == b,
            (UTerm::App(f, a), UTerm::App(g, b)) => f == g && a == b,
            (UTerm::Const(a), UTerm::Const(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for UTerm {}

impl std::hash::Hash for UTerm {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        match self {
            UTerm::Var(k) => (0u8, k).hash(state),
            UTerm::Free(n) => (1u8, n).hash(state),
            UTerm::Lam(_, b) => {
                2u8.hash(state);
                b.hash(state)
            }
            UTerm::App(f, a) => {
                3u8.hash(state);
                f.hash(state);
                a.hash(state)
            }
            UTerm::Const(c) => (4u8, c).hash(state),
        }
    }
}

impl UTerm {
    pub fn var(k: usize) -> UTerm {
        UTerm::Var(k)
    }

    pub fn free(n: &str) -> UTerm {
        UTerm::Free(name(n))
    }

    pub fn lam(x: &str, body: UTerm) -> UTerm {
        UTerm::Lam(name(x), Arc::new(body))
    }

    pub fn app(f: UTerm, a: UTerm) -> UTerm {
        UTerm::App(Arc::new(f), Arc::new(a))
    }

    pub fn apps(f: UTerm, args: impl IntoIterator<Item = UTerm>) -> UTerm {
        args.into_iter().fold(f, UTerm::app)
    }

    pub fn konst(c: UConst) -> UTerm {
        UTerm::Const(c)
    }

    pub fn refl() -> UTerm {
        UTerm::Const(UConst::Refl)
    }

    /// `K = λx y. x`, the erasure of `true`.
    pub fn k() -> UTerm {
        UTerm::lam("x", UTerm::lam("y", UTerm::Var(1)))
    }

    /// `K* = λx y. y`, the erasure of `false`.
    pub fn k_star() -> UTerm {
        UTerm::lam("x", UTerm::lam("y", UTerm::Var(0)))
    }

    /// `I = λx. x`.
    pub fn i() -> UTerm {
        UTerm::lam("x", UTerm::Var(0))
    }

    /// Head and arguments of an application spine.
    pub fn spine(&self) -> (&UTerm, Vec<&UTerm>) {
        let mut args = Vec::new();
        let mut head = self;
        while let UTerm::App(f, a) = head {
            args.push(a.as_ref());
            head = f.as_ref();
        }
        args.reverse();
        (head, args)
    }

    /// Size: variables, constants and abstractions count one; an
    /// application counts two (it is a binary node).
    pub fn size(&self) -> usize {
        match self {
            UTerm::Var(_) | UTerm::Free(_) | UTerm::Const(_) => 1,
            UTerm::Lam(_, b) => 1 + b.size(),
            UTerm::App(f, a) => 2 + f.size() + a.size(),
        }
    }

    pub fn shift(&self, d: isize, cutoff: usize) -> UTerm {
        match self {
            UTerm::Var(k) if *k >= cutoff => UTerm::Var((*k as isize + d) as usize),
            UTerm::Var(_) | UTerm::Free(_) | UTerm::Const(_) => self.clone(),
            UTerm::Lam(x, b) => UTerm::Lam(x.clone(), Arc::new(b.shift(d, cutoff + 1))),
            UTerm::App(f, a) => {
                UTerm::App(Arc::new(f.shift(d, cutoff)), Arc::new(a.shift(d, cutoff)))
            }
        }
    }

    /// β-instantiation of index 0 by `arg`.
    pub fn instantiate(&self, arg: &UTerm) -> UTerm {
        self.inst_at(0, arg)
    }

    fn inst_at(&self, depth: usize, arg: &UTerm) -> UTerm {
        match self {
            UTerm::Var(k) if *k == depth => arg.shift(depth as isize, 0),
            UTerm::Var(k) if *k > depth => UTerm::Var(k - 1),
            UTerm::Var(_) | UTerm::Free(_) | UTerm::Const(_) => self.clone(),
            UTerm::Lam(x, b) => UTerm::Lam(x.clone(), Arc::new(b.inst_at(depth + 1, arg))),
            UTerm::App(f, a) => UTerm::App(
                Arc::new(f.inst_at(depth, arg)),
                Arc::new(a.inst_at(depth, arg)),
            ),
        }
    }

    /// Replaces the free variable `x` by `s` (which must not contain loose
    /// bound indices).
    pub fn subst_free(&self, x: &str, s: &UTerm) -> UTerm {
        match self {
            UTerm::Free(y) if &**y == x => s.clone(),
            UTerm::Var(_) | UTerm::Free(_) | UTerm::Const(_) => self.clone(),
            UTerm::Lam(n, b) => UTerm::Lam(n.clone(), Arc::new(b.subst_free(x, s))),
            UTerm::App(f, a) => {
                UTerm::App(Arc::new(f.subst_free(x, s)), Arc::new(a.subst_free(x, s)))
            }
        }
    }

    /// Abstracts the free variable `x`: `λx. self`.
    pub fn abstract_free(&self, x: &str) -> UTerm {
        fn go(t: &UTerm, x: &str, depth: usize) -> UTerm {
            match t {
                UTerm::Free(y) if &**y == x => UTerm::Var(depth),
                UTerm::Var(_) | UTerm::Free(_) | UTerm::Const(_) => t.clone(),
                UTerm::Lam(n, b) => UTerm::Lam(n.clone(), Arc::new(go(b, x, depth + 1))),
                UTerm::App(f, a) => {
                    UTerm::App(Arc::new(go(f, x, depth)), Arc::new(go(a, x, depth)))
                }
            }
        }
        UTerm::Lam(name(x), Arc::new(go(&self.shift(1, 0), x, 0)))
    }

    pub fn has_loose(&self, k: usize) -> bool {
        match self {
            UTerm::Var(j) => *j == k,
            UTerm::Free(_) | UTerm::Const(_) => false,
            UTerm::Lam(_, b) => b.has_loose(k + 1),
            UTerm::App(f, a) => f.has_loose(k) || a.has_loose(k),
        }
    }

    /// No loose de Bruijn indices (free variables by name are allowed).
    pub fn is_locally_closed(&self) -> bool {
        fn go(t: &UTerm, depth: usize) -> bool {
            match t {
                UTerm::Var(k) => *k < depth,
                UTerm::Free(_) | UTerm::Const(_) => true,
                UTerm::Lam(_, b) => go(b, depth + 1),
                UTerm::App(f, a) => go(f, depth) && go(a, depth),
            }
        }
        go(self, 0)
    }

    pub fn free_names(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        fn go(t: &UTerm, out: &mut BTreeSet<Name>) {
            match t {
                UTerm::Free(n) => {
                    out.insert(n.clone());
                }
                UTerm::Var(_) | UTerm::Const(_) => {}
                UTerm::Lam(_, b) => go(b, out),
                UTerm::App(f, a) => {
                    go(f, out);
                    go(a, out)
                }
            }
        }
        go(self, &mut out);
        out
    }

    /// Closed: no loose indices and no free variables.
    pub fn is_closed(&self) -> bool {
        self.is_locally_closed() && self.free_names().is_empty()
    }

    pub fn constants(&self) -> BTreeSet<UConst> {
        let mut out = BTreeSet::new();
        fn go(t: &UTerm, out: &mut BTreeSet<UConst>) {
            match t {
                UTerm::Const(c) => {
                    out.insert(c.clone());
                }
                UTerm::Var(_) | UTerm::Free(_) => {}
                UTerm::Lam(_, b) => go(b, out),
                UTerm::App(f, a) => {
                    go(f, out);
                    go(a, out)
                }
            }
        }
        go(self, &mut out);
        out
    }
}

impl fmt::Display for UTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::print::print(self, false))
    }
}

impl serde::Serialize for UTerm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::print(self, false))
    }
}
