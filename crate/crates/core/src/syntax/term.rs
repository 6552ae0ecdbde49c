use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

/// Variable and constant names. Binder names are only hints for printing.
pub type Name = Arc<str>;

pub fn name(s: &str) -> Name {
    Arc::from(s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    Star,
    Kind,
}

/// Pseudo-terms of λP2 plus the Σ/identity extension formers.
///
/// Bound variables are de Bruijn indices; binders keep their surface name as
/// a hint. `==` ignores the hints, so it decides α-equivalence.
#[derive(Clone, Debug)]
pub enum Term {
    Sort(Sort),
    Var(usize),
    /// Global definitions and postulates, resolved by name.
    Const(Name),
    Pi(Name, Arc<Term>, Arc<Term>),
    Lam(Name, Arc<Term>, Arc<Term>),
    App(Arc<Term>, Arc<Term>),
    Sigma(Name, Arc<Term>, Arc<Term>),
    Pair {
        fst: Arc<Term>,
        snd: Arc<Term>,
        ann: Option<Arc<Term>>,
    },
    Proj1(Arc<Term>),
    Proj2(Arc<Term>),
    Id {
        ty: Arc<Term>,
        lhs: Arc<Term>,
        rhs: Arc<Term>,
    },
    Refl,
    J(Arc<JElim>),
}

/// `J[x y p : dom. motive](base, lhs, rhs, proof)`; the motive lives under
/// the three binders `x:dom, y:dom, p:Id(dom, x, y)`.
#[derive(Clone, Debug)]
pub struct JElim {
    pub names: [Name; 3],
    pub dom: Term,
    pub motive: Term,
    pub base: Term,
    pub lhs: Term,
    pub rhs: Term,
    pub proof: Term,
}

impl PartialEq for JElim {
    fn eq(&self, other: &Self) -> bool {
        self.dom == other.dom
            && self.motive == other.motive
            && self.base == other.base
            && self.lhs == other.lhs
            && self.rhs == other.rhs
            && self.proof == other.proof
    }
}

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        use Term::*;
        match (self, other) {
            (Sort(a), Sort(b)) => a == b,
            (Var(a), Var(b)) => a == b,
            (Const(a), Const(b)) => a == b,
            (Pi(_, a1, b1), Pi(_, a2, b2))
            | (Lam(_, a1, b1), Lam(_, a2, b2))
            | (Sigma(_, a1, b1), Sigma(_, a2, b2)) => a1 == a2 && b1 == b2,
            (App(f1, a1), App(f2, a2)) => f1 == f2 && a1 == a2,
            (
                Pair {
                    fst: a1,
                    snd: b1,
                    ann: t1,
                },
                Pair {
                    fst: a2,
                    snd: b2,
                    ann: t2,
                },
            ) => a1 == a2 && b1 == b2 && t1 == t2,
            (Proj1(a), Proj1(b)) | (Proj2(a), Proj2(b)) => a == b,
            (
                Id {
                    ty: t1,
                    lhs: a1,
                    rhs: b1,
                },
                Id {
                    ty: t2,
                    lhs: a2,
                    rhs: b2,
                },
            ) => t1 == t2 && a1 == a2 && b1 == b2,
            (Refl, Refl) => true,
            (J(a), J(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Term {}

impl Term {
    pub fn star() -> Term {
        Term::Sort(Sort::Star)
    }

    pub fn kind() -> Term {
        Term::Sort(Sort::Kind)
    }

    pub fn constant(n: &str) -> Term {
        Term::Const(name(n))
    }

    pub fn pi(x: &str, dom: Term, cod: Term) -> Term {
        Term::Pi(name(x), Arc::new(dom), Arc::new(cod))
    }

    /// Non-dependent arrow; `cod` is given in the outer context and shifted.
    pub fn arrow(dom: Term, cod: Term) -> Term {
        Term::Pi(name("_"), Arc::new(dom), Arc::new(cod.shift(1, 0)))
    }

    pub fn lam(x: &str, dom: Term, body: Term) -> Term {
        Term::Lam(name(x), Arc::new(dom), Arc::new(body))
    }

    pub fn sigma(x: &str, dom: Term, cod: Term) -> Term {
        Term::Sigma(name(x), Arc::new(dom), Arc::new(cod))
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Arc::new(f), Arc::new(a))
    }

    pub fn apps(f: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(f, Term::app)
    }

    pub fn id(ty: Term, lhs: Term, rhs: Term) -> Term {
        Term::Id {
            ty: Arc::new(ty),
            lhs: Arc::new(lhs),
            rhs: Arc::new(rhs),
        }
    }

    pub fn pair(fst: Term, snd: Term, ann: Option<Term>) -> Term {
        Term::Pair {
            fst: Arc::new(fst),
            snd: Arc::new(snd),
            ann: ann.map(Arc::new),
        }
    }

    /// Head and arguments of an application spine.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut head = self;
        while let Term::App(f, a) = head {
            args.push(a.as_ref());
            head = f.as_ref();
        }
        args.reverse();
        (head, args)
    }

    pub fn uses_extensions(&self) -> bool {
        let mut found = false;
        self.visit(&mut |t| {
            if matches!(
                t,
                Term::Sigma(..)
                    | Term::Pair { .. }
                    | Term::Proj1(_)
                    | Term::Proj2(_)
                    | Term::Id { .. }
                    | Term::Refl
                    | Term::J(_)
            ) {
                found = true;
            }
        });
        found
    }

    /// Pre-order traversal of every subterm.
    pub fn visit(&self, f: &mut impl FnMut(&Term)) {
        f(self);
        match self {
            Term::Sort(_) | Term::Var(_) | Term::Const(_) | Term::Refl => {}
            Term::Pi(_, a, b) | Term::Lam(_, a, b) | Term::Sigma(_, a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Term::App(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Term::Pair { fst, snd, ann } => {
                fst.visit(f);
                snd.visit(f);
                if let Some(t) = ann {
                    t.visit(f);
                }
            }
            Term::Proj1(t) | Term::Proj2(t) => t.visit(f),
            Term::Id { ty, lhs, rhs } => {
                ty.visit(f);
                lhs.visit(f);
                rhs.visit(f);
            }
            Term::J(j) => {
                j.dom.visit(f);
                j.motive.visit(f);
                j.base.visit(f);
                j.lhs.visit(f);
                j.rhs.visit(f);
                j.proof.visit(f);
            }
        }
    }

    /// Names of all global constants mentioned.
    pub fn constants(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.visit(&mut |t| {
            if let Term::Const(n) = t {
                out.insert(n.clone());
            }
        });
        out
    }

    /// Generic structural map over variables: `f(depth, index)` rewrites a
    /// variable occurring under `depth` extra binders.
    fn map_vars(&self, depth: usize, f: &impl Fn(usize, usize) -> Term) -> Term {
        let go = |t: &Arc<Term>, d: usize| Arc::new(t.map_vars(d, f));
        match self {
            Term::Var(k) => f(depth, *k),
            Term::Sort(_) | Term::Const(_) | Term::Refl => self.clone(),
            Term::Pi(x, a, b) => Term::Pi(x.clone(), go(a, depth), go(b, depth + 1)),
            Term::Lam(x, a, b) => Term::Lam(x.clone(), go(a, depth), go(b, depth + 1)),
            Term::Sigma(x, a, b) => Term::Sigma(x.clone(), go(a, depth), go(b, depth + 1)),
            Term::App(a, b) => Term::App(go(a, depth), go(b, depth)),
            Term::Pair { fst, snd, ann } => Term::Pair {
                fst: go(fst, depth),
                snd: go(snd, depth),
                ann: ann.as_ref().map(|t| go(t, depth)),
            },
            Term::Proj1(t) => Term::Proj1(go(t, depth)),
            Term::Proj2(t) => Term::Proj2(go(t, depth)),
            Term::Id { ty, lhs, rhs } => Term::Id {
                ty: go(ty, depth),
                lhs: go(lhs, depth),
                rhs: go(rhs, depth),
            },
            Term::J(j) => Term::J(Arc::new(JElim {
                names: j.names.clone(),
                dom: j.dom.map_vars(depth, f),
                motive: j.motive.map_vars(depth + 3, f),
                base: j.base.map_vars(depth, f),
                lhs: j.lhs.map_vars(depth, f),
                rhs: j.rhs.map_vars(depth, f),
                proof: j.proof.map_vars(depth, f),
            })),
        }
    }

    /// Adds `d` to every variable at or above `cutoff`.
    pub fn shift(&self, d: isize, cutoff: usize) -> Term {
        if d == 0 {
            return self.clone();
        }
        self.map_vars(0, &|depth, k| {
            if k >= cutoff + depth {
                Term::Var((k as isize + d) as usize)
            } else {
                Term::Var(k)
            }
        })
    }

    /// β-instantiation: replaces index 0 by `arg` and lowers the rest.
    pub fn instantiate(&self, arg: &Term) -> Term {
        self.map_vars(0, &|depth, k| {
            if k == depth {
                arg.shift(depth as isize, 0)
            } else if k > depth {
                Term::Var(k - 1)
            } else {
                Term::Var(k)
            }
        })
    }

    /// Instantiates several binders at once; `args[0]` replaces the
    /// outermost of the `args.len()` innermost indices.
    pub fn instantiate_many(&self, args: &[Term]) -> Term {
        let n = args.len();
        self.map_vars(0, &|depth, k| {
            if k >= depth && k < depth + n {
                args[n - 1 - (k - depth)].shift(depth as isize, 0)
            } else if k >= depth + n {
                Term::Var(k - n)
            } else {
                Term::Var(k)
            }
        })
    }

    /// Capture-avoiding substitution of the context variable `v` by `s`
    /// (both interpreted in the same context). The context is unchanged,
    /// so `v` simply no longer occurs.
    pub fn subst(&self, v: usize, s: &Term) -> Term {
        self.map_vars(0, &|depth, k| {
            if k == v + depth {
                s.shift(depth as isize, 0)
            } else {
                Term::Var(k)
            }
        })
    }

    /// Free de Bruijn indices, relative to the term's own context.
    pub fn free_vars(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        self.collect_free(0, &mut out);
        out
    }

    fn collect_free(&self, depth: usize, out: &mut BTreeSet<usize>) {
        match self {
            Term::Var(k) => {
                if *k >= depth {
                    out.insert(k - depth);
                }
            }
            Term::Sort(_) | Term::Const(_) | Term::Refl => {}
            Term::Pi(_, a, b) | Term::Lam(_, a, b) | Term::Sigma(_, a, b) => {
                a.collect_free(depth, out);
                b.collect_free(depth + 1, out);
            }
            Term::App(a, b) => {
                a.collect_free(depth, out);
                b.collect_free(depth, out);
            }
            Term::Pair { fst, snd, ann } => {
                fst.collect_free(depth, out);
                snd.collect_free(depth, out);
                if let Some(t) = ann {
                    t.collect_free(depth, out);
                }
            }
            Term::Proj1(t) | Term::Proj2(t) => t.collect_free(depth, out),
            Term::Id { ty, lhs, rhs } => {
                ty.collect_free(depth, out);
                lhs.collect_free(depth, out);
                rhs.collect_free(depth, out);
            }
            Term::J(j) => {
                j.dom.collect_free(depth, out);
                j.motive.collect_free(depth + 3, out);
                j.base.collect_free(depth, out);
                j.lhs.collect_free(depth, out);
                j.rhs.collect_free(depth, out);
                j.proof.collect_free(depth, out);
            }
        }
    }

    pub fn has_free(&self, v: usize) -> bool {
        self.free_vars().contains(&v)
    }

    /// Number of syntax nodes.
    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::print::print(self))
    }
}
