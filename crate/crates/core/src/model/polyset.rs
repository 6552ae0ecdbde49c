use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::weca::{self, Answer, UTerm, WecaConfig};

use super::ir::{Con, KindIr};

/// The closed library of predicate families usable as witnesses. A
/// predicate family of arity `n` ignores its first `n - 1` arguments and
/// decides on the last one.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "PascalCase")]
pub enum Pred {
    /// The full carrier at `refl`, empty elsewhere.
    IsRefl,
    /// The full carrier at Church numerals `λx f. fⁿ x`, empty elsewhere.
    IsChurchNumeral,
    /// The same finite set at every argument.
    FiniteSet {
        terms: Vec<String>,
    },
    FullSet,
    EmptySet,
    /// The full carrier at arguments equal to the given term.
    EqualsNormalFormOf {
        term: String,
    },
    /// The full carrier at arguments with a head normal form.
    #[serde(rename = "HasHNF")]
    HasHnf {
        fuel: u64,
    },
}

impl Pred {
    pub fn label(&self) -> String {
        match self {
            Pred::IsRefl => "IsRefl".into(),
            Pred::IsChurchNumeral => "IsChurchNumeral".into(),
            Pred::FiniteSet { terms } => format!("FiniteSet({})", terms.join(", ")),
            Pred::FullSet => "FullSet".into(),
            Pred::EmptySet => "EmptySet".into(),
            Pred::EqualsNormalFormOf { term } => format!("EqualsNormalFormOf({term})"),
            Pred::HasHnf { fuel } => format!("HasHNF({fuel})"),
        }
    }
}

/// Recognizes `λx f. fⁿ x` and returns `n`.
pub fn church_value(t: &UTerm) -> Option<usize> {
    let UTerm::Lam(_, b) = t else { return None };
    let UTerm::Lam(_, b) = b.as_ref() else {
        return None;
    };
    let mut n = 0;
    let mut cur = b.as_ref();
    loop {
        match cur {
            UTerm::Var(1) => return Some(n),
            UTerm::App(f, a) if **f == UTerm::Var(0) => {
                n += 1;
                cur = a;
            }
            _ => return None,
        }
    }
}

/// A symbolic polyset. Membership is decided by [`super::Model::member`].
#[derive(Clone, Debug)]
pub enum Polyset {
    Empty,
    Full,
    /// Finitely many classes, given by normal forms.
    Finite(Vec<UTerm>),
    /// The least set containing `gens` and closed under application of the
    /// observer variables `funs`.
    Closure {
        gens: Vec<UTerm>,
        funs: Vec<UTerm>,
    },
    /// Terms with a head normal form.
    Hnf,
    /// `Π_{t∈X} F(t)`.
    Prod(Arc<Polyset>, Fam),
    /// `Σ_{t∈X} F(t)`.
    Sum(Arc<Polyset>, Fam),
    /// `∩_{a∈𝒱(A)} ⟦τ⟧`.
    Inter(Arc<KindIr>, Arc<Con>, Env),
    /// The interpretation of `a = b` at the given type.
    Id(Arc<Polyset>, UTerm, UTerm),
    /// A generic polyset (or generic family applied to arguments), used by
    /// the schematic membership prover.
    Abstract(usize, Vec<UTerm>),
    /// A value the evaluator could not determine.
    Undetermined(String),
}

/// Semantic values of constructors: polysets and families.
#[derive(Clone, Debug)]
pub enum Val {
    Set(Polyset),
    Fam(Fam),
}

#[derive(Clone, Debug)]
pub enum Fam {
    Const(Arc<Val>),
    /// `λt∈X. ⟦body⟧` with the argument at level `env.len()`.
    Lam(Arc<Polyset>, Arc<Con>, Env),
    Pred {
        pred: Pred,
        arity: usize,
        args: Vec<UTerm>,
    },
    Abstract {
        id: usize,
        arity: usize,
        args: Vec<UTerm>,
    },
}

#[derive(Clone, Debug)]
pub enum Slot {
    Term(UTerm),
    Con(Val),
}

/// Evaluation environment, indexed by level.
#[derive(Clone, Debug, Default)]
pub struct Env(pub Arc<Vec<Slot>>);

impl Env {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&self, s: Slot) -> Env {
        let mut v = (*self.0).clone();
        v.push(s);
        Env(Arc::new(v))
    }

    /// Replaces the level placeholders of `u` by the term values of the
    /// environment.
    pub fn close(&self, u: &UTerm) -> UTerm {
        let mut out = u.clone();
        for n in u.free_names() {
            if let Some(l) = n.strip_prefix('$').and_then(|s| s.parse::<usize>().ok()) {
                if let Some(Slot::Term(v)) = self.0.get(l) {
                    out = out.subst_free(&n, v);
                }
            }
        }
        out
    }
}

impl Polyset {
    pub fn is_exactly_empty(&self) -> bool {
        matches!(self, Polyset::Empty)
            || matches!(self, Polyset::Finite(v) if v.is_empty())
            || matches!(self, Polyset::Closure { gens, .. } if gens.is_empty())
    }

    /// Structural identity of atomic polysets (used to match hypothesis
    /// types against targets).
    pub fn same_as(&self, other: &Polyset, cfg: &WecaConfig) -> bool {
        match (self, other) {
            (Polyset::Empty, Polyset::Empty)
            | (Polyset::Full, Polyset::Full)
            | (Polyset::Hnf, Polyset::Hnf) => true,
            (Polyset::Finite(a), Polyset::Finite(b)) => a == b,
            (Polyset::Closure { gens: g1, funs: f1 }, Polyset::Closure { gens: g2, funs: f2 }) => {
                g1 == g2 && f1 == f2
            }
            (Polyset::Abstract(i, a), Polyset::Abstract(j, b)) => {
                i == j
                    && a.len() == b.len()
                    && a.iter()
                        .zip(b)
                        .all(|(x, y)| weca::weca_eq(x, y, cfg) == Answer::Yes)
            }
            (Polyset::Id(_, a1, b1), Polyset::Id(_, a2, b2)) => {
                weca::weca_eq(a1, a2, cfg) == Answer::Yes
                    && weca::weca_eq(b1, b2, cfg) == Answer::Yes
            }
            _ => false,
        }
    }
}

impl fmt::Display for Polyset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[UTerm]| {
            v.iter()
                .map(|t| weca::print(t, true))
                .collect::<Vec<_>>()
                .join(", ")
        };
        match self {
            Polyset::Empty => f.write_str("∅"),
            Polyset::Full => f.write_str("A"),
            Polyset::Finite(v) => write!(f, "{{{}}}", list(v)),
            Polyset::Closure { gens, funs } => {
                write!(f, "closure({{{}}}; {})", list(gens), list(funs))
            }
            Polyset::Hnf => f.write_str("HNF"),
            Polyset::Prod(..) => f.write_str("Π-set"),
            Polyset::Sum(..) => f.write_str("Σ-set"),
            Polyset::Inter(..) => f.write_str("∩-set"),
            Polyset::Id(_, a, b) => {
                write!(f, "Id({}, {})", weca::print(a, true), weca::print(b, true))
            }
            Polyset::Abstract(i, args) => {
                write!(f, "X{i}")?;
                for a in args {
                    write!(f, " ({})", weca::print(a, true))?;
                }
                Ok(())
            }
            Polyset::Undetermined(why) => write!(f, "?({why})"),
        }
    }
}

/// Evaluates a predicate at its deciding argument.
pub fn eval_pred(p: &Pred, arg: &UTerm, cfg: &WecaConfig, core: &[UTerm]) -> Polyset {
    let full_if = |a: Answer| match a {
        Answer::Yes => Polyset::Full,
        Answer::No => Polyset::Empty,
        Answer::Unknown => {
            Polyset::Undetermined(format!("{} at {}", p.label(), weca::print(arg, true)))
        }
    };
    match p {
        Pred::IsRefl => full_if(weca::weca_eq(arg, &UTerm::refl(), cfg)),
        Pred::IsChurchNumeral => match weca::normalize(arg, cfg) {
            Ok(n) => full_if(Answer::from_bool(church_value(&n).is_some())),
            Err(_) => full_if(Answer::Unknown),
        },
        Pred::FiniteSet { terms } => {
            let mut set: Vec<UTerm> = core.to_vec();
            for t in terms {
                match weca::parse_uterm_plain(t).map(|u| weca::normalize(&u, cfg)) {
                    Ok(Ok(n)) => {
                        if !set.contains(&n) {
                            set.push(n)
                        }
                    }
                    _ => return Polyset::Undetermined(format!("bad term `{t}`")),
                }
            }
            Polyset::Finite(set)
        }
        Pred::FullSet => Polyset::Full,
        Pred::EmptySet => Polyset::Empty,
        Pred::EqualsNormalFormOf { term } => match weca::parse_uterm_plain(term) {
            Ok(u) => full_if(weca::weca_eq(arg, &u, cfg)),
            Err(_) => Polyset::Undetermined(format!("bad term `{term}`")),
        },
        Pred::HasHnf { fuel } => {
            let c = cfg.clone().with_fuel(*fuel);
            match weca::head_normalize(arg, &c) {
                Ok(_) => Polyset::Full,
                Err(_) => Polyset::Undetermined(format!(
                    "no head normal form found for {}",
                    weca::print(arg, true)
                )),
            }
        }
    }
}

/// The core constants every nonempty polyset contains (generated
/// structures only).
pub fn core_terms(cfg: &WecaConfig) -> Vec<UTerm> {
    cfg.rules
        .absorbing
        .iter()
        .cloned()
        .map(UTerm::Const)
        .collect()
}

pub(crate) fn is_core(t: &UTerm, cfg: &WecaConfig) -> bool {
    matches!(t, UTerm::Const(c) if cfg.rules.absorbing.contains(c))
}
