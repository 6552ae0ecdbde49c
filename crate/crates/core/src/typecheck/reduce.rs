use std::sync::Arc;

use crate::syntax::{JElim, Term};

use super::{Globals, TypeError};

pub const DEFAULT_FUEL: u64 = 100_000;

/// A budget of reduction steps shared by one checking session.
#[derive(Clone, Debug)]
pub struct Fuel {
    remaining: u64,
}

impl Fuel {
    pub fn new(steps: u64) -> Self {
        Fuel { remaining: steps }
    }

    pub fn remaining(&self) -> u64 {
        self.remaining
    }

    fn tick(&mut self) -> Result<(), TypeError> {
        if self.remaining == 0 {
            return Err(TypeError::FuelExhausted("reducing a term".into()));
        }
        self.remaining -= 1;
        Ok(())
    }
}

impl Default for Fuel {
    fn default() -> Self {
        Fuel::new(DEFAULT_FUEL)
    }
}

/// Weak-head normal form under β, δ (global unfolding), the projection
/// rules and `J(c, a, b, refl) → c a`.
pub fn whnf(g: &Globals, t: &Term, fuel: &mut Fuel) -> Result<Term, TypeError> {
    let mut head = t.clone();
    let mut args: Vec<Term> = Vec::new();
    loop {
        match head {
            Term::App(f, a) => {
                args.push((*a).clone());
                head = (*f).clone();
            }
            Term::Lam(_, _, ref body) if !args.is_empty() => {
                fuel.tick()?;
                let a = args.pop().unwrap();
                head = body.instantiate(&a);
            }
            Term::Const(ref n) => match g.body_of(n) {
                Some(b) => {
                    fuel.tick()?;
                    head = b.clone();
                }
                None => break,
            },
            Term::Proj1(ref p) | Term::Proj2(ref p) => {
                let first = matches!(head, Term::Proj1(_));
                match whnf(g, p, fuel)? {
                    Term::Pair { fst, snd, .. } => {
                        fuel.tick()?;
                        head = if first {
                            (*fst).clone()
                        } else {
                            (*snd).clone()
                        };
                    }
                    other => {
                        let p = Arc::new(other);
                        head = if first {
                            Term::Proj1(p)
                        } else {
                            Term::Proj2(p)
                        };
                        break;
                    }
                }
            }
            Term::J(ref j) => match whnf(g, &j.proof, fuel)? {
                Term::Refl => {
                    fuel.tick()?;
                    head = Term::app(j.base.clone(), j.lhs.clone());
                }
                proof => {
                    head = Term::J(Arc::new(JElim {
                        proof,
                        ..(**j).clone()
                    }));
                    break;
                }
            },
            _ => break,
        }
    }
    Ok(args.into_iter().rev().fold(head, Term::app))
}

/// Full normal form (normal order). Fails with `FuelExhausted` rather than
/// looping.
pub fn normalize(g: &Globals, t: &Term, fuel: &mut Fuel) -> Result<Term, TypeError> {
    let h = whnf(g, t, fuel)?;
    let n = |t: &Term, fuel: &mut Fuel| normalize(g, t, fuel).map(Arc::new);
    Ok(match &h {
        Term::Sort(_) | Term::Var(_) | Term::Const(_) | Term::Refl => h,
        Term::Pi(x, a, b) => Term::Pi(x.clone(), n(a, fuel)?, n(b, fuel)?),
        Term::Lam(x, a, b) => Term::Lam(x.clone(), n(a, fuel)?, n(b, fuel)?),
        Term::Sigma(x, a, b) => Term::Sigma(x.clone(), n(a, fuel)?, n(b, fuel)?),
        Term::App(f, a) => Term::App(n(f, fuel)?, n(a, fuel)?),
        Term::Pair { fst, snd, ann } => Term::Pair {
            fst: n(fst, fuel)?,
            snd: n(snd, fuel)?,
            ann: match ann {
                Some(t) => Some(n(t, fuel)?),
                None => None,
            },
        },
        Term::Proj1(p) => Term::Proj1(n(p, fuel)?),
        Term::Proj2(p) => Term::Proj2(n(p, fuel)?),
        Term::Id { ty, lhs, rhs } => Term::Id {
            ty: n(ty, fuel)?,
            lhs: n(lhs, fuel)?,
            rhs: n(rhs, fuel)?,
        },
        Term::J(j) => Term::J(Arc::new(JElim {
            names: j.names.clone(),
            dom: normalize(g, &j.dom, fuel)?,
            motive: normalize(g, &j.motive, fuel)?,
            base: normalize(g, &j.base, fuel)?,
            lhs: normalize(g, &j.lhs, fuel)?,
            rhs: normalize(g, &j.rhs, fuel)?,
            proof: normalize(g, &j.proof, fuel)?,
        })),
    })
}

/// Decides `t =β u` (with δ and the extension rules) by comparing weak-head
/// normal forms recursively.
pub fn convertible(g: &Globals, t: &Term, u: &Term, fuel: &mut Fuel) -> Result<bool, TypeError> {
    if t == u {
        return Ok(true);
    }
    let t = whnf(g, t, fuel)?;
    let u = whnf(g, u, fuel)?;
    if t == u {
        return Ok(true);
    }
    let mut conv = |a: &Term, b: &Term| convertible(g, a, b, fuel);
    Ok(match (&t, &u) {
        (Term::Pi(_, a1, b1), Term::Pi(_, a2, b2))
        | (Term::Lam(_, a1, b1), Term::Lam(_, a2, b2))
        | (Term::Sigma(_, a1, b1), Term::Sigma(_, a2, b2)) => conv(a1, a2)? && conv(b1, b2)?,
        (Term::App(f1, a1), Term::App(f2, a2)) => conv(f1, f2)? && conv(a1, a2)?,
        (
            Term::Pair {
                fst: a1, snd: b1, ..
            },
            Term::Pair {
                fst: a2, snd: b2, ..
            },
        ) => conv(a1, a2)? && conv(b1, b2)?,
        (Term::Proj1(a), Term::Proj1(b)) | (Term::Proj2(a), Term::Proj2(b)) => conv(a, b)?,
        (
            Term::Id {
                ty: t1,
                lhs: a1,
                rhs: b1,
            },
            Term::Id {
                ty: t2,
                lhs: a2,
                rhs: b2,
            },
        ) => conv(t1, t2)? && conv(a1, a2)? && conv(b1, b2)?,
        (Term::J(j1), Term::J(j2)) => {
            conv(&j1.dom, &j2.dom)?
                && conv(&j1.motive, &j2.motive)?
                && conv(&j1.base, &j2.base)?
                && conv(&j1.lhs, &j2.lhs)?
                && conv(&j1.rhs, &j2.rhs)?
                && conv(&j1.proof, &j2.proof)?
        }
        _ => false,
    })
}
