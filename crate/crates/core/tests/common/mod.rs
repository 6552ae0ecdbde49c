//! Helpers shared by the property suites and the acceptance runner.
#![allow(dead_code)]

use std::sync::Arc;

use polykernel::stdlib::Corpus;
use polykernel::syntax::{name, JElim, Term};
use polykernel::typecheck::{check, classify, Globals};
use polykernel::weca::{self, contract_at, redex_positions, UConst, UTerm, WecaConfig};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

/// Every term reachable from `t` by contracting one β, δ, projection or
/// J redex at any position.
pub fn one_step_reducts(g: &Globals, t: &Term) -> Vec<Term> {
    let mut out = Vec::new();
    if let Some(r) = contract_root(g, t) {
        out.push(r);
    }
    let a = |x: &Arc<Term>| (**x).clone();
    match t {
        Term::Sort(_) | Term::Var(_) | Term::Const(_) | Term::Refl => {}
        Term::Pi(x, d, b) | Term::Lam(x, d, b) | Term::Sigma(x, d, b) => {
            let rebuild = |d: Term, b: Term| match t {
                Term::Pi(..) => Term::Pi(x.clone(), Arc::new(d), Arc::new(b)),
                Term::Lam(..) => Term::Lam(x.clone(), Arc::new(d), Arc::new(b)),
                _ => Term::Sigma(x.clone(), Arc::new(d), Arc::new(b)),
            };
            out.extend(one_step_reducts(g, d).into_iter().map(|d| rebuild(d, a(b))));
            out.extend(one_step_reducts(g, b).into_iter().map(|b| rebuild(a(d), b)));
        }
        Term::App(f, x) => {
            out.extend(
                one_step_reducts(g, f)
                    .into_iter()
                    .map(|f| Term::app(f, a(x))),
            );
            out.extend(
                one_step_reducts(g, x)
                    .into_iter()
                    .map(|x| Term::app(a(f), x)),
            );
        }
        Term::Pair { fst, snd, ann } => {
            let ann = ann.clone();
            out.extend(one_step_reducts(g, fst).into_iter().map(|f| Term::Pair {
                fst: Arc::new(f),
                snd: snd.clone(),
                ann: ann.clone(),
            }));
            out.extend(one_step_reducts(g, snd).into_iter().map(|s| Term::Pair {
                fst: fst.clone(),
                snd: Arc::new(s),
                ann: ann.clone(),
            }));
        }
        Term::Proj1(p) => out.extend(
            one_step_reducts(g, p)
                .into_iter()
                .map(|p| Term::Proj1(Arc::new(p))),
        ),
        Term::Proj2(p) => out.extend(
            one_step_reducts(g, p)
                .into_iter()
                .map(|p| Term::Proj2(Arc::new(p))),
        ),
        Term::Id { ty, lhs, rhs } => {
            out.extend(
                one_step_reducts(g, ty)
                    .into_iter()
                    .map(|x| Term::id(x, a(lhs), a(rhs))),
            );
            out.extend(
                one_step_reducts(g, lhs)
                    .into_iter()
                    .map(|x| Term::id(a(ty), x, a(rhs))),
            );
            out.extend(
                one_step_reducts(g, rhs)
                    .into_iter()
                    .map(|x| Term::id(a(ty), a(lhs), x)),
            );
        }
        Term::J(j) => {
            let parts = [&j.base, &j.lhs, &j.rhs, &j.proof];
            for (i, part) in parts.iter().enumerate() {
                for r in one_step_reducts(g, part) {
                    let mut k = (**j).clone();
                    match i {
                        0 => k.base = r,
                        1 => k.lhs = r,
                        2 => k.rhs = r,
                        _ => k.proof = r,
                    }
                    out.push(Term::J(Arc::new(k)));
                }
            }
        }
    }
    out
}

fn contract_root(g: &Globals, t: &Term) -> Option<Term> {
    match t {
        Term::Const(n) => g.body_of(n).cloned(),
        Term::App(f, x) => match f.as_ref() {
            Term::Lam(_, _, b) => Some(b.instantiate(x)),
            _ => None,
        },
        Term::Proj1(p) => match p.as_ref() {
            Term::Pair { fst, .. } => Some((**fst).clone()),
            _ => None,
        },
        Term::Proj2(p) => match p.as_ref() {
            Term::Pair { snd, .. } => Some((**snd).clone()),
            _ => None,
        },
        Term::J(j) => {
            let JElim {
                base, lhs, proof, ..
            } = j.as_ref();
            (*proof == Term::Refl).then(|| Term::app(base.clone(), lhs.clone()))
        }
        _ => None,
    }
}

/// A subject-reduction violation: a reduct that fails to check against the
/// type of the term it came from, or changes classification.
#[derive(Debug)]
pub struct Violation {
    pub entry: String,
    pub reduct: String,
    pub error: String,
}

/// Checks every one-step reduct of every defined corpus entry (and the
/// reducts of its leftmost-outermost two-step path) against the declared
/// type. Returns the number of reducts examined and the violations.
pub fn subject_reduction(corpus: &Corpus) -> (usize, Vec<Violation>) {
    let g = corpus.globals();
    let empty = Default::default();
    let mut examined = 0;
    let mut violations = Vec::new();
    for e in corpus.entries() {
        let Some(body) = &e.body else { continue };
        let class = classify(g, &empty, body, e.flags).ok();
        let mut frontier = vec![body.clone()];
        for _ in 0..2 {
            let mut next = Vec::new();
            for t in &frontier {
                for r in one_step_reducts(g, t) {
                    examined += 1;
                    let verdict = check(g, &empty, &r, &e.ty, e.flags)
                        .map_err(|err| err.to_string())
                        .and_then(|()| {
                            let c = classify(g, &empty, &r, e.flags).ok();
                            if c == class {
                                Ok(())
                            } else {
                                Err(format!("classification changed: {class:?} to {c:?}"))
                            }
                        });
                    if let Err(error) = verdict {
                        violations.push(Violation {
                            entry: e.name.to_string(),
                            reduct: r.to_string(),
                            error,
                        });
                    }
                    if next.len() < 8 {
                        next.push(r);
                    }
                }
            }
            frontier = next;
        }
    }
    (examined, violations)
}

/// The configurations exercised by the confluence fuzz.
pub fn fuzz_configs() -> Vec<WecaConfig> {
    vec![
        WecaConfig::beta(),
        WecaConfig::betaeta(),
        WecaConfig::lambda_c_default(),
        WecaConfig::lambda_id(),
    ]
}

/// A random term of size at most `budget` over the signature of `cfg`,
/// with a bias toward β-redexes and free observers `x`, `y`.
pub fn random_term(rng: &mut StdRng, cfg: &WecaConfig, budget: usize) -> UTerm {
    let consts: Vec<UConst> = cfg.signature.iter().cloned().collect();
    gen(rng, &consts, budget, 0)
}

fn gen(rng: &mut StdRng, consts: &[UConst], budget: usize, depth: usize) -> UTerm {
    if budget < 4 || rng.gen_bool(0.15) {
        return leaf(rng, consts, depth);
    }
    match rng.gen_range(0..10) {
        0..=1 => UTerm::lam("v", gen(rng, consts, budget - 1, depth + 1)),
        2..=5 if budget >= 5 => {
            let rest = budget - 3;
            let left = rng.gen_range(1..rest);
            let body = gen(rng, consts, left, depth + 1);
            UTerm::app(UTerm::lam("v", body), gen(rng, consts, rest - left, depth))
        }
        _ => {
            let rest = budget - 2;
            let left = rng.gen_range(1..rest);
            UTerm::app(
                gen(rng, consts, left, depth),
                gen(rng, consts, rest - left, depth),
            )
        }
    }
}

fn leaf(rng: &mut StdRng, consts: &[UConst], depth: usize) -> UTerm {
    let roll = rng.gen_range(0..10);
    if depth > 0 && roll < 6 {
        UTerm::var(rng.gen_range(0..depth))
    } else if !consts.is_empty() && roll < 8 {
        UTerm::konst(consts.choose(rng).unwrap().clone())
    } else {
        UTerm::free(if rng.gen_bool(0.5) { "x" } else { "y" })
    }
}

/// Normalizes by contracting a randomly chosen redex at each step.
pub fn random_strategy(
    t: &UTerm,
    cfg: &WecaConfig,
    rng: &mut StdRng,
    fuel: usize,
) -> Option<UTerm> {
    let mut t = t.clone();
    for _ in 0..fuel {
        let ps = redex_positions(&t, cfg);
        if ps.is_empty() {
            return Some(t);
        }
        let p = ps.choose(rng).unwrap();
        t = contract_at(&t, p, cfg);
        if t.size() > 5_000 {
            return None;
        }
    }
    None
}

/// Outcome of the confluence fuzz for one configuration.
#[derive(Debug, Default)]
pub struct FuzzStats {
    pub terms: usize,
    pub with_redexes: usize,
    pub both_terminated: usize,
    pub violations: Vec<String>,
}

pub fn confluence_fuzz(cfg: &WecaConfig, terms: usize, seed: u64) -> FuzzStats {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut stats = FuzzStats::default();
    while stats.terms < terms {
        let size = rng.gen_range(4..=30);
        let t = random_term(&mut rng, cfg, size);
        if t.size() > 30 {
            continue;
        }
        stats.terms += 1;
        if !redex_positions(&t, cfg).is_empty() {
            stats.with_redexes += 1;
        }
        let a = random_strategy(&t, cfg, &mut rng, 400);
        let b = random_strategy(&t, cfg, &mut rng, 400);
        let reference = weca::normalize(&t, &cfg.clone().with_fuel(2_000)).ok();
        let found: Vec<&UTerm> = [a.as_ref(), b.as_ref(), reference.as_ref()]
            .into_iter()
            .flatten()
            .collect();
        if a.is_some() && b.is_some() {
            stats.both_terminated += 1;
        }
        if found.windows(2).any(|w| w[0] != w[1]) {
            stats.violations.push(weca::print(&t, false));
        }
    }
    stats
}

pub fn observer(n: &str) -> UTerm {
    UTerm::free(&name(n))
}
