use std::sync::Arc;

use super::{UConst, UTerm, WecaConfig};

/// Three-valued answer of a semi-decision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Answer {
    Yes,
    No,
    Unknown,
}

impl Answer {
    pub fn from_bool(b: bool) -> Answer {
        if b {
            Answer::Yes
        } else {
            Answer::No
        }
    }

    pub fn and(self, other: Answer) -> Answer {
        match (self, other) {
            (Answer::No, _) | (_, Answer::No) => Answer::No,
            (Answer::Yes, Answer::Yes) => Answer::Yes,
            _ => Answer::Unknown,
        }
    }
}

impl std::ops::Not for Answer {
    type Output = Answer;

    fn not(self) -> Answer {
        match self {
            Answer::Yes => Answer::No,
            Answer::No => Answer::Yes,
            Answer::Unknown => Answer::Unknown,
        }
    }
}

impl std::fmt::Display for Answer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Answer::Yes => "Yes",
            Answer::No => "No",
            Answer::Unknown => "Unknown",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
#[error("rewriting fuel exhausted")]
pub struct FuelExhausted;

/// A path to a subterm: `false` goes to the function part (or the body of
/// an abstraction), `true` to the argument.
pub type Position = Vec<bool>;

/// Contracts `t` at its root if some enabled rule applies.
pub fn contract_root(t: &UTerm, cfg: &WecaConfig) -> Option<UTerm> {
    let r = &cfg.rules;
    match t {
        UTerm::App(f, a) => {
            if let UTerm::Lam(_, body) = f.as_ref() {
                if r.beta {
                    return Some(body.instantiate(a));
                }
            }
            if let UTerm::Const(c) = f.as_ref() {
                if r.absorbing.contains(c) {
                    return Some(UTerm::Const(c.clone()));
                }
                if matches!(c, UConst::Proj1 | UConst::Proj2) {
                    if r.proj_refl && **a == UTerm::refl() {
                        return Some(UTerm::refl());
                    }
                    if r.proj_beta {
                        let (h, args) = a.spine();
                        if *h == UTerm::Const(UConst::Pair) && args.len() == 2 {
                            let i = if *c == UConst::Proj1 { 0 } else { 1 };
                            return Some(args[i].clone());
                        }
                    }
                }
            }
            if r.j_iota && **a == UTerm::refl() {
                let (h, args) = t.spine();
                if *h == UTerm::Const(UConst::J) && args.len() == 4 {
                    return Some(UTerm::app(args[0].clone(), args[1].clone()));
                }
            }
            None
        }
        UTerm::Lam(_, body) if r.eta => match body.as_ref() {
            UTerm::App(f, a) if **a == UTerm::Var(0) && !f.has_loose(0) => Some(f.shift(-1, 0)),
            _ => None,
        },
        _ => None,
    }
}

/// All redex positions, leftmost-outermost first.
pub fn redex_positions(t: &UTerm, cfg: &WecaConfig) -> Vec<Position> {
    let mut out = Vec::new();
    let mut path = Vec::new();
    collect_redexes(t, cfg, &mut path, &mut out);
    out
}

fn collect_redexes(t: &UTerm, cfg: &WecaConfig, path: &mut Position, out: &mut Vec<Position>) {
    if contract_root(t, cfg).is_some() {
        out.push(path.clone());
    }
    match t {
        UTerm::Lam(_, b) => {
            path.push(false);
            collect_redexes(b, cfg, path, out);
            path.pop();
        }
        UTerm::App(f, a) => {
            path.push(false);
            collect_redexes(f, cfg, path, out);
            path.pop();
            path.push(true);
            collect_redexes(a, cfg, path, out);
            path.pop();
        }
        _ => {}
    }
}

/// Contracts the redex at `pos`. Panics if there is none.
pub fn contract_at(t: &UTerm, pos: &[bool], cfg: &WecaConfig) -> UTerm {
    match pos.split_first() {
        None => contract_root(t, cfg).expect("no redex at the given position"),
        Some((&dir, rest)) => match t {
            UTerm::Lam(x, b) => UTerm::Lam(x.clone(), Arc::new(contract_at(b, rest, cfg))),
            UTerm::App(f, a) if !dir => UTerm::App(Arc::new(contract_at(f, rest, cfg)), a.clone()),
            UTerm::App(f, a) => UTerm::App(f.clone(), Arc::new(contract_at(a, rest, cfg))),
            _ => panic!("position leaves the term"),
        },
    }
}

/// One leftmost-outermost contraction, or `None` if `t` is normal.
pub fn step(t: &UTerm, cfg: &WecaConfig) -> Option<UTerm> {
    if let Some(r) = contract_root(t, cfg) {
        return Some(r);
    }
    match t {
        UTerm::Lam(x, b) => step(b, cfg).map(|b| UTerm::Lam(x.clone(), Arc::new(b))),
        UTerm::App(f, a) => match step(f, cfg) {
            Some(f) => Some(UTerm::App(Arc::new(f), a.clone())),
            None => step(a, cfg).map(|a| UTerm::App(f.clone(), Arc::new(a))),
        },
        _ => None,
    }
}

pub fn is_normal(t: &UTerm, cfg: &WecaConfig) -> bool {
    step(t, cfg).is_none()
}

/// The single element of the one-point algebra.
pub fn point() -> UTerm {
    UTerm::Const(UConst::Named(crate::syntax::name("•")))
}

struct Engine<'c> {
    cfg: &'c WecaConfig,
    left: u64,
}

impl Engine<'_> {
    fn tick(&mut self) -> Result<(), FuelExhausted> {
        if self.left == 0 {
            return Err(FuelExhausted);
        }
        self.left -= 1;
        Ok(())
    }

    /// Head reduction to weak head normal form. Arguments are kept as a
    /// stack, innermost (first) argument on top.
    fn whnf(&mut self, t: &UTerm) -> Result<UTerm, FuelExhausted> {
        let r = &self.cfg.rules;
        let mut head = t.clone();
        let mut args: Vec<UTerm> = Vec::new();
        loop {
            match head {
                UTerm::App(f, a) => {
                    args.push((*a).clone());
                    head = (*f).clone();
                }
                UTerm::Lam(_, ref b) if r.beta && !args.is_empty() => {
                    self.tick()?;
                    let a = args.pop().unwrap();
                    head = b.instantiate(&a);
                }
                UTerm::Const(ref c) if !args.is_empty() && r.absorbing.contains(c) => {
                    self.tick()?;
                    args.clear();
                }
                UTerm::Const(UConst::J) if r.j_iota && args.len() >= 4 => {
                    let n = args.len();
                    let q = self.whnf(&args[n - 4])?;
                    if q == UTerm::refl() {
                        self.tick()?;
                        let c = args.pop().unwrap();
                        let a = args.pop().unwrap();
                        args.pop();
                        args.pop();
                        head = UTerm::app(c, a);
                    } else {
                        args[n - 4] = q;
                        break;
                    }
                }
                UTerm::Const(ref c @ (UConst::Proj1 | UConst::Proj2))
                    if !args.is_empty() && (r.proj_beta || r.proj_refl) =>
                {
                    let first = *c == UConst::Proj1;
                    let n = args.len();
                    let p = self.whnf(&args[n - 1])?;
                    let (h, ps) = p.spine();
                    if r.proj_refl && p == UTerm::refl() {
                        self.tick()?;
                        args.pop();
                        head = UTerm::refl();
                    } else if r.proj_beta && *h == UTerm::Const(UConst::Pair) && ps.len() == 2 {
                        self.tick()?;
                        let picked = if first { ps[0].clone() } else { ps[1].clone() };
                        args.pop();
                        head = picked;
                    } else {
                        args[n - 1] = p;
                        break;
                    }
                }
                _ => break,
            }
        }
        Ok(args.into_iter().rev().fold(head, UTerm::app))
    }

    fn normalize(&mut self, t: &UTerm) -> Result<UTerm, FuelExhausted> {
        let h = self.whnf(t)?;
        match &h {
            UTerm::Lam(x, b) => {
                let b = self.normalize(b)?;
                if self.cfg.rules.eta {
                    if let UTerm::App(f, a) = &b {
                        if **a == UTerm::Var(0) && !f.has_loose(0) {
                            self.tick()?;
                            return Ok(f.shift(-1, 0));
                        }
                    }
                }
                Ok(UTerm::Lam(x.clone(), Arc::new(b)))
            }
            UTerm::App(..) => {
                let (head, args) = h.spine();
                let head = head.clone();
                let mut out = head;
                for a in args {
                    out = UTerm::app(out, self.normalize(a)?);
                }
                Ok(out)
            }
            _ => Ok(h),
        }
    }
}

/// Normal form by normal-order reduction, within `cfg.fuel` contractions.
pub fn normalize(t: &UTerm, cfg: &WecaConfig) -> Result<UTerm, FuelExhausted> {
    if cfg.is_degenerate() {
        return Ok(point());
    }
    let mut e = Engine {
        cfg,
        left: cfg.fuel,
    };
    let mut n = e.normalize(t)?;
    // Constant rules can be enabled by normalizing an argument (for example
    // an η-contraction exposing a pair), so repeat until nothing fires.
    while let Some(next) = step(&n, cfg) {
        e.tick()?;
        n = e.normalize(&next)?;
    }
    Ok(n)
}

/// Normalization by repeated `step`, used as a reference strategy.
pub fn normalize_by_steps(t: &UTerm, cfg: &WecaConfig) -> Result<UTerm, FuelExhausted> {
    if cfg.is_degenerate() {
        return Ok(point());
    }
    let mut t = t.clone();
    for _ in 0..cfg.fuel {
        match step(&t, cfg) {
            Some(n) => t = n,
            None => return Ok(t),
        }
    }
    Err(FuelExhausted)
}

/// Head normal form: reduces the head until it is a variable or constant
/// applied to arguments, under any number of abstractions.
pub fn head_normalize(t: &UTerm, cfg: &WecaConfig) -> Result<UTerm, FuelExhausted> {
    let mut e = Engine {
        cfg,
        left: cfg.fuel,
    };
    fn go(e: &mut Engine<'_>, t: &UTerm) -> Result<UTerm, FuelExhausted> {
        match e.whnf(t)? {
            UTerm::Lam(x, b) => Ok(UTerm::Lam(x, Arc::new(go(e, &b)?))),
            other => Ok(other),
        }
    }
    go(&mut e, t)
}

/// Equality in the term model: `Yes`/`No` when both sides have normal
/// forms, `Unknown` otherwise.
pub fn weca_eq(t: &UTerm, u: &UTerm, cfg: &WecaConfig) -> Answer {
    if cfg.is_degenerate() {
        return Answer::Yes;
    }
    if t == u {
        return Answer::Yes;
    }
    match (normalize(t, cfg), normalize(u, cfg)) {
        (Ok(a), Ok(b)) => Answer::from_bool(a == b),
        _ => Answer::Unknown,
    }
}
