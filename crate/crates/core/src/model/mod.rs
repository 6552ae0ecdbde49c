//! Polyset models: interpretation of kinds, constructors and types over a
//! term model, with three-valued membership and emptiness evidence, and an
//! exact evaluator for the proof-irrelevance model.

mod ir;
mod pi;
mod polyset;

use std::cell::{Cell, RefCell};
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::syntax::{Context, Term};
use crate::typecheck::{Checker, ExtensionFlags, Globals, TypeError};
use crate::weca::{
    self, Answer, EraseError, Eraser, NormalForms, UConst, UTerm, WecaConfig, WecaKind,
};

pub use ir::{level_var, Compiler, Con, KindIr};
pub use pi::{pi_model_decide, PiModel, PiVal, PiVerdict};
pub use polyset::{church_value, core_terms, eval_pred, Env, Fam, Polyset, Pred, Slot, Val};

use polyset::is_core;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("not a kind: {0}")]
    NotAKind(String),
    #[error("not a type: {0}")]
    NotAType(String),
    #[error("not a constructor: {0}")]
    NotAConstructor(String),
    #[error("improper family: {0}")]
    ImproperFamily(String),
    #[error("ill-typed: {0}")]
    IllTyped(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error(transparent)]
    Erase(#[from] EraseError),
}

/// The polyset structures available.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Structure {
    /// Simple structure over the one-point algebra.
    Pi,
    /// `{∅, A}`.
    Simple,
    /// `{X | X = ∅ ∨ C ⊆ X}` where `C` are the absorbing constants.
    Generated,
    /// All subsets.
    Full,
    /// `{X | X ⊆ HNF ∨ X = A}`.
    PowerHnf,
}

impl Structure {
    pub const ALL: [Structure; 5] = [
        Structure::Pi,
        Structure::Simple,
        Structure::Generated,
        Structure::Full,
        Structure::PowerHnf,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Structure::Pi => "pi",
            Structure::Simple => "simple",
            Structure::Generated => "generated",
            Structure::Full => "full",
            Structure::PowerHnf => "power-hnf",
        }
    }

    /// The term model a structure is normally paired with.
    pub fn default_weca(&self) -> WecaKind {
        match self {
            Structure::Pi => WecaKind::One,
            Structure::Simple | Structure::PowerHnf => WecaKind::Beta,
            Structure::Generated | Structure::Full => WecaKind::LambdaId,
        }
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Structure {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Structure::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| {
                format!("unknown model `{s}` (expected pi, simple, generated, full or power-hnf)")
            })
    }
}

/// Qualifications of a `Yes` that was not established for all elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Flag {
    /// A dependent product was only checked on a finite sample of its
    /// domain.
    Sampled,
    /// An intersection over a kind was only checked on the registered
    /// witness family.
    WitnessFamily,
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flag::Sampled => "sampled",
            Flag::WitnessFamily => "witness-family",
        })
    }
}

/// A three-valued answer together with the qualifications of a `Yes`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub answer: Answer,
    pub flags: BTreeSet<Flag>,
}

impl Verdict {
    pub fn of(answer: Answer) -> Self {
        Verdict {
            answer,
            flags: BTreeSet::new(),
        }
    }

    pub fn yes() -> Self {
        Self::of(Answer::Yes)
    }

    pub fn no() -> Self {
        Self::of(Answer::No)
    }

    pub fn unknown() -> Self {
        Self::of(Answer::Unknown)
    }

    pub fn flagged(mut self, f: Flag) -> Self {
        if self.answer == Answer::Yes {
            self.flags.insert(f);
        }
        self
    }

    /// A `Yes` without qualifications.
    pub fn is_exact_yes(&self) -> bool {
        self.answer == Answer::Yes && self.flags.is_empty()
    }

    fn and(self, other: Verdict) -> Verdict {
        let answer = self.answer.and(other.answer);
        let mut flags = self.flags;
        if answer == Answer::Yes {
            flags.extend(other.flags);
        } else {
            flags.clear();
        }
        Verdict { answer, flags }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.answer)?;
        if !self.flags.is_empty() {
            let fl: Vec<String> = self.flags.iter().map(|x| x.to_string()).collect();
            write!(f, " [{}]", fl.join(", "))?;
        }
        Ok(())
    }
}

/// Emptiness verdict: `No` carries a member, `Yes` a justification.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Emptiness {
    pub answer: Answer,
    pub evidence: String,
    pub witness: Option<UTerm>,
}

impl Emptiness {
    fn empty(evidence: impl Into<String>) -> Self {
        Emptiness {
            answer: Answer::Yes,
            evidence: evidence.into(),
            witness: None,
        }
    }

    fn inhabited(w: UTerm, evidence: impl Into<String>) -> Self {
        Emptiness {
            answer: Answer::No,
            evidence: evidence.into(),
            witness: Some(w),
        }
    }

    fn unknown(evidence: impl Into<String>) -> Self {
        Emptiness {
            answer: Answer::Unknown,
            evidence: evidence.into(),
            witness: None,
        }
    }
}

/// Denotation of a kind.
#[derive(Clone, Debug)]
pub enum KindValue {
    /// The polyset structure itself.
    Collection,
    /// `∏_{t∈X} 𝒱(B)`.
    FunSpace(Polyset, Arc<KindIr>, Env),
}

impl fmt::Display for KindValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KindValue::Collection => f.write_str("𝒫"),
            KindValue::FunSpace(x, k, _) => {
                write!(f, "∏ t∈{x}. ")?;
                match k.as_ref() {
                    KindIr::Star => f.write_str("𝒫"),
                    _ => f.write_str("…"),
                }
            }
        }
    }
}

/// Result of a bounded enumeration.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Enumeration {
    pub members: Vec<UTerm>,
    pub unknown: Vec<UTerm>,
    pub examined: usize,
}

const MAX_DEPTH: usize = 8;

/// Compares the erasures of two terms of the same type in a term model.
/// `Yes` means the Leibniz equality holds in every polyset model over that
/// term model; `No` means it fails there.
pub fn leibniz_valid(
    globals: &Globals,
    cfg: &WecaConfig,
    ctx: &Context,
    t: &Term,
    q: &Term,
) -> Result<Answer, ModelError> {
    let mut ch = Checker::new(globals, ExtensionFlags::ALL);
    let a = ch
        .infer(ctx, t)
        .map_err(|e| ModelError::IllTyped(e.to_string()))?;
    let b = ch
        .infer(ctx, q)
        .map_err(|e| ModelError::IllTyped(e.to_string()))?;
    if !ch.convertible(&a, &b)? {
        return Err(ModelError::IllTyped(format!(
            "the terms have different types `{}` and `{}`",
            crate::syntax::print_in(&a, &ctx.names()),
            crate::syntax::print_in(&b, &ctx.names())
        )));
    }
    let mut er = Eraser::new(globals);
    let u = er.erase_open(ctx, t)?;
    let v = er.erase_open(ctx, q)?;
    Ok(weca::weca_eq(&u, &v, cfg))
}

/// A polyset model over a term model.
pub struct Model<'g> {
    structure: Structure,
    cfg: WecaConfig,
    globals: &'g Globals,
    compiler: RefCell<Compiler<'g>>,
    witnesses: Vec<Pred>,
    samples: Vec<UTerm>,
    fresh: Cell<usize>,
}

impl<'g> Model<'g> {
    /// The structure paired with its default term model.
    pub fn standard(globals: &'g Globals, structure: Structure) -> Result<Self, ModelError> {
        Self::new(
            globals,
            structure,
            WecaConfig::of_kind(structure.default_weca()),
        )
    }

    pub fn new(
        globals: &'g Globals,
        structure: Structure,
        cfg: WecaConfig,
    ) -> Result<Self, ModelError> {
        match structure {
            Structure::Pi => {
                return Err(ModelError::Unsupported(
                    "the proof-irrelevance model is evaluated by PiModel".into(),
                ))
            }
            Structure::PowerHnf if !matches!(cfg.kind, WecaKind::Beta | WecaKind::Betaeta) => {
                return Err(ModelError::Unsupported(
                    "the HNF power structure is defined over the pure λ-calculus".into(),
                ))
            }
            _ if cfg.is_degenerate() => {
                return Err(ModelError::Unsupported(
                    "the one-point algebra is only used by the proof-irrelevance model".into(),
                ))
            }
            _ => {}
        }
        let witnesses = if cfg.has_refl() {
            vec![Pred::IsRefl, Pred::IsChurchNumeral]
        } else {
            vec![Pred::IsChurchNumeral]
        };
        Ok(Model {
            structure,
            cfg,
            globals,
            compiler: RefCell::new(Compiler::new(globals)),
            witnesses,
            samples: Vec::new(),
            fresh: Cell::new(0),
        })
    }

    pub fn structure(&self) -> Structure {
        self.structure
    }

    pub fn weca(&self) -> &WecaConfig {
        &self.cfg
    }

    pub fn globals(&self) -> &'g Globals {
        self.globals
    }

    /// Registers an additional predicate family for kind-indexed
    /// intersections.
    pub fn register_witness(&mut self, p: Pred) {
        if !self.witnesses.contains(&p) {
            self.witnesses.push(p);
        }
    }

    pub fn witnesses(&self) -> &[Pred] {
        &self.witnesses
    }

    /// Adds probe samples for dependent products.
    pub fn add_samples(&mut self, samples: impl IntoIterator<Item = UTerm>) {
        for s in samples {
            let s = weca::normalize(&s, &self.cfg).unwrap_or(s);
            if !self.samples.contains(&s) {
                self.samples.push(s);
            }
        }
    }

    fn fresh(&self, prefix: &str) -> UTerm {
        let n = self.fresh.get();
        self.fresh.set(n + 1);
        ir::observer(prefix, n)
    }

    fn fresh_id(&self) -> usize {
        let n = self.fresh.get();
        self.fresh.set(n + 1);
        n
    }

    /// The constants every nonempty polyset contains.
    pub fn core(&self) -> Vec<UTerm> {
        if self.structure == Structure::Generated {
            core_terms(&self.cfg)
        } else {
            Vec::new()
        }
    }

    fn id_closed_form(&self) -> bool {
        matches!(self.structure, Structure::Generated | Structure::Full)
            && self.cfg.has_refl()
            && self.cfg.rules.j_iota
    }

    // ----- interpretation -------------------------------------------------

    /// Erases a term under a context, mapping each term variable to a free
    /// variable of the same name.
    pub fn erase(&self, ctx: &Context, t: &Term) -> Result<UTerm, ModelError> {
        Ok(Eraser::new(self.globals).erase_open(ctx, t)?)
    }

    /// The default valuation of a context: term variables become free
    /// variables of the carrier, constructor variables the full carrier (or
    /// constant families with that value).
    pub fn default_env(&self, ctx: &Context) -> Result<Env, ModelError> {
        let mut prefix = Context::new();
        let mut env = Env::default();
        for (x, ty) in ctx.entries() {
            let mut comp = self.compiler.borrow_mut();
            if comp.is_kind(&prefix, ty)? {
                let k = comp.kind(&prefix, ty)?;
                let mut v = Val::Set(Polyset::Full);
                for _ in 0..k.arity() {
                    v = Val::Fam(Fam::Const(Arc::new(v)));
                }
                env = env.push(Slot::Con(v));
            } else {
                env = env.push(Slot::Term(UTerm::Free(x.clone())));
            }
            prefix.push(x.clone(), ty.clone());
        }
        Ok(env)
    }

    /// Interprets a constructor under a valuation.
    pub fn interp_con(&self, ctx: &Context, t: &Term, env: &Env) -> Result<Val, ModelError> {
        let ir = self.compiler.borrow_mut().constructor(ctx, t)?;
        let v = self.eval(&ir, env);
        if let Val::Set(Polyset::Sum(x, f)) = &v {
            self.check_proper(x, f)?;
        }
        Ok(v)
    }

    /// Interprets a closed type.
    pub fn interp_type(&self, t: &Term) -> Result<Polyset, ModelError> {
        match self.interp_con(&Context::new(), t, &Env::default())? {
            Val::Set(s) => Ok(s),
            Val::Fam(_) => Err(ModelError::NotAType(crate::syntax::print(t))),
        }
    }

    /// Interprets a kind under a valuation.
    pub fn interp_kind(&self, ctx: &Context, k: &Term, env: &Env) -> Result<KindValue, ModelError> {
        let ir = self.compiler.borrow_mut().kind(ctx, k)?;
        Ok(match ir {
            KindIr::Star => KindValue::Collection,
            KindIr::Pi(d, cod) => KindValue::FunSpace(self.eval_set(&d, env), cod, env.clone()),
        })
    }

    pub fn eval(&self, c: &Con, env: &Env) -> Val {
        match c {
            Con::Var(l) => match env.0.get(*l) {
                Some(Slot::Con(v)) => v.clone(),
                _ => Val::Set(Polyset::Undetermined(format!("unbound level {l}"))),
            },
            Con::Pi(d, b) => {
                let x = self.eval_set(d, env);
                Val::Set(Polyset::Prod(Arc::new(x), self.family(d, b, env)))
            }
            Con::Sigma(d, b) => {
                let x = self.eval_set(d, env);
                Val::Set(Polyset::Sum(Arc::new(x), self.family(d, b, env)))
            }
            Con::All(k, b) => Val::Set(Polyset::Inter(k.clone(), b.clone(), env.clone())),
            Con::Lam(d, b) => Val::Fam(self.family(d, b, env)),
            Con::App(f, u) => {
                let arg = env.close(u);
                match self.eval(f, env) {
                    Val::Fam(fam) => self.apply(&fam, &arg),
                    Val::Set(_) => Val::Set(Polyset::Undetermined("applied a type".into())),
                }
            }
            Con::Id(t, a, b) => Val::Set(Polyset::Id(
                Arc::new(self.eval_set(t, env)),
                env.close(a),
                env.close(b),
            )),
        }
    }

    fn eval_set(&self, c: &Con, env: &Env) -> Polyset {
        match self.eval(c, env) {
            Val::Set(s) => s,
            Val::Fam(_) => Polyset::Undetermined("a family used as a type".into()),
        }
    }

    fn family(&self, dom: &Con, body: &Arc<Con>, env: &Env) -> Fam {
        let level = env.len();
        if body.uses_level(level) {
            Fam::Lam(Arc::new(self.eval_set(dom, env)), body.clone(), env.clone())
        } else {
            let inner = env.push(Slot::Term(level_var(level)));
            Fam::Const(Arc::new(self.eval(body, &inner)))
        }
    }

    /// Applies a family to an element.
    pub fn apply(&self, f: &Fam, t: &UTerm) -> Val {
        match f {
            Fam::Const(v) => (**v).clone(),
            Fam::Lam(_, body, env) => self.eval(body, &env.push(Slot::Term(t.clone()))),
            Fam::Pred { pred, arity, args } => {
                let mut args = args.clone();
                args.push(t.clone());
                if args.len() == *arity {
                    Val::Set(eval_pred(pred, t, &self.cfg, &self.core()))
                } else {
                    Val::Fam(Fam::Pred {
                        pred: pred.clone(),
                        arity: *arity,
                        args,
                    })
                }
            }
            Fam::Abstract { id, arity, args } => {
                let mut args = args.clone();
                args.push(weca::normalize(t, &self.cfg).unwrap_or_else(|_| t.clone()));
                if args.len() == *arity {
                    Val::Set(Polyset::Abstract(*id, args))
                } else {
                    Val::Fam(Fam::Abstract {
                        id: *id,
                        arity: *arity,
                        args,
                    })
                }
            }
        }
    }

    /// Applies a family that is expected to yield a polyset.
    pub fn apply_set(&self, f: &Fam, t: &UTerm) -> Polyset {
        match self.apply(f, t) {
            Val::Set(s) => s,
            Val::Fam(_) => Polyset::Undetermined("family applied to too few arguments".into()),
        }
    }

    /// Checks that a Σ-family is proper: empty at `refl` implies empty
    /// everywhere. Only meaningful for the structure generated from
    /// `{refl}`; checked on `refl` and the probe samples.
    pub fn check_proper(&self, x: &Polyset, f: &Fam) -> Result<(), ModelError> {
        if self.structure != Structure::Generated || !self.cfg.has_refl() {
            return Ok(());
        }
        let at_refl = self.apply_set(f, &UTerm::refl());
        if self.is_empty_at(&at_refl, 0).answer != Answer::Yes {
            return Ok(());
        }
        let (mut probes, _) = self.probes(x, 0);
        probes.extend(self.candidates());
        for t in probes {
            if self.member_at(&t, x, 1).answer != Answer::Yes {
                continue;
            }
            let ft = self.apply_set(f, &t);
            if self.is_empty_at(&ft, 1).answer == Answer::No {
                return Err(ModelError::ImproperFamily(format!(
                    "empty at refl but inhabited at {}",
                    weca::print(&t, true)
                )));
            }
        }
        Ok(())
    }

    /// Instantiates the outermost kind-indexed intersection of `x` with a
    /// kind value.
    pub fn instantiate(&self, x: &Polyset, v: Val) -> Option<Polyset> {
        match x {
            Polyset::Inter(_, body, env) => Some(self.eval_set(body, &env.push(Slot::Con(v)))),
            _ => None,
        }
    }

    /// A predicate family of the given arity, as a kind value.
    pub fn pred_family(pred: Pred, arity: usize) -> Val {
        if arity == 0 {
            return Val::Set(Polyset::Undetermined(format!(
                "{} used at kind *",
                pred.label()
            )));
        }
        Val::Fam(Fam::Pred {
            pred,
            arity,
            args: Vec::new(),
        })
    }

    // ----- witnesses and probes ------------------------------------------

    /// Polysets standing in for an arbitrary element of `𝒫`, and whether
    /// they exhaust it.
    pub fn star_witnesses(&self) -> (Vec<Polyset>, bool) {
        let o1 = ir::observer("o", 1);
        let o2 = ir::observer("o", 2);
        let f1 = ir::observer("f", 1);
        match self.structure {
            Structure::Simple => (vec![Polyset::Empty, Polyset::Full], true),
            Structure::Generated => {
                let c = self.core();
                let mut two = c.clone();
                two.extend([o1.clone(), o2]);
                let mut one = c.clone();
                one.push(o1);
                (
                    vec![
                        Polyset::Empty,
                        Polyset::Full,
                        Polyset::Finite(c),
                        Polyset::Finite(two),
                        Polyset::Closure {
                            gens: one,
                            funs: vec![f1],
                        },
                    ],
                    false,
                )
            }
            Structure::Full => {
                let mut v = vec![
                    Polyset::Empty,
                    Polyset::Full,
                    Polyset::Finite(vec![o1.clone(), o2]),
                    Polyset::Closure {
                        gens: vec![o1],
                        funs: vec![f1],
                    },
                ];
                if self.cfg.has_refl() {
                    v.push(Polyset::Finite(vec![UTerm::refl()]));
                }
                (v, false)
            }
            Structure::PowerHnf => (
                vec![
                    Polyset::Empty,
                    Polyset::Full,
                    Polyset::Finite(vec![o1.clone(), o2]),
                    Polyset::Closure {
                        gens: vec![o1],
                        funs: vec![f1],
                    },
                    Polyset::Hnf,
                ],
                false,
            ),
            Structure::Pi => (vec![Polyset::Empty, Polyset::Full], true),
        }
    }

    /// Elements standing in for an arbitrary element of `𝒱(A)`.
    pub fn kind_witnesses(&self, k: &KindIr) -> (Vec<Val>, bool) {
        let (stars, complete) = self.star_witnesses();
        let arity = k.arity();
        if arity == 0 {
            return (stars.into_iter().map(Val::Set).collect(), complete);
        }
        let mut out: Vec<Val> = stars
            .into_iter()
            .map(|s| {
                let mut v = Val::Set(s);
                for _ in 0..arity {
                    v = Val::Fam(Fam::Const(Arc::new(v)));
                }
                v
            })
            .collect();
        for p in &self.witnesses {
            out.push(Val::Fam(Fam::Pred {
                pred: p.clone(),
                arity,
                args: Vec::new(),
            }));
        }
        (out, false)
    }

    fn candidates(&self) -> Vec<UTerm> {
        let mut v = Vec::new();
        if self.cfg.has_refl() {
            v.push(UTerm::refl());
        }
        v.extend([UTerm::i(), UTerm::k(), UTerm::k_star()]);
        for s in &self.samples {
            if !v.contains(s) {
                v.push(s.clone());
            }
        }
        v
    }

    /// Exact members of `x` to test a dependent product on, and whether
    /// they exhaust `x`.
    pub fn probes(&self, x: &Polyset, depth: usize) -> (Vec<UTerm>, bool) {
        match x {
            Polyset::Empty => (Vec::new(), true),
            Polyset::Finite(s) => (s.clone(), true),
            Polyset::Closure { gens, funs } => {
                if funs.is_empty() {
                    return (gens.clone(), true);
                }
                let mut v = gens.clone();
                for f in funs {
                    for g in gens {
                        v.push(UTerm::app(f.clone(), g.clone()));
                    }
                }
                (v, false)
            }
            Polyset::Full | Polyset::Hnf => (vec![self.fresh("p")], false),
            Polyset::Id(_, a, b) if self.id_closed_form() => match weca::weca_eq(a, b, &self.cfg) {
                Answer::Yes => (vec![UTerm::refl()], true),
                Answer::No => (Vec::new(), true),
                Answer::Unknown => (Vec::new(), false),
            },
            _ => {
                let mut v = Vec::new();
                if let Polyset::Prod(dom, Fam::Const(cod)) = x {
                    if let (Polyset::Closure { funs, .. }, Val::Set(c2)) =
                        (dom.as_ref(), cod.as_ref())
                    {
                        if dom.same_as(c2, &self.cfg) {
                            v.extend(funs.iter().cloned());
                        }
                    }
                }
                if depth < MAX_DEPTH {
                    for c in self.candidates() {
                        if self.member_at(&c, x, depth + 1).is_exact_yes() && !v.contains(&c) {
                            v.push(c);
                        }
                    }
                }
                (v, false)
            }
        }
    }

    // ----- membership -----------------------------------------------------

    /// Three-valued membership of an element in a polyset.
    pub fn member(&self, e: &UTerm, x: &Polyset) -> Verdict {
        self.member_at(e, x, 0)
    }

    fn member_at(&self, e: &UTerm, x: &Polyset, depth: usize) -> Verdict {
        if depth > MAX_DEPTH {
            return Verdict::unknown();
        }
        let cfg = &self.cfg;
        match x {
            Polyset::Empty => Verdict::no(),
            Polyset::Full => Verdict::yes(),
            Polyset::Finite(s) => match weca::normalize(e, cfg) {
                Ok(n) => Verdict::of(Answer::from_bool(s.contains(&n))),
                Err(_) => Verdict::unknown(),
            },
            Polyset::Closure { gens, funs } => match weca::normalize(e, cfg) {
                Ok(mut n) => loop {
                    if gens.contains(&n) {
                        return Verdict::yes();
                    }
                    match n {
                        UTerm::App(f, a) if funs.contains(&f) => n = (*a).clone(),
                        _ => return Verdict::no(),
                    }
                },
                Err(_) => Verdict::unknown(),
            },
            Polyset::Hnf => match weca::head_normalize(e, cfg) {
                Ok(_) => Verdict::yes(),
                Err(_) => Verdict::unknown(),
            },
            Polyset::Undetermined(_) | Polyset::Abstract(..) => Verdict::unknown(),
            Polyset::Id(_, a, b) => self.id_member(e, a, b),
            Polyset::Sum(dom, fam) => {
                let p1 = UTerm::app(UTerm::Const(UConst::Proj1), e.clone());
                let p1 = weca::normalize(&p1, cfg).unwrap_or(p1);
                let first = self.member_at(&p1, dom, depth + 1);
                if first.answer == Answer::No {
                    return first;
                }
                let p2 = UTerm::app(UTerm::Const(UConst::Proj2), e.clone());
                let second = self.member_at(&p2, &self.apply_set(fam, &p1), depth + 1);
                first.and(second)
            }
            Polyset::Prod(dom, fam) => {
                if self.is_empty_at(dom, depth + 1).answer == Answer::Yes {
                    return Verdict::yes();
                }
                if self.prove(e, x) {
                    return Verdict::yes();
                }
                let (probes, complete) = self.probes(dom, depth + 1);
                let mut acc = Verdict::yes();
                for t in &probes {
                    let r = self.member_at(
                        &UTerm::app(e.clone(), t.clone()),
                        &self.apply_set(fam, t),
                        depth + 1,
                    );
                    if r.answer == Answer::No {
                        return r;
                    }
                    acc = acc.and(r);
                }
                if complete {
                    acc
                } else if acc.answer == Answer::Yes && !probes.is_empty() {
                    acc.flagged(Flag::Sampled)
                } else {
                    Verdict::unknown()
                }
            }
            Polyset::Inter(k, body, env) => {
                if self.prove(e, x) {
                    return Verdict::yes();
                }
                let (ws, complete) = self.kind_witnesses(k);
                let mut acc = Verdict::yes();
                for w in ws {
                    let inst = self.eval_set(body, &env.push(Slot::Con(w)));
                    let r = self.member_at(e, &inst, depth + 1);
                    if r.answer == Answer::No {
                        return r;
                    }
                    acc = acc.and(r);
                }
                if complete {
                    acc
                } else {
                    acc.flagged(Flag::WitnessFamily)
                }
            }
        }
    }

    /// Membership in the interpretation of an identity type: the set
    /// `{refl}` when the endpoints are equal, `∅` when they differ.
    fn id_member(&self, e: &UTerm, a: &UTerm, b: &UTerm) -> Verdict {
        if !self.id_closed_form() {
            return Verdict::unknown();
        }
        match weca::weca_eq(a, b, &self.cfg) {
            Answer::Yes => Verdict::of(weca::weca_eq(e, &UTerm::refl(), &self.cfg)),
            Answer::No => Verdict::no(),
            Answer::Unknown => Verdict::unknown(),
        }
    }

    // ----- schematic proofs -----------------------------------------------

    /// Tries to show `e ∈ x` for all instances at once: products introduce
    /// fresh hypotheses, intersections generic polysets, and the normal form
    /// reached must be typable from the hypotheses. A `true` answer is exact;
    /// `false` means no proof was found.
    pub fn prove(&self, e: &UTerm, x: &Polyset) -> bool {
        let mut hyps = Vec::new();
        self.prove_in(e, x, &mut hyps, 0)
    }

    fn prove_in(
        &self,
        e: &UTerm,
        x: &Polyset,
        hyps: &mut Vec<(UTerm, Polyset)>,
        depth: usize,
    ) -> bool {
        if depth > 3 * MAX_DEPTH {
            return false;
        }
        match x {
            Polyset::Full => true,
            Polyset::Empty | Polyset::Undetermined(_) => false,
            Polyset::Prod(dom, fam) => {
                let h = self.fresh("h");
                hyps.push((h.clone(), (**dom).clone()));
                let target = self.apply_set(fam, &h);
                let r = self.prove_in(&UTerm::app(e.clone(), h), &target, hyps, depth + 1);
                hyps.pop();
                r
            }
            Polyset::Inter(k, body, env) => {
                let id = self.fresh_id();
                let g = match k.arity() {
                    0 => Val::Set(Polyset::Abstract(id, Vec::new())),
                    n => Val::Fam(Fam::Abstract {
                        id,
                        arity: n,
                        args: Vec::new(),
                    }),
                };
                let inst = self.eval_set(body, &env.push(Slot::Con(g)));
                self.prove_in(e, &inst, hyps, depth + 1)
            }
            Polyset::Sum(dom, fam) => {
                let p1 = UTerm::app(UTerm::Const(UConst::Proj1), e.clone());
                let Ok(p1) = weca::normalize(&p1, &self.cfg) else {
                    return false;
                };
                let p2 = UTerm::app(UTerm::Const(UConst::Proj2), e.clone());
                self.prove_in(&p1, dom, hyps, depth + 1) && {
                    let t = self.apply_set(fam, &p1);
                    self.prove_in(&p2, &t, hyps, depth + 1)
                }
            }
            _ => {
                let Ok(n) = weca::normalize(e, &self.cfg) else {
                    return false;
                };
                if self.structure == Structure::Generated && is_core(&n, &self.cfg) {
                    return self.nonempty(x, hyps);
                }
                let names = n.free_names();
                if !hyps
                    .iter()
                    .any(|(h, _)| matches!(h, UTerm::Free(m) if names.contains(m)))
                {
                    return self.member_at(&n, x, MAX_DEPTH).is_exact_yes();
                }
                self.neutral_in(&n, x, hyps, depth)
            }
        }
    }

    /// `n` is a hypothesis applied to arguments; checks the arguments
    /// against the hypothesis type and the result against `x`.
    fn neutral_in(
        &self,
        n: &UTerm,
        x: &Polyset,
        hyps: &mut Vec<(UTerm, Polyset)>,
        depth: usize,
    ) -> bool {
        let (head, args) = n.spine();
        let Some((_, ty)) = hyps.iter().rev().find(|(h, _)| h == head) else {
            return false;
        };
        let mut ty = ty.clone();
        for a in args {
            loop {
                match ty {
                    Polyset::Inter(k, body, env) if k.arity() == 0 => {
                        ty = self.eval_set(&body, &env.push(Slot::Con(Val::Set(x.clone()))));
                    }
                    _ => break,
                }
            }
            let Polyset::Prod(dom, fam) = ty else {
                return false;
            };
            if !self.prove_in(a, &dom, hyps, depth + 1) {
                return false;
            }
            ty = self.apply_set(&fam, a);
        }
        if let Polyset::Inter(k, body, env) = &ty {
            if k.arity() == 0 {
                ty = self.eval_set(body, &env.push(Slot::Con(Val::Set(x.clone()))));
            }
        }
        ty.same_as(x, &self.cfg) || matches!(x, Polyset::Full)
    }

    fn nonempty(&self, x: &Polyset, hyps: &[(UTerm, Polyset)]) -> bool {
        if matches!(x, Polyset::Full) || hyps.iter().any(|(_, t)| t.same_as(x, &self.cfg)) {
            return true;
        }
        match x {
            Polyset::Abstract(..) => false,
            _ => self
                .core()
                .first()
                .is_some_and(|c| self.member_at(c, x, MAX_DEPTH).is_exact_yes()),
        }
    }

    // ----- emptiness ------------------------------------------------------

    pub fn is_empty(&self, x: &Polyset) -> Emptiness {
        self.is_empty_at(x, 0)
    }

    fn is_empty_at(&self, x: &Polyset, depth: usize) -> Emptiness {
        if depth > MAX_DEPTH {
            return Emptiness::unknown("depth limit");
        }
        match x {
            Polyset::Empty => return Emptiness::empty("the empty polyset"),
            Polyset::Full => return Emptiness::inhabited(self.fresh("w"), "the full carrier"),
            Polyset::Finite(s) => {
                return match s.first() {
                    Some(t) => Emptiness::inhabited(t.clone(), "listed element"),
                    None => Emptiness::empty("no listed elements"),
                }
            }
            Polyset::Closure { gens, .. } => {
                return match gens.first() {
                    Some(t) => Emptiness::inhabited(t.clone(), "generator"),
                    None => Emptiness::empty("no generators"),
                }
            }
            Polyset::Hnf => return Emptiness::inhabited(UTerm::i(), "I is in head normal form"),
            Polyset::Id(_, a, b) if self.id_closed_form() => {
                return match weca::weca_eq(a, b, &self.cfg) {
                    Answer::Yes => Emptiness::inhabited(UTerm::refl(), "endpoints are equal, so refl inhabits"),
                    Answer::No => Emptiness::empty(format!(
                        "endpoints {} and {} have distinct normal forms; a family that is empty at them and full on the diagonal excludes every element",
                        weca::print(&weca::normalize(a, &self.cfg).unwrap_or(a.clone()), true),
                        weca::print(&weca::normalize(b, &self.cfg).unwrap_or(b.clone()), true)
                    )),
                    Answer::Unknown => Emptiness::unknown("endpoint comparison ran out of fuel"),
                }
            }
            Polyset::Prod(dom, _) if self.is_empty_at(dom, depth + 1).answer == Answer::Yes => {
                return Emptiness::inhabited(UTerm::i(), "product over an empty domain");
            }
            _ => {}
        }
        if let Some(c) = self.core().first() {
            let r = self.member_at(c, x, depth + 1);
            match r.answer {
                Answer::Yes if r.flags.is_empty() => {
                    return Emptiness::inhabited(c.clone(), format!("{} is a member", weca::print(c, true)))
                }
                Answer::No => {
                    return Emptiness::empty(format!(
                        "{} is not a member, and every nonempty polyset of the generated structure contains it",
                        weca::print(c, true)
                    ))
                }
                _ => {}
            }
        }
        for c in self.candidates() {
            if self.member_at(&c, x, depth + 1).is_exact_yes() {
                return Emptiness::inhabited(
                    c.clone(),
                    format!("{} is a member", weca::print(&c, true)),
                );
            }
        }
        Emptiness::unknown("no member found and no refutation available")
    }

    // ----- derived operations ---------------------------------------------

    /// Validity of the Leibniz equality `t = q` in the model: equality of
    /// the interpretations in the term model.
    pub fn leibniz_valid(&self, ctx: &Context, t: &Term, q: &Term) -> Result<Answer, ModelError> {
        leibniz_valid(self.globals, &self.cfg, ctx, t, q)
    }

    /// Closed normal forms of size at most `bound` that are members of `x`.
    pub fn enumerate_members(&self, x: &Polyset, bound: usize) -> Enumeration {
        let mut out = Enumeration::default();
        if x.is_exactly_empty() {
            return out;
        }
        let mut nf = NormalForms::new(&self.cfg);
        for t in nf.up_to(bound) {
            out.examined += 1;
            match self.member(&t, x).answer {
                Answer::Yes => out.members.push(t),
                Answer::Unknown => out.unknown.push(t),
                Answer::No => {}
            }
        }
        out
    }
}

#[cfg(test)]
mod tests;
