use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{compare_nf, parse_carrier_term, CheckError, Obligation, Report, Status};
use crate::model::{pi_model_decide, Flag, Model, Polyset, Pred, Structure, Val};
use crate::stdlib::Corpus;
use crate::syntax::{self, parse_term, Context, Term};
use crate::typecheck::{Checker, ExtensionFlags, DEFAULT_FUEL};
use crate::weca::{self, Answer, UTerm, WecaConfig, WecaKind};

/// A predicate family substituted for a quantified constructor variable.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    #[serde(flatten)]
    pub family: Pred,
    pub at: String,
}

/// A primitive obligation. Untyped terms may mention `[name]` for the
/// erasure of a corpus entry; sets and types are λP2 types.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Step {
    NormalFormDistinct {
        left: String,
        right: String,
    },
    NormalFormEqual {
        left: String,
        right: String,
    },
    Member {
        element: String,
        set: String,
    },
    EmptyByIdEndpoints {
        ty: String,
        left: String,
        right: String,
    },
    /// The target quantifies over a family `at`, then takes a base case, a
    /// step case and an element `point`; with the witness family the final
    /// set at `point` is empty.
    EmptyByFamily {
        at: String,
        base: String,
        step: String,
        point: String,
    },
}

/// A declarative refutation certificate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub id: String,
    pub model: Structure,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weca: Option<WecaKind>,
    #[serde(default = "default_fuel")]
    pub fuel: u64,
    pub target: String,
    #[serde(default)]
    pub witnesses: Vec<Witness>,
    #[serde(default)]
    pub samples: Vec<String>,
    #[serde(default)]
    pub steps: Vec<Step>,
    #[serde(default = "default_expect")]
    pub expect: Status,
}

fn default_fuel() -> u64 {
    DEFAULT_FUEL
}

fn default_expect() -> Status {
    Status::Reproduced
}

impl Certificate {
    pub fn with_fuel(mut self, fuel: u64) -> Self {
        self.fuel = fuel;
        self
    }
}

#[derive(Debug, Error)]
pub enum CertificateError {
    #[error("improper certificate: {0}")]
    Improper(String),
}

/// Checks a certificate against a corpus.
pub fn run_certificate(corpus: &Corpus, cert: &Certificate) -> Result<Report, CertificateError> {
    let started = Instant::now();
    let mut notes = Vec::new();
    let obs = match discharge(corpus, cert, &mut notes) {
        Ok(obs) => obs,
        Err(Failure::Improper(m)) => return Err(CertificateError::Improper(m)),
        Err(Failure::Check(e)) => vec![Obligation::undecided("set-up", e)],
    };
    Ok(Report::from_obligations(&cert.id, obs, notes, started))
}

enum Failure {
    Improper(String),
    Check(CheckError),
}

impl<E: Into<CheckError>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Check(e.into())
    }
}

fn improper<T>(m: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Improper(m.into()))
}

fn discharge(
    corpus: &Corpus,
    cert: &Certificate,
    notes: &mut Vec<String>,
) -> Result<Vec<Obligation>, Failure> {
    let target = parse_term(&cert.target)?;
    if cert.model == Structure::Pi {
        let v = pi_model_decide(corpus.globals(), &Context::new(), &target)?;
        notes.push(
            "the proof-irrelevance model validates every derivable type, so it cannot refute one"
                .into(),
        );
        return Ok(vec![Obligation::value(
            format!("⟦{}⟧ in the proof-irrelevance model", cert.target),
            "Empty",
            v.to_string(),
        )]);
    }
    let kind = cert.weca.unwrap_or(cert.model.default_weca());
    let cfg = WecaConfig::of_kind(kind).with_fuel(cert.fuel);
    let mut model = Model::new(corpus.globals(), cert.model, cfg.clone())?;
    let samples = cert
        .samples
        .iter()
        .map(|s| parse_carrier_term(corpus, s))
        .collect::<Result<Vec<_>, _>>()?;
    model.add_samples(samples.iter().cloned());
    let term = |s: &str| parse_carrier_term(corpus, s);
    let mut obs = Vec::new();
    for step in &cert.steps {
        match step {
            Step::NormalFormDistinct { left, right } => obs.push(compare_nf(
                &format!("{left} ≠ {right}"),
                &term(left)?,
                &term(right)?,
                Answer::No,
                &cfg,
            )),
            Step::NormalFormEqual { left, right } => obs.push(compare_nf(
                &format!("{left} = {right}"),
                &term(left)?,
                &term(right)?,
                Answer::Yes,
                &cfg,
            )),
            Step::Member { element, set } => {
                let x = model.interp_type(&parse_term(set)?)?;
                let v = model.member(&term(element)?, &x);
                let mut ob =
                    Obligation::answer(format!("{element} ∈ ⟦{set}⟧"), Answer::Yes, v.answer);
                ob.flags = v.flags;
                obs.push(ob);
            }
            Step::EmptyByIdEndpoints { ty, left, right } => {
                let id = parse_term(&format!("Id({ty}, {left}, {right})"))?;
                let x = model.interp_type(&id)?;
                let Polyset::Id(_, a, b) = &x else {
                    return improper(format!("Id({ty}, {left}, {right}) is not an identity set"));
                };
                obs.push(compare_nf(
                    &format!("{left} and {right} coincide"),
                    a,
                    b,
                    Answer::No,
                    &cfg,
                ));
                let e = model.is_empty(&x);
                obs.push(
                    Obligation::answer(
                        format!("⟦Id({ty}, {left}, {right})⟧ is empty"),
                        Answer::Yes,
                        e.answer,
                    )
                    .with_detail(e.evidence),
                );
            }
            Step::EmptyByFamily {
                at,
                base,
                step,
                point,
            } => {
                family_refutation(
                    corpus,
                    cert,
                    &model,
                    &target,
                    at,
                    &term(base)?,
                    &term(step)?,
                    &term(point)?,
                    &samples,
                    &mut obs,
                    notes,
                )?;
            }
        }
    }
    Ok(obs)
}

#[allow(clippy::too_many_arguments)]
fn family_refutation(
    corpus: &Corpus,
    cert: &Certificate,
    model: &Model<'_>,
    target: &Term,
    at: &str,
    base: &UTerm,
    step: &UTerm,
    point: &UTerm,
    samples: &[UTerm],
    obs: &mut Vec<Obligation>,
    notes: &mut Vec<String>,
) -> Result<(), Failure> {
    let Some(witness) = cert.witnesses.iter().find(|w| w.at == at) else {
        return improper(format!("no witness family registered at `{at}`"));
    };
    let mut ch = Checker::new(corpus.globals(), ExtensionFlags::ALL);
    match ch.whnf(target)? {
        Term::Pi(x, dom, _) if *x == *at && ch.is_kind(&Context::new(), &dom)? => {}
        _ => {
            return improper(format!(
                "the target does not quantify over a constructor `{at}`"
            ))
        }
    }
    let x = model.interp_type(target)?;
    let Polyset::Inter(k, ..) = &x else {
        return improper("the target is not a kind-indexed intersection");
    };
    if k.arity() != 1 {
        return improper(format!("`{at}` must be a unary family"));
    }
    let fam = Model::pred_family(witness.family.clone(), 1);
    let Val::Fam(f) = &fam else {
        return improper("the witness is not a family");
    };
    let shown = |t: &UTerm| weca::print(t, true);

    let at_point = model.apply_set(f, point);
    let e = model.is_empty(&at_point);
    if e.answer != Answer::Yes {
        return improper(format!(
            "{} is not empty at {} (got {})",
            witness.family.label(),
            shown(point),
            at_point
        ));
    }
    obs.push(
        Obligation::answer(
            format!("{}({}) is empty", witness.family.label(), shown(point)),
            Answer::Yes,
            e.answer,
        )
        .with_detail(format!(
            "{} at {} = {}",
            witness.family.label(),
            shown(point),
            at_point
        )),
    );

    let inst = model.instantiate(&x, fam.clone()).expect("intersection");
    let Polyset::Prod(d1, f1) = inst else {
        return improper("no base case after the family");
    };
    let v = model.member(base, &d1);
    let mut ob = Obligation::answer(format!("base {} ∈ D1", shown(base)), Answer::Yes, v.answer)
        .with_detail(format!("D1 = {d1}"));
    ob.flags = v.flags;
    obs.push(ob);

    let Polyset::Prod(d2, f2) = model.apply_set(&f1, base) else {
        return improper("no step case after the base case");
    };
    obs.push(step_obligation(model, step, &d2, samples));

    let Polyset::Prod(xs, fc) = model.apply_set(&f2, step) else {
        return improper("no quantified element after the step case");
    };
    let v = model.member(point, &xs);
    let mut ob = Obligation::answer(
        format!("point {} is in the domain", shown(point)),
        Answer::Yes,
        v.answer,
    );
    ob.flags = v.flags;
    obs.push(ob);
    let concl = model.apply_set(&fc, point);
    let e = model.is_empty(&concl);
    obs.push(
        Obligation::answer(
            format!("conclusion at {} is empty", shown(point)),
            Answer::Yes,
            e.answer,
        )
        .with_detail(format!("conclusion set = {concl}; {}", e.evidence)),
    );
    notes.push(format!(
        "any m ∈ ⟦{}⟧ would put m·{}·{}·{} into the empty conclusion set, so ⟦{}⟧ = ∅",
        syntax::print(target),
        shown(base),
        shown(step),
        shown(point),
        cert.target
    ));
    Ok(())
}

/// Checks the step element on the sample elements of the domain, with a
/// fresh element for the hypothesis.
fn step_obligation(model: &Model<'_>, step: &UTerm, d2: &Polyset, samples: &[UTerm]) -> Obligation {
    let label = format!("step {} ∈ D2 on the samples", weca::print(step, true));
    let Polyset::Prod(ydom, fy) = d2 else {
        return Obligation::undecided(label, format!("D2 = {d2} is not a product"));
    };
    let mut lines = Vec::new();
    let mut acc = Answer::Yes;
    let hyp = UTerm::free("#h");
    for y in samples {
        let ys = weca::print(y, true);
        let m = model.member(y, ydom);
        if m.answer == Answer::No {
            lines.push(format!("{ys}: not in the domain"));
            continue;
        }
        if !m.is_exact_yes() {
            lines.push(format!("{ys}: domain membership {m}"));
            acc = acc.and(Answer::Unknown);
            continue;
        }
        let inner = model.apply_set(fy, y);
        let Polyset::Prod(hdom, fh) = &inner else {
            lines.push(format!("{ys}: {inner} is not a product"));
            acc = acc.and(Answer::Unknown);
            continue;
        };
        if model.is_empty(hdom).answer == Answer::Yes {
            lines.push(format!("{ys}: hypothesis set {hdom} is empty, vacuous"));
            continue;
        }
        let res = model.apply_set(fh, &hyp);
        let r = model.member(&UTerm::apps(step.clone(), [y.clone(), hyp.clone()]), &res);
        lines.push(format!(
            "{ys}: hypothesis set {hdom}, result set {res}, membership {r}"
        ));
        acc = acc.and(r.answer);
    }
    Obligation::answer(label, Answer::Yes, acc)
        .with_flag(Flag::Sampled)
        .with_detail(lines.join("\n"))
}
