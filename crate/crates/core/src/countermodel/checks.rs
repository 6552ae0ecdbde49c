use std::time::Instant;

use super::certificate::{run_certificate, Certificate, CertificateError};
use super::{compare_nf, erase_src, CheckError, Obligation, Report};
use crate::model::{eval_pred, pi_model_decide, Flag, Model, Polyset, Pred, Structure, Val};
use crate::stdlib::Corpus;
use crate::syntax::{self, parse_term, parse_term_in, Context, Term};
use crate::typecheck::{Checker, ExtensionFlags};
use crate::weca::{
    self, parse_uterm_plain, Answer, Eraser, NormalForms, UConst, UTerm, WecaConfig,
};

type Outcome = Result<(Vec<Obligation>, Vec<String>), CheckError>;

fn finish(id: &str, started: Instant, r: Outcome) -> Report {
    match r {
        Ok((obs, notes)) => Report::from_obligations(id, obs, notes, started),
        Err(e) => Report::from_obligations(
            id,
            vec![Obligation::undecided("set-up", e)],
            Vec::new(),
            started,
        ),
    }
}

const BISIMULATION_FACTS: [(&str, &str); 4] = [
    ("hd s1", "hd s2"),
    ("hd (tl s1)", "hd (tl s2)"),
    ("tl (tl s1)", "s1"),
    ("tl (tl s2)", "s2"),
];

/// Streams: `s1` and `s2` are bisimilar, yet their erasures have distinct
/// βη-normal forms, so their Leibniz equality fails in the term model.
pub fn check_stream_coinduction(corpus: &Corpus, fuel: u64) -> Report {
    let started = Instant::now();
    let run = || -> Outcome {
        let mut er = Eraser::new(corpus.globals());
        let beta = WecaConfig::beta().with_fuel(fuel);
        let betaeta = WecaConfig::betaeta().with_fuel(fuel);
        let mut obs = Vec::new();
        for (l, r) in BISIMULATION_FACTS {
            let a = erase_src(&mut er, l)?;
            let b = erase_src(&mut er, r)?;
            obs.push(Obligation::answer(
                format!("{l} =β {r}"),
                Answer::Yes,
                weca::weca_eq(&a, &b, &beta),
            ));
        }
        let s1 = erase_src(&mut er, "s1")?;
        let s2 = erase_src(&mut er, "s2")?;
        obs.push(compare_nf(
            "βη-normal forms of s1 and s2 coincide",
            &s1,
            &s2,
            Answer::No,
            &betaeta,
        ));
        let notes = vec![
            "the relation {(s1, s2), (s2, s1)} is a bisimulation by the four facts above".into(),
            "distinct βη-normal forms make eq_stream s1 s2 invalid in the term model, so coind_stream is not derivable".into(),
        ];
        Ok((obs, notes))
    };
    finish("thm-4.2", started, run())
}

/// The same argument carried out on typed normal forms, without a model.
pub fn check_stream_coinduction_syntactic(corpus: &Corpus, fuel: u64) -> Report {
    let started = Instant::now();
    let run = || -> Outcome {
        let mut ch = Checker::new(corpus.globals(), ExtensionFlags::ALL).with_fuel(fuel);
        let mut obs = Vec::new();
        for (l, r) in BISIMULATION_FACTS {
            let a = parse_term(l)?;
            let b = parse_term(r)?;
            obs.push(match ch.convertible(&a, &b) {
                Ok(c) => {
                    Obligation::answer(format!("{l} ≡ {r}"), Answer::Yes, Answer::from_bool(c))
                }
                Err(e) => Obligation::undecided(format!("{l} ≡ {r}"), e),
            });
        }
        let step = "β-normal forms of s1 and s2 coincide";
        let s1 = ch.normalize(&Term::constant("s1"));
        let s2 = ch.normalize(&Term::constant("s2"));
        obs.push(match (s1, s2) {
            (Ok(a), Ok(b)) => {
                Obligation::answer(step, Answer::No, Answer::from_bool(a == b)).with_detail(
                    format!("s1 ↦ {}\ns2 ↦ {}", syntax::print(&a), syntax::print(&b)),
                )
            }
            (Err(e), _) | (_, Err(e)) => Obligation::undecided(step, e),
        });
        Ok((
            obs,
            vec!["normal forms are unique, so s1 and s2 are not convertible".into()],
        ))
    };
    finish("thm-4.2-syntactic", started, run())
}

/// Quotients: the lifted identity separates the classes of `true` and
/// `false`, so a class map cannot be interpreted as a constant.
pub fn check_parametric_quotient(corpus: &Corpus, cfg: &WecaConfig) -> Report {
    let started = Instant::now();
    let run = || -> Outcome {
        let mut er = Eraser::new(corpus.globals());
        let mut obs = Vec::new();
        let names = [syntax::name("x")];
        let lhs = parse_term_in("qf_hat (cls_bool x)", &names)?;
        let rhs = parse_term_in("qf x", &names)?;
        let mut ch = Checker::new(corpus.globals(), ExtensionFlags::ALL).with_fuel(cfg.fuel);
        let step = "qf_hat (cls_bool x) ≡ qf x";
        obs.push(match ch.convertible(&lhs, &rhs) {
            Ok(c) => Obligation::answer(step, Answer::Yes, Answer::from_bool(c)),
            Err(e) => Obligation::undecided(step, e),
        });
        let k = UTerm::k();
        let ks = UTerm::k_star();
        let at_true = erase_src(&mut er, "qf_hat (cls_bool true)")?;
        let at_false = erase_src(&mut er, "qf_hat (cls_bool false)")?;
        obs.push(compare_nf(
            "qf_hat (cls_bool true) normalizes to K",
            &at_true,
            &k,
            Answer::Yes,
            cfg,
        ));
        obs.push(compare_nf(
            "qf_hat (cls_bool false) normalizes to K*",
            &at_false,
            &ks,
            Answer::Yes,
            cfg,
        ));
        obs.push(compare_nf("K and K* coincide", &k, &ks, Answer::No, cfg));
        let p_true = erase_src(&mut er, "cls_param bool true")?;
        let p_false = erase_src(&mut er, "cls_param bool false")?;
        obs.push(compare_nf(
            "cls_param at true and false coincide",
            &p_true,
            &p_false,
            Answer::No,
            cfg,
        ));
        let notes = vec![
            "a class map satisfying soundness for the total relation is constant in the term model".into(),
            "constancy would give qf_hat (cls true) = qf_hat (cls false), hence K = K*, which the normal forms refute"
                .into(),
        ];
        Ok((obs, notes))
    };
    finish("thm-4.3", started, run())
}

/// Identity proofs: in the generated model every inhabitant of an identity
/// set is `refl`.
/// Type, endpoints and the context they live in.
type EndpointCase<'a> = (&'a str, &'a str, &'a str, &'a [(&'a str, &'a str)]);

pub fn check_uip(corpus: &Corpus, fuel: u64, bound: usize) -> Report {
    let started = Instant::now();
    let run = || -> Outcome {
        let cfg = WecaConfig::lambda_id().with_fuel(fuel);
        let model = Model::new(corpus.globals(), Structure::Generated, cfg.clone())?;
        let mut obs = Vec::new();
        let pairs: [EndpointCase; 3] = [
            ("nat", "O", "O", &[]),
            ("bool", "true", "false", &[]),
            ("nat", "x", "x", &[("x", "nat")]),
        ];
        let candidates = NormalForms::new(&cfg).up_to(bound);
        let observer = UTerm::free("#t");
        for (ty, a, b, decls) in pairs {
            let ctx = Context::parse(decls)?;
            let names = ctx.names();
            let label = format!("Id({ty}, {a}, {b})");
            let id_ty = parse_term_in(&label, &names)?;
            let env = model.default_env(&ctx)?;
            let Val::Set(set) = model.interp_con(&ctx, &id_ty, &env)? else {
                obs.push(Obligation::undecided(
                    &label,
                    "not interpreted as a polyset",
                ));
                continue;
            };
            let ea = model.erase(&ctx, &parse_term_in(a, &names)?)?;
            let eb = model.erase(&ctx, &parse_term_in(b, &names)?)?;
            match weca::weca_eq(&ea, &eb, &cfg) {
                Answer::No => {
                    let e = model.is_empty(&set);
                    obs.push(
                        Obligation::answer(format!("{label} is empty"), Answer::Yes, e.answer)
                            .with_detail(e.evidence),
                    );
                }
                Answer::Unknown => obs.push(Obligation::undecided(
                    &label,
                    "endpoint comparison ran out of fuel",
                )),
                Answer::Yes => {
                    let en = model.enumerate_members(&set, bound);
                    let step = format!("members of {label} up to size {bound}");
                    if en.unknown.is_empty() {
                        obs.push(Obligation::value(step, "{refl}", show_set(&en.members)));
                    } else {
                        obs.push(Obligation::undecided(
                            step,
                            format!("{} undecided candidates", en.unknown.len()),
                        ));
                    }
                    let mut survivors = Vec::new();
                    let mut undecided = 0;
                    for p in &candidates {
                        let c = eval_pred(&Pred::IsRefl, p, &cfg, &model.core());
                        let j = UTerm::apps(
                            UTerm::Const(UConst::J),
                            [observer.clone(), ea.clone(), eb.clone(), p.clone()],
                        );
                        match model.member(&j, &c).answer {
                            Answer::Yes => survivors.push(p.clone()),
                            Answer::Unknown => undecided += 1,
                            Answer::No => {}
                        }
                    }
                    let step =
                        format!("p of size ≤ {bound} with J t a b p ∈ C(a, b, p) for {label}");
                    let ob = if undecided > 0 {
                        Obligation::undecided(step, format!("{undecided} undecided candidates"))
                    } else {
                        Obligation::value(step, "{refl}", show_set(&survivors))
                    };
                    obs.push(ob.with_detail(format!(
                        "C = IsRefl on the proof argument, t = {} ∈ Π x. C(x, x, refl); {} candidates examined",
                        weca::print(&observer, false),
                        candidates.len()
                    )));
                }
            }
        }
        let mut ch = Checker::new(corpus.globals(), ExtensionFlags::ALL);
        let mut er = Eraser::new(corpus.globals());
        for entry in corpus.entries() {
            if !matches!(ch.whnf(&entry.ty), Ok(Term::Id { .. })) {
                continue;
            }
            let e = er.erase_closed(&Term::constant(&entry.name))?;
            let set = model.interp_type(&entry.ty)?;
            let v = model.member(&e, &set);
            obs.push(
                Obligation::answer(
                    format!("{} ∈ ⟦{}⟧", entry.name, syntax::print(&entry.ty)),
                    Answer::Yes,
                    v.answer,
                )
                .with_detail(format!(
                    "{} erases to {}",
                    entry.name,
                    weca::print(&e, true)
                )),
            );
        }
        Ok((
            obs,
            vec!["every identity proof equals refl in the model, so UIP is valid there".into()],
        ))
    };
    finish("lem-5.7", started, run())
}

fn show_set(v: &[UTerm]) -> String {
    let mut s: Vec<String> = v.iter().map(|t| weca::print(t, true)).collect();
    s.sort();
    format!("{{{}}}", s.join(", "))
}

/// The five closed normal forms that make up the interpretation of `bool`
/// in the generated model.
pub fn bool_prime() -> Vec<UTerm> {
    ["K", "K*", "refl", r"\x. refl", r"\x y. refl"]
        .into_iter()
        .map(|s| parse_uterm_plain(s).expect("literal"))
        .collect()
}

/// Function extensionality: `funext_f` and `funext_g` agree on every
/// element of the interpretation of `bool` but have distinct normal forms.
pub fn check_funext_fails(corpus: &Corpus, fuel: u64) -> Report {
    let started = Instant::now();
    let run = || -> Outcome {
        let cfg = WecaConfig::lambda_id().with_fuel(fuel);
        let model = Model::new(corpus.globals(), Structure::Generated, cfg.clone())?;
        let mut er = Eraser::new(corpus.globals());
        let mut obs = Vec::new();
        let bools = bool_prime();
        let bool_set = model.interp_type(&Term::constant("bool"))?;
        let en = model.enumerate_members(&bool_set, 9);
        let step = "members of ⟦bool⟧ up to size 9";
        obs.push(if en.unknown.is_empty() {
            Obligation::value(step, show_set(&bools), show_set(&en.members))
        } else {
            Obligation::undecided(step, format!("{} undecided candidates", en.unknown.len()))
        });
        let f = erase_src(&mut er, "funext_f")?;
        let g = erase_src(&mut er, "funext_g")?;
        let pointwise = model.interp_type(&Term::constant("pointwise_fg"))?;
        let Polyset::Prod(dom, fam) = &pointwise else {
            return Ok((
                vec![Obligation::undecided("⟦pointwise_fg⟧", "not a product")],
                Vec::new(),
            ));
        };
        for b in &bools {
            let shown = weca::print(b, true);
            let v = model.member(b, dom);
            let mut ob = Obligation::answer(format!("{shown} ∈ ⟦bool⟧"), Answer::Yes, v.answer);
            ob.flags = v.flags;
            obs.push(ob);
            let fb = UTerm::app(f.clone(), b.clone());
            let gb = UTerm::app(g.clone(), b.clone());
            obs.push(compare_nf(
                &format!("f·({shown}) = g·({shown})"),
                &fb,
                &gb,
                Answer::Yes,
                &cfg,
            ));
            let id = model.apply_set(fam, b);
            let m = model.member(&UTerm::refl(), &id);
            obs.push(
                Obligation::answer(format!("refl ∈ {id}"), Answer::Yes, m.answer)
                    .with_flag(Flag::Sampled)
                    .with_detail(
                        "the domain is checked element by element against the enumerated ⟦bool⟧",
                    ),
            );
        }
        obs.push(compare_nf("f and g coincide", &f, &g, Answer::No, &cfg));
        let e = model.is_empty(&model.interp_type(&Term::constant("fg_equal"))?);
        obs.push(
            Obligation::answer("⟦fg_equal⟧ is empty", Answer::Yes, e.answer).with_detail(format!(
                "{}\nwitness D(h, h', p) = A if h = h', ∅ otherwise; D(h, h, refl) = A and D(f, g, p) = ∅",
                e.evidence
            )),
        );
        let notes = vec![
            "the pointwise identity set contains refl while the identity set of f and g is empty, so funext_bool fails at f, g"
                .into(),
        ];
        Ok((obs, notes))
    };
    finish("lem-5.8", started, run())
}

/// Induction: runs an induction refutation certificate.
pub fn check_no_induction(corpus: &Corpus, cert: &Certificate) -> Result<Report, CertificateError> {
    run_certificate(corpus, cert)
}

/// The proof-irrelevance model separates the empty type from data types.
pub fn check_pi_consistency(corpus: &Corpus) -> Report {
    let started = Instant::now();
    let run = || -> Outcome {
        let mut obs = Vec::new();
        for (src, expected) in [
            ("Πα:*. α", "Empty"),
            ("nat", "Inhabited"),
            ("bool", "Inhabited"),
            ("ind_nat", "Inhabited"),
        ] {
            let t = parse_term(src)?;
            obs.push(
                match pi_model_decide(corpus.globals(), &Context::new(), &t) {
                    Ok(v) => Obligation::value(format!("⟦{src}⟧"), expected, v.to_string()),
                    Err(e) => Obligation::undecided(format!("⟦{src}⟧"), e),
                },
            );
        }
        Ok((obs, Vec::new()))
    };
    finish("pi-consistency", started, run())
}

/// Every corpus judgment has an inhabited classifier in the
/// proof-irrelevance model.
pub fn check_soundness_spot(corpus: &Corpus) -> Report {
    let started = Instant::now();
    let run = || -> Outcome {
        let mut ch = Checker::new(corpus.globals(), ExtensionFlags::ALL);
        let mut obs = Vec::new();
        for entry in corpus.entries() {
            if ch.is_kind(&Context::new(), &entry.ty)? {
                continue;
            }
            let step = format!("{} : {}", entry.name, syntax::print(&entry.ty));
            obs.push(
                match pi_model_decide(corpus.globals(), &Context::new(), &entry.ty) {
                    Ok(v) => Obligation::value(step, "Inhabited", v.to_string()),
                    Err(e) => Obligation::undecided(step, e),
                },
            );
        }
        Ok((obs, Vec::new()))
    };
    finish("soundness-spot", started, run())
}
