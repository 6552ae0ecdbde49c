use super::*;
use crate::stdlib::{church_numeral, Corpus};
use crate::syntax::{parse_term, parse_term_in};
use crate::weca::{parse_uterm_plain, weca_eq};

fn corpus() -> Corpus {
    Corpus::load().unwrap()
}

fn t(s: &str) -> Term {
    parse_term(s).unwrap_or_else(|e| panic!("{s}: {e}"))
}

fn u(s: &str) -> UTerm {
    parse_uterm_plain(s).unwrap_or_else(|e| panic!("{s}: {e}"))
}

fn generated(c: &Corpus) -> Model<'_> {
    Model::standard(c.globals(), Structure::Generated).unwrap()
}

#[test]
fn pi_kind_values_are_finite() {
    let c = corpus();
    let mut pi = PiModel::new(c.globals());
    assert_eq!(pi.kind_values(&Term::star()).unwrap().len(), 2);
    assert_eq!(pi.kind_values(&t("nat → *")).unwrap().len(), 2);
    assert_eq!(
        pi.kind_values(&t("Πx:bot. *")).unwrap(),
        vec![PiVal::Fun(None)]
    );
    assert!(matches!(
        pi.kind_values(&t("nat")),
        Err(ModelError::NotAKind(_))
    ));
}

#[test]
fn pi_interpretations() {
    let c = corpus();
    let mut pi = PiModel::new(c.globals());
    assert_eq!(pi.interp(&t("Πα:*. α")).unwrap(), PiVal::Set(false));
    assert_eq!(pi.interp(&t("nat")).unwrap(), PiVal::Set(true));
    assert_eq!(pi.interp(&t("bot → nat")).unwrap(), PiVal::Set(true));
    assert_eq!(pi.interp(&t("nat → bot")).unwrap(), PiVal::Set(false));
}

#[test]
fn pi_model_decisions() {
    let c = corpus();
    let g = c.globals();
    let e = Context::new();
    assert_eq!(
        pi_model_decide(g, &e, &t("Πα:*. α")).unwrap(),
        PiVerdict::Empty
    );
    for ty in ["nat", "bool", "ind_nat", "coind_stream", "Πα:*. α → α"] {
        assert_eq!(
            pi_model_decide(g, &e, &t(ty)).unwrap(),
            PiVerdict::Inhabited,
            "{ty}"
        );
    }
    assert!(matches!(
        pi_model_decide(g, &e, &Term::star()),
        Err(ModelError::NotAType(_))
    ));
    let ctx = Context::parse(&[("α", "*")]).unwrap();
    let open = parse_term_in("α", &ctx.names()).unwrap();
    assert_eq!(pi_model_decide(g, &ctx, &open).unwrap(), PiVerdict::Empty);
    let ctx = Context::parse(&[("x", "bot")]).unwrap();
    assert_eq!(
        pi_model_decide(g, &ctx, &t("bot")).unwrap(),
        PiVerdict::Inhabited
    );
}

#[test]
fn structures_and_their_term_models() {
    let c = corpus();
    let g = c.globals();
    for s in Structure::ALL {
        assert_eq!(s.as_str().parse::<Structure>().unwrap(), s);
    }
    assert!("nope".parse::<Structure>().is_err());
    assert!(matches!(
        Model::standard(g, Structure::Pi),
        Err(ModelError::Unsupported(_))
    ));
    assert!(Model::new(g, Structure::PowerHnf, WecaConfig::lambda_id()).is_err());
    assert!(Model::new(g, Structure::Simple, WecaConfig::one()).is_err());
    assert_eq!(generated(&c).weca().kind, WecaKind::LambdaId);
}

#[test]
fn membership_in_the_generated_model() {
    let c = corpus();
    let m = generated(&c);
    let nat = m.interp_type(&t("nat")).unwrap();
    assert!(m.member(&UTerm::refl(), &nat).is_exact_yes());
    assert!(m.member(&u(r"\x f. f x"), &nat).is_exact_yes());
    assert_eq!(m.member(&UTerm::k(), &Polyset::Empty).answer, Answer::No);
    assert_eq!(m.member(&u(r"\x f. f"), &nat).answer, Answer::No);
}

#[test]
fn identity_sets_have_the_closed_form() {
    let c = corpus();
    let m = generated(&c);
    let same = m.interp_type(&t("Id(nat, O, O)")).unwrap();
    assert!(m.member(&UTerm::refl(), &same).is_exact_yes());
    assert_eq!(m.member(&UTerm::i(), &same).answer, Answer::No);
    let found = m.enumerate_members(&same, 7);
    assert!(found.unknown.is_empty());
    assert_eq!(found.members, vec![UTerm::refl()]);
    for p in &found.members {
        assert_eq!(weca_eq(p, &UTerm::refl(), m.weca()), Answer::Yes);
    }
    let apart = m.interp_type(&t("Id(bool, true, false)")).unwrap();
    assert_eq!(m.is_empty(&apart).answer, Answer::Yes);
}

#[test]
fn emptiness_with_evidence() {
    let c = corpus();
    let m = generated(&c);
    let fg = m.interp_type(&t("fg_equal")).unwrap();
    let e = m.is_empty(&fg);
    assert_eq!(e.answer, Answer::Yes, "{}", e.evidence);
    assert!(e.witness.is_none());
    let bool_set = m.interp_type(&t("bool")).unwrap();
    let e = m.is_empty(&bool_set);
    assert_eq!(e.answer, Answer::No);
    assert_eq!(e.witness, Some(UTerm::refl()));
    let unknown = Polyset::Prod(
        Arc::new(Polyset::Undetermined("test".into())),
        Fam::Const(Arc::new(Val::Set(Polyset::Empty))),
    );
    assert_eq!(m.is_empty(&unknown).answer, Answer::Unknown);
}

#[test]
fn vacuous_products_contain_everything() {
    let c = corpus();
    let m = generated(&c);
    let x = Polyset::Prod(
        Arc::new(Polyset::Empty),
        Fam::Const(Arc::new(Val::Set(Polyset::Empty))),
    );
    for e in ["refl", r"\x. x x", "K", "w", r"(\x. x x) (\x. x x)"] {
        assert!(m.member(&u(e), &x).is_exact_yes(), "{e}");
    }
    let ty = m.interp_type(&t("bot → bot")).unwrap();
    assert!(m.member(&UTerm::i(), &ty).is_exact_yes());
}

#[test]
fn dependent_sums_follow_their_components() {
    let c = corpus();
    let m = generated(&c);
    let sum = m.interp_type(&t("Σx:nat. Id(nat, x, x)")).unwrap();
    let Polyset::Sum(dom, fam) = &sum else {
        panic!("{sum}")
    };
    let cases = [
        (u(r"\x f. f x"), UTerm::refl()),
        (u(r"\x f. f x"), UTerm::k()),
        (u(r"\x f. f"), UTerm::refl()),
        (UTerm::refl(), UTerm::refl()),
    ];
    for (a, b) in cases {
        let p = UTerm::apps(UTerm::konst(UConst::Pair), [a.clone(), b.clone()]);
        let whole = m.member(&p, &sum).answer;
        let parts = m
            .member(&a, dom)
            .answer
            .and(m.member(&b, &m.apply_set(fam, &a)).answer);
        assert_eq!(
            whole,
            parts,
            "pair {} {}",
            weca::print(&a, true),
            weca::print(&b, true)
        );
    }
    assert!(m.member(&UTerm::refl(), &sum).is_exact_yes());
}

#[test]
fn improper_sigma_families_are_rejected() {
    let c = corpus();
    let m = generated(&c);
    let r = m.interp_type(&t("Σx:nat. Id(nat, x, O)"));
    assert!(matches!(r, Err(ModelError::ImproperFamily(_))), "{r:?}");
}

#[test]
fn generated_polysets_contain_the_core_or_are_empty() {
    let c = corpus();
    let m = generated(&c);
    let types = [
        "nat",
        "bool",
        "Stream",
        "ex_endo",
        "top",
        "bot",
        "nat → bool",
        "fg_equal",
        "Id(nat, O, O)",
        "Id(bool, true, false)",
        "Σx:nat. Id(nat, x, x)",
        "eq_nat O O",
    ];
    for ty in types {
        let x = m.interp_type(&t(ty)).unwrap();
        let has_core = m.member(&UTerm::refl(), &x).answer == Answer::Yes;
        let empty = m.is_empty(&x).answer == Answer::Yes;
        assert!(has_core ^ empty, "{ty}: core {has_core}, empty {empty}");
    }
}

#[test]
fn simple_and_hnf_structures() {
    let c = corpus();
    let simple = Model::standard(c.globals(), Structure::Simple).unwrap();
    let bot = simple.interp_type(&t("bot")).unwrap();
    assert_eq!(simple.member(&UTerm::i(), &bot).answer, Answer::No);
    let idt = simple.interp_type(&t("Πα:*. α → α")).unwrap();
    assert_eq!(simple.member(&UTerm::i(), &idt).answer, Answer::Yes);

    let hnf = Model::standard(c.globals(), Structure::PowerHnf).unwrap();
    let bot = hnf.interp_type(&t("bot")).unwrap();
    assert_eq!(hnf.member(&UTerm::k(), &bot).answer, Answer::No);
    assert_eq!(
        hnf.member(&UTerm::i(), &hnf.interp_type(&t("top")).unwrap())
            .answer,
        Answer::Yes
    );
}

#[test]
fn leibniz_equality_by_erasure() {
    let c = corpus();
    let g = c.globals();
    let e = Context::new();
    let betaeta = WecaConfig::betaeta();
    assert_eq!(
        leibniz_valid(g, &betaeta, &e, &t("s1"), &t("s2")).unwrap(),
        Answer::No
    );
    assert_eq!(
        leibniz_valid(g, &WecaConfig::beta(), &e, &t("succ O"), &church_numeral(1)).unwrap(),
        Answer::Yes
    );
    assert_eq!(
        leibniz_valid(g, &betaeta, &e, &t("neg"), &t("neg")).unwrap(),
        Answer::Yes
    );
    let r = leibniz_valid(g, &betaeta, &e, &t("O"), &t("true"));
    assert!(matches!(r, Err(ModelError::IllTyped(_))), "{r:?}");
}

#[test]
fn kinds_denote_collections_and_function_spaces() {
    let c = corpus();
    let m = generated(&c);
    let e = Context::new();
    assert!(matches!(
        m.interp_kind(&e, &Term::star(), &Env::default()).unwrap(),
        KindValue::Collection
    ));
    assert!(matches!(
        m.interp_kind(&e, &t("nat → *"), &Env::default()).unwrap(),
        KindValue::FunSpace(..)
    ));
    assert!(matches!(
        m.interp_kind(&e, &t("nat"), &Env::default()),
        Err(ModelError::NotAKind(_))
    ));
}

#[test]
fn verdict_display() {
    assert_eq!(
        Verdict::yes().flagged(Flag::Sampled).to_string(),
        "Yes [sampled]"
    );
    assert_eq!(Verdict::no().flagged(Flag::Sampled).to_string(), "No");
    assert!(!Verdict::yes().flagged(Flag::WitnessFamily).is_exact_yes());
}
