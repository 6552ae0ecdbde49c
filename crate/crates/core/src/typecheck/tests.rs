use super::*;
use crate::stdlib::Corpus;
use crate::syntax::{parse_term, parse_term_in, Context, Term};

fn corpus() -> Corpus {
    Corpus::load().unwrap_or_else(|e| panic!("{e}"))
}

fn t(s: &str) -> Term {
    parse_term(s).unwrap_or_else(|e| panic!("{s}: {e}"))
}

fn ctx(decls: &[(&str, &str)]) -> Context {
    Context::parse(decls).unwrap()
}

#[test]
fn context_formation() {
    let g = Globals::new();
    assert_eq!(
        wf_context(&g, &ctx(&[("α", "*"), ("x", "α")]), ExtensionFlags::NONE),
        Ok(())
    );
    let r = wf_context(&g, &ctx(&[("x", "α")]), ExtensionFlags::NONE);
    assert!(
        matches!(r, Err(TypeError::IllFormedClassifier { .. })),
        "{r:?}"
    );
    assert!(matches!(
        wf_context(&g, &ctx(&[("α", "*"), ("α", "*")]), ExtensionFlags::NONE),
        Err(TypeError::DuplicateVariable(_))
    ));
}

#[test]
fn zero_has_type_nat() {
    let c = corpus();
    let mut ch = Checker::new(c.globals(), ExtensionFlags::NONE);
    let ty = ch.infer(&Context::new(), &t("O")).unwrap();
    assert!(ch.convertible(&ty, &t("nat")).unwrap());
}

#[test]
fn existential_interface_checks() {
    let c = corpus();
    let mut ch = Checker::new(c.globals(), ExtensionFlags::NONE);
    for name in ["pack", "rec_exists"] {
        let e = c.get(name).unwrap();
        ch.check(&Context::new(), e.body.as_ref().unwrap(), &e.ty)
            .unwrap();
    }
}

#[test]
fn kind_kind_products_are_rejected() {
    let c = corpus();
    let r = infer(
        c.globals(),
        &Context::new(),
        &t("Πα:*. *"),
        ExtensionFlags::NONE,
    );
    assert!(
        matches!(r, Err(TypeError::ForbiddenPiFormation(_))),
        "{r:?}"
    );
    let r = infer(
        c.globals(),
        &Context::new(),
        &t("nat → *"),
        ExtensionFlags::NONE,
    );
    assert_eq!(r, Ok(Term::kind()));
}

#[test]
fn checking_examples() {
    let c = corpus();
    let g = c.globals();
    let e = Context::new();
    assert_eq!(
        check(g, &e, &t("succ O"), &t("nat"), ExtensionFlags::NONE),
        Ok(())
    );
    let r = check(
        g,
        &e,
        &Term::Refl,
        &t("Id(nat, O, succ O)"),
        ExtensionFlags::ALL,
    );
    assert!(
        matches!(r, Err(TypeError::ConversionFailure { .. })),
        "{r:?}"
    );
    let pair = t("⟨O, refl⟩");
    assert_eq!(
        check(
            g,
            &e,
            &pair,
            &t("Σx:nat. Id(nat, x, x)"),
            ExtensionFlags::ALL
        ),
        Ok(())
    );
    assert_eq!(
        infer(g, &e, &pair, ExtensionFlags::ALL),
        Err(TypeError::CannotInferPair)
    );
}

#[test]
fn extensions_must_be_enabled() {
    let c = corpus();
    let r = check(
        c.globals(),
        &Context::new(),
        &Term::Refl,
        &t("Id(nat, O, O)"),
        ExtensionFlags::NONE,
    );
    assert!(matches!(r, Err(TypeError::ExtensionDisabled(_))), "{r:?}");
    let r = infer(
        c.globals(),
        &Context::new(),
        &t("Σx:nat. nat"),
        ExtensionFlags::NONE,
    );
    assert!(matches!(r, Err(TypeError::ExtensionDisabled(_))), "{r:?}");
    assert!(ExtensionFlags::from_pragmas(&["uip"]).is_err());
    assert!(ExtensionFlags::from_pragmas(&["id", "uip"]).is_ok());
}

#[test]
fn classification() {
    let c = corpus();
    let g = c.globals();
    let e = Context::new();
    let f = ExtensionFlags::NONE;
    assert_eq!(
        classify(g, &e, &t("nat"), f),
        Ok(SortClass::ConstructorExpr)
    );
    assert_eq!(
        classify(g, &e, &t("ind_nat"), f),
        Ok(SortClass::ConstructorExpr)
    );
    assert_eq!(classify(g, &e, &t("O"), f), Ok(SortClass::TermExpr));
    assert_eq!(classify(g, &e, &t("nat → *"), f), Ok(SortClass::KindExpr));
    assert_eq!(classify(g, &e, &Term::kind(), f), Ok(SortClass::KindSort));
    assert_eq!(
        classify(g, &e, &t("eq_nat"), f),
        Ok(SortClass::ConstructorExpr)
    );
}

#[test]
fn computation_laws_by_conversion() {
    let c = corpus();
    let mut ch = Checker::new(c.globals(), ExtensionFlags::NONE);
    let names = ctx(&[("τ", "*"), ("h", "τ → bool"), ("s", "τ → τ"), ("x", "τ")]).names();
    let conv = |ch: &mut Checker, a: &str, b: &str| {
        ch.convertible(
            &parse_term_in(a, &names).unwrap(),
            &parse_term_in(b, &names).unwrap(),
        )
        .unwrap()
    };
    assert!(conv(&mut ch, "hd (corec_s τ h s x)", "h x"));
    assert!(conv(&mut ch, "tl (corec_s τ h s x)", "corec_s τ h s (s x)"));
    let names = ctx(&[("x", "bool")]).names();
    let a = parse_term_in("qf_hat (cls_bool x)", &names).unwrap();
    let b = parse_term_in("qf x", &names).unwrap();
    assert!(ch.convertible(&a, &b).unwrap());
    assert!(!ch.convertible(&t("true"), &t("false")).unwrap());
}

#[test]
fn identity_and_pair_computation() {
    let c = corpus();
    let mut ch = Checker::new(c.globals(), ExtensionFlags::ALL);
    assert!(ch
        .convertible(&t("π1 ⟨O, refl⟩[Σx:nat. Id(nat, x, x)]"), &t("O"))
        .unwrap());
    let j = t("J[a b q : nat. nat](λz:nat. succ z, O, O, refl)");
    assert!(ch.convertible(&j, &t("succ O")).unwrap());
}

#[test]
fn postulates_have_their_principle_types() {
    let c = corpus();
    let g = c.globals();
    let f = ExtensionFlags::ALL;
    let uip = infer(g, &Context::new(), &t("uip"), f).unwrap();
    assert_eq!(
        uip,
        t("Πα:*. Πx y:α. Πp q:Id(α, x, y). Id(Id(α, x, y), p, q)")
    );
    let fx = infer(g, &Context::new(), &t("funext"), f).unwrap();
    assert_eq!(fx, postulate_type("funext"));
    let no_uip = ExtensionFlags {
        uip_postulate: false,
        ..f
    };
    assert!(infer(g, &Context::new(), &t("uip"), no_uip).is_err());
}

#[test]
fn fuel_exhaustion_is_reported() {
    let c = corpus();
    let mut ch = Checker::new(c.globals(), ExtensionFlags::NONE).with_fuel(3);
    let r = ch.normalize(&t("ind_nat"));
    assert!(matches!(r, Err(TypeError::FuelExhausted(_))), "{r:?}");
}

#[test]
fn redeclaration_must_agree() {
    let mut g = Globals::new();
    let f = crate::syntax::parse("top : * := Πβ:*. β → β\ntop : * := Πγ:*. γ → γ").unwrap();
    assert!(check_file(&mut g, &f, ExtensionFlags::NONE, DEFAULT_FUEL).is_ok());
    let f = crate::syntax::parse("top : * := Πβ:*. β").unwrap();
    let e = check_file(&mut g, &f, ExtensionFlags::NONE, DEFAULT_FUEL).unwrap_err();
    assert_eq!(e.error.code(), "DuplicateVariable");
}

#[test]
fn error_codes_are_stable() {
    assert_eq!(
        TypeError::UnboundVariable("x".into()).code(),
        "UnboundVariable"
    );
    assert_eq!(TypeError::CannotInferRefl.code(), "CannotInferRefl");
}
