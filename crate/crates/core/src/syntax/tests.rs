use std::sync::Arc;

use proptest::prelude::*;

use super::*;

fn p(s: &str) -> Term {
    parse_term(s).unwrap_or_else(|e| panic!("{s}: {e}"))
}

#[test]
fn nat_is_a_pi_chain_over_a_constructor_binder() {
    let f = parse("nat := Πα:*. α → (α → α) → α").unwrap();
    let Decl::Def { body, ty, .. } = &f.decls[0] else {
        panic!()
    };
    assert!(ty.is_none());
    let Term::Pi(a, dom, cod) = body else {
        panic!("{body:?}")
    };
    assert_eq!(&**a, "α");
    assert_eq!(**dom, Term::star());
    let Term::Pi(_, d2, _) = cod.as_ref() else {
        panic!()
    };
    assert_eq!(**d2, Term::Var(0));
}

#[test]
fn polymorphic_identity_is_two_lambdas() {
    let f = parse("id := λα:*. λx:α. x").unwrap();
    let Decl::Def { body, .. } = &f.decls[0] else {
        panic!()
    };
    let Term::Lam(_, _, inner) = body else {
        panic!()
    };
    let Term::Lam(_, d, b) = inner.as_ref() else {
        panic!()
    };
    assert_eq!(**d, Term::Var(0));
    assert_eq!(**b, Term::Var(0));
}

#[test]
fn missing_domain_is_a_parse_error() {
    let e = parse_term("Πx:. x").unwrap_err();
    assert_eq!(e.pos.line, 1);
    assert!(!e.expected.is_empty());
}

#[test]
fn printing_examples() {
    assert_eq!(
        print(&Term::pi(
            "α",
            Term::star(),
            Term::arrow(Term::Var(0), Term::Var(0))
        )),
        "Πα:*. α → α"
    );
    assert_eq!(print(&Term::Refl), "refl");
    let t = Term::apps(
        Term::constant("f"),
        [Term::constant("a"), Term::constant("b")],
    );
    assert_eq!(print(&t), "f a b");
    assert_eq!(print(&p("f (g a) b")), "f (g a) b");
}

#[test]
fn alternative_surface_forms() {
    assert_eq!(p("forall a:*. a"), p("Πa:*. a"));
    assert_eq!(p(r"\x:nat. x"), p("λx:nat. x"));
    assert_eq!(p("x ={nat} y"), p("Id(nat, x, y)"));
    assert_eq!(p("sig x:nat. nat"), p("Σx:nat. nat"));
}

#[test]
fn substitution_examples() {
    // Context: P, x, q, y (innermost last).
    let ctx = [name("P"), name("x"), name("q"), name("y")];
    let t = parse_term_in("P x", &ctx).unwrap();
    let o = Term::constant("O");
    assert_eq!(t.subst(2, &o), parse_term_in("P O", &ctx).unwrap());

    let t = parse_term_in("λx:nat. x", &ctx).unwrap();
    assert_eq!(t.subst(2, &Term::Var(1)), t);

    let t = parse_term_in("λy:nat. x", &ctx).unwrap();
    let s = t.subst(2, &Term::Var(0));
    assert_eq!(s, Term::lam("y", Term::constant("nat"), Term::Var(1)));
    assert_eq!(print_in(&s, &ctx), "λy':nat. y");
}

#[test]
fn binder_names_never_capture_constants() {
    let t = Term::lam(
        "c",
        Term::star(),
        Term::app(Term::constant("c"), Term::Var(0)),
    );
    assert_eq!(p(&print(&t)), t);
}

#[test]
fn context_parse_scopes_each_entry() {
    let ctx = Context::parse(&[("α", "*"), ("x", "α")]).unwrap();
    assert_eq!(ctx.len(), 2);
    assert_eq!(ctx.lookup(0), Some(Term::Var(1)));
}

// ----- property tests ------------------------------------------------------

const NAMES: [&str; 5] = ["x", "y", "α", "c0", "x'"];

fn arb_term(depth: u32, scope: usize) -> BoxedStrategy<Term> {
    let mut leaves: Vec<BoxedStrategy<Term>> = vec![
        Just(Term::star()).boxed(),
        Just(Term::Refl).boxed(),
        prop::sample::select(vec!["c0", "c1", "nat"])
            .prop_map(Term::constant)
            .boxed(),
    ];
    if scope > 0 {
        leaves.push((0..scope).prop_map(Term::Var).boxed());
    }
    let leaf = prop::strategy::Union::new(leaves).boxed();
    if depth == 0 {
        return leaf;
    }
    let sub = move |s: usize| arb_term(depth - 1, s);
    let name_s = prop::sample::select(NAMES.to_vec());
    prop_oneof![
        2 => leaf,
        2 => (sub(scope), sub(scope)).prop_map(|(f, a)| Term::app(f, a)),
        1 => (name_s.clone(), sub(scope), sub(scope + 1)).prop_map(|(x, d, b)| Term::pi(x, d, b)),
        1 => (name_s.clone(), sub(scope), sub(scope + 1)).prop_map(|(x, d, b)| Term::lam(x, d, b)),
        1 => (name_s, sub(scope), sub(scope + 1)).prop_map(|(x, d, b)| Term::sigma(x, d, b)),
        1 => (sub(scope), sub(scope), sub(scope)).prop_map(|(a, l, r)| Term::id(a, l, r)),
        1 => (sub(scope), sub(scope), prop::option::of(sub(scope)))
            .prop_map(|(a, b, t)| Term::pair(a, b, t)),
        1 => sub(scope).prop_map(|t| Term::Proj1(Arc::new(t))),
        1 => sub(scope).prop_map(|t| Term::Proj2(Arc::new(t))),
        1 => (sub(scope), sub(scope + 3), sub(scope), sub(scope), sub(scope), sub(scope)).prop_map(
            |(dom, motive, base, lhs, rhs, proof)| Term::J(Arc::new(JElim {
                names: [name("a"), name("b"), name("q")],
                dom,
                motive,
                base,
                lhs,
                rhs,
                proof,
            }))
        ),
    ]
    .boxed()
}

fn scope_names(n: usize) -> Vec<Name> {
    (0..n).map(|i| name(NAMES[i % NAMES.len()])).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn print_parse_round_trip(t in arb_term(4, 3)) {
        let ctx = scope_names(3);
        let s = print_in(&t, &ctx);
        let back = parse_term_in(&s, &ctx).map_err(|e| TestCaseError::fail(format!("{s}: {e}")))?;
        prop_assert_eq!(back, t, "printed as {}", s);
    }

    #[test]
    fn substitution_composes(
        t in arb_term(3, 4),
        a in arb_term(2, 4),
        b in arb_term(2, 4),
        x in 0usize..4,
        y in 0usize..4,
    ) {
        prop_assume!(x != y && !b.has_free(x));
        let left = t.subst(x, &a).subst(y, &b);
        let right = t.subst(y, &b).subst(x, &a.subst(y, &b));
        prop_assert_eq!(left, right);
    }

    #[test]
    fn substitution_removes_the_variable(t in arb_term(3, 3), s in arb_term(2, 3), v in 0usize..3) {
        prop_assume!(!s.has_free(v));
        let r = t.subst(v, &s);
        prop_assert!(!r.has_free(v));
        let allowed: std::collections::BTreeSet<usize> =
            t.free_vars().into_iter().filter(|k| *k != v).chain(s.free_vars()).collect();
        prop_assert!(r.free_vars().is_subset(&allowed));
    }

    #[test]
    fn alpha_equivalence_ignores_binder_names(t in arb_term(3, 2)) {
        let renamed = rename_binders(&t);
        prop_assert_eq!(&renamed, &t);
        prop_assert_eq!(&t, &renamed);
    }
}

fn rename_binders(t: &Term) -> Term {
    let r = |u: &Arc<Term>| Arc::new(rename_binders(u));
    match t {
        Term::Pi(_, d, b) => Term::Pi(name("z"), r(d), r(b)),
        Term::Lam(_, d, b) => Term::Lam(name("z"), r(d), r(b)),
        Term::Sigma(_, d, b) => Term::Sigma(name("z"), r(d), r(b)),
        Term::App(f, a) => Term::App(r(f), r(a)),
        other => other.clone(),
    }
}
