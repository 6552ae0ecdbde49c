use super::*;
use crate::syntax::name;

fn u(s: &str) -> UTerm {
    parse_uterm_plain(s).unwrap_or_else(|e| panic!("{s}: {e}"))
}

fn c() -> UTerm {
    UTerm::konst(UConst::Named(name("c")))
}

#[test]
fn j_iota_step() {
    let cfg = WecaConfig::lambda_id();
    let t = UTerm::apps(
        UTerm::konst(UConst::J),
        [u("h"), u("a"), u("a"), UTerm::refl()],
    );
    assert_eq!(step(&t, &cfg), Some(u("h a")));
    let stuck = UTerm::apps(UTerm::konst(UConst::J), [u("h"), u("a"), u("a"), u("p")]);
    assert_eq!(step(&stuck, &cfg), None);
}

#[test]
fn refl_absorbs_arguments() {
    let cfg = WecaConfig::lambda_id();
    assert_eq!(step(&u("refl q"), &cfg), Some(UTerm::refl()));
    assert_eq!(
        normalize(&u(r"refl (\x. x x) K"), &cfg).unwrap(),
        UTerm::refl()
    );
    assert_eq!(step(&u("refl q"), &WecaConfig::beta()), None);
}

#[test]
fn projections() {
    let cfg = WecaConfig::lambda_id();
    assert_eq!(normalize(&u("pi1 (pair a b)"), &cfg).unwrap(), u("a"));
    assert_eq!(normalize(&u("π2 (pair a b)"), &cfg).unwrap(), u("b"));
    assert_eq!(normalize(&u("pi1 refl"), &cfg).unwrap(), UTerm::refl());
}

#[test]
fn constants_of_lambda_c_absorb() {
    let cfg = WecaConfig::lambda_c_default();
    let t = UTerm::app(c(), u(r"\x. x"));
    assert_eq!(step(&t, &cfg), Some(c()));
    let t = UTerm::apps(c(), [u("a"), u("b"), u("K")]);
    assert_eq!(normalize(&t, &cfg).unwrap(), c());
}

#[test]
fn double_negation_of_true() {
    let not = r"(\b. b K* K)";
    let t = u(&format!("{not} ({not} K)"));
    assert_eq!(normalize(&t, &WecaConfig::beta()).unwrap(), UTerm::k());
}

#[test]
fn omega_exhausts_fuel() {
    let omega = u(r"(\x. x x) (\x. x x)");
    let cfg = WecaConfig::beta().with_fuel(1000);
    assert_eq!(normalize(&omega, &cfg), Err(FuelExhausted));
    assert_eq!(normalize_by_steps(&omega, &cfg), Err(FuelExhausted));
    assert_eq!(weca_eq(&omega, &UTerm::k(), &cfg), Answer::Unknown);
}

#[test]
fn equality_verdicts() {
    let b = WecaConfig::beta();
    assert_eq!(weca_eq(&u("x"), &u("y"), &b), Answer::No);
    assert_eq!(weca_eq(&u(r"(\x. x) y"), &u("y"), &b), Answer::Yes);
    assert_eq!(weca_eq(&u(r"\x. f x"), &u("f"), &b), Answer::No);
    assert_eq!(
        weca_eq(&u(r"\x. f x"), &u("f"), &WecaConfig::betaeta()),
        Answer::Yes
    );
    assert_eq!(
        weca_eq(&UTerm::k(), &UTerm::k_star(), &WecaConfig::one()),
        Answer::Yes
    );
}

#[test]
fn abbreviations_are_the_usual_combinators() {
    assert_eq!(UTerm::k(), u(r"\x y. x"));
    assert_eq!(UTerm::k_star(), u(r"\x y. y"));
    assert_eq!(UTerm::i(), u(r"\x. x"));
    assert_eq!(u(r"\x y. x y").size(), 2 + 2 + 1 + 1);
}

#[test]
fn round_trip_through_printing() {
    for s in [
        r"\k. k K (\b. b K* K) (\b. b K* K)",
        "J h a b refl",
        r"\x. refl x (\y. y x)",
        "pair (pi1 p) (π2 p)",
    ] {
        let t = u(s);
        assert_eq!(u(&print(&t, false)), t, "{s}");
        assert_eq!(u(&print(&t, true)), t, "{s}");
    }
}

#[test]
fn leftmost_outermost_matches_the_engine() {
    let cfg = WecaConfig::lambda_id();
    let t = u(r"(\f x. f (f x)) (\y. J (\z. z) y y refl) (refl w)");
    assert_eq!(
        normalize(&t, &cfg).unwrap(),
        normalize_by_steps(&t, &cfg).unwrap()
    );
    assert!(is_normal(&normalize(&t, &cfg).unwrap(), &cfg));
}

#[test]
fn head_normal_forms_keep_arguments() {
    let t = u(r"\z. (\x. x) z ((\y. y) w)");
    let h = head_normalize(&t, &WecaConfig::beta()).unwrap();
    assert_eq!(h, u(r"\z. z ((\y. y) w)"));
}

#[test]
fn enumeration_counts_small_sizes() {
    let cfg = WecaConfig::beta();
    let nfs = closed_normal_forms(&cfg, 3);
    assert!(nfs.contains(&UTerm::i()));
    assert!(nfs.contains(&UTerm::k()));
    assert!(nfs.contains(&UTerm::k_star()));
    assert!(nfs.iter().all(|t| is_normal(t, &cfg) && t.size() <= 3));
}

mod props {
    use super::*;
    use proptest::prelude::*;

    fn arb_uterm(depth: usize) -> BoxedStrategy<UTerm> {
        let mut leaves = vec![
            prop_oneof![Just("x"), Just("y"), Just("z")]
                .prop_map(UTerm::free)
                .boxed(),
            prop_oneof![
                Just(UConst::J),
                Just(UConst::Refl),
                Just(UConst::Pair),
                Just(UConst::Proj1)
            ]
            .prop_map(UTerm::konst)
            .boxed(),
        ];
        if depth > 0 {
            leaves.push((0..depth).prop_map(UTerm::var).boxed());
        }
        let leaf = proptest::strategy::Union::new(leaves).boxed();
        leaf.prop_recursive(5, 40, 2, move |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(f, a)| UTerm::app(f, a)),
                arb_uterm_under(depth + 1).prop_map(|b| UTerm::lam("v", b)),
            ]
        })
        .boxed()
    }

    fn arb_uterm_under(depth: usize) -> BoxedStrategy<UTerm> {
        if depth > 4 {
            (0..depth).prop_map(UTerm::var).boxed()
        } else {
            arb_uterm(depth)
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(512))]

        #[test]
        fn printing_round_trips(t in arb_uterm(0)) {
            prop_assert_eq!(parse_uterm_plain(&print(&t, false)).unwrap(), t.clone());
            prop_assert_eq!(parse_uterm_plain(&print(&t, true)).unwrap(), t);
        }

        #[test]
        fn engine_agrees_with_stepping(t in arb_uterm(0)) {
            let cfg = WecaConfig::lambda_id().with_fuel(500);
            if let (Ok(a), Ok(b)) = (normalize(&t, &cfg), normalize_by_steps(&t, &cfg)) {
                prop_assert!(is_normal(&a, &cfg));
                prop_assert_eq!(a, b);
            }
        }

        #[test]
        fn shifting_up_then_down_is_identity(t in arb_uterm(0), d in 1isize..4) {
            prop_assert_eq!(t.shift(d, 0).shift(-d, 0), t);
        }
    }
}
