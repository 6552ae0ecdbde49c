mod common;

use polykernel::stdlib::Corpus;
use polykernel::syntax::{parse_term, Context, Term};
use polykernel::typecheck::{classify, Checker, ExtensionFlags, SortClass};
use polykernel::weca::{self, Answer, Eraser, WecaConfig};

#[test]
fn subject_reduction_over_the_corpus() {
    let corpus = Corpus::load().unwrap();
    let (examined, violations) = common::subject_reduction(&corpus);
    println!("{examined} reducts examined");
    assert!(examined > 100, "only {examined} reducts examined");
    assert!(violations.is_empty(), "{violations:#?}");
}

#[test]
fn confluence_fuzz_per_configuration() {
    for (i, cfg) in common::fuzz_configs().iter().enumerate() {
        let stats = common::confluence_fuzz(cfg, 1000, 0x5eed + i as u64);
        println!(
            "{:?}: {} terms, {} with redexes, {} terminated under both strategies",
            cfg.kind, stats.terms, stats.with_redexes, stats.both_terminated
        );
        assert_eq!(stats.terms, 1000);
        assert!(stats.with_redexes > 500, "{:?}: {stats:?}", cfg.kind);
        assert!(stats.both_terminated > 500, "{:?}: {stats:?}", cfg.kind);
        assert!(
            stats.violations.is_empty(),
            "{:?}: {:?}",
            cfg.kind,
            stats.violations
        );
    }
}

#[test]
fn erasure_commutes_with_substitution() {
    let corpus = Corpus::load().unwrap();
    let g = corpus.globals();
    let cfg = WecaConfig::lambda_id();
    let mut er = Eraser::new(g);
    let mut compared = 0;
    for e in corpus.entries() {
        let Some(body) = &e.body else { continue };
        if classify(g, &Context::new(), body, e.flags) != Ok(SortClass::TermExpr) {
            continue;
        }
        let Term::Lam(x, dom, inner) = body else {
            continue;
        };
        let arg = match &**dom {
            Term::Const(n) if &**n == "nat" => parse_term("succ O").unwrap(),
            Term::Const(n) if &**n == "bool" => parse_term("true").unwrap(),
            Term::Sort(_) => parse_term("nat").unwrap(),
            _ => continue,
        };
        let lhs = er.erase_closed(&inner.instantiate(&arg)).unwrap();
        let open = er
            .erase_open(&Context::new().extended(x.clone(), (**dom).clone()), inner)
            .unwrap();
        let rhs = match &**dom {
            Term::Sort(_) => open,
            _ => open.subst_free(x, &er.erase_closed(&arg).unwrap()),
        };
        assert_eq!(weca::weca_eq(&lhs, &rhs, &cfg), Answer::Yes, "{}", e.name);
        compared += 1;
    }
    assert!(compared >= 5, "only {compared} entries compared");
}

#[test]
fn conversion_is_sound_for_erasure() {
    let corpus = Corpus::load().unwrap();
    let g = corpus.globals();
    let mut ch = Checker::new(g, ExtensionFlags::ALL);
    let mut er = Eraser::new(g);
    let pairs = [
        ("tl (tl s1)", "s1"),
        ("hd (tl s1)", "true"),
        ("qf_hat (cls_bool true)", "qf true"),
        ("neg (neg true)", "true"),
        ("π1 ⟨O, refl⟩[Σx:nat. Id(nat, x, x)]", "O"),
    ];
    for (a, b) in pairs {
        let (ta, tb) = (parse_term(a).unwrap(), parse_term(b).unwrap());
        assert!(ch.convertible(&ta, &tb).unwrap(), "{a} vs {b}");
        let (ua, ub) = (er.erase_closed(&ta).unwrap(), er.erase_closed(&tb).unwrap());
        assert_eq!(
            weca::weca_eq(&ua, &ub, &WecaConfig::lambda_id()),
            Answer::Yes,
            "{a} vs {b}"
        );
    }
}

#[test]
fn eta_does_not_join_the_stream_pair() {
    let corpus = Corpus::load().unwrap();
    let mut er = Eraser::new(corpus.globals());
    let s1 = er.erase_closed(&parse_term("s1").unwrap()).unwrap();
    let s2 = er.erase_closed(&parse_term("s2").unwrap()).unwrap();
    assert_eq!(weca::weca_eq(&s1, &s2, &WecaConfig::beta()), Answer::No);
    assert_eq!(weca::weca_eq(&s1, &s2, &WecaConfig::betaeta()), Answer::No);
}
