use std::time::Instant;

use super::*;
use crate::model::{Pred, Structure};
use crate::stdlib::Corpus;

fn corpus() -> Corpus {
    Corpus::load().unwrap()
}

fn certificate() -> Certificate {
    serde_json::from_str(NO_INDUCTION_CERTIFICATE).unwrap()
}

#[test]
fn status_is_derived_from_obligations() {
    let now = Instant::now();
    let met = Obligation::answer("a", Answer::Yes, Answer::Yes);
    let bad = Obligation::answer("b", Answer::Yes, Answer::No);
    let open = Obligation::answer("c", Answer::No, Answer::Unknown);
    assert_eq!(met.outcome, Outcome::Met);
    assert_eq!(bad.outcome, Outcome::Violated);
    assert_eq!(open.outcome, Outcome::Undecided);
    let r = |obs: Vec<Obligation>| Report::from_obligations("x", obs, vec![], now).status;
    assert_eq!(r(vec![met.clone()]), Status::Reproduced);
    assert_eq!(r(vec![met.clone(), open.clone()]), Status::Unknown);
    assert_eq!(r(vec![open.clone(), bad.clone()]), Status::Failed);
    assert_eq!(r(vec![]), Status::Unknown);
    assert_eq!(Obligation::value("v", "K", "K").outcome, Outcome::Met);
    assert_eq!(Obligation::value("v", "K", "K*").outcome, Outcome::Violated);
}

#[test]
fn flags_propagate_to_the_report() {
    let o = Obligation::answer("s", Answer::Yes, Answer::Yes).with_flag(Flag::Sampled);
    let r = Report::from_obligations("lem", vec![o], vec![], Instant::now());
    assert!(r.flags.contains(&Flag::Sampled));
    assert!(r.summary().starts_with("lem Reproduced [sampled]"));
}

#[test]
fn check_ids_round_trip() {
    for c in CheckId::ALL {
        assert_eq!(c.as_str().parse::<CheckId>().unwrap(), c);
    }
    assert_eq!(CheckId::MUTABLE.len(), 5);
    assert!("thm-9.9".parse::<CheckId>().is_err());
}

#[test]
fn unknown_checks_are_manifest_errors() {
    let m = Manifest::parse(r#"{"checks":["thm-4.2","nonsense"]}"#).unwrap();
    let r = run_suite(&m, &corpus(), None);
    assert!(matches!(r, Err(ManifestError::UnknownCheck(ref id)) if id == "nonsense"));
    assert!(matches!(
        Manifest::parse("{"),
        Err(ManifestError::Syntax(_))
    ));
}

#[test]
fn a_full_witness_family_is_improper() {
    let mut cert = certificate();
    cert.witnesses[0].family = Pred::FullSet;
    let r = run_certificate(&corpus(), &cert);
    assert!(matches!(r, Err(CertificateError::Improper(_))), "{r:?}");
}

#[test]
fn the_pi_model_cannot_refute_induction() {
    let mut cert = certificate();
    cert.model = Structure::Pi;
    let r = run_certificate(&corpus(), &cert).unwrap();
    assert_eq!(r.status, Status::Failed);
}

#[test]
fn certificates_run_as_shipped() {
    let r = run_certificate(&corpus(), &certificate()).unwrap();
    assert_eq!(r.status, Status::Reproduced, "{r}");
    assert!(r.flags.contains(&Flag::Sampled));
}

#[test]
fn starved_checks_are_unknown() {
    let c = corpus();
    assert_eq!(
        CheckId::StreamCoinduction.run(&c, 1).status,
        Status::Unknown
    );
    assert_eq!(
        CheckId::ParametricQuotient.run(&c, 1).status,
        Status::Unknown
    );
    let m = Manifest::parse(r#"{"fuel": 1, "checks":["thm-4.2"]}"#).unwrap();
    let s = run_suite(&m, &c, None).unwrap();
    assert_eq!(s.status(), Status::Unknown);
}

#[test]
fn expectations_can_be_inverted() {
    let m = Manifest::parse(r#"{"checks":[{"id":"pi-consistency","expect":"Failed"}]}"#).unwrap();
    let s = run_suite(&m, &corpus(), None).unwrap();
    assert!(!s.all_met());
    assert_eq!(s.status(), Status::Failed);
}

#[test]
fn carrier_terms_resolve_corpus_names() {
    let c = corpus();
    let t = parse_carrier_term(&c, "[neg] [true]").unwrap();
    assert_eq!(
        weca::normalize(&t, &WecaConfig::beta()).unwrap(),
        UTerm::k_star()
    );
    assert!(parse_carrier_term(&c, "[no_such_name]").is_err());
}

#[test]
fn bool_prime_is_five_distinct_normal_forms() {
    let b = bool_prime();
    assert_eq!(b.len(), 5);
    let cfg = WecaConfig::lambda_id();
    for (i, x) in b.iter().enumerate() {
        assert!(weca::is_normal(x, &cfg));
        for y in &b[i + 1..] {
            assert_ne!(x, y);
        }
    }
}
