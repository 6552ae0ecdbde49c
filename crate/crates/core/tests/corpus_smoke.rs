use std::time::Instant;

use polykernel::stdlib::{church_numeral, Corpus, CorpusError, Mutation, SOURCES};
use polykernel::syntax::{parse_term, print, Term};
use polykernel::typecheck::{Checker, ExtensionFlags};
use polykernel::weca::{self, parse_uterm_plain, Eraser, WecaConfig};

#[test]
fn corpus_loads_quickly() {
    let started = Instant::now();
    let c = Corpus::load().unwrap_or_else(|e| panic!("{e}"));
    assert!(started.elapsed().as_secs() < 5);
    assert!(c.names().len() > 40);
}

#[test]
fn numerals() {
    assert_eq!(church_numeral(0), Term::constant("O"));
    assert_eq!(church_numeral(1), parse_term("succ O").unwrap());
    let c = Corpus::load().unwrap();
    let mut er = Eraser::new(c.globals());
    let three = er.erase_closed(&church_numeral(3)).unwrap();
    let nf = weca::normalize(&three, &WecaConfig::beta()).unwrap();
    assert_eq!(nf, parse_uterm_plain(r"\x f. f (f (f x))").unwrap());
}

#[test]
fn lookups() {
    let c = Corpus::load().unwrap();
    let s1 = c.get("s1").unwrap();
    assert_eq!(
        s1.body,
        Some(parse_term("pack_stream bool true neg neg").unwrap())
    );
    assert_eq!(s1.flags, ExtensionFlags::NONE);
    let q = c.get("q_O").unwrap();
    assert_eq!(q.ty, parse_term("Ind O").unwrap());
    assert_eq!(q.flags, ExtensionFlags::NONE);
    assert!(matches!(c.get("zzz"), Err(CorpusError::UnknownName(_))));
    assert!(c.get("uip_nat").unwrap().flags.uip_postulate);
}

#[test]
fn every_entry_rechecks_against_its_type() {
    let c = Corpus::load().unwrap();
    for e in c.entries() {
        let mut ch = Checker::new(c.globals(), e.flags);
        match &e.body {
            Some(b) => ch
                .check(&Default::default(), b, &e.ty)
                .unwrap_or_else(|err| panic!("{}: {err}", e.name)),
            None => {
                ch.sort_of(&Default::default(), &e.ty).unwrap();
            }
        }
    }
}

#[test]
fn printed_entries_parse_back() {
    let c = Corpus::load().unwrap();
    for e in c.entries() {
        let ty = print(&e.ty);
        assert_eq!(parse_term(&ty).unwrap(), e.ty, "{}: {ty}", e.name);
        if let Some(b) = &e.body {
            let s = print(b);
            assert_eq!(parse_term(&s).unwrap(), *b, "{}: {s}", e.name);
        }
    }
}

#[test]
fn sources_are_in_dependency_order() {
    assert_eq!(SOURCES.first().map(|s| s.0), Some("base.lp2"));
    assert!(SOURCES
        .iter()
        .all(|(n, src)| n.ends_with(".lp2") && !src.is_empty()));
}

#[test]
fn mutations_replace_declarations() {
    let c =
        Corpus::load_with(&[Mutation::new("s2", "s2 := pack_stream bool true neg neg")]).unwrap();
    assert_eq!(c.get("s2").unwrap().body, c.get("s1").unwrap().body);
    let r = Corpus::load_with(&[Mutation::new("nope", "nope : * := nat")]);
    assert!(matches!(r, Err(CorpusError::UnknownTarget(_))));
    let r = Corpus::load_with(&[Mutation::new("s2", "s2 : nat := true")]);
    assert!(matches!(r, Err(CorpusError::Type { .. })));
}
