//! The encoding corpus: Church-encoded data, streams, quotients,
//! relativized naturals and the identity-type examples, shipped as `.lp2`
//! sources and checked on load.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::syntax::{self, Decl, DeclarationFile, Name, ParseError, Term};
use crate::typecheck::{check_file, DeclError, ExtensionFlags, Globals, DEFAULT_FUEL};

/// Source files in dependency order.
pub const SOURCES: &[(&str, &str)] = &[
    ("base.lp2", include_str!("../corpus/base.lp2")),
    ("exists.lp2", include_str!("../corpus/exists.lp2")),
    ("stream.lp2", include_str!("../corpus/stream.lp2")),
    ("quotient.lp2", include_str!("../corpus/quotient.lp2")),
    ("relativized.lp2", include_str!("../corpus/relativized.lp2")),
    ("identity.lp2", include_str!("../corpus/identity.lp2")),
];

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{file}: {error}")]
    Parse { file: String, error: ParseError },
    #[error("{file}: {error}")]
    Type { file: String, error: Box<DeclError> },
    #[error("unknown corpus name `{0}`")]
    UnknownName(String),
    #[error("mutation target `{0}` is not declared in the corpus")]
    UnknownTarget(String),
}

/// A corpus entry: its body (absent for postulates), its type and the
/// extensions it needs.
#[derive(Clone, Debug, PartialEq)]
pub struct Entry {
    pub name: Name,
    pub body: Option<Term>,
    pub ty: Term,
    pub flags: ExtensionFlags,
    pub file: &'static str,
}

/// A source-level replacement of one declaration, used to build deliberately
/// broken corpora. `source` may contain several declarations (for instance
/// an extra postulate followed by the redefinition).
#[derive(Clone, Debug)]
pub struct Mutation {
    pub target: String,
    pub source: String,
}

impl Mutation {
    pub fn new(target: &str, source: &str) -> Self {
        Mutation {
            target: target.to_string(),
            source: source.to_string(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Corpus {
    globals: Globals,
    files: BTreeMap<Name, &'static str>,
}

impl Corpus {
    /// Parses and checks the shipped corpus.
    pub fn load() -> Result<Corpus, CorpusError> {
        Self::load_with(&[])
    }

    /// Loads the corpus with some declarations replaced.
    pub fn load_with(mutations: &[Mutation]) -> Result<Corpus, CorpusError> {
        let mut globals = Globals::new();
        let mut files = BTreeMap::new();
        let mut pending: Vec<&Mutation> = mutations.iter().collect();
        for (file, src) in SOURCES {
            let mut parsed = syntax::parse(src).map_err(|error| CorpusError::Parse {
                file: file.to_string(),
                error,
            })?;
            apply_mutations(&mut parsed, &mut pending)?;
            check_file(&mut globals, &parsed, ExtensionFlags::NONE, DEFAULT_FUEL).map_err(
                |error| CorpusError::Type {
                    file: file.to_string(),
                    error: Box::new(error),
                },
            )?;
            for d in &parsed.decls {
                files.insert(d.name().clone(), *file);
            }
        }
        if let Some(m) = pending.first() {
            return Err(CorpusError::UnknownTarget(m.target.clone()));
        }
        Ok(Corpus { globals, files })
    }

    pub fn globals(&self) -> &Globals {
        &self.globals
    }

    pub fn get(&self, name: &str) -> Result<Entry, CorpusError> {
        let g = self
            .globals
            .get(name)
            .ok_or_else(|| CorpusError::UnknownName(name.to_string()))?;
        Ok(Entry {
            name: syntax::name(name),
            body: g.body.clone(),
            ty: g.ty.clone(),
            flags: g.flags,
            file: self.files.get(name).copied().unwrap_or("?"),
        })
    }

    /// The constant referring to a corpus entry.
    pub fn term(&self, name: &str) -> Result<Term, CorpusError> {
        self.get(name).map(|_| Term::constant(name))
    }

    pub fn names(&self) -> &[Name] {
        self.globals.names()
    }

    pub fn entries(&self) -> impl Iterator<Item = Entry> + '_ {
        self.names()
            .iter()
            .map(|n| self.get(n).expect("listed name"))
    }

    /// Parses a term in the corpus namespace.
    pub fn parse(&self, src: &str) -> Result<Term, ParseError> {
        syntax::parse_term(src)
    }
}

fn apply_mutations(
    file: &mut DeclarationFile,
    pending: &mut Vec<&Mutation>,
) -> Result<(), CorpusError> {
    let mut i = 0;
    while i < pending.len() {
        let m = pending[i];
        if let Some(at) = file.decls.iter().position(|d| **d.name() == m.target) {
            let replacement = syntax::parse(&m.source).map_err(|error| CorpusError::Parse {
                file: format!("mutation of {}", m.target),
                error,
            })?;
            file.extensions.extend(replacement.extensions);
            file.decls.splice(at..=at, replacement.decls);
            pending.remove(i);
        } else {
            i += 1;
        }
    }
    Ok(())
}

/// The Church numeral `succ (… (succ O))`.
pub fn church_numeral(n: usize) -> Term {
    (0..n).fold(Term::constant("O"), |t, _| {
        Term::app(Term::constant("succ"), t)
    })
}

/// Builds `Decl`s for inline use (tests, CLI prelude).
pub fn prelude_decls() -> Vec<(&'static str, Vec<Decl>)> {
    SOURCES
        .iter()
        .map(|(f, src)| (*f, syntax::parse(src).expect("corpus parses").decls))
        .collect()
}
