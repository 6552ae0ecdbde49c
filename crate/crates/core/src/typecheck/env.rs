use std::collections::BTreeMap;

use crate::syntax::{parse_term, Name, Term};

use super::ExtensionFlags;

/// A checked global: a definition (with body) or a postulate (without).
#[derive(Clone, Debug, PartialEq)]
pub struct Global {
    pub ty: Term,
    pub body: Option<Term>,
    pub flags: ExtensionFlags,
}

/// The global signature. Later entries may refer to earlier ones.
#[derive(Clone, Debug, Default)]
pub struct Globals {
    entries: BTreeMap<Name, Global>,
    order: Vec<Name>,
}

impl Globals {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, n: &str) -> Option<&Global> {
        self.entries.get(n)
    }

    pub fn contains(&self, n: &str) -> bool {
        self.entries.contains_key(n)
    }

    /// Inserts or replaces an entry; a replaced entry keeps its position.
    pub fn insert(&mut self, n: Name, g: Global) {
        if self.entries.insert(n.clone(), g).is_none() {
            self.order.push(n);
        }
    }

    pub fn names(&self) -> &[Name] {
        &self.order
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Name, &Global)> {
        self.order.iter().map(move |n| (n, &self.entries[n]))
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// The type of a constant, including the built-in postulates enabled by
    /// `flags`.
    pub fn type_of(&self, n: &str, flags: ExtensionFlags) -> Option<Term> {
        if let Some(g) = self.entries.get(n) {
            return Some(g.ty.clone());
        }
        match n {
            "uip" if flags.uip_postulate => Some(postulate_type("uip")),
            "funext" if flags.funext_postulate => Some(postulate_type("funext")),
            _ => None,
        }
    }

    pub fn body_of(&self, n: &str) -> Option<&Term> {
        self.entries.get(n).and_then(|g| g.body.as_ref())
    }
}

const UIP: &str = "Πα:*. Πx y:α. Πp q:Id(α, x, y). Id(Id(α, x, y), p, q)";
const FUNEXT: &str = "Πσ:*. Πτ:σ → *. Πf g:(Πx:σ. τ x). \
                      (Πx:σ. Id(τ x, f x, g x)) → Id(Πx:σ. τ x, f, g)";

/// Types of the built-in opaque postulates `uip` and `funext`.
pub fn postulate_type(which: &str) -> Term {
    let src = match which {
        "uip" => UIP,
        "funext" => FUNEXT,
        other => panic!("no built-in postulate named {other}"),
    };
    parse_term(src).expect("built-in postulate types parse")
}
