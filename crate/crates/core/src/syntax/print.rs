use std::collections::BTreeSet;

use super::term::{name, Name, Sort, Term};

// Precedence levels, loosest first.
const BINDER: u8 = 0;
const EQUALITY: u8 = 1;
const APP: u8 = 2;
const ATOM: u8 = 3;

/// Prints a closed term (or one whose free variables are unnamed).
pub fn print(t: &Term) -> String {
    print_in(t, &[])
}

/// Prints `t` with free variables named by `ctx` (innermost last).
pub fn print_in(t: &Term, ctx: &[Name]) -> String {
    let mut p = Printer {
        scope: ctx.to_vec(),
        out: String::new(),
    };
    p.term(t, BINDER);
    p.out
}

struct Printer {
    scope: Vec<Name>,
    out: String,
}

impl Printer {
    fn var_name(&self, k: usize) -> String {
        match self.scope.len().checked_sub(k + 1) {
            Some(i) => self.scope[i].to_string(),
            None => format!("?{}", k - self.scope.len()),
        }
    }

    /// Picks a binder name that does not capture anything `body` refers to.
    /// `extra` is the number of binders between this one and `body`.
    fn fresh(&self, hint: &Name, bodies: &[(&Term, usize)]) -> Name {
        let mut taken: BTreeSet<String> = BTreeSet::new();
        for (body, extra) in bodies {
            for c in body.constants() {
                taken.insert(c.to_string());
            }
            for k in body.free_vars() {
                if k > *extra {
                    taken.insert(self.var_name(k - extra - 1));
                }
            }
        }
        let base = if &**hint == "_" { "x" } else { &**hint };
        let mut cand = base.to_string();
        while taken.contains(&cand) || is_keyword(&cand) {
            cand.push('\'');
        }
        name(&cand)
    }

    fn open(&mut self, needed: bool) {
        if needed {
            self.out.push('(');
        }
    }

    fn close(&mut self, needed: bool) {
        if needed {
            self.out.push(')');
        }
    }

    fn term(&mut self, t: &Term, level: u8) {
        match t {
            Term::Sort(Sort::Star) => self.out.push('*'),
            Term::Sort(Sort::Kind) => self.out.push('□'),
            Term::Var(k) => {
                let n = self.var_name(*k);
                self.out.push_str(&n);
            }
            Term::Const(c) => self.out.push_str(c),
            Term::Refl => self.out.push_str("refl"),
            Term::Pi(x, a, b) if !b.has_free(0) => {
                let paren = level > BINDER;
                self.open(paren);
                self.term(a, EQUALITY);
                self.out.push_str(" → ");
                self.scope.push(x.clone());
                self.term(b, BINDER);
                self.scope.pop();
                self.close(paren);
            }
            Term::Pi(x, a, b) => self.binder("Π", x, a, b, level),
            Term::Lam(x, a, b) => self.binder("λ", x, a, b, level),
            Term::Sigma(x, a, b) => self.binder("Σ", x, a, b, level),
            Term::App(f, a) => {
                let paren = level > APP;
                self.open(paren);
                self.term(f, APP);
                self.out.push(' ');
                self.term(a, ATOM);
                self.close(paren);
            }
            Term::Proj1(p) | Term::Proj2(p) => {
                let paren = level > APP;
                self.open(paren);
                self.out.push_str(if matches!(t, Term::Proj1(_)) {
                    "π1 "
                } else {
                    "π2 "
                });
                self.term(p, ATOM);
                self.close(paren);
            }
            Term::Id { ty, lhs, rhs } => {
                self.out.push_str("Id(");
                self.term(ty, BINDER);
                self.out.push_str(", ");
                self.term(lhs, BINDER);
                self.out.push_str(", ");
                self.term(rhs, BINDER);
                self.out.push(')');
            }
            Term::Pair { fst, snd, ann } => {
                self.out.push('⟨');
                self.term(fst, BINDER);
                self.out.push_str(", ");
                self.term(snd, BINDER);
                self.out.push('⟩');
                if let Some(a) = ann {
                    self.out.push('[');
                    self.term(a, BINDER);
                    self.out.push(']');
                }
            }
            Term::J(j) => {
                let x = self.fresh(&j.names[0], &[(&j.motive, 2)]);
                self.scope.push(x.clone());
                let y = self.fresh(&j.names[1], &[(&j.motive, 1)]);
                self.scope.push(y.clone());
                let p = self.fresh(&j.names[2], &[(&j.motive, 0)]);
                self.scope.truncate(self.scope.len() - 2);
                self.out.push_str(&format!("J[{x} {y} {p} : "));
                self.term(&j.dom, BINDER);
                self.out.push_str(". ");
                self.scope.extend([x, y, p]);
                self.term(&j.motive, BINDER);
                self.scope.truncate(self.scope.len() - 3);
                self.out.push_str("](");
                for (i, arg) in [&j.base, &j.lhs, &j.rhs, &j.proof].into_iter().enumerate() {
                    if i > 0 {
                        self.out.push_str(", ");
                    }
                    self.term(arg, BINDER);
                }
                self.out.push(')');
            }
        }
    }

    fn binder(&mut self, sym: &str, x: &Name, a: &Term, b: &Term, level: u8) {
        let paren = level > BINDER;
        self.open(paren);
        let n = self.fresh(x, &[(b, 0)]);
        self.out.push_str(sym);
        self.out.push_str(&n);
        self.out.push(':');
        self.term(a, BINDER);
        self.out.push_str(". ");
        self.scope.push(n);
        self.term(b, BINDER);
        self.scope.pop();
        self.close(paren);
    }
}

fn is_keyword(s: &str) -> bool {
    matches!(
        s,
        "forall" | "sig" | "KIND" | "refl" | "Id" | "J" | "postulate" | "π1" | "π2" | "pi1" | "pi2"
    )
}
