use super::{UConst, UTerm};

/// Prints an untyped term. With `abbreviate`, closed subterms equal to
/// `K`, `K*` or `I` are printed by those names.
pub fn print(t: &UTerm, abbreviate: bool) -> String {
    let mut p = Printer {
        scope: Vec::new(),
        out: String::new(),
        abbreviate,
    };
    p.term(t, 0);
    p.out
}

struct Printer {
    scope: Vec<String>,
    out: String,
    abbreviate: bool,
}

impl Printer {
    fn abbreviation(&self, t: &UTerm) -> Option<&'static str> {
        if !self.abbreviate {
            return None;
        }
        if *t == UTerm::k() {
            Some("K")
        } else if *t == UTerm::k_star() {
            Some("K*")
        } else if *t == UTerm::i() {
            Some("I")
        } else {
            None
        }
    }

    fn fresh(&self, hint: &str, body: &UTerm) -> String {
        let free = body.free_names();
        let base = if hint.is_empty() || hint == "_" {
            "x"
        } else {
            hint
        };
        let mut cand = base.to_string();
        while self.scope.contains(&cand)
            || free.iter().any(|n| **n == *cand)
            || matches!(
                cand.as_str(),
                "J" | "refl" | "pair" | "π1" | "π2" | "K" | "I"
            )
        {
            cand.push('\'');
        }
        cand
    }

    /// Levels: 0 abstraction body, 1 application head, 2 argument.
    fn term(&mut self, t: &UTerm, level: u8) {
        if let Some(a) = self.abbreviation(t) {
            self.out.push_str(a);
            return;
        }
        match t {
            UTerm::Var(k) => {
                let n = match self.scope.len().checked_sub(k + 1) {
                    Some(i) => self.scope[i].clone(),
                    None => format!("?{}", k - self.scope.len()),
                };
                self.out.push_str(&n);
            }
            UTerm::Free(n) => self.out.push_str(n),
            UTerm::Const(c) => self.out.push_str(match c {
                UConst::Named(n) => n,
                other => other.label(),
            }),
            UTerm::Lam(..) => {
                let paren = level > 0;
                if paren {
                    self.out.push('(');
                }
                self.out.push('λ');
                let mut cur = t;
                let mut first = true;
                let pushed = self.scope.len();
                while let UTerm::Lam(x, b) = cur {
                    if !first && self.abbreviation(cur).is_some() {
                        break;
                    }
                    let n = self.fresh(x, b);
                    if !first {
                        self.out.push(' ');
                    }
                    self.out.push_str(&n);
                    self.scope.push(n);
                    first = false;
                    cur = b;
                }
                self.out.push_str(". ");
                self.term(cur, 0);
                self.scope.truncate(pushed);
                if paren {
                    self.out.push(')');
                }
            }
            UTerm::App(f, a) => {
                let paren = level > 1;
                if paren {
                    self.out.push('(');
                }
                self.term(f, 1);
                self.out.push(' ');
                self.term(a, 2);
                if paren {
                    self.out.push(')');
                }
            }
        }
    }
}
