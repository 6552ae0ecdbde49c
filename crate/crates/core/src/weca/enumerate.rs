use std::collections::HashMap;
use std::sync::Arc;

use crate::syntax::name;

use super::reduce::is_normal;
use super::{UConst, UTerm, WecaConfig};

/// Enumerates closed normal forms of a configuration by size, in a fixed
/// order (by size, then by construction order). Results are memoized per
/// (size, number of bound variables in scope).
pub struct NormalForms<'c> {
    cfg: &'c WecaConfig,
    heads: Vec<UConst>,
    nf: HashMap<(usize, usize), Arc<Vec<UTerm>>>,
    neutral: HashMap<(usize, usize), Arc<Vec<UTerm>>>,
}

impl<'c> NormalForms<'c> {
    pub fn new(cfg: &'c WecaConfig) -> Self {
        NormalForms {
            cfg,
            heads: cfg.signature.iter().cloned().collect(),
            nf: HashMap::new(),
            neutral: HashMap::new(),
        }
    }

    /// Closed normal forms of exactly this size.
    pub fn of_size(&mut self, size: usize) -> Vec<UTerm> {
        let cfg = self.cfg;
        self.nf_terms(size, 0)
            .iter()
            .filter(|t| is_normal(t, cfg))
            .cloned()
            .collect()
    }

    /// Closed normal forms of size at most `bound`.
    pub fn up_to(&mut self, bound: usize) -> Vec<UTerm> {
        (1..=bound).flat_map(|s| self.of_size(s)).collect()
    }

    /// β-normal candidates (λ-abstractions over neutral terms). Constant and
    /// η redexes are filtered afterwards.
    fn nf_terms(&mut self, size: usize, scope: usize) -> Arc<Vec<UTerm>> {
        if let Some(v) = self.nf.get(&(size, scope)) {
            return v.clone();
        }
        let mut out: Vec<UTerm> = self.neutral_terms(size, scope).as_ref().clone();
        if size >= 2 {
            let x = binder_name(scope);
            for b in self.nf_terms(size - 1, scope + 1).iter() {
                out.push(UTerm::Lam(x.clone(), Arc::new(b.clone())));
            }
        }
        let out = Arc::new(out);
        self.nf.insert((size, scope), out.clone());
        out
    }

    fn neutral_terms(&mut self, size: usize, scope: usize) -> Arc<Vec<UTerm>> {
        if let Some(v) = self.neutral.get(&(size, scope)) {
            return v.clone();
        }
        let mut out = Vec::new();
        if size == 1 {
            out.extend((0..scope).rev().map(UTerm::Var));
            out.extend(self.heads.iter().cloned().map(UTerm::Const));
        } else if size >= 4 {
            for fs in 1..=size - 3 {
                let heads = self.neutral_terms(fs, scope);
                if heads.is_empty() {
                    continue;
                }
                let args = self.nf_terms(size - 2 - fs, scope);
                for f in heads.iter() {
                    for a in args.iter() {
                        out.push(UTerm::app(f.clone(), a.clone()));
                    }
                }
            }
        }
        let out = Arc::new(out);
        self.neutral.insert((size, scope), out.clone());
        out
    }
}

fn binder_name(scope: usize) -> crate::syntax::Name {
    const NAMES: [&str; 6] = ["x", "y", "z", "u", "v", "w"];
    match NAMES.get(scope) {
        Some(n) => name(n),
        None => name(&format!("x{scope}")),
    }
}

/// Closed normal forms of size at most `bound`.
pub fn closed_normal_forms(cfg: &WecaConfig, bound: usize) -> Vec<UTerm> {
    NormalForms::new(cfg).up_to(bound)
}
