//! A kernel for second-order dependent type theory (λP2) with Σ and
//! identity types, an untyped rewriting engine for the term models, and a
//! polyset-model evaluator used to certify non-derivability results.

pub mod countermodel;
pub mod model;
pub mod stdlib;
pub mod syntax;
pub mod typecheck;
pub mod weca;
