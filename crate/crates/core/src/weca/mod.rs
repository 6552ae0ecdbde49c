//! Untyped term models: λ-terms over a constant signature, erasure of typed
//! terms, rewriting with β, η and the constant rules, and enumeration of
//! closed normal forms.

mod config;
mod enumerate;
mod erase;
mod parse;
mod print;
mod reduce;
mod uterm;

pub use config::{Rules, WecaConfig, WecaKind};
pub use enumerate::{closed_normal_forms, NormalForms};
pub use erase::{default_valuation, erase, EraseError, Eraser};
pub use parse::{parse_uterm, parse_uterm_plain, UParseError};
pub use print::print;
pub use reduce::{
    contract_at, contract_root, head_normalize, is_normal, normalize, normalize_by_steps, point,
    redex_positions, step, weca_eq, Answer, FuelExhausted, Position,
};
pub use uterm::{UConst, UTerm};

#[cfg(test)]
mod tests;
