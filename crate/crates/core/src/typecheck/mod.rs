//! Algorithmic typing for λP2 with optional Σ and identity types.

mod decls;
mod env;
mod infer;
mod reduce;

use thiserror::Error;

use crate::syntax::Term;

pub use decls::{check_decl, check_file, DeclError};
pub use env::{postulate_type, Global, Globals};
pub use infer::{check, classify, infer, is_kind, wf_context, Checker};
pub use reduce::{convertible, normalize, whnf, Fuel, DEFAULT_FUEL};

/// Which of the optional formers a pipeline accepts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct ExtensionFlags {
    pub sigma: bool,
    pub identity: bool,
    pub uip_postulate: bool,
    pub funext_postulate: bool,
}

impl ExtensionFlags {
    pub const NONE: ExtensionFlags = ExtensionFlags {
        sigma: false,
        identity: false,
        uip_postulate: false,
        funext_postulate: false,
    };

    pub const ALL: ExtensionFlags = ExtensionFlags {
        sigma: true,
        identity: true,
        uip_postulate: true,
        funext_postulate: true,
    };

    /// Reads `#ext` pragma words: `sigma`, `id`, `uip`, `funext`.
    pub fn from_pragmas<S: AsRef<str>>(words: &[S]) -> Result<Self, TypeError> {
        let mut f = ExtensionFlags::NONE;
        for w in words {
            match w.as_ref() {
                "sigma" => f.sigma = true,
                "id" | "identity" => f.identity = true,
                "uip" => f.uip_postulate = true,
                "funext" => f.funext_postulate = true,
                other => {
                    return Err(TypeError::ExtensionDisabled(format!(
                        "unknown extension `{other}`"
                    )))
                }
            }
        }
        f.validate()?;
        Ok(f)
    }

    /// The postulates are statements about identity types.
    pub fn validate(&self) -> Result<(), TypeError> {
        if (self.uip_postulate || self.funext_postulate) && !self.identity {
            return Err(TypeError::ExtensionDisabled(
                "uip and funext require the identity extension".into(),
            ));
        }
        Ok(())
    }

    /// Union of two flag sets.
    pub fn join(self, other: ExtensionFlags) -> ExtensionFlags {
        ExtensionFlags {
            sigma: self.sigma || other.sigma,
            identity: self.identity || other.identity,
            uip_postulate: self.uip_postulate || other.uip_postulate,
            funext_postulate: self.funext_postulate || other.funext_postulate,
        }
    }

    /// True if every extension enabled in `self` is enabled in `other`.
    pub fn within(self, other: ExtensionFlags) -> bool {
        self.join(other) == other
    }

    pub fn pragma_words(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        if self.sigma {
            v.push("sigma");
        }
        if self.identity {
            v.push("id");
        }
        if self.uip_postulate {
            v.push("uip");
        }
        if self.funext_postulate {
            v.push("funext");
        }
        v
    }
}

/// The four disjoint classes of well-typed expressions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum SortClass {
    KindSort,
    KindExpr,
    ConstructorExpr,
    TermExpr,
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum TypeError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("not a function: `{term}` has type `{ty}`")]
    NotAFunction { term: String, ty: String },
    #[error("argument `{arg}` has type `{found}` but the function expects `{expected}`")]
    DomainMismatch {
        arg: String,
        expected: String,
        found: String,
    },
    #[error("product formation ({0}) is not allowed; (□,□) products are excluded")]
    ForbiddenPiFormation(String),
    #[error("extension disabled: {0}")]
    ExtensionDisabled(String),
    #[error("type mismatch for `{term}`: expected `{expected}`, found `{found}`")]
    ConversionFailure {
        term: String,
        expected: String,
        found: String,
    },
    #[error("variable `{0}` declared twice")]
    DuplicateVariable(String),
    #[error("classifier of `{var}` is neither a type nor a kind: {reason}")]
    IllFormedClassifier { var: String, reason: String },
    #[error("normalization fuel exhausted while {0}")]
    FuelExhausted(String),
    #[error("not well typed: {0}")]
    NotWellTyped(String),
    #[error("cannot infer the type of `refl`; annotate it with an identity type")]
    CannotInferRefl,
    #[error("cannot infer the type of an unannotated pair; write ⟨a, b⟩[Σx:A. B]")]
    CannotInferPair,
}

impl TypeError {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            TypeError::UnboundVariable(_) => "UnboundVariable",
            TypeError::NotAFunction { .. } => "NotAFunction",
            TypeError::DomainMismatch { .. } => "DomainMismatch",
            TypeError::ForbiddenPiFormation(_) => "ForbiddenPiFormation",
            TypeError::ExtensionDisabled(_) => "ExtensionDisabled",
            TypeError::ConversionFailure { .. } => "ConversionFailure",
            TypeError::DuplicateVariable(_) => "DuplicateVariable",
            TypeError::IllFormedClassifier { .. } => "IllFormedClassifier",
            TypeError::FuelExhausted(_) => "FuelExhausted",
            TypeError::NotWellTyped(_) => "NotWellTyped",
            TypeError::CannotInferRefl => "CannotInferRefl",
            TypeError::CannotInferPair => "CannotInferPair",
        }
    }
}

pub(crate) fn show(t: &Term, ctx: &crate::syntax::Context) -> String {
    crate::syntax::print_in(t, &ctx.names())
}

#[cfg(test)]
mod tests;
