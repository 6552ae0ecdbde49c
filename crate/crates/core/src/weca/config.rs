use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::syntax::{name, Name};

use super::UConst;

/// The named rewriting systems.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WecaKind {
    Beta,
    Betaeta,
    LambdaC,
    LambdaId,
    One,
}

impl WecaKind {
    pub const ALL: [WecaKind; 5] = [
        WecaKind::Beta,
        WecaKind::Betaeta,
        WecaKind::LambdaC,
        WecaKind::LambdaId,
        WecaKind::One,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            WecaKind::Beta => "beta",
            WecaKind::Betaeta => "betaeta",
            WecaKind::LambdaC => "lambda-c",
            WecaKind::LambdaId => "lambda-id",
            WecaKind::One => "one",
        }
    }
}

impl fmt::Display for WecaKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for WecaKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        WecaKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| {
                format!("unknown WECA `{s}` (expected beta, betaeta, lambda-c, lambda-id or one)")
            })
    }
}

/// The rules a configuration enables.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Rules {
    pub beta: bool,
    pub eta: bool,
    /// `c N → c` for each listed constant.
    pub absorbing: BTreeSet<UConst>,
    pub j_iota: bool,
    pub proj_beta: bool,
    pub proj_refl: bool,
}

/// A term model: signature, rules and a step budget.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WecaConfig {
    pub kind: WecaKind,
    pub signature: BTreeSet<UConst>,
    pub rules: Rules,
    pub fuel: u64,
}

impl WecaConfig {
    pub fn beta() -> Self {
        WecaConfig {
            kind: WecaKind::Beta,
            signature: BTreeSet::new(),
            rules: Rules {
                beta: true,
                ..Rules::default()
            },
            fuel: crate::typecheck::DEFAULT_FUEL,
        }
    }

    pub fn betaeta() -> Self {
        let mut c = Self::beta();
        c.kind = WecaKind::Betaeta;
        c.rules.eta = true;
        c
    }

    /// Λ(C): β plus `c N → c` for the given constants.
    pub fn lambda_c<I: IntoIterator<Item = Name>>(constants: I) -> Self {
        let cs: BTreeSet<UConst> = constants.into_iter().map(UConst::Named).collect();
        let mut c = Self::beta();
        c.kind = WecaKind::LambdaC;
        c.signature = cs.clone();
        c.rules.absorbing = cs;
        c
    }

    /// Λ(C) with the single constant `c`.
    pub fn lambda_c_default() -> Self {
        Self::lambda_c([name("c")])
    }

    /// Λ^id: β plus the rules for J, refl, pairs and projections.
    pub fn lambda_id() -> Self {
        let mut c = Self::beta();
        c.kind = WecaKind::LambdaId;
        c.signature = [
            UConst::J,
            UConst::Refl,
            UConst::Pair,
            UConst::Proj1,
            UConst::Proj2,
        ]
        .into_iter()
        .collect();
        c.rules.absorbing = [UConst::Refl].into_iter().collect();
        c.rules.j_iota = true;
        c.rules.proj_beta = true;
        c.rules.proj_refl = true;
        c
    }

    /// The one-point algebra: every element is equal to every other.
    pub fn one() -> Self {
        let mut c = Self::beta();
        c.kind = WecaKind::One;
        c
    }

    pub fn of_kind(kind: WecaKind) -> Self {
        match kind {
            WecaKind::Beta => Self::beta(),
            WecaKind::Betaeta => Self::betaeta(),
            WecaKind::LambdaC => Self::lambda_c_default(),
            WecaKind::LambdaId => Self::lambda_id(),
            WecaKind::One => Self::one(),
        }
    }

    pub fn with_fuel(mut self, fuel: u64) -> Self {
        self.fuel = fuel;
        self
    }

    pub fn is_degenerate(&self) -> bool {
        self.kind == WecaKind::One
    }

    pub fn has_refl(&self) -> bool {
        self.signature.contains(&UConst::Refl)
    }
}
