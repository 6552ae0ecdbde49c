//! Executable non-derivability checks. Each check discharges a list of
//! primitive obligations (normal-form comparisons, memberships, emptiness
//! verdicts) and reports `Reproduced` only when every obligation came out as
//! expected.

mod certificate;
mod checks;

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Flag, ModelError};
use crate::stdlib::{Corpus, CorpusError, Mutation};
use crate::syntax::{parse_term, ParseError};
use crate::typecheck::TypeError;
use crate::weca::{self, Answer, EraseError, Eraser, UParseError, UTerm, WecaConfig};

pub use certificate::{run_certificate, Certificate, CertificateError, Step, Witness};
pub use checks::{
    bool_prime, check_funext_fails, check_no_induction, check_parametric_quotient,
    check_pi_consistency, check_soundness_spot, check_stream_coinduction,
    check_stream_coinduction_syntactic, check_uip,
};

/// The certificate shipped for the induction check.
pub const NO_INDUCTION_CERTIFICATE: &str = include_str!("../../certificates/no-induction.json");
/// The default suite.
pub const DEFAULT_MANIFEST: &str = include_str!("../../certificates/default-manifest.json");

/// Overall verdict of a check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    Reproduced,
    Failed,
    Unknown,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Reproduced => "Reproduced",
            Status::Failed => "Failed",
            Status::Unknown => "Unknown",
        })
    }
}

/// Whether an obligation returned its expected answer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Met,
    Violated,
    Undecided,
}

/// One primitive obligation and what happened to it.
#[derive(Clone, Debug, Serialize)]
pub struct Obligation {
    pub step: String,
    pub expected: String,
    pub actual: String,
    pub outcome: Outcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "BTreeSet::is_empty")]
    pub flags: BTreeSet<Flag>,
}

impl Obligation {
    /// An obligation whose primitive answer is three-valued.
    pub fn answer(step: impl Into<String>, expected: Answer, actual: Answer) -> Self {
        let outcome = match actual {
            Answer::Unknown => Outcome::Undecided,
            a if a == expected => Outcome::Met,
            _ => Outcome::Violated,
        };
        Obligation {
            step: step.into(),
            expected: expected.to_string(),
            actual: actual.to_string(),
            outcome,
            detail: None,
            flags: BTreeSet::new(),
        }
    }

    /// An obligation about a computed value.
    pub fn value(
        step: impl Into<String>,
        expected: impl Into<String>,
        actual: impl Into<String>,
    ) -> Self {
        let (expected, actual) = (expected.into(), actual.into());
        let outcome = if expected == actual {
            Outcome::Met
        } else {
            Outcome::Violated
        };
        Obligation {
            step: step.into(),
            expected,
            actual,
            outcome,
            detail: None,
            flags: BTreeSet::new(),
        }
    }

    /// An obligation that could not be evaluated.
    pub fn undecided(step: impl Into<String>, why: impl fmt::Display) -> Self {
        Obligation {
            step: step.into(),
            expected: "-".into(),
            actual: "Unknown".into(),
            outcome: Outcome::Undecided,
            detail: Some(why.to_string()),
            flags: BTreeSet::new(),
        }
    }

    pub fn with_detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }

    pub fn with_flag(mut self, f: Flag) -> Self {
        self.flags.insert(f);
        self
    }
}

/// Result of one check.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub id: String,
    pub status: Status,
    pub obligations: Vec<Obligation>,
    pub flags: BTreeSet<Flag>,
    pub notes: Vec<String>,
    pub millis: u128,
}

impl Report {
    pub fn from_obligations(
        id: &str,
        obligations: Vec<Obligation>,
        notes: Vec<String>,
        started: Instant,
    ) -> Self {
        let status = if obligations.iter().any(|o| o.outcome == Outcome::Violated) {
            Status::Failed
        } else if obligations.is_empty()
            || obligations.iter().any(|o| o.outcome == Outcome::Undecided)
        {
            Status::Unknown
        } else {
            Status::Reproduced
        };
        let flags = obligations
            .iter()
            .flat_map(|o| o.flags.iter().copied())
            .collect();
        Report {
            id: id.to_string(),
            status,
            obligations,
            flags,
            notes,
            millis: started.elapsed().as_millis(),
        }
    }

    /// The first obligation that was not met.
    pub fn first_problem(&self) -> Option<&Obligation> {
        self.obligations.iter().find(|o| o.outcome != Outcome::Met)
    }

    /// One line: id, status, flags and timing.
    pub fn summary(&self) -> String {
        let mut s = format!("{} {}", self.id, self.status);
        if !self.flags.is_empty() {
            let f: Vec<String> = self.flags.iter().map(|f| f.to_string()).collect();
            s.push_str(&format!(" [{}]", f.join(", ")));
        }
        s.push_str(&format!(" ({} ms)", self.millis));
        s
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.summary())?;
        for o in &self.obligations {
            let mark = match o.outcome {
                Outcome::Met => "ok",
                Outcome::Violated => "FAIL",
                Outcome::Undecided => "??",
            };
            write!(
                f,
                "  [{mark}] {}: expected {}, got {}",
                o.step, o.expected, o.actual
            )?;
            if !o.flags.is_empty() {
                let fl: Vec<String> = o.flags.iter().map(|f| f.to_string()).collect();
                write!(f, " [{}]", fl.join(", "))?;
            }
            writeln!(f)?;
            if let Some(d) = &o.detail {
                for line in d.lines() {
                    writeln!(f, "       {line}")?;
                }
            }
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        Ok(())
    }
}

/// Errors that stop a check before any obligation is evaluated.
#[derive(Debug, Error)]
pub enum CheckError {
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    UParse(#[from] UParseError),
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error(transparent)]
    Erase(#[from] EraseError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// The checks of the default suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CheckId {
    StreamCoinduction,
    StreamCoinductionSyntactic,
    ParametricQuotient,
    Uip,
    FunExt,
    NoInduction,
    PiConsistency,
    SoundnessSpot,
}

impl CheckId {
    pub const ALL: [CheckId; 8] = [
        CheckId::StreamCoinduction,
        CheckId::StreamCoinductionSyntactic,
        CheckId::ParametricQuotient,
        CheckId::Uip,
        CheckId::FunExt,
        CheckId::NoInduction,
        CheckId::PiConsistency,
        CheckId::SoundnessSpot,
    ];

    /// The checks that have a documented breaking mutation.
    pub const MUTABLE: [CheckId; 5] = [
        CheckId::StreamCoinduction,
        CheckId::ParametricQuotient,
        CheckId::Uip,
        CheckId::FunExt,
        CheckId::NoInduction,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            CheckId::StreamCoinduction => "thm-4.2",
            CheckId::StreamCoinductionSyntactic => "thm-4.2-syntactic",
            CheckId::ParametricQuotient => "thm-4.3",
            CheckId::Uip => "lem-5.7",
            CheckId::FunExt => "lem-5.8",
            CheckId::NoInduction => "lem-5.9",
            CheckId::PiConsistency => "pi-consistency",
            CheckId::SoundnessSpot => "soundness-spot",
        }
    }

    /// A corpus change under which the check must fail.
    pub fn mutation(&self) -> Vec<Mutation> {
        match self {
            CheckId::StreamCoinduction | CheckId::StreamCoinductionSyntactic => {
                vec![Mutation::new("s2", "s2 := pack_stream bool true neg neg")]
            }
            CheckId::ParametricQuotient => vec![
                Mutation::new("qf", "qf : bool → bool := λb:bool. true"),
                Mutation::new(
                    "qf_resp",
                    "qf_resp : Πx y:bool. eq_bool x y → ΠP:bool → *. P (qf x) → P (qf y) :=\n  \
                     λx y:bool. λr:eq_bool x y. λP:bool → *. λp:P (qf x). p",
                ),
            ],
            CheckId::Uip => vec![Mutation::new(
                "refl_O",
                "postulate opaque_eq : Id(nat, O, O)\nrefl_O : Id(nat, O, O) := opaque_eq",
            )],
            CheckId::FunExt => vec![Mutation::new(
                "funext_g",
                "funext_g : bool → bool := λb:bool. b bool true false",
            )],
            CheckId::NoInduction => vec![Mutation::new(
                "ind_nat",
                "ind_nat : * := ΠP:nat → *. P O → (Πy:nat. P y → P (succ y)) → Πx:nat. P O",
            )],
            CheckId::PiConsistency | CheckId::SoundnessSpot => Vec::new(),
        }
    }

    /// Runs the check against a corpus with the given rewriting fuel.
    pub fn run(&self, corpus: &Corpus, fuel: u64) -> Report {
        match self {
            CheckId::StreamCoinduction => check_stream_coinduction(corpus, fuel),
            CheckId::StreamCoinductionSyntactic => check_stream_coinduction_syntactic(corpus, fuel),
            CheckId::ParametricQuotient => {
                check_parametric_quotient(corpus, &WecaConfig::beta().with_fuel(fuel))
            }
            CheckId::Uip => check_uip(corpus, fuel, 9),
            CheckId::FunExt => check_funext_fails(corpus, fuel),
            CheckId::NoInduction => {
                let cert: Certificate = serde_json::from_str(NO_INDUCTION_CERTIFICATE)
                    .expect("shipped certificate parses");
                let cert = cert.with_fuel(fuel);
                check_no_induction(corpus, &cert).unwrap_or_else(|e| improper_report(&cert.id, &e))
            }
            CheckId::PiConsistency => check_pi_consistency(corpus),
            CheckId::SoundnessSpot => check_soundness_spot(corpus),
        }
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CheckId {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        CheckId::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown check `{s}`"))
    }
}

// ----- shared helpers ------------------------------------------------------

/// Erases a closed λP2 term given in concrete syntax.
pub(crate) fn erase_src(er: &mut Eraser<'_>, src: &str) -> Result<UTerm, CheckError> {
    let t = parse_term(src)?;
    Ok(er.erase_closed(&t)?)
}

/// Parses an untyped term in which `[name]` stands for the erasure of a
/// corpus entry.
pub fn parse_carrier_term(corpus: &Corpus, src: &str) -> Result<UTerm, CheckError> {
    let mut er = Eraser::new(corpus.globals());
    let mut failure = None;
    let t = weca::parse_uterm(
        src,
        &mut |n| match er.erase_closed(&crate::syntax::Term::constant(n)) {
            Ok(u) if corpus.globals().contains(n) => Some(u),
            Ok(_) => None,
            Err(e) => {
                failure = Some(e);
                None
            }
        },
    );
    if let Some(e) = failure {
        return Err(e.into());
    }
    Ok(t?)
}

/// Compares two elements by normal form, recording the normal forms.
pub(crate) fn compare_nf(
    step: &str,
    a: &UTerm,
    b: &UTerm,
    expected: Answer,
    cfg: &WecaConfig,
) -> Obligation {
    let na = weca::normalize(a, cfg);
    let nb = weca::normalize(b, cfg);
    match (na, nb) {
        (Ok(x), Ok(y)) => Obligation::answer(step, expected, Answer::from_bool(x == y))
            .with_detail(format!(
                "{} ↦ {}\n{} ↦ {}",
                weca::print(a, true),
                weca::print(&x, true),
                weca::print(b, true),
                weca::print(&y, true)
            )),
        (Err(e), _) | (_, Err(e)) => Obligation::undecided(step, e),
    }
}

// ----- suite ---------------------------------------------------------------

#[derive(Debug, Error)]
pub enum ManifestError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("malformed manifest: {0}")]
    Syntax(String),
    #[error("unknown check `{0}`")]
    UnknownCheck(String),
    #[error("certificate {path}: {message}")]
    Certificate { path: String, message: String },
}

/// A suite description: the checks to run and the rewriting fuel.
#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct Manifest {
    #[serde(default)]
    pub fuel: Option<u64>,
    pub checks: Vec<ManifestEntry>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(untagged)]
pub enum ManifestEntry {
    Id(String),
    Detailed {
        id: String,
        #[serde(default)]
        certificate: Option<String>,
        #[serde(default)]
        expect: Option<Status>,
    },
}

enum Planned {
    Builtin(CheckId, Status),
    Cert(Box<Certificate>),
}

/// Aggregated suite result.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub reports: Vec<Report>,
    pub expected: Vec<Status>,
}

impl SuiteReport {
    pub fn all_met(&self) -> bool {
        self.reports
            .iter()
            .zip(&self.expected)
            .all(|(r, e)| r.status == *e)
    }

    /// `Failed` if some check contradicted its expectation, `Unknown` if
    /// some check was inconclusive, `Reproduced` otherwise.
    pub fn status(&self) -> Status {
        let unmet: Vec<&Report> = self
            .reports
            .iter()
            .zip(&self.expected)
            .filter(|(r, e)| r.status != **e)
            .map(|(r, _)| r)
            .collect();
        if unmet.is_empty() {
            Status::Reproduced
        } else if unmet.iter().all(|r| r.status == Status::Unknown) {
            Status::Unknown
        } else {
            Status::Failed
        }
    }
}

impl Manifest {
    pub fn parse(src: &str) -> Result<Manifest, ManifestError> {
        serde_json::from_str(src).map_err(|e| ManifestError::Syntax(e.to_string()))
    }

    pub fn default_suite() -> Manifest {
        Manifest::parse(DEFAULT_MANIFEST).expect("shipped manifest parses")
    }

    pub fn load(path: &Path) -> Result<Manifest, ManifestError> {
        let src = std::fs::read_to_string(path).map_err(|e| ManifestError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Manifest::parse(&src)
    }

    fn plan(&self, base: Option<&Path>) -> Result<Vec<Planned>, ManifestError> {
        let mut out = Vec::new();
        for entry in &self.checks {
            let (id, cert, expect) = match entry {
                ManifestEntry::Id(id) => (id, None, None),
                ManifestEntry::Detailed {
                    id,
                    certificate,
                    expect,
                } => (id, certificate.as_ref(), *expect),
            };
            if let Some(path) = cert {
                let full = match base {
                    Some(b) => b.join(path),
                    None => Path::new(path).to_path_buf(),
                };
                let src = std::fs::read_to_string(&full).map_err(|e| ManifestError::Io {
                    path: full.display().to_string(),
                    message: e.to_string(),
                })?;
                let mut c: Certificate =
                    serde_json::from_str(&src).map_err(|e| ManifestError::Certificate {
                        path: full.display().to_string(),
                        message: e.to_string(),
                    })?;
                if let Some(e) = expect {
                    c.expect = e;
                }
                out.push(Planned::Cert(Box::new(c)));
            } else {
                let check =
                    CheckId::from_str(id).map_err(|_| ManifestError::UnknownCheck(id.clone()))?;
                out.push(Planned::Builtin(
                    check,
                    expect.unwrap_or(Status::Reproduced),
                ));
            }
        }
        Ok(out)
    }
}

/// Runs every check of a manifest, in manifest order. `base` resolves
/// relative certificate paths.
pub fn run_suite(
    manifest: &Manifest,
    corpus: &Corpus,
    base: Option<&Path>,
) -> Result<SuiteReport, ManifestError> {
    let plan = manifest.plan(base)?;
    let fuel = manifest.fuel.unwrap_or(crate::typecheck::DEFAULT_FUEL);
    let results: Vec<(Report, Status)> = std::thread::scope(|s| {
        let handles: Vec<_> = plan
            .iter()
            .map(|p| {
                s.spawn(move || match p {
                    Planned::Builtin(c, e) => (c.run(corpus, fuel), *e),
                    Planned::Cert(c) => {
                        let c = match manifest.fuel {
                            Some(f) => c.as_ref().clone().with_fuel(f),
                            None => c.as_ref().clone(),
                        };
                        let r = run_certificate(corpus, &c)
                            .unwrap_or_else(|e| improper_report(&c.id, &e));
                        (r, c.expect)
                    }
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("check thread"))
            .collect()
    });
    let (reports, expected) = results.into_iter().unzip();
    Ok(SuiteReport { reports, expected })
}

fn improper_report(id: &str, e: &CertificateError) -> Report {
    Report::from_obligations(
        id,
        vec![
            Obligation::value("certificate is well-formed", "proper", "improper")
                .with_detail(e.to_string()),
        ],
        Vec::new(),
        Instant::now(),
    )
}

#[cfg(test)]
mod tests;
