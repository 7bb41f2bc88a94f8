//! Verification of the explicit, multiplication and symmetry identities.
//!
//! Each verifier evaluates both sides of an identity from the building
//! blocks for `n = 0..=order`, tries every enumerated reading of the printed
//! statement, and separately compares a re-derived expansion with direct
//! coefficient extraction from the underlying generating function.

mod approx;
mod common;
mod explicit;
mod multiplication;
pub mod sampling;
mod symmetry;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::auxiliary::AuxError;
use crate::families::{FamilyError, FamilyParams};
use crate::poly::PolyError;
use crate::rational::Rational;
use crate::series::SeriesError;

pub use approx::ApproxPoly;

pub const REPORT_SCHEMA: &str = "1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdentityError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Aux(#[from] AuxError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

impl IdentityError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        IdentityError::InvalidArgument(msg.into())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TheoremId {
    #[serde(rename = "expansion")]
    Expansion,
    #[serde(rename = "T3_1")]
    T3_1,
    #[serde(rename = "T3_2")]
    T3_2,
    #[serde(rename = "T3_3")]
    T3_3,
    #[serde(rename = "T3_4")]
    T3_4,
    #[serde(rename = "T4_1_odd")]
    T4_1Odd,
    #[serde(rename = "T4_1_even")]
    T4_1Even,
    #[serde(rename = "T5_1")]
    T5_1,
    #[serde(rename = "T5_2")]
    T5_2,
    #[serde(rename = "T5_3")]
    T5_3,
    #[serde(rename = "T5_4")]
    T5_4,
    #[serde(rename = "T5_5")]
    T5_5,
    #[serde(rename = "T5_6")]
    T5_6,
}

impl TheoremId {
    pub const ALL: [TheoremId; 13] = [
        TheoremId::Expansion,
        TheoremId::T3_1,
        TheoremId::T3_2,
        TheoremId::T3_3,
        TheoremId::T3_4,
        TheoremId::T4_1Odd,
        TheoremId::T4_1Even,
        TheoremId::T5_1,
        TheoremId::T5_2,
        TheoremId::T5_3,
        TheoremId::T5_4,
        TheoremId::T5_5,
        TheoremId::T5_6,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TheoremId::Expansion => "expansion",
            TheoremId::T3_1 => "T3_1",
            TheoremId::T3_2 => "T3_2",
            TheoremId::T3_3 => "T3_3",
            TheoremId::T3_4 => "T3_4",
            TheoremId::T4_1Odd => "T4_1_odd",
            TheoremId::T4_1Even => "T4_1_even",
            TheoremId::T5_1 => "T5_1",
            TheoremId::T5_2 => "T5_2",
            TheoremId::T5_3 => "T5_3",
            TheoremId::T5_4 => "T5_4",
            TheoremId::T5_5 => "T5_5",
            TheoremId::T5_6 => "T5_6",
        }
    }

    pub fn is_symmetry(self) -> bool {
        matches!(
            self,
            TheoremId::T5_1 | TheoremId::T5_2 | TheoremId::T5_3 | TheoremId::T5_4 | TheoremId::T5_5 | TheoremId::T5_6
        )
    }

    fn index(self) -> u64 {
        TheoremId::ALL.iter().position(|t| *t == self).unwrap() as u64
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TheoremId {
    type Err = IdentityError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.trim().replace(['.', '-'], "_");
        let norm = norm.strip_prefix('t').map(|r| format!("T{r}")).unwrap_or(norm);
        TheoremId::ALL
            .iter()
            .copied()
            .find(|t| t.name().eq_ignore_ascii_case(&norm))
            .ok_or_else(|| IdentityError::invalid(format!("unknown theorem {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    ExactPass,
    PassWithinEps,
    PaperDeviation,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::ExactPass => "exact-pass",
            Status::PassWithinEps => "pass-within-eps",
            Status::PaperDeviation => "paper-deviation",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleStatus {
    OraclePass,
    OracleFail,
}

impl OracleStatus {
    pub fn name(self) -> &'static str {
        match self {
            OracleStatus::OraclePass => "oracle-pass",
            OracleStatus::OracleFail => "oracle-fail",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SwapStatus {
    Invariant,
    NotInvariant,
}

/// Parameters of one verification run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sample {
    #[serde(flatten)]
    pub family: FamilyParams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<u32>,
    /// Value substituted for `x` where the identity needs a numeric argument.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x0: Option<Rational>,
    /// Identify `X, Y, Z` with `x, y, z` before comparing.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub merge_capitals: bool,
}

impl Sample {
    pub fn new(family: FamilyParams) -> Self {
        Sample { family, gamma: None, s: None, l: None, q: None, c: None, d: None, x0: None, merge_capitals: false }
    }
}

/// Deliberate corruption of one building block, for negative controls.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Perturbation {
    #[default]
    None,
    /// Lower the upper `l` bound of the closed form by one.
    ClosedFormBound,
    /// Add one to a single auxiliary value (Stirling number, power sum,
    /// zeta value, ...) used by the right-hand side.
    BuildingBlock,
    /// Add one to the right-hand side at the largest checked `n`.
    RhsOffset,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyOptions {
    pub order: u32,
    pub eps: Rational,
    pub perturbation: Perturbation,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { order: 8, eps: default_eps(), perturbation: Perturbation::None }
    }
}

/// `10^-30`.
pub fn default_eps() -> Rational {
    Rational::from_bigints(1.into(), num_bigint::BigInt::from(10).pow(30)).unwrap()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub n: i64,
    pub lhs: String,
    pub rhs: String,
    pub difference: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
}

/// Outcome of comparing two sides for every checked `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Outcome {
    Exact,
    WithinEps,
    Fail(Counterexample),
}

impl Outcome {
    fn closes(&self) -> bool {
        !matches!(self, Outcome::Fail(_))
    }

    fn describe(&self) -> String {
        match self {
            Outcome::Exact => "closes exactly".into(),
            Outcome::WithinEps => "closes within certified bounds".into(),
            Outcome::Fail(c) => format!("fails first at n = {}", c.n),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Reading {
    pub name: String,
    pub outcome: Outcome,
}

impl Reading {
    pub fn new(name: impl Into<String>, outcome: Outcome) -> Self {
        Reading { name: name.into(), outcome }
    }
}

/// Raw result of one verifier before it is turned into a report.
#[derive(Debug, Clone, Default)]
pub(crate) struct Verdict {
    /// Readings of the printed statement, literal first.
    pub readings: Vec<Reading>,
    /// Corrected statements that are not readings of the printed text.
    pub corrected: Vec<Reading>,
    /// Re-derived expansion against the generating function.
    pub oracle: Vec<Reading>,
    pub swap: Option<bool>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: String,
    pub theorem: TheoremId,
    pub params: Sample,
    pub order: u32,
    pub status: Status,
    pub oracle_status: OracleStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closing_variant: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub swap_invariance: Option<SwapStatus>,
    pub variant_notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_counterexample: Option<Counterexample>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perturbation: Option<Perturbation>,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

fn assemble(theorem: TheoremId, sample: &Sample, opts: &VerifyOptions, v: Verdict) -> VerificationReport {
    let mut notes = Vec::new();
    for r in &v.readings {
        notes.push(format!("reading {}: {}", r.name, r.outcome.describe()));
    }
    for r in &v.corrected {
        notes.push(format!("corrected {}: {}", r.name, r.outcome.describe()));
    }
    for r in &v.oracle {
        notes.push(format!("oracle {}: {}", r.name, r.outcome.describe()));
    }
    notes.extend(v.notes.iter().cloned());

    let closing = v.readings.iter().find(|r| r.outcome.closes());
    let (status, closing_variant, counterexample) = match closing {
        Some(r) => {
            let s = if r.outcome == Outcome::Exact { Status::ExactPass } else { Status::PassWithinEps };
            (s, Some(r.name.clone()), None)
        }
        None => {
            let ce = v.readings.first().and_then(|r| match &r.outcome {
                Outcome::Fail(c) => Some(Counterexample { variant: Some(r.name.clone()), ..c.clone() }),
                _ => None,
            });
            (Status::PaperDeviation, None, ce)
        }
    };
    let oracle_ok = !v.oracle.is_empty() && v.oracle.iter().any(|r| r.outcome.closes());
    let oracle_counterexample = if oracle_ok {
        None
    } else {
        v.oracle.iter().find_map(|r| match &r.outcome {
            Outcome::Fail(c) => Some(Counterexample { variant: Some(r.name.clone()), ..c.clone() }),
            _ => None,
        })
    };
    let uses_eps = v.readings.iter().chain(&v.oracle).any(|r| r.outcome == Outcome::WithinEps)
        || matches!(theorem, TheoremId::T3_3 | TheoremId::T5_6);
    VerificationReport {
        schema: REPORT_SCHEMA.into(),
        theorem,
        params: sample.clone(),
        order: opts.order,
        status,
        oracle_status: if oracle_ok { OracleStatus::OraclePass } else { OracleStatus::OracleFail },
        closing_variant,
        swap_invariance: v.swap.map(|b| if b { SwapStatus::Invariant } else { SwapStatus::NotInvariant }),
        variant_notes: notes,
        counterexample,
        oracle_counterexample,
        eps: uses_eps.then(|| opts.eps.clone()),
        perturbation: (opts.perturbation != Perturbation::None).then_some(opts.perturbation),
    }
}

/// Runs one theorem on one parameter sample.
pub fn verify(theorem: TheoremId, sample: &Sample, opts: &VerifyOptions) -> Result<VerificationReport, IdentityError> {
    sample.family.validate()?;
    if opts.eps.is_negative() || opts.eps.is_zero() {
        return Err(IdentityError::invalid("eps must be positive"));
    }
    let v = match theorem {
        TheoremId::Expansion => explicit::expansion(sample, opts)?,
        TheoremId::T3_1 => explicit::t3_1(sample, opts)?,
        TheoremId::T3_2 => explicit::t3_2(sample, opts)?,
        TheoremId::T3_3 => explicit::t3_3(sample, opts)?,
        TheoremId::T3_4 => explicit::t3_4(sample, opts)?,
        TheoremId::T4_1Odd => multiplication::odd(sample, opts)?,
        TheoremId::T4_1Even => multiplication::even(sample, opts)?,
        TheoremId::T5_1 => symmetry::t5_1(sample, opts)?,
        TheoremId::T5_2 => symmetry::t5_2(sample, opts)?,
        TheoremId::T5_3 => symmetry::t5_3(sample, opts)?,
        TheoremId::T5_4 => symmetry::t5_4(sample, opts)?,
        TheoremId::T5_5 => symmetry::t5_5(sample, opts)?,
        TheoremId::T5_6 => symmetry::t5_6(sample, opts)?,
    };
    Ok(assemble(theorem, sample, opts, v))
}

/// Runs `trials` seeded samples of `theorem` in parallel. Results come back
/// in trial order regardless of scheduling.
pub fn verify_trials(
    theorem: TheoremId,
    trials: u32,
    seed: u64,
    opts: &VerifyOptions,
) -> Vec<Result<VerificationReport, IdentityError>> {
    use rayon::prelude::*;
    (0..trials)
        .into_par_iter()
        .map(|trial| {
            let sample = sampling::sample(theorem, seed, trial);
            verify(theorem, &sample, opts)
        })
        .collect()
}

pub(crate) fn stream_id(theorem: TheoremId, trial: u32) -> u64 {
    (theorem.index() << 32) | trial as u64
}

#[cfg(test)]
mod tests;
