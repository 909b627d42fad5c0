use std::path::PathBuf;

use ordo_core::applications::ApplicationError;
use ordo_core::certify::CertifyError;
use ordo_core::digraph::io::ParseError;
use ordo_core::oracle::OrderPredicate;
use ordo_core::reductions::ReductionError;
use ordo_core::{ArcFamilyKind, ArcPartition, DegreeProfile, ExtendedValue, SolveError, SolveResult, Witness};
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA: &str = "ordo/1";

/// What a report asserts, in a form `verify` can re-check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "claim", rename_all = "kebab-case")]
pub enum Claim {
    /// The order satisfies the predicate, or no order does.
    Order { predicate: OrderPredicate },
    /// The partition is valid, or none exists.
    Partition { kind: ArcFamilyKind },
    /// The order has weighted left-outdegrees at most `value`, and every
    /// member of `lower_bound_set` sends at least `value` into the set.
    Minmax { value: ExtendedValue, lower_bound_set: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub command: String,
    pub feasible: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<DegreeProfile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partition: Option<ArcPartition>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub claim: Option<Claim>,
    #[serde(default)]
    pub diagnostics: Vec<String>,
}

impl Report {
    pub fn new(command: impl Into<String>, feasible: bool) -> Self {
        Self {
            schema: SCHEMA.into(),
            command: command.into(),
            feasible,
            order: None,
            profile: None,
            witness: None,
            partition: None,
            value: None,
            claim: None,
            diagnostics: Vec::new(),
        }
    }

    pub fn from_result(command: impl Into<String>, result: SolveResult, claim: Option<Claim>) -> Self {
        let mut r = Self::new(command, result.is_feasible());
        match result {
            SolveResult::Feasible { order, profile } => {
                r.order = Some(order.into_vec());
                r.profile = Some(profile);
            }
            SolveResult::Infeasible { witness } => {
                if witness.is_none() {
                    r.diagnostics.push("infeasibility established by exhaustive search".into());
                }
                r.witness = witness;
            }
        }
        r.claim = claim;
        r
    }

    pub fn outcome(self) -> Outcome {
        let code = if self.feasible { 0 } else { 1 };
        Outcome { body: serde_json::to_value(&self).expect("report serializes"), code }
    }
}

/// Finished command: JSON body and exit status.
pub struct Outcome {
    pub body: Value,
    pub code: u8,
}

impl Outcome {
    pub fn json(body: Value, ok: bool) -> Self {
        Self { body, code: if ok { 0 } else { 1 } }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: {source}", path.display())]
    Parse { path: PathBuf, source: ParseError },
    #[error("{}: {msg}", path.display())]
    Json { path: PathBuf, msg: String },
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Application(#[from] ApplicationError),
    #[error(transparent)]
    Certify(#[from] CertifyError),
    #[error("{0}")]
    Usage(String),
}

pub fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}
