//! JSON job runner for `polyaut`.
//!
//! A job names a command, a coefficient field, command-specific inputs and
//! optional budgets. [`run`] returns a JSON report (keys sorted, so output is
//! byte-stable) together with the process exit code.

mod commands;
mod convert;

use polyaut::{Budget, Error, FieldSpec};
use serde::Deserialize;
use serde_json::{json, Value};
use std::fmt;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Compose,
    Invert,
    IterateDegrees,
    Order,
    Exp,
    Log,
    PsiDegree,
    WeightSplit,
    BuildFlow,
    Decompose,
    Gb,
    Reduce,
    Fixpoints,
    UniqueFixpoint,
    Invariants,
    Classify,
    PoloniMoser,
    VerifyConjugacy,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Compose => "compose",
            Command::Invert => "invert",
            Command::IterateDegrees => "iterate-degrees",
            Command::Order => "order",
            Command::Exp => "exp",
            Command::Log => "log",
            Command::PsiDegree => "psi-degree",
            Command::WeightSplit => "weight-split",
            Command::BuildFlow => "build-flow",
            Command::Decompose => "decompose",
            Command::Gb => "gb",
            Command::Reduce => "reduce",
            Command::Fixpoints => "fixpoints",
            Command::UniqueFixpoint => "unique-fixpoint",
            Command::Invariants => "invariants",
            Command::Classify => "classify",
            Command::PoloniMoser => "poloni-moser",
            Command::VerifyConjugacy => "verify-conjugacy",
        }
    }
}

/// Resource limits; unset fields take the library defaults.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Budgets {
    pub max_pairs: Option<usize>,
    pub max_terms: Option<usize>,
    pub degree_bound: Option<u32>,
    pub order_bound: Option<u32>,
}

impl Budgets {
    /// Fields set in `other` win.
    pub fn overridden_by(self, other: Budgets) -> Budgets {
        Budgets {
            max_pairs: other.max_pairs.or(self.max_pairs),
            max_terms: other.max_terms.or(self.max_terms),
            degree_bound: other.degree_bound.or(self.degree_bound),
            order_bound: other.order_bound.or(self.order_bound),
        }
    }

    pub fn core(&self) -> Budget {
        let d = Budget::default();
        Budget { max_pairs: self.max_pairs.unwrap_or(d.max_pairs), max_terms: self.max_terms.unwrap_or(d.max_terms) }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub schema_version: u32,
    pub command: Command,
    #[serde(default = "rationals")]
    pub field: FieldSpec,
    #[serde(default)]
    pub inputs: Value,
    #[serde(default)]
    pub budgets: Budgets,
}

fn rationals() -> FieldSpec {
    FieldSpec::Rationals
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitCode {
    Ok = 0,
    InputError = 2,
    Inconclusive = 3,
    Internal = 4,
}

/// A failed job: printed as `{"error": {...}}` on stderr.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JobError {
    pub kind: String,
    pub message: String,
    pub exit: ExitCode,
}

impl JobError {
    pub fn input(message: impl Into<String>) -> Self {
        JobError { kind: "InvalidInput".into(), message: message.into(), exit: ExitCode::InputError }
    }

    pub fn to_json(&self) -> Value {
        json!({ "error": { "kind": self.kind, "message": self.message, "exit_code": self.exit as u8 } })
    }
}

impl fmt::Display for JobError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.message)
    }
}

impl From<Error> for JobError {
    fn from(e: Error) -> Self {
        let exit = match e {
            Error::BudgetExceeded(_) => ExitCode::Inconclusive,
            Error::Internal(_) => ExitCode::Internal,
            _ => ExitCode::InputError,
        };
        JobError { kind: e.kind().into(), message: e.to_string(), exit }
    }
}

/// Successful job output.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub report: Value,
    pub exit: ExitCode,
}

pub fn parse_job(text: &str) -> Result<JobSpec, JobError> {
    let job: JobSpec = serde_json::from_str(text).map_err(|e| JobError::input(format!("job spec: {e}")))?;
    if job.schema_version != SCHEMA_VERSION {
        return Err(JobError::input(format!(
            "unsupported schema_version {} (expected {SCHEMA_VERSION})",
            job.schema_version
        )));
    }
    Ok(job)
}

pub fn run(job: &JobSpec) -> Result<Outcome, JobError> {
    let (result, exit) = commands::dispatch(job)?;
    let report = json!({
        "schema_version": SCHEMA_VERSION,
        "command": job.command.name(),
        "field": serde_json::to_value(&job.field).expect("field spec serializes"),
        "result": result,
    });
    Ok(Outcome { report, exit })
}

/// Parses and runs a job, rendering either the report or the error.
pub fn run_text(text: &str) -> (String, ExitCode, bool) {
    match parse_job(text).and_then(|job| run(&job)) {
        Ok(out) => (render(&out.report), out.exit, true),
        Err(e) => (render(&e.to_json()), e.exit, false),
    }
}

pub fn render(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal_job() {
        let job = parse_job(r#"{"schema_version": 1, "command": "iterate-degrees"}"#).unwrap();
        assert_eq!(job.command, Command::IterateDegrees);
        assert_eq!(job.field, FieldSpec::Rationals);
        assert!(job.inputs.is_null());
        assert_eq!(job.budgets, Budgets::default());
    }

    #[test]
    fn rejects_other_schema_versions() {
        let e = parse_job(r#"{"schema_version": 0, "command": "gb"}"#).unwrap_err();
        assert_eq!(e.exit, ExitCode::InputError);
        assert!(e.message.contains("schema_version"));
    }

    #[test]
    fn command_names_round_trip() {
        use clap::ValueEnum;
        for c in Command::value_variants() {
            let parsed: Command = serde_json::from_value(json!(c.name())).unwrap();
            assert_eq!(parsed, *c);
        }
    }

    #[test]
    fn budgets_override() {
        let job = Budgets { max_pairs: Some(5), order_bound: Some(7), ..Default::default() };
        let flags = Budgets { order_bound: Some(9), ..Default::default() };
        let b = job.overridden_by(flags);
        assert_eq!((b.max_pairs, b.order_bound), (Some(5), Some(9)));
        assert_eq!(b.core().max_pairs, 5);
        assert_eq!(b.core().max_terms, Budget::default().max_terms);
    }

    #[test]
    fn budget_errors_are_inconclusive() {
        let e: JobError = Error::BudgetExceeded("pairs".into()).into();
        assert_eq!(e.exit, ExitCode::Inconclusive);
        assert_eq!(e.to_json()["error"]["exit_code"], 3);
    }
}
