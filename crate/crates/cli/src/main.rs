use clap::{Args, Parser, Subcommand};
use polyaut::FieldSpec;
use polyaut_cli::{parse_job, render, run, Budgets, Command, ExitCode, JobError, JobSpec, SCHEMA_VERSION};
use serde_json::Value;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

/// Exact computations with polynomial automorphisms of affine space.
#[derive(Parser)]
#[command(name = "polyaut", version)]
struct Cli {
    #[command(subcommand)]
    sub: Sub,
    #[command(flatten)]
    budgets: BudgetFlags,
}

#[derive(Args, Clone, Copy, Default)]
struct BudgetFlags {
    /// Maximum number of critical pairs in a Gröbner basis computation.
    #[arg(long, global = true)]
    max_pairs: Option<usize>,
    /// Maximum number of terms in an intermediate polynomial.
    #[arg(long, global = true)]
    max_terms: Option<usize>,
    /// Degree bound for invariant searches and the case study.
    #[arg(long, global = true)]
    degree_bound: Option<u32>,
    /// Largest period tried when looking for a finite order.
    #[arg(long, global = true)]
    order_bound: Option<u32>,
}

impl From<BudgetFlags> for Budgets {
    fn from(f: BudgetFlags) -> Self {
        Budgets { max_pairs: f.max_pairs, max_terms: f.max_terms, degree_bound: f.degree_bound, order_bound: f.order_bound }
    }
}

#[derive(Subcommand)]
enum Sub {
    /// Run a complete job spec (a file, or stdin when omitted or `-`).
    Run { job: Option<PathBuf> },
    /// Check the three-space example and print its report.
    PoloniMoser {
        /// Also write the report to this file.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run a single command on an inputs object, e.g. `polyaut gb ideal.json`.
    #[command(external_subcommand)]
    Single(Vec<String>),
}

#[derive(Parser)]
#[command(no_binary_name = true)]
struct SingleArgs {
    #[arg(value_enum)]
    command: Command,
    /// JSON inputs object (stdin when omitted or `-`).
    inputs: Option<PathBuf>,
    /// `rationals`, `cyclotomic:M`, `rational-functions:NAME`, or a JSON field spec.
    #[arg(long, default_value = "rationals")]
    field: String,
    #[command(flatten)]
    budgets: BudgetFlags,
}

fn read_source(path: Option<&Path>) -> Result<String, JobError> {
    match path {
        Some(p) if p != Path::new("-") => {
            std::fs::read_to_string(p).map_err(|e| JobError::input(format!("{}: {e}", p.display())))
        }
        _ => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| JobError::input(format!("stdin: {e}")))?;
            Ok(s)
        }
    }
}

fn parse_field(s: &str) -> Result<FieldSpec, JobError> {
    if s.trim_start().starts_with('{') {
        return serde_json::from_str(s).map_err(|e| JobError::input(format!("field: {e}")));
    }
    let (kind, arg) = s.split_once(':').unwrap_or((s, ""));
    match kind {
        "rationals" | "Q" => Ok(FieldSpec::Rationals),
        "cyclotomic" => {
            let m = arg.parse().map_err(|_| JobError::input(format!("bad cyclotomic order `{arg}`")))?;
            Ok(FieldSpec::Cyclotomic { m })
        }
        "rational-functions" if !arg.is_empty() => Ok(FieldSpec::RationalFunctions { param: arg.to_string() }),
        _ => Err(JobError::input(format!("unknown field `{s}`"))),
    }
}

fn build_job(cli: &Cli) -> Result<(JobSpec, Option<PathBuf>), JobError> {
    let flags: Budgets = cli.budgets.into();
    match &cli.sub {
        Sub::Run { job } => {
            let mut spec = parse_job(&read_source(job.as_deref())?)?;
            spec.budgets = spec.budgets.overridden_by(flags);
            Ok((spec, None))
        }
        Sub::PoloniMoser { json } => {
            let spec = JobSpec {
                schema_version: SCHEMA_VERSION,
                command: Command::PoloniMoser,
                field: FieldSpec::Rationals,
                inputs: Value::Object(Default::default()),
                budgets: flags,
            };
            Ok((spec, json.clone()))
        }
        Sub::Single(args) => {
            let single = SingleArgs::try_parse_from(args).map_err(|e| JobError::input(e.to_string()))?;
            let text = read_source(single.inputs.as_deref())?;
            let inputs: Value = serde_json::from_str(&text).map_err(|e| JobError::input(format!("inputs: {e}")))?;
            let spec = JobSpec {
                schema_version: SCHEMA_VERSION,
                command: single.command,
                field: parse_field(&single.field)?,
                inputs,
                budgets: flags.overridden_by(single.budgets.into()),
            };
            Ok((spec, None))
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let result = build_job(&cli).and_then(|(job, out)| {
        let outcome = run(&job)?;
        let text = render(&outcome.report);
        if let Some(path) = out {
            std::fs::write(&path, format!("{text}\n")).map_err(|e| JobError {
                kind: "Io".into(),
                message: format!("{}: {e}", path.display()),
                exit: ExitCode::InputError,
            })?;
        }
        Ok((text, outcome.exit))
    });
    match result {
        Ok((text, exit)) => {
            let _ = writeln!(std::io::stdout(), "{text}");
            std::process::exit(exit as i32);
        }
        Err(e) => {
            let _ = writeln!(std::io::stderr(), "{}", render(&e.to_json()));
            std::process::exit(e.exit as i32);
        }
    }
}
