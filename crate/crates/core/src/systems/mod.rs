//! Solver adapters: option builders, process invocation and output parsers
//! for clingo and DLV, plus the embedded reference solver.

mod clingo;
mod dlv;
mod options;
mod process;
mod reference;

use std::fmt;
use std::path::PathBuf;
use std::time::Duration;

use thiserror::Error;

use crate::eval::{AnswerSet, CostVector, EvalError, EvaluationLimits, Interpretation};
use crate::syntax::{Atom, ParseError};

pub use clingo::parse_clingo_output;
pub use dlv::parse_dlv_output;
pub use options::{filter_option, models_option, OptionDescriptor};
pub use reference::{reference_answer_sets, render_clingo_output, ReferenceOptions};

/// Environment variable naming the clingo executable.
pub const CLINGO_ENV: &str = "ASP_EMBED_CLINGO";
/// Environment variable naming the DLV executable.
pub const DLV_ENV: &str = "ASP_EMBED_DLV";
/// When set, temporary input files of external runs are kept.
pub const KEEP_TEMP_ENV: &str = "ASP_EMBED_KEEP_TEMP";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SystemError {
    #[error("solver executable `{0}` not found")]
    SolverNotFound(PathBuf),
    #[error("solver did not finish within {0:?}")]
    Timeout(Duration),
    #[error("solver exited with {}: {stderr}", code.map_or("a signal".to_string(), |c| format!("code {c}")))]
    NonzeroExit { code: Option<i32>, stderr: String },
    #[error("malformed solver output at line {line}: `{text}`")]
    MalformedOutput { line: usize, text: String },
    #[error("filter needs at least one predicate")]
    EmptyFilter,
    #[error("invalid option: {0}")]
    InvalidOption(String),
    #[error("invalid solver spec: {0}")]
    InvalidSpec(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

pub type Result<T> = std::result::Result<T, SystemError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolverKind {
    Reference,
    Clingo,
    Dlv,
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolverKind::Reference => "reference",
            SolverKind::Clingo => "clingo",
            SolverKind::Dlv => "dlv",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverSpec {
    pub kind: SolverKind,
    /// Required for external kinds, absent for the reference solver.
    pub executable: Option<PathBuf>,
    pub default_options: Vec<OptionDescriptor>,
    /// Only used by the reference solver.
    pub limits: EvaluationLimits,
}

impl SolverSpec {
    pub fn reference() -> Self {
        SolverSpec {
            kind: SolverKind::Reference,
            executable: None,
            default_options: Vec::new(),
            limits: EvaluationLimits::default(),
        }
    }

    pub fn external(kind: SolverKind, executable: impl Into<PathBuf>) -> Self {
        SolverSpec {
            kind,
            executable: Some(executable.into()),
            default_options: Vec::new(),
            limits: EvaluationLimits::default(),
        }
    }

    /// The executable from `ASP_EMBED_CLINGO` / `ASP_EMBED_DLV`, falling
    /// back to `clingo` / `dlv` on the search path.
    pub fn from_env(kind: SolverKind) -> Self {
        let (var, fallback) = match kind {
            SolverKind::Reference => return Self::reference(),
            SolverKind::Clingo => (CLINGO_ENV, "clingo"),
            SolverKind::Dlv => (DLV_ENV, "dlv"),
        };
        let exe = std::env::var_os(var)
            .filter(|v| !v.is_empty())
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from(fallback));
        Self::external(kind, exe)
    }

    pub fn with_limits(mut self, limits: EvaluationLimits) -> Self {
        self.limits = limits;
        self
    }

    pub fn with_option(mut self, o: OptionDescriptor) -> Self {
        self.default_options.push(o);
        self
    }

    pub fn validate(&self) -> Result<()> {
        match (self.kind, &self.executable) {
            (SolverKind::Reference, None) => Ok(()),
            (SolverKind::Reference, Some(_)) => Err(SystemError::InvalidSpec(
                "the reference solver takes no executable".into(),
            )),
            (_, None) => Err(SystemError::InvalidSpec(format!(
                "{} needs an executable",
                self.kind
            ))),
            (_, Some(_)) => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Satisfiability {
    Sat,
    Unsat,
    Unknown,
}

/// Parsed solver output. Sets appear in the order the solver printed them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnswerSets {
    pub sets: Vec<AnswerSet>,
    pub satisfiable: Satisfiability,
    pub optimum_found: bool,
}

impl AnswerSets {
    pub fn unknown() -> Self {
        AnswerSets {
            sets: Vec::new(),
            satisfiable: Satisfiability::Unknown,
            optimum_found: false,
        }
    }

    /// Distinct sets of minimal cost, sorted by rendering.
    pub fn optimal(&self) -> Vec<AnswerSet> {
        let Some(best) = self.sets.iter().map(|s| &s.cost).min() else {
            return Vec::new();
        };
        let mut out: Vec<AnswerSet> = Vec::new();
        for s in self.sets.iter().filter(|s| &s.cost == best) {
            if !out.contains(s) {
                out.push(s.clone());
            }
        }
        out.sort_by_cached_key(|s| s.atoms.to_string());
        out
    }

    /// Distinct atom sets, sorted by rendering.
    pub fn distinct_atoms(&self) -> Vec<Interpretation> {
        let mut v: Vec<Interpretation> = self.sets.iter().map(|s| s.atoms.clone()).collect();
        v.sort_by_cached_key(|i| i.to_string());
        v.dedup();
        v
    }
}

/// One witness as printed by a solver.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedWitness {
    pub atoms: Vec<Atom>,
    pub cost: Option<CostVector>,
}

impl ParsedWitness {
    fn into_answer_set(self) -> AnswerSet {
        AnswerSet {
            atoms: self.atoms.into_iter().collect(),
            cost: self.cost.unwrap_or_default(),
        }
    }
}

/// Captured streams of a finished run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawOutput {
    pub stdout: String,
    pub stderr: String,
    pub exit_code: Option<i32>,
}

/// Runs `spec` on `input`. External solvers read a temporary file; the
/// reference solver renders its result in clingo's text format.
pub fn invoke_solver(
    spec: &SolverSpec,
    input: &str,
    options: &[OptionDescriptor],
    timeout: Option<Duration>,
) -> Result<RawOutput> {
    spec.validate()?;
    let all: Vec<OptionDescriptor> = spec
        .default_options
        .iter()
        .chain(options)
        .cloned()
        .collect();
    match spec.kind {
        SolverKind::Reference => {
            let opts = ReferenceOptions::from_options(&all)?;
            let mut limits = spec.limits.clone();
            if let Some(t) = timeout {
                limits.deadline = Some(std::time::Instant::now() + t);
            }
            let program = crate::syntax::parse_program(input)?;
            let sets = match reference_answer_sets(&program, &opts, &limits) {
                Err(EvalError::Interrupted) => {
                    return Err(SystemError::Timeout(timeout.unwrap_or_default()))
                }
                other => other?,
            };
            Ok(RawOutput {
                stdout: render_clingo_output(&sets),
                stderr: String::new(),
                exit_code: Some(0),
            })
        }
        SolverKind::Clingo | SolverKind::Dlv => {
            let exe = spec.executable.as_ref().expect("validated");
            process::run_external(spec.kind, exe, input, &all, timeout)
        }
    }
}

/// Parses `text` with the parser matching `kind`.
pub fn parse_output(kind: SolverKind, text: &str) -> Result<AnswerSets> {
    match kind {
        SolverKind::Reference | SolverKind::Clingo => parse_clingo_output(text),
        SolverKind::Dlv => parse_dlv_output(text),
    }
}

/// `invoke_solver` followed by `parse_output`.
pub fn solve(
    spec: &SolverSpec,
    input: &str,
    options: &[OptionDescriptor],
    timeout: Option<Duration>,
) -> Result<(RawOutput, AnswerSets)> {
    let raw = invoke_solver(spec, input, options, timeout)?;
    let parsed = parse_output(spec.kind, &raw.stdout)?;
    Ok((raw, parsed))
}
