//! Collects programs and options, runs a solver synchronously or on a
//! worker thread, and hands back an [`Output`].
//!
//! ```
//! use std::sync::Arc;
//! use asp_embed::orchestration::{Handler, InputProgram};
//! use asp_embed::mapper::SchemaRegistry;
//! use asp_embed::systems::SolverSpec;
//!
//! let mut h = Handler::new(SolverSpec::reference(), Arc::new(SchemaRegistry::new()));
//! h.add_program(InputProgram::new().with_text("a | b."));
//! let out = h.start_sync(None);
//! assert_eq!(out.typed().unwrap().sets.len(), 2);
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;
use std::thread;
use std::time::Duration;

use thiserror::Error;

use crate::mapper::{MapError, MappedRecord, SchemaRegistry};
use crate::systems::{self, AnswerSets, OptionDescriptor, SolverSpec, SystemError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ServiceError {
    #[error("mapping failed: {0}")]
    Mapping(#[from] MapError),
    #[error("cannot read {path}: {message}")]
    FileRead { path: PathBuf, message: String },
    #[error(transparent)]
    System(#[from] SystemError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProgramPart {
    RawText(String),
    MappedFacts(Vec<MappedRecord>),
    FilePath(PathBuf),
}

/// Ordered pieces of solver input.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct InputProgram {
    pub parts: Vec<ProgramPart>,
}

impl InputProgram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_text(mut self, text: impl Into<String>) -> Self {
        self.parts.push(ProgramPart::RawText(text.into()));
        self
    }

    pub fn with_facts(mut self, records: Vec<MappedRecord>) -> Self {
        self.parts.push(ProgramPart::MappedFacts(records));
        self
    }

    pub fn with_file(mut self, path: impl Into<PathBuf>) -> Self {
        self.parts.push(ProgramPart::FilePath(path.into()));
        self
    }
}

/// Identifies a program or option added to a [`Handler`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Id(u64);

/// Identifies one asynchronous run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JobId(u64);

impl fmt::Display for JobId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "job-{}", self.0)
    }
}

static NEXT_JOB: AtomicU64 = AtomicU64::new(1);

/// Result of one run: the solver's text and either the parsed answer sets
/// or the error that stopped the run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub raw: String,
    pub outcome: Result<AnswerSets, ServiceError>,
}

impl Output {
    pub fn typed(&self) -> Option<&AnswerSets> {
        self.outcome.as_ref().ok()
    }

    pub fn error(&self) -> Option<&ServiceError> {
        self.outcome.as_ref().err()
    }

    fn failed(e: ServiceError) -> Output {
        Output {
            raw: String::new(),
            outcome: Err(e),
        }
    }
}

pub type Callback = Box<dyn FnOnce(Output) + Send + 'static>;

/// Everything a run depends on, captured at start time.
#[derive(Debug, Clone)]
struct Job {
    input: String,
    options: Vec<OptionDescriptor>,
    solver: SolverSpec,
    timeout: Option<Duration>,
}

impl Job {
    fn run(self) -> Output {
        match systems::solve(&self.solver, &self.input, &self.options, self.timeout) {
            Ok((raw, sets)) => Output {
                raw: raw.stdout,
                outcome: Ok(sets),
            },
            Err(e) => Output::failed(e.into()),
        }
    }
}

/// Owns the programs and options for a solver. Not meant for concurrent
/// mutation; jobs started from it are independent of later changes.
#[derive(Debug, Clone)]
pub struct Handler {
    next_id: u64,
    programs: BTreeMap<Id, InputProgram>,
    options: BTreeMap<Id, OptionDescriptor>,
    pub solver: SolverSpec,
    pub registry: Arc<SchemaRegistry>,
    /// Used by [`Handler::start_async`].
    pub timeout: Option<Duration>,
}

impl Handler {
    pub fn new(solver: SolverSpec, registry: Arc<SchemaRegistry>) -> Self {
        Handler {
            next_id: 0,
            programs: BTreeMap::new(),
            options: BTreeMap::new(),
            solver,
            registry,
            timeout: None,
        }
    }

    fn fresh_id(&mut self) -> Id {
        self.next_id += 1;
        Id(self.next_id)
    }

    pub fn add_program(&mut self, p: InputProgram) -> Id {
        let id = self.fresh_id();
        self.programs.insert(id, p);
        id
    }

    pub fn add_option(&mut self, o: OptionDescriptor) -> Id {
        let id = self.fresh_id();
        self.options.insert(id, o);
        id
    }

    /// Removes a program or option; false when the id is unknown.
    pub fn remove(&mut self, id: Id) -> bool {
        self.programs.remove(&id).is_some() || self.options.remove(&id).is_some()
    }

    pub fn program(&self, id: Id) -> Option<&InputProgram> {
        self.programs.get(&id)
    }

    pub fn program_mut(&mut self, id: Id) -> Option<&mut InputProgram> {
        self.programs.get_mut(&id)
    }

    pub fn programs(&self) -> impl Iterator<Item = (Id, &InputProgram)> {
        self.programs.iter().map(|(k, v)| (*k, v))
    }

    pub fn options(&self) -> impl Iterator<Item = (Id, &OptionDescriptor)> {
        self.options.iter().map(|(k, v)| (*k, v))
    }

    /// All parts of all programs in insertion order. A newline is inserted
    /// between parts when the previous one does not end with one.
    pub fn assemble_input(&self) -> Result<String, ServiceError> {
        let mut out = String::new();
        for p in self.programs.values() {
            for part in &p.parts {
                if !out.is_empty() && !out.ends_with('\n') {
                    out.push('\n');
                }
                match part {
                    ProgramPart::RawText(t) => out.push_str(t),
                    ProgramPart::MappedFacts(records) => {
                        for r in records {
                            let atom = self.registry.record_to_fact(r)?;
                            out.push_str(&atom.to_string());
                            out.push_str(".\n");
                        }
                    }
                    ProgramPart::FilePath(path) => {
                        let text =
                            std::fs::read_to_string(path).map_err(|e| ServiceError::FileRead {
                                path: path.clone(),
                                message: e.to_string(),
                            })?;
                        out.push_str(&text);
                    }
                }
            }
        }
        Ok(out)
    }

    fn snapshot(&self, timeout: Option<Duration>) -> Result<Job, ServiceError> {
        Ok(Job {
            input: self.assemble_input()?,
            options: self.options.values().cloned().collect(),
            solver: self.solver.clone(),
            timeout,
        })
    }

    /// Blocks until the solver finishes or `timeout` passes.
    pub fn start_sync(&self, timeout: Option<Duration>) -> Output {
        match self.snapshot(timeout) {
            Ok(job) => job.run(),
            Err(e) => Output::failed(e),
        }
    }

    /// Returns at once; `cb` later receives exactly one [`Output`], on a
    /// worker thread, computed from the handler state at this call.
    pub fn start_async(&self, cb: Callback) -> JobId {
        let id = JobId(NEXT_JOB.fetch_add(1, Ordering::Relaxed));
        let snapshot = self.snapshot(self.timeout);
        thread::Builder::new()
            .name(format!("asp-embed-{id}"))
            .spawn(move || {
                let out = match snapshot {
                    Ok(job) => job.run(),
                    Err(e) => Output::failed(e),
                };
                log::debug!("{id} finished");
                cb(out);
            })
            .expect("spawn solver thread");
        id
    }
}
