//! Embedding answer-set solvers in applications.
//!
//! * [`syntax`]: the rule language (parser, AST, safety).
//! * [`eval`]: an exhaustive reference evaluator for small programs.
//! * [`mapper`]: records to facts and back.
//! * [`systems`]: clingo and DLV adapters and the embedded reference solver.
//! * [`orchestration`]: handlers that run a solver synchronously or not.
//! * [`encodings`]: the bundled example programs.

pub mod encodings;
pub mod eval;
pub mod mapper;
pub mod orchestration;
pub mod syntax;
pub mod systems;

pub use eval::{AnswerSet, CostVector, EvaluationLimits, Interpretation};
pub use syntax::{parse_program, Atom, Program, Rule, Term};
