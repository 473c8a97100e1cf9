//! Reference evaluator for answer-set semantics.
//!
//! Everything here is exhaustive and meant for small programs: grounding
//! substitutes variables by constants of the Herbrand universe, the reduct
//! deletes rules whose body is false, and stability is decided by searching
//! for a strictly smaller model of the reduct.
//!
//! Two groundings are available. [`ground_program`] is the textbook one
//! (every substitution over the universe) and is what the semantic
//! definitions are stated against. [`relevant_grounding`] keeps only the
//! instances whose positive body can possibly hold; it is what
//! [`answer_sets`] searches over.

mod ground;
mod matching;
mod search;
mod semantics;
mod solve;
mod universe;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::time::Instant;

use thiserror::Error;

use crate::syntax::{Atom, ParseError, Rule, WeakConstraint};

pub use ground::{ground_program, relevant_grounding};
pub use semantics::{body_true, is_model, reduct};
pub use solve::{
    answer_sets, cost, is_answer_set, minimal_models, optimal_answer_sets, violated_instances,
};
pub use universe::{herbrand_base, herbrand_universe};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Limit {
    HerbrandBase,
    CandidateAtoms,
    GroundRules,
}

impl fmt::Display for Limit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Limit::HerbrandBase => "Herbrand base size",
            Limit::CandidateAtoms => "candidate atom count",
            Limit::GroundRules => "ground rule count",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("{what} {actual} exceeds the limit of {limit}")]
    LimitExceeded {
        what: Limit,
        limit: usize,
        /// Lower bound on the real size: counting stops once over the limit.
        actual: usize,
    },
    #[error("evaluation deadline reached")]
    Interrupted,
    #[error("program is not safe: {0}")]
    Unsafe(#[from] ParseError),
    #[error("weak constraint `{0}` needs non-negative integer weight and level")]
    InvalidWeakConstraint(String),
    #[error("atom `{0}` is not in the Herbrand base of the program")]
    OutsideBase(Atom),
}

pub type Result<T> = std::result::Result<T, EvalError>;

/// Guards against runaway enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvaluationLimits {
    pub max_herbrand_base: usize,
    pub max_candidate_atoms: usize,
    pub max_ground_rules: usize,
    /// Evaluation stops with [`EvalError::Interrupted`] past this instant.
    pub deadline: Option<Instant>,
}

impl Default for EvaluationLimits {
    fn default() -> Self {
        EvaluationLimits {
            max_herbrand_base: 5000,
            max_candidate_atoms: 128,
            max_ground_rules: 200_000,
            deadline: None,
        }
    }
}

impl EvaluationLimits {
    pub fn with_deadline(mut self, deadline: Instant) -> Self {
        self.deadline = Some(deadline);
        self
    }

    pub(crate) fn budget(&self) -> Budget {
        Budget {
            deadline: self.deadline,
            ticks: 0,
        }
    }
}

/// Cheap periodic deadline polling.
pub(crate) struct Budget {
    deadline: Option<Instant>,
    ticks: u32,
}

impl Budget {
    pub(crate) fn fork(&self) -> Budget {
        Budget {
            deadline: self.deadline,
            ticks: 0,
        }
    }

    pub(crate) fn tick(&mut self) -> Result<()> {
        self.ticks = self.ticks.wrapping_add(1);
        if self.ticks.is_multiple_of(512) {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    return Err(EvalError::Interrupted);
                }
            }
        }
        Ok(())
    }
}

pub(crate) fn exceeded(what: Limit, limit: usize, actual: usize) -> EvalError {
    EvalError::LimitExceeded {
        what,
        limit,
        actual,
    }
}

/// A set of ground atoms.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interpretation(BTreeSet<Atom>);

impl Interpretation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn contains(&self, atom: &Atom) -> bool {
        self.0.contains(atom)
    }

    pub fn insert(&mut self, atom: Atom) -> bool {
        self.0.insert(atom)
    }

    pub fn remove(&mut self, atom: &Atom) -> bool {
        self.0.remove(atom)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Atom> {
        self.0.iter()
    }

    pub fn atoms(&self) -> &BTreeSet<Atom> {
        &self.0
    }

    pub fn is_subset(&self, other: &Interpretation) -> bool {
        self.0.is_subset(&other.0)
    }

    /// Atoms rendered and sorted lexicographically by their text.
    pub fn sorted_strings(&self) -> Vec<String> {
        let mut v: Vec<String> = self.0.iter().map(Atom::to_string).collect();
        v.sort();
        v
    }

    /// Keeps only atoms whose predicate name is listed.
    pub fn filtered(&self, predicates: &[String]) -> Interpretation {
        self.0
            .iter()
            .filter(|a| predicates.contains(&a.predicate))
            .cloned()
            .collect()
    }
}

impl FromIterator<Atom> for Interpretation {
    fn from_iter<T: IntoIterator<Item = Atom>>(iter: T) -> Self {
        Interpretation(iter.into_iter().collect())
    }
}

impl IntoIterator for Interpretation {
    type Item = Atom;
    type IntoIter = std::collections::btree_set::IntoIter<Atom>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.into_iter()
    }
}

impl<'a> IntoIterator for &'a Interpretation {
    type Item = &'a Atom;
    type IntoIter = std::collections::btree_set::Iter<'a, Atom>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// `{a, b(1), c}` with atoms in lexicographic order of their text.
impl fmt::Display for Interpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.sorted_strings().join(", "))
    }
}

/// Total violated weight per priority level. Zero entries are never stored,
/// so equality ignores absent-vs-zero.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct CostVector(BTreeMap<i64, i64>);

impl CostVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, level: i64, weight: i64) {
        if weight == 0 {
            return;
        }
        let e = self.0.entry(level).or_insert(0);
        *e += weight;
        if *e == 0 {
            self.0.remove(&level);
        }
    }

    pub fn get(&self, level: i64) -> i64 {
        self.0.get(&level).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Non-zero `(level, weight)` pairs, lowest level first.
    pub fn levels(&self) -> impl DoubleEndedIterator<Item = (i64, i64)> + '_ {
        self.0.iter().map(|(l, w)| (*l, *w))
    }

    pub fn max_level(&self) -> Option<i64> {
        self.0.keys().next_back().copied()
    }
}

impl FromIterator<(i64, i64)> for CostVector {
    fn from_iter<T: IntoIterator<Item = (i64, i64)>>(iter: T) -> Self {
        let mut c = CostVector::new();
        for (level, weight) in iter {
            c.add(level, weight);
        }
        c
    }
}

/// Lexicographic comparison, most important (highest) level first.
impl Ord for CostVector {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let levels: BTreeSet<i64> = self.0.keys().chain(other.0.keys()).copied().collect();
        for level in levels.into_iter().rev() {
            match self.get(level).cmp(&other.get(level)) {
                std::cmp::Ordering::Equal => continue,
                ord => return ord,
            }
        }
        std::cmp::Ordering::Equal
    }
}

impl PartialOrd for CostVector {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// `[weight:level, ...]`, most important level first.
impl fmt::Display for CostVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .levels()
            .rev()
            .map(|(l, w)| format!("{w}:{l}"))
            .collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// An answer set together with its weak-constraint cost.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AnswerSet {
    pub atoms: Interpretation,
    pub cost: CostVector,
}

/// A variable-free program; builtins have been evaluated away.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GroundProgram {
    pub rules: Vec<Rule>,
    pub weak_constraints: Vec<WeakConstraint>,
}

impl GroundProgram {
    /// Statements rendered and sorted, one per line.
    pub fn sorted_lines(&self) -> Vec<String> {
        let mut v: Vec<String> = self
            .rules
            .iter()
            .map(Rule::to_string)
            .chain(self.weak_constraints.iter().map(WeakConstraint::to_string))
            .collect();
        v.sort();
        v
    }

    pub fn facts(&self) -> impl Iterator<Item = &Atom> {
        self.rules
            .iter()
            .filter(|r| r.is_fact())
            .map(|r| &r.head[0])
    }
}

/// Outcome of checking a candidate against the answer-set definition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    NotAModel,
    NotMinimal,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Yes => "yes",
            Verdict::NotAModel => "not_a_model",
            Verdict::NotMinimal => "not_minimal",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cost_compares_highest_level_first() {
        let a: CostVector = [(2, 1), (1, 100)].into_iter().collect();
        let b: CostVector = [(2, 2)].into_iter().collect();
        assert!(a < b);
        let zero = CostVector::new();
        assert!(zero < a);
        assert_eq!(CostVector::from_iter([(3, 0)]), zero);
    }

    #[test]
    fn cost_display() {
        let c: CostVector = [(2, 20), (3, 1)].into_iter().collect();
        assert_eq!(c.to_string(), "[1:3, 20:2]");
        assert_eq!(CostVector::new().to_string(), "[]");
    }

    #[test]
    fn interpretation_display_sorts_text() {
        let i: Interpretation = [
            Atom::new("p", vec![crate::syntax::Term::Integer(10)]),
            Atom::new("p", vec![crate::syntax::Term::Integer(9)]),
            Atom::prop("a"),
        ]
        .into_iter()
        .collect();
        assert_eq!(i.to_string(), "{a, p(10), p(9)}");
    }
}
