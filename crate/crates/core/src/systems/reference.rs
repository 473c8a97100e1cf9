use std::fmt::Write as _;

use super::{AnswerSets, OptionDescriptor, Result, Satisfiability, SystemError};
use crate::eval::{self, AnswerSet, EvalError, EvaluationLimits};
use crate::mapper::is_identifier;
use crate::syntax::Program;

/// What the reference solver understands of the clingo/DLV option set.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReferenceOptions {
    /// At most this many answer sets, 0 for all.
    pub models: usize,
    /// Print only atoms of these predicates.
    pub filter: Option<Vec<String>>,
    /// Keep only optimal answer sets.
    pub optimal_only: bool,
}

impl ReferenceOptions {
    /// Accepts a positional model count, `-n=N`, `--models=N`,
    /// `-filter=p,q` and `--opt-mode=opt` / `--opt-mode=optN`.
    pub fn from_options(options: &[OptionDescriptor]) -> Result<Self> {
        let mut out = ReferenceOptions::default();
        for o in options {
            let text = o.to_string();
            let count = |v: &str| {
                v.parse::<usize>()
                    .map_err(|_| SystemError::InvalidOption(text.clone()))
            };
            if text.chars().all(|c| c.is_ascii_digit()) && !text.is_empty() {
                out.models = count(&text)?;
            } else if let Some(v) = text
                .strip_prefix("-n=")
                .or_else(|| text.strip_prefix("--models="))
            {
                out.models = count(v)?;
            } else if let Some(v) = text.strip_prefix("-filter=") {
                let names: Vec<String> = v.split(',').map(str::to_string).collect();
                if v.is_empty() {
                    return Err(SystemError::EmptyFilter);
                }
                if !names.iter().all(|n| is_identifier(n)) {
                    return Err(SystemError::InvalidOption(text));
                }
                out.filter = Some(names);
            } else if text == "--opt-mode=optN" || text == "--opt-mode=opt" {
                out.optimal_only = true;
            } else {
                return Err(SystemError::InvalidOption(format!(
                    "`{text}` is not supported by the reference solver"
                )));
            }
        }
        Ok(out)
    }
}

/// Evaluates `p` with the reference evaluator and packages the result as
/// a solver run would report it.
pub fn reference_answer_sets(
    p: &Program,
    opts: &ReferenceOptions,
    limits: &EvaluationLimits,
) -> std::result::Result<AnswerSets, EvalError> {
    let mut sets = if opts.optimal_only {
        eval::optimal_answer_sets(p, limits)?
    } else {
        eval::answer_sets(p, limits)?
    };
    if opts.models > 0 {
        sets.truncate(opts.models);
    }
    if let Some(f) = &opts.filter {
        sets = sets
            .into_iter()
            .map(|s| AnswerSet {
                atoms: s.atoms.filtered(f),
                cost: s.cost,
            })
            .collect();
    }
    let satisfiable = if sets.is_empty() {
        Satisfiability::Unsat
    } else {
        Satisfiability::Sat
    };
    let optimum_found = opts.optimal_only && !p.weak_constraints.is_empty() && !sets.is_empty();
    Ok(AnswerSets {
        sets,
        satisfiable,
        optimum_found,
    })
}

/// Renders in clingo's output format. Costs list every level from the
/// highest present down to 0, so parsing recovers the exact levels.
pub fn render_clingo_output(a: &AnswerSets) -> String {
    let mut s = String::from("asp-embed reference solver\nSolving...\n");
    let top = a.sets.iter().filter_map(|x| x.cost.max_level()).max();
    let show_costs = top.is_some() || a.optimum_found;
    let top = top.unwrap_or(0).max(0);
    for (i, set) in a.sets.iter().enumerate() {
        let _ = writeln!(s, "Answer: {}", i + 1);
        let _ = writeln!(s, "{}", set.atoms.sorted_strings().join(" "));
        if show_costs {
            let values: Vec<String> = (0..=top)
                .rev()
                .map(|l| set.cost.get(l).to_string())
                .collect();
            let _ = writeln!(s, "Optimization: {}", values.join(" "));
        }
    }
    let status = match (a.optimum_found, a.satisfiable) {
        (true, _) => "OPTIMUM FOUND",
        (false, Satisfiability::Sat) => "SATISFIABLE",
        (false, Satisfiability::Unsat) => "UNSATISFIABLE",
        (false, Satisfiability::Unknown) => "UNKNOWN",
    };
    let _ = writeln!(s, "{status}\n\nModels       : {}", a.sets.len());
    s
}
