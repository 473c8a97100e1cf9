use super::{AnswerSets, ParsedWitness, Result, Satisfiability, SystemError};
use crate::eval::CostVector;
use crate::syntax::parse_atom_list;

fn malformed(index: usize, text: &str) -> SystemError {
    SystemError::MalformedOutput {
        line: index + 1,
        text: text.to_string(),
    }
}

/// `Optimization: 3 0 7`. The values carry no level names; they are listed
/// most important first, so with k values the i-th is taken as level
/// k-1-i. Comparisons are therefore preserved, and for costs rendered over
/// every level down to 0 the levels are exact.
fn parse_costs(values: &str) -> Option<CostVector> {
    let ws: Vec<i64> = values
        .split_whitespace()
        .map(str::parse)
        .collect::<std::result::Result<_, _>>()
        .ok()?;
    let k = ws.len() as i64;
    Some(
        ws.into_iter()
            .enumerate()
            .map(|(i, w)| (k - 1 - i as i64, w))
            .collect(),
    )
}

/// Parses clingo's default text output. Statistics and informational lines
/// are ignored.
pub fn parse_clingo_output(text: &str) -> Result<AnswerSets> {
    let lines: Vec<&str> = text.lines().collect();
    let mut witnesses: Vec<ParsedWitness> = Vec::new();
    let mut satisfiable = Satisfiability::Unknown;
    let mut optimum_found = false;
    let mut unsat_line = None;
    let mut i = 0;
    while i < lines.len() {
        let line = lines[i].trim_end();
        if line.starts_with("Answer:") {
            let Some(w) = lines.get(i + 1) else {
                return Err(malformed(i, line));
            };
            let atoms = parse_atom_list(w).map_err(|_| malformed(i + 1, w))?;
            witnesses.push(ParsedWitness { atoms, cost: None });
            i += 2;
            continue;
        }
        if let Some(values) = line.strip_prefix("Optimization:") {
            let cost = parse_costs(values).ok_or_else(|| malformed(i, line))?;
            match witnesses.last_mut() {
                Some(w) if w.cost.is_none() => w.cost = Some(cost),
                _ => return Err(malformed(i, line)),
            }
        } else {
            match line.trim() {
                "SATISFIABLE" => satisfiable = Satisfiability::Sat,
                "UNSATISFIABLE" => {
                    satisfiable = Satisfiability::Unsat;
                    unsat_line = Some(i);
                }
                "UNKNOWN" => satisfiable = Satisfiability::Unknown,
                "OPTIMUM FOUND" => {
                    satisfiable = Satisfiability::Sat;
                    optimum_found = true;
                }
                _ => {}
            }
        }
        i += 1;
    }
    if satisfiable == Satisfiability::Unsat && !witnesses.is_empty() {
        let at = unsat_line.unwrap_or(0);
        return Err(malformed(at, lines[at]));
    }
    Ok(AnswerSets {
        sets: witnesses
            .into_iter()
            .map(ParsedWitness::into_answer_set)
            .collect(),
        satisfiable,
        optimum_found,
    })
}
