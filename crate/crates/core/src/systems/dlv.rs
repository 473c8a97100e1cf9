use super::{AnswerSets, ParsedWitness, Result, Satisfiability, SystemError};
use crate::eval::CostVector;
use crate::syntax::parse_atom_list;

const COST_PREFIX: &str = "Cost ([Weight:Level]):";
const BEST_PREFIX: &str = "Best model:";

fn malformed(index: usize, text: &str) -> SystemError {
    SystemError::MalformedOutput {
        line: index + 1,
        text: text.to_string(),
    }
}

fn parse_model(s: &str) -> Option<Vec<crate::syntax::Atom>> {
    let inner = s.trim().strip_prefix('{')?.strip_suffix('}')?;
    parse_atom_list(inner).ok()
}

/// `<[1:1],[20:2]>`
fn parse_cost(s: &str) -> Option<CostVector> {
    let inner = s.trim().strip_prefix('<')?.strip_suffix('>')?.trim();
    let mut cost = CostVector::new();
    if inner.is_empty() {
        return Some(cost);
    }
    for item in inner.split(',') {
        let pair = item.trim().strip_prefix('[')?.strip_suffix(']')?;
        let (w, l) = pair.split_once(':')?;
        cost.add(l.trim().parse().ok()?, w.trim().parse().ok()?);
    }
    Some(cost)
}

/// Parses DLV's text output: `{...}` model lines, `Best model:` lines
/// for optimization runs, each followed by a cost line. A run that printed
/// the version banner and no model is unsatisfiable; without the banner
/// nothing can be concluded.
pub fn parse_dlv_output(text: &str) -> Result<AnswerSets> {
    let mut witnesses: Vec<ParsedWitness> = Vec::new();
    let mut banner = false;
    let mut best = false;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.starts_with("DLV [") {
            banner = true;
        } else if let Some(rest) = line.strip_prefix(BEST_PREFIX) {
            let atoms = parse_model(rest).ok_or_else(|| malformed(i, raw))?;
            witnesses.push(ParsedWitness { atoms, cost: None });
            best = true;
        } else if line.starts_with('{') {
            let atoms = parse_model(line).ok_or_else(|| malformed(i, raw))?;
            witnesses.push(ParsedWitness { atoms, cost: None });
        } else if let Some(rest) = line.strip_prefix(COST_PREFIX) {
            let cost = parse_cost(rest).ok_or_else(|| malformed(i, raw))?;
            match witnesses.last_mut() {
                Some(w) if w.cost.is_none() => w.cost = Some(cost),
                _ => return Err(malformed(i, raw)),
            }
        }
    }
    let satisfiable = if !witnesses.is_empty() {
        Satisfiability::Sat
    } else if banner {
        Satisfiability::Unsat
    } else {
        Satisfiability::Unknown
    };
    Ok(AnswerSets {
        sets: witnesses
            .into_iter()
            .map(ParsedWitness::into_answer_set)
            .collect(),
        satisfiable,
        optimum_found: best,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn models() {
        let out =
            parse_dlv_output("DLV [build BEN/Dec 17 2012   gcc 4.6.1]\n\n{a, b(1)}\n{}\n").unwrap();
        assert_eq!(out.satisfiable, Satisfiability::Sat);
        assert_eq!(out.sets.len(), 2);
        assert_eq!(out.sets[0].atoms.to_string(), "{a, b(1)}");
        assert!(out.sets[1].atoms.is_empty());
    }

    #[test]
    fn best_model_with_cost() {
        let out = parse_dlv_output("Best model: {a}\nCost ([Weight:Level]): <[1:1]>\n").unwrap();
        assert!(out.optimum_found);
        assert_eq!(out.sets[0].cost, [(1, 1)].into_iter().collect());
    }

    #[test]
    fn strings_with_commas() {
        let out = parse_dlv_output("{p(\"x, y\"), q}\n").unwrap();
        assert_eq!(out.sets[0].atoms.len(), 2);
    }

    #[test]
    fn unsat_needs_banner() {
        let out = parse_dlv_output("DLV [build BEN/Dec 17 2012   gcc 4.6.1]\n\n").unwrap();
        assert_eq!(out.satisfiable, Satisfiability::Unsat);
        assert_eq!(
            parse_dlv_output("").unwrap().satisfiable,
            Satisfiability::Unknown
        );
    }

    #[test]
    fn malformed() {
        assert!(parse_dlv_output("{a(}\n").is_err());
        assert!(parse_dlv_output("{a}\nCost ([Weight:Level]): <[x:1]>\n").is_err());
    }
}
