use std::collections::HashSet;

use super::ground::relevant_grounding;
use super::matching::{instantiate, AtomStore, Compiled, Matcher};
use super::search::{has_smaller_model, AtomTable, PropProgram, PropRule, Search, Val};
use super::semantics::body_true;
use super::universe::herbrand_universe;
use super::{
    exceeded, AnswerSet, Budget, CostVector, EvalError, EvaluationLimits, GroundProgram,
    Interpretation, Limit, Result, Verdict,
};
use crate::syntax::{Literal, Program, Rule, Term, WeakConstraint};

/// Sum of the weights of the violated weak constraints, per level.
pub fn cost(i: &Interpretation, gwcs: &[WeakConstraint]) -> CostVector {
    let mut c = CostVector::new();
    for w in gwcs {
        let holds = w.literals().all(|l| i.contains(&l.atom) != l.negated);
        if holds {
            if let (Some(weight), Some(level)) = (w.weight.as_integer(), w.level.as_integer()) {
                c.add(level, weight);
            }
        }
    }
    c
}

fn body_true_prop(r: &PropRule, model: &[bool]) -> bool {
    r.pos.iter().all(|&a| model[a as usize]) && r.neg.iter().all(|&a| !model[a as usize])
}

/// Interned view of a ground program with the facts and the atoms that can
/// be derived by some non-fact rule.
struct Interned {
    table: AtomTable,
    rules: Vec<PropRule>,
    facts: Vec<bool>,
    candidates: Vec<u32>,
}

impl Interned {
    fn new(rules: &[Rule]) -> Interned {
        let mut table = AtomTable::default();
        let prop: Vec<PropRule> = rules.iter().map(|r| table.rule(r)).collect();
        let n = table.len();
        let mut facts = vec![false; n];
        let mut derivable = vec![false; n];
        for r in &prop {
            if r.pos.is_empty() && r.neg.is_empty() && r.head.len() == 1 {
                facts[r.head[0] as usize] = true;
            } else {
                for &h in &r.head {
                    derivable[h as usize] = true;
                }
            }
        }
        let candidates = (0..n as u32)
            .filter(|&a| derivable[a as usize] && !facts[a as usize])
            .collect();
        Interned {
            table,
            rules: prop,
            facts,
            candidates,
        }
    }

    fn check_limit(&self, limits: &EvaluationLimits) -> Result<()> {
        if self.candidates.len() > limits.max_candidate_atoms {
            return Err(exceeded(
                Limit::CandidateAtoms,
                limits.max_candidate_atoms,
                self.candidates.len(),
            ));
        }
        Ok(())
    }

    fn initial(&self) -> Vec<Val> {
        let mut vals = vec![Val::False; self.table.len()];
        for (a, &f) in self.facts.iter().enumerate() {
            if f {
                vals[a] = Val::True;
            }
        }
        for &a in &self.candidates {
            vals[a as usize] = Val::Unknown;
        }
        vals
    }

    fn interpretation(&self, model: &[bool]) -> Interpretation {
        model
            .iter()
            .enumerate()
            .filter(|(_, &t)| t)
            .map(|(a, _)| self.table.atoms[a].clone())
            .collect()
    }

    /// Enumerates models (or supported models) and keeps those accepted by
    /// `keep`.
    fn enumerate(
        &self,
        support: bool,
        budget: &mut Budget,
        keep: &mut dyn FnMut(&[bool], &mut Budget) -> Result<bool>,
    ) -> Result<Vec<Interpretation>> {
        let all: Vec<&PropRule> = self.rules.iter().collect();
        let prog = PropProgram::new(self.table.len(), all);
        let order = prog.dependency_order(&self.candidates);
        let search = Search {
            prog: &prog,
            support,
            first: Val::True,
        };
        let mut vals = self.initial();
        let mut found = Vec::new();
        let mut inner = budget.fork();
        search.run(&mut vals, &order, budget, &mut |v| {
            let model: Vec<bool> = v.iter().map(|&x| x == Val::True).collect();
            if keep(&model, &mut inner)? {
                found.push(self.interpretation(&model));
            }
            Ok(false)
        })?;
        Ok(found)
    }
}

fn sort_canonical(v: &mut [Interpretation]) {
    v.sort_by_cached_key(|i| i.to_string());
}

/// MM(gp): the subset-minimal models. Facts are forced and only atoms in
/// some rule head are ever made true.
pub fn minimal_models(
    gp: &GroundProgram,
    limits: &EvaluationLimits,
) -> Result<Vec<Interpretation>> {
    let interned = Interned::new(&gp.rules);
    interned.check_limit(limits)?;
    let n = interned.table.len();
    let mut budget = limits.budget();
    let mut out = interned.enumerate(false, &mut budget, &mut |model, b| {
        let rules: Vec<&PropRule> = interned.rules.iter().collect();
        Ok(!has_smaller_model(n, rules, model, b)?)
    })?;
    sort_canonical(&mut out);
    Ok(out)
}

/// Every answer set of `p` with its cost, sorted by rendering.
pub fn answer_sets(p: &Program, limits: &EvaluationLimits) -> Result<Vec<AnswerSet>> {
    let gp = relevant_grounding(p, limits)?;
    let interned = Interned::new(&gp.rules);
    interned.check_limit(limits)?;
    let n = interned.table.len();
    let mut budget = limits.budget();
    let mut sets = interned.enumerate(true, &mut budget, &mut |model, b| {
        let reduct: Vec<&PropRule> = interned
            .rules
            .iter()
            .filter(|r| body_true_prop(r, model))
            .collect();
        Ok(!has_smaller_model(n, reduct, model, b)?)
    })?;
    sort_canonical(&mut sets);
    log::debug!(
        "{} ground rules, {} candidate atoms, {} answer sets",
        gp.rules.len(),
        interned.candidates.len(),
        sets.len()
    );
    Ok(sets
        .into_iter()
        .map(|atoms| AnswerSet {
            cost: cost(&atoms, &gp.weak_constraints),
            atoms,
        })
        .collect())
}

/// The answer sets whose cost is lexicographically minimal.
pub fn optimal_answer_sets(p: &Program, limits: &EvaluationLimits) -> Result<Vec<AnswerSet>> {
    let all = answer_sets(p, limits)?;
    let Some(best) = all.iter().map(|a| a.cost.clone()).min() else {
        return Ok(all);
    };
    Ok(all.into_iter().filter(|a| a.cost == best).collect())
}

/// The instances of ground(p) whose body is true w.r.t. `i`, found by
/// joining against `i` rather than by grounding over the universe.
fn true_instances(p: &Program, i: &Interpretation, budget: &mut Budget) -> Result<Vec<Rule>> {
    p.validate()?;
    let universe: HashSet<Term> = herbrand_universe(p).into_iter().collect();
    let store: AtomStore = i.iter().cloned().collect();
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for r in &p.rules {
        let c = Compiled::rule(r);
        let m = Matcher {
            c: &c,
            store: &store,
            universe: &universe,
        };
        m.run(budget, &mut |b| {
            let neg: Vec<_> = c.neg.iter().map(|a| instantiate(a, b)).collect();
            if neg.iter().any(|a| i.contains(a)) {
                return Ok(());
            }
            let head = c.head.iter().map(|a| instantiate(a, b)).collect();
            let body = c
                .pos
                .iter()
                .map(|a| Literal::pos(instantiate(a, b)).into())
                .chain(neg.into_iter().map(|a| Literal::neg(a).into()))
                .collect();
            let g = Rule::new(head, body);
            if seen.insert(g.clone()) {
                out.push(g);
            }
            Ok(())
        })?;
    }
    Ok(out)
}

/// Ground instances of `p` that `i` falsifies: body true, head false.
/// Empty iff `i` is a model of ground(p).
pub fn violated_instances(p: &Program, i: &Interpretation) -> Result<Vec<Rule>> {
    let mut budget = EvaluationLimits::default().budget();
    Ok(true_instances(p, i, &mut budget)?
        .into_iter()
        .filter(|r| !r.head.iter().any(|a| i.contains(a)))
        .collect())
}

fn check_in_base(p: &Program, i: &Interpretation) -> Result<()> {
    let universe = herbrand_universe(p);
    let predicates = p.predicates();
    for a in i {
        let ok =
            predicates.contains(&a.signature()) && a.terms.iter().all(|t| universe.contains(t));
        if !ok {
            return Err(EvalError::OutsideBase(a.clone()));
        }
    }
    Ok(())
}

/// Decides I ∈ MM(P^I). The model condition is checked first.
pub fn is_answer_set(
    i: &Interpretation,
    p: &Program,
    limits: &EvaluationLimits,
) -> Result<Verdict> {
    check_in_base(p, i)?;
    let mut budget = limits.budget();
    let reduct = true_instances(p, i, &mut budget)?;
    debug_assert!(reduct.iter().all(|r| body_true(r, i)));
    if reduct.iter().any(|r| !r.head.iter().any(|a| i.contains(a))) {
        return Ok(Verdict::NotAModel);
    }
    let mut table = AtomTable::default();
    for a in i {
        table.intern(a);
    }
    let rules: Vec<PropRule> = reduct.iter().map(|r| table.rule(r)).collect();
    let n = table.len();
    let model: Vec<bool> = (0..n).map(|a| i.contains(&table.atoms[a])).collect();
    let forced = rules
        .iter()
        .filter(|r| r.pos.is_empty() && r.neg.is_empty() && r.head.len() == 1)
        .map(|r| r.head[0])
        .collect::<HashSet<_>>()
        .len();
    let free = i.len() - forced;
    if free > limits.max_candidate_atoms {
        return Err(exceeded(
            Limit::CandidateAtoms,
            limits.max_candidate_atoms,
            free,
        ));
    }
    if has_smaller_model(n, rules.iter().collect(), &model, &mut budget)? {
        Ok(Verdict::NotMinimal)
    } else {
        Ok(Verdict::Yes)
    }
}
