use std::collections::HashSet;

use super::matching::{
    builtin_holds, instantiate, term_value, AtomStore, Binding, Compiled, Matcher,
};
use super::universe::{checked_pow, herbrand_universe};
use super::{exceeded, Budget, EvalError, EvaluationLimits, GroundProgram, Limit, Result};
use crate::syntax::{Atom, Literal, Program, Rule, Term, WeakConstraint};

fn ground_rule(c: &Compiled, b: &Binding) -> Rule {
    let head = c.head.iter().map(|a| instantiate(a, b)).collect();
    let body = c
        .pos
        .iter()
        .map(|a| Literal::pos(instantiate(a, b)).into())
        .chain(c.neg.iter().map(|a| Literal::neg(instantiate(a, b)).into()))
        .collect();
    Rule::new(head, body)
}

/// `None` when the weight or level is not a non-negative integer.
fn ground_weak(c: &Compiled, b: &Binding) -> Option<WeakConstraint> {
    let body = c
        .pos
        .iter()
        .map(|a| Literal::pos(instantiate(a, b)).into())
        .chain(c.neg.iter().map(|a| Literal::neg(instantiate(a, b)).into()))
        .collect();
    let value = |t: &Option<super::matching::PTerm>| {
        t.as_ref()
            .and_then(|t| term_value(t, b))
            .filter(|v| v.as_integer().is_some_and(|n| n >= 0))
    };
    match (value(&c.weight), value(&c.level)) {
        (Some(weight), Some(level)) => Some(WeakConstraint {
            body,
            weight,
            level,
        }),
        _ => None,
    }
}

/// Order-preserving deduplication.
fn dedup<T: Clone + Eq + std::hash::Hash>(items: Vec<T>) -> Vec<T> {
    let mut seen = HashSet::new();
    items
        .into_iter()
        .filter(|x| seen.insert(x.clone()))
        .collect()
}

/// Calls `f` for every total substitution of `c`'s variables over
/// `universe` under which all builtins hold.
fn for_each_substitution(
    c: &Compiled,
    universe: &[Term],
    budget: &mut Budget,
    f: &mut dyn FnMut(&Binding) -> Result<()>,
) -> Result<()> {
    fn go(
        c: &Compiled,
        universe: &[Term],
        b: &mut Binding,
        k: usize,
        budget: &mut Budget,
        f: &mut dyn FnMut(&Binding) -> Result<()>,
    ) -> Result<()> {
        budget.tick()?;
        if k == c.nvars {
            if c.builtins.iter().all(|bi| builtin_holds(bi, b)) {
                f(b)?;
            }
            return Ok(());
        }
        for v in universe {
            b[k] = Some(v.clone());
            go(c, universe, b, k + 1, budget, f)?;
        }
        b[k] = None;
        Ok(())
    }
    let mut b = vec![None; c.nvars];
    go(c, universe, &mut b, 0, budget, f)
}

/// ground(P): every substitution of every statement over the Herbrand
/// universe, with builtins evaluated and removed. Refuses to start when
/// the number of substitutions to try exceeds `max_ground_rules`.
pub fn ground_program(p: &Program, limits: &EvaluationLimits) -> Result<GroundProgram> {
    p.validate()?;
    let universe: Vec<Term> = herbrand_universe(p).into_iter().collect();
    let rules: Vec<Compiled> = p.rules.iter().map(Compiled::rule).collect();
    let weak: Vec<Compiled> = p.weak_constraints.iter().map(Compiled::weak).collect();

    let mut total: usize = 0;
    for c in rules.iter().chain(&weak) {
        total = total.saturating_add(checked_pow(universe.len(), c.nvars));
        if total > limits.max_ground_rules {
            return Err(exceeded(Limit::GroundRules, limits.max_ground_rules, total));
        }
    }

    let mut budget = limits.budget();
    let mut out = GroundProgram::default();
    for c in &rules {
        for_each_substitution(c, &universe, &mut budget, &mut |b| {
            out.rules.push(ground_rule(c, b));
            Ok(())
        })?;
    }
    // Substitutions putting a symbol in a weight or level position are not
    // well-formed instances; they are skipped here, while the relevant
    // grounding reports them since their body may hold.
    for c in &weak {
        for_each_substitution(c, &universe, &mut budget, &mut |b| {
            out.weak_constraints.extend(ground_weak(c, b));
            Ok(())
        })?;
    }
    out.rules = dedup(out.rules);
    out.weak_constraints = dedup(out.weak_constraints);
    Ok(out)
}

/// The instances of ground(P) whose positive body can hold in some answer
/// set: positive bodies are matched against the least fixpoint of head
/// atoms derivable while ignoring negation. Instances negating a fact are
/// dropped too. Every answer set of P is an answer set of the result and
/// vice versa.
pub fn relevant_grounding(p: &Program, limits: &EvaluationLimits) -> Result<GroundProgram> {
    p.validate()?;
    let universe: HashSet<Term> = herbrand_universe(p).into_iter().collect();
    let facts: HashSet<Atom> = p.facts().cloned().collect();
    let rules: Vec<Compiled> = p.rules.iter().map(Compiled::rule).collect();
    let weak: Vec<Compiled> = p.weak_constraints.iter().map(Compiled::weak).collect();
    let mut budget = limits.budget();

    let mut possible: AtomStore = facts.iter().cloned().collect();
    loop {
        let mut fresh = Vec::new();
        for c in rules.iter().filter(|c| !c.head.is_empty()) {
            let m = Matcher {
                c,
                store: &possible,
                universe: &universe,
            };
            m.run(&mut budget, &mut |b| {
                for h in &c.head {
                    let a = instantiate(h, b);
                    if !possible.contains(&a) {
                        fresh.push(a);
                    }
                }
                Ok(())
            })?;
        }
        let mut changed = false;
        for a in fresh {
            changed |= possible.insert(a);
        }
        if !changed {
            break;
        }
    }

    let negates_fact =
        |c: &Compiled, b: &Binding| c.neg.iter().any(|a| facts.contains(&instantiate(a, b)));
    let mut out = GroundProgram::default();
    let mut count = 0usize;
    let bump = |count: &mut usize| {
        *count += 1;
        if *count > limits.max_ground_rules {
            Err(exceeded(
                Limit::GroundRules,
                limits.max_ground_rules,
                *count,
            ))
        } else {
            Ok(())
        }
    };
    for c in &rules {
        let m = Matcher {
            c,
            store: &possible,
            universe: &universe,
        };
        m.run(&mut budget, &mut |b| {
            if !negates_fact(c, b) {
                bump(&mut count)?;
                out.rules.push(ground_rule(c, b));
            }
            Ok(())
        })?;
    }
    for (c, w) in weak.iter().zip(&p.weak_constraints) {
        let m = Matcher {
            c,
            store: &possible,
            universe: &universe,
        };
        m.run(&mut budget, &mut |b| {
            if !negates_fact(c, b) {
                bump(&mut count)?;
                let g = ground_weak(c, b)
                    .ok_or_else(|| EvalError::InvalidWeakConstraint(w.to_string()))?;
                out.weak_constraints.push(g);
            }
            Ok(())
        })?;
    }
    out.rules = dedup(out.rules);
    out.weak_constraints = dedup(out.weak_constraints);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_program;

    fn lines(gp: &GroundProgram) -> Vec<String> {
        gp.sorted_lines()
    }

    #[test]
    fn substitutes_over_universe() {
        let p = parse_program("q(1). q(2). p(X) :- q(X).").unwrap();
        let gp = ground_program(&p, &EvaluationLimits::default()).unwrap();
        assert_eq!(
            lines(&gp),
            ["p(1) :- q(1).", "p(2) :- q(2).", "q(1).", "q(2)."]
        );
    }

    #[test]
    fn false_builtins_delete_instances() {
        let p = parse_program("cell(1,1,1). cell(1,1,2). :- cell(1,1,N), cell(1,1,N1), N1 <> N.")
            .unwrap();
        let gp = ground_program(&p, &EvaluationLimits::default()).unwrap();
        assert_eq!(gp.rules.iter().filter(|r| r.is_constraint()).count(), 2);
        let p = parse_program("a. b :- a, 1 > 2.").unwrap();
        let gp = ground_program(&p, &EvaluationLimits::default()).unwrap();
        assert_eq!(lines(&gp), ["a."]);
    }

    #[test]
    fn assignments_check_equality() {
        let p = parse_program("n(1). n(2). n(3). s(Z) :- n(X), n(Y), Z = X + Y.").unwrap();
        let gp = ground_program(&p, &EvaluationLimits::default()).unwrap();
        let s: Vec<_> = lines(&gp)
            .into_iter()
            .filter(|l| l.starts_with("s("))
            .collect();
        assert_eq!(
            s,
            [
                "s(2) :- n(1), n(1).",
                "s(3) :- n(1), n(2).",
                "s(3) :- n(2), n(1)."
            ]
        );
    }

    #[test]
    fn ground_rule_limit() {
        let p = parse_program("n(1). n(2). n(3). :- n(X), n(Y), n(Z).").unwrap();
        let limits = EvaluationLimits {
            max_ground_rules: 20,
            ..Default::default()
        };
        assert!(matches!(
            ground_program(&p, &limits),
            Err(EvalError::LimitExceeded {
                what: Limit::GroundRules,
                ..
            })
        ));
    }

    #[test]
    fn relevant_is_subset_of_full() {
        let p = parse_program(
            "e(1,2). e(2,3). r(X,Y) :- e(X,Y). r(X,Z) :- r(X,Y), e(Y,Z). u(X) :- e(X,_), not r(X,X).",
        )
        .unwrap();
        let limits = EvaluationLimits::default();
        let full: HashSet<String> = lines(&ground_program(&p, &limits).unwrap())
            .into_iter()
            .collect();
        let rel = lines(&relevant_grounding(&p, &limits).unwrap());
        assert!(rel.iter().all(|l| full.contains(l)));
        assert!(rel.contains(&"r(1,3) :- r(1,2), e(2,3).".to_string()));
        assert!(!rel.iter().any(|l| l.starts_with("r(3,")));
    }

    #[test]
    fn weak_weights_must_be_natural() {
        let p = parse_program("a(-1). :~ a(X). [X:1]").unwrap();
        assert!(matches!(
            relevant_grounding(&p, &EvaluationLimits::default()),
            Err(EvalError::InvalidWeakConstraint(_))
        ));
    }

    #[test]
    fn unsafe_programs_rejected() {
        let p = crate::syntax::parse_program_unchecked("p(X) :- not q(X).").unwrap();
        assert!(matches!(
            ground_program(&p, &EvaluationLimits::default()),
            Err(EvalError::Unsafe(_))
        ));
    }
}
