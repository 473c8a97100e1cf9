use std::collections::BTreeSet;

use super::{exceeded, EvaluationLimits, Limit, Result};
use crate::syntax::{Atom, BodyElement, Program, Term};

fn push_constants<'a>(out: &mut BTreeSet<Term>, terms: impl Iterator<Item = &'a Term>) {
    out.extend(terms.filter(|t| t.is_ground()).cloned());
}

fn body_constants(out: &mut BTreeSet<Term>, body: &[BodyElement]) {
    for e in body {
        match e {
            BodyElement::Literal(l) => push_constants(out, l.atom.terms.iter()),
            BodyElement::Builtin(b) => push_constants(out, b.lhs.terms().chain(b.rhs.terms())),
        }
    }
}

/// Every constant occurring in `p`, including builtin operands and
/// weak-constraint weights and levels. Sums are never evaluated here.
pub fn herbrand_universe(p: &Program) -> BTreeSet<Term> {
    let mut out = BTreeSet::new();
    for r in &p.rules {
        for h in &r.head {
            push_constants(&mut out, h.terms.iter());
        }
        body_constants(&mut out, &r.body);
    }
    for w in &p.weak_constraints {
        body_constants(&mut out, &w.body);
        push_constants(&mut out, [&w.weight, &w.level].into_iter());
    }
    out
}

/// All ground atoms over the predicates and universe of `p`.
pub fn herbrand_base(p: &Program, limits: &EvaluationLimits) -> Result<BTreeSet<Atom>> {
    let universe: Vec<Term> = herbrand_universe(p).into_iter().collect();
    let predicates = p.predicates();
    let mut size: usize = 0;
    for s in &predicates {
        let n = checked_pow(universe.len(), s.arity);
        size = size.saturating_add(n);
        if size > limits.max_herbrand_base {
            return Err(exceeded(
                Limit::HerbrandBase,
                limits.max_herbrand_base,
                size,
            ));
        }
    }
    let mut out = BTreeSet::new();
    for s in &predicates {
        for_each_tuple(&universe, s.arity, &mut |tuple| {
            out.insert(Atom::new(s.name.clone(), tuple.to_vec()));
        });
    }
    Ok(out)
}

pub(crate) fn checked_pow(base: usize, exp: usize) -> usize {
    let mut n: usize = 1;
    for _ in 0..exp {
        n = n.saturating_mul(base);
    }
    n
}

/// Calls `f` with every tuple of length `k` over `values`.
pub(crate) fn for_each_tuple(values: &[Term], k: usize, f: &mut dyn FnMut(&[Term])) {
    fn go(values: &[Term], k: usize, acc: &mut Vec<Term>, f: &mut dyn FnMut(&[Term])) {
        if acc.len() == k {
            f(acc);
            return;
        }
        for v in values {
            acc.push(v.clone());
            go(values, k, acc, f);
            acc.pop();
        }
    }
    go(values, k, &mut Vec::with_capacity(k), f);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_program;

    #[test]
    fn universe_of_facts() {
        let p = parse_program("node(1). node(2). arc(1,2).").unwrap();
        let u: Vec<Term> = herbrand_universe(&p).into_iter().collect();
        assert_eq!(u, vec![Term::Integer(1), Term::Integer(2)]);
    }

    #[test]
    fn empty_universe() {
        let p = parse_program("a :- not b.").unwrap();
        assert!(herbrand_universe(&p).is_empty());
        let base = herbrand_base(&p, &EvaluationLimits::default()).unwrap();
        assert_eq!(base.len(), 2);
    }

    #[test]
    fn weights_and_builtins_contribute() {
        let p = parse_program("p(1). :- p(X), X > 7. :~ p(X). [3:2]").unwrap();
        let u = herbrand_universe(&p);
        for v in [1, 7, 3, 2] {
            assert!(u.contains(&Term::Integer(v)));
        }
    }

    #[test]
    fn base_limit() {
        let p = parse_program("p(1,2,3). q(X,Y,Z) :- p(X,Y,Z).").unwrap();
        let limits = EvaluationLimits {
            max_herbrand_base: 53,
            ..Default::default()
        };
        assert!(herbrand_base(&p, &limits).is_err());
        let limits = EvaluationLimits {
            max_herbrand_base: 54,
            ..Default::default()
        };
        assert_eq!(herbrand_base(&p, &limits).unwrap().len(), 54);
    }
}
