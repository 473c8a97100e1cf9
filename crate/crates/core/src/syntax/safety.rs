use std::collections::BTreeSet;

use super::{Atom, BodyElement, Builtin, Expr, Rule, Term, WeakConstraint};

/// Variables bound by the body: those in positive literals, closed under
/// assignments `V = expr` (either orientation) whose other side is bound.
pub(crate) fn bound_variables(body: &[BodyElement]) -> BTreeSet<&str> {
    let mut bound: BTreeSet<&str> = BTreeSet::new();
    for e in body {
        if let BodyElement::Literal(l) = e {
            if !l.negated {
                bound.extend(l.atom.variables());
            }
        }
    }
    let builtins: Vec<&Builtin> = body
        .iter()
        .filter_map(|e| match e {
            BodyElement::Builtin(b) if b.op == super::CompareOp::Eq => Some(b),
            _ => None,
        })
        .collect();
    loop {
        let mut changed = false;
        for b in &builtins {
            for (target, source) in [(&b.lhs, &b.rhs), (&b.rhs, &b.lhs)] {
                if let Some(v) = target.as_variable() {
                    if !bound.contains(v) && expr_vars(source).all(|s| bound.contains(s)) {
                        bound.insert(v);
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            return bound;
        }
    }
}

fn expr_vars(e: &Expr) -> impl Iterator<Item = &str> {
    e.terms().filter_map(term_var)
}

fn term_var(t: &Term) -> Option<&str> {
    match t {
        Term::Variable(v) => Some(v),
        _ => None,
    }
}

fn all_variables<'a>(
    head: &'a [Atom],
    body: &'a [BodyElement],
    extra: &'a [Term],
) -> BTreeSet<&'a str> {
    let mut vars: BTreeSet<&str> = head.iter().flat_map(Atom::variables).collect();
    for e in body {
        match e {
            BodyElement::Literal(l) => vars.extend(l.atom.variables()),
            BodyElement::Builtin(b) => vars.extend(expr_vars(&b.lhs).chain(expr_vars(&b.rhs))),
        }
    }
    vars.extend(extra.iter().filter_map(term_var));
    vars
}

fn report(vars: BTreeSet<&str>, bound: &BTreeSet<&str>) -> Vec<String> {
    let mut out: Vec<String> = vars
        .into_iter()
        .filter(|v| !bound.contains(v))
        .map(|v| {
            if super::is_anonymous_name(v) {
                "_".to_string()
            } else {
                v.to_string()
            }
        })
        .collect();
    out.dedup();
    out
}

/// Variables of `rule` not bound by a positive body literal (or an
/// assignment over bound variables). Empty iff the rule is safe.
pub fn unsafe_variables(rule: &Rule) -> Vec<String> {
    let bound = bound_variables(&rule.body);
    report(all_variables(&rule.head, &rule.body, &[]), &bound)
}

/// As [`unsafe_variables`], also covering the weight and level terms.
pub fn weak_constraint_unsafe_variables(wc: &WeakConstraint) -> Vec<String> {
    let bound = bound_variables(&wc.body);
    let extra = [wc.weight.clone(), wc.level.clone()];
    report(all_variables(&[], &wc.body, &extra), &bound)
}
