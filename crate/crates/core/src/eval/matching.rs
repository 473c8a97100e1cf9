//! Joins of non-ground bodies against a store of ground atoms.

use std::collections::{HashMap, HashSet};

use super::{Budget, Result};
use crate::syntax::{Atom, BodyElement, CompareOp, Expr, Rule, Term, WeakConstraint};

#[derive(Debug, Clone)]
pub(crate) enum PTerm {
    Var(usize),
    Const(Term),
}

#[derive(Debug, Clone)]
pub(crate) struct PAtom {
    pub predicate: String,
    pub terms: Vec<PTerm>,
}

#[derive(Debug, Clone)]
pub(crate) enum PExpr {
    Term(PTerm),
    Sum(PTerm, PTerm),
}

#[derive(Debug, Clone)]
pub(crate) struct PBuiltin {
    pub op: CompareOp,
    pub lhs: PExpr,
    pub rhs: PExpr,
}

/// A statement with its variables numbered.
#[derive(Debug, Clone)]
pub(crate) struct Compiled {
    pub nvars: usize,
    pub head: Vec<PAtom>,
    pub pos: Vec<PAtom>,
    pub neg: Vec<PAtom>,
    pub builtins: Vec<PBuiltin>,
    pub weight: Option<PTerm>,
    pub level: Option<PTerm>,
}

pub(crate) type Binding = Vec<Option<Term>>;

struct Namer(Vec<String>);

impl Namer {
    fn term(&mut self, t: &Term) -> PTerm {
        match t {
            Term::Variable(v) => match self.0.iter().position(|n| n == v) {
                Some(i) => PTerm::Var(i),
                None => {
                    self.0.push(v.clone());
                    PTerm::Var(self.0.len() - 1)
                }
            },
            other => PTerm::Const(other.clone()),
        }
    }

    fn atom(&mut self, a: &Atom) -> PAtom {
        PAtom {
            predicate: a.predicate.clone(),
            terms: a.terms.iter().map(|t| self.term(t)).collect(),
        }
    }

    fn expr(&mut self, e: &Expr) -> PExpr {
        match e {
            Expr::Term(t) => PExpr::Term(self.term(t)),
            Expr::Sum(a, b) => PExpr::Sum(self.term(a), self.term(b)),
        }
    }
}

impl Compiled {
    fn build(head: &[Atom], body: &[BodyElement], extra: Option<(&Term, &Term)>) -> Compiled {
        let mut n = Namer(Vec::new());
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        let mut builtins = Vec::new();
        for e in body {
            match e {
                BodyElement::Literal(l) if !l.negated => pos.push(n.atom(&l.atom)),
                BodyElement::Literal(l) => neg.push(n.atom(&l.atom)),
                BodyElement::Builtin(b) => builtins.push(PBuiltin {
                    op: b.op,
                    lhs: n.expr(&b.lhs),
                    rhs: n.expr(&b.rhs),
                }),
            }
        }
        let head = head.iter().map(|a| n.atom(a)).collect();
        let (weight, level) = match extra {
            Some((w, l)) => (Some(n.term(w)), Some(n.term(l))),
            None => (None, None),
        };
        Compiled {
            nvars: n.0.len(),
            head,
            pos,
            neg,
            builtins,
            weight,
            level,
        }
    }

    pub(crate) fn rule(r: &Rule) -> Compiled {
        Self::build(&r.head, &r.body, None)
    }

    pub(crate) fn weak(w: &WeakConstraint) -> Compiled {
        Self::build(&[], &w.body, Some((&w.weight, &w.level)))
    }
}

pub(crate) fn term_value(t: &PTerm, b: &Binding) -> Option<Term> {
    match t {
        PTerm::Var(i) => b[*i].clone(),
        PTerm::Const(c) => Some(c.clone()),
    }
}

pub(crate) fn expr_value(e: &PExpr, b: &Binding) -> Option<Term> {
    match e {
        PExpr::Term(t) => term_value(t, b),
        PExpr::Sum(x, y) => {
            let x = term_value(x, b)?.as_integer()?;
            let y = term_value(y, b)?.as_integer()?;
            x.checked_add(y).map(Term::Integer)
        }
    }
}

fn expr_bound(e: &PExpr, b: &Binding) -> bool {
    let bound = |t: &PTerm| match t {
        PTerm::Var(i) => b[*i].is_some(),
        PTerm::Const(_) => true,
    };
    match e {
        PExpr::Term(t) => bound(t),
        PExpr::Sum(x, y) => bound(x) && bound(y),
    }
}

fn lone_var(e: &PExpr) -> Option<usize> {
    match e {
        PExpr::Term(PTerm::Var(i)) => Some(*i),
        _ => None,
    }
}

/// Comparison over ground terms, ordered as the term order: integers
/// first, then symbols.
fn compare(op: CompareOp, a: &Term, b: &Term) -> bool {
    match op {
        CompareOp::Eq => a == b,
        CompareOp::Ne => a != b,
        CompareOp::Lt => a < b,
        CompareOp::Gt => a > b,
        CompareOp::Le => a <= b,
        CompareOp::Ge => a >= b,
    }
}

/// Outcome of evaluating a builtin whose operands are all bound.
/// Non-integer sums make the builtin false.
pub(crate) fn builtin_holds(bi: &PBuiltin, b: &Binding) -> bool {
    match (expr_value(&bi.lhs, b), expr_value(&bi.rhs, b)) {
        (Some(x), Some(y)) => compare(bi.op, &x, &y),
        _ => false,
    }
}

pub(crate) fn instantiate(a: &PAtom, b: &Binding) -> Atom {
    Atom::new(
        a.predicate.clone(),
        a.terms
            .iter()
            .map(|t| term_value(t, b).expect("safe statement binds every variable"))
            .collect(),
    )
}

/// Ground atoms grouped by predicate name and arity.
#[derive(Debug, Default, Clone)]
pub(crate) struct AtomStore {
    by_pred: HashMap<(String, usize), Vec<Atom>>,
    all: HashSet<Atom>,
}

impl AtomStore {
    pub(crate) fn new() -> Self {
        Self::default()
    }

    pub(crate) fn insert(&mut self, a: Atom) -> bool {
        if self.all.contains(&a) {
            return false;
        }
        self.by_pred
            .entry((a.predicate.clone(), a.terms.len()))
            .or_default()
            .push(a.clone());
        self.all.insert(a);
        true
    }

    pub(crate) fn contains(&self, a: &Atom) -> bool {
        self.all.contains(a)
    }

    fn candidates(&self, p: &PAtom) -> &[Atom] {
        self.by_pred
            .get(&(p.predicate.clone(), p.terms.len()))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }
}

impl FromIterator<Atom> for AtomStore {
    fn from_iter<T: IntoIterator<Item = Atom>>(iter: T) -> Self {
        let mut s = AtomStore::new();
        for a in iter {
            s.insert(a);
        }
        s
    }
}

pub(crate) struct Matcher<'a> {
    pub c: &'a Compiled,
    pub store: &'a AtomStore,
    /// Values an assignment may produce; anything else ranges outside the
    /// universe and matches no substitution.
    pub universe: &'a HashSet<Term>,
}

impl Matcher<'_> {
    /// Calls `f` once per binding under which every positive literal is in
    /// the store and every builtin holds. Negative literals are left to `f`.
    pub(crate) fn run(
        &self,
        budget: &mut Budget,
        f: &mut dyn FnMut(&Binding) -> Result<()>,
    ) -> Result<()> {
        let mut binding: Binding = vec![None; self.c.nvars];
        let mut used_pos = vec![false; self.c.pos.len()];
        let mut used_bi = vec![false; self.c.builtins.len()];
        self.step(&mut binding, &mut used_pos, &mut used_bi, budget, f)
    }

    fn step(
        &self,
        binding: &mut Binding,
        used_pos: &mut [bool],
        used_bi: &mut [bool],
        budget: &mut Budget,
        f: &mut dyn FnMut(&Binding) -> Result<()>,
    ) -> Result<()> {
        budget.tick()?;
        let mut done_bi = Vec::new();
        let mut bound_here = Vec::new();
        let ok = self.settle_builtins(binding, used_bi, &mut done_bi, &mut bound_here);
        if ok {
            self.descend(binding, used_pos, used_bi, budget, f)?;
        }
        for i in done_bi {
            used_bi[i] = false;
        }
        for v in bound_here {
            binding[v] = None;
        }
        Ok(())
    }

    /// Evaluates every builtin that became decidable and performs the
    /// assignments that became possible. False when some builtin fails.
    fn settle_builtins(
        &self,
        binding: &mut Binding,
        used_bi: &mut [bool],
        done_bi: &mut Vec<usize>,
        bound_here: &mut Vec<usize>,
    ) -> bool {
        loop {
            let mut progress = false;
            for (i, bi) in self.c.builtins.iter().enumerate() {
                if used_bi[i] {
                    continue;
                }
                let lb = expr_bound(&bi.lhs, binding);
                let rb = expr_bound(&bi.rhs, binding);
                if lb && rb {
                    used_bi[i] = true;
                    done_bi.push(i);
                    if !builtin_holds(bi, binding) {
                        return false;
                    }
                    progress = true;
                } else if bi.op == CompareOp::Eq {
                    let target = match (lone_var(&bi.lhs), lone_var(&bi.rhs)) {
                        (Some(v), _) if rb && binding[v].is_none() => Some((v, &bi.rhs)),
                        (_, Some(v)) if lb && binding[v].is_none() => Some((v, &bi.lhs)),
                        _ => None,
                    };
                    if let Some((v, source)) = target {
                        used_bi[i] = true;
                        done_bi.push(i);
                        match expr_value(source, binding) {
                            Some(val) if self.universe.contains(&val) => {
                                binding[v] = Some(val);
                                bound_here.push(v);
                                progress = true;
                            }
                            _ => return false,
                        }
                    }
                }
            }
            if !progress {
                return true;
            }
        }
    }

    fn descend(
        &self,
        binding: &mut Binding,
        used_pos: &mut [bool],
        used_bi: &mut [bool],
        budget: &mut Budget,
        f: &mut dyn FnMut(&Binding) -> Result<()>,
    ) -> Result<()> {
        // most-bound literal first
        let next = (0..self.c.pos.len())
            .filter(|&i| !used_pos[i])
            .max_by_key(|&i| {
                let p = &self.c.pos[i];
                let bound = p
                    .terms
                    .iter()
                    .filter(|t| term_value(t, binding).is_some())
                    .count();
                (bound, std::cmp::Reverse(i))
            });
        let Some(i) = next else {
            if binding.iter().all(Option::is_some) {
                f(binding)?;
            }
            return Ok(());
        };
        used_pos[i] = true;
        let pattern = &self.c.pos[i];
        for atom in self.store.candidates(pattern) {
            let mut newly = Vec::new();
            if unify(pattern, atom, binding, &mut newly) {
                self.step(binding, used_pos, used_bi, budget, f)?;
            }
            for v in newly {
                binding[v] = None;
            }
        }
        used_pos[i] = false;
        Ok(())
    }
}

fn unify(p: &PAtom, a: &Atom, binding: &mut Binding, newly: &mut Vec<usize>) -> bool {
    for (pt, t) in p.terms.iter().zip(&a.terms) {
        match pt {
            PTerm::Const(c) => {
                if c != t {
                    return false;
                }
            }
            PTerm::Var(v) => match &binding[*v] {
                Some(x) => {
                    if x != t {
                        return false;
                    }
                }
                None => {
                    binding[*v] = Some(t.clone());
                    newly.push(*v);
                }
            },
        }
    }
    true
}
