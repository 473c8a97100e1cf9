//! Backtracking over propositional programs.

use std::collections::HashMap;

use super::{Budget, Result};
use crate::syntax::{Atom, BodyElement, Rule};

#[derive(Debug, Clone)]
pub(crate) struct PropRule {
    pub head: Vec<u32>,
    pub pos: Vec<u32>,
    pub neg: Vec<u32>,
}

/// Interns ground atoms as dense ids.
#[derive(Debug, Default)]
pub(crate) struct AtomTable {
    pub atoms: Vec<Atom>,
    index: HashMap<Atom, u32>,
}

impl AtomTable {
    pub(crate) fn intern(&mut self, a: &Atom) -> u32 {
        if let Some(&id) = self.index.get(a) {
            return id;
        }
        let id = self.atoms.len() as u32;
        self.atoms.push(a.clone());
        self.index.insert(a.clone(), id);
        id
    }

    pub(crate) fn len(&self) -> usize {
        self.atoms.len()
    }

    /// Interns every atom of a ground, builtin-free rule.
    pub(crate) fn rule(&mut self, r: &Rule) -> PropRule {
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for e in &r.body {
            if let BodyElement::Literal(l) = e {
                let id = self.intern(&l.atom);
                if l.negated {
                    neg.push(id);
                } else {
                    pos.push(id);
                }
            }
        }
        PropRule {
            head: r.head.iter().map(|a| self.intern(a)).collect(),
            pos,
            neg,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Val {
    Unknown,
    True,
    False,
}

#[derive(Debug)]
pub(crate) struct PropProgram<'a> {
    pub rules: Vec<&'a PropRule>,
    occurs: Vec<Vec<u32>>,
    heads_of: Vec<Vec<u32>>,
}

impl<'a> PropProgram<'a> {
    pub(crate) fn new(n: usize, rules: Vec<&'a PropRule>) -> Self {
        let mut occurs = vec![Vec::new(); n];
        let mut heads_of = vec![Vec::new(); n];
        for (i, r) in rules.iter().enumerate() {
            let i = i as u32;
            for &h in &r.head {
                heads_of[h as usize].push(i);
            }
            for &a in r.head.iter().chain(&r.pos).chain(&r.neg) {
                let list = &mut occurs[a as usize];
                if list.last() != Some(&i) {
                    list.push(i);
                }
            }
        }
        PropProgram {
            rules,
            occurs,
            heads_of,
        }
    }

    fn body(&self, r: &PropRule, vals: &[Val]) -> Val {
        let mut all = true;
        for &a in &r.pos {
            match vals[a as usize] {
                Val::False => return Val::False,
                Val::Unknown => all = false,
                Val::True => {}
            }
        }
        for &a in &r.neg {
            match vals[a as usize] {
                Val::True => return Val::False,
                Val::Unknown => all = false,
                Val::False => {}
            }
        }
        if all {
            Val::True
        } else {
            Val::Unknown
        }
    }

    fn violated(&self, r: &PropRule, vals: &[Val]) -> bool {
        r.head.iter().all(|&h| vals[h as usize] == Val::False) && self.body(r, vals) == Val::True
    }

    /// Whether `r` can still be the rule deriving `a`.
    fn can_support(&self, r: &PropRule, a: u32, vals: &[Val]) -> bool {
        self.body(r, vals) != Val::False
            && r.head
                .iter()
                .all(|&h| h == a || vals[h as usize] != Val::True)
    }

    fn supportable(&self, a: u32, vals: &[Val]) -> bool {
        self.heads_of[a as usize]
            .iter()
            .any(|&r| self.can_support(self.rules[r as usize], a, vals))
    }

    pub(crate) fn any_violated(&self, vals: &[Val]) -> bool {
        self.rules.iter().any(|r| self.violated(r, vals))
    }

    fn consistent_after(&self, x: u32, vals: &[Val], support: bool) -> bool {
        let rules = &self.occurs[x as usize];
        if rules
            .iter()
            .any(|&r| self.violated(self.rules[r as usize], vals))
        {
            return false;
        }
        if !support {
            return true;
        }
        if vals[x as usize] == Val::True && !self.supportable(x, vals) {
            return false;
        }
        rules.iter().all(|&r| {
            self.rules[r as usize]
                .head
                .iter()
                .all(|&h| vals[h as usize] != Val::True || self.supportable(h, vals))
        })
    }

    /// Atoms sorted so that, outside of cycles, body atoms precede the heads
    /// they derive. Ties keep the given order.
    pub(crate) fn dependency_order(&self, atoms: &[u32]) -> Vec<u32> {
        let n = self.occurs.len();
        let mut depth = vec![0usize; n];
        for _ in 0..=n {
            let mut changed = false;
            for r in &self.rules {
                let d = r
                    .pos
                    .iter()
                    .chain(&r.neg)
                    .map(|&a| depth[a as usize] + 1)
                    .max()
                    .unwrap_or(0)
                    .min(n);
                for &h in &r.head {
                    if depth[h as usize] < d {
                        depth[h as usize] = d;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let mut out = atoms.to_vec();
        out.sort_by_key(|&a| depth[a as usize]);
        out
    }
}

/// Depth-first enumeration of total assignments over `order`, starting
/// from `vals`. With `support` every true atom must keep a rule that can
/// derive it. `leaf` returns true to stop the search.
pub(crate) struct Search<'p, 'a> {
    pub prog: &'p PropProgram<'a>,
    pub support: bool,
    /// Value tried first at each decision.
    pub first: Val,
}

impl Search<'_, '_> {
    pub(crate) fn run(
        &self,
        vals: &mut [Val],
        order: &[u32],
        budget: &mut Budget,
        leaf: &mut dyn FnMut(&[Val]) -> Result<bool>,
    ) -> Result<bool> {
        if self.prog.any_violated(vals) {
            return Ok(false);
        }
        self.go(vals, order, 0, budget, leaf)
    }

    fn go(
        &self,
        vals: &mut [Val],
        order: &[u32],
        k: usize,
        budget: &mut Budget,
        leaf: &mut dyn FnMut(&[Val]) -> Result<bool>,
    ) -> Result<bool> {
        budget.tick()?;
        let Some(&x) = order.get(k) else {
            return leaf(vals);
        };
        let second = if self.first == Val::True {
            Val::False
        } else {
            Val::True
        };
        for v in [self.first, second] {
            vals[x as usize] = v;
            if self.prog.consistent_after(x, vals, self.support)
                && self.go(vals, order, k + 1, budget, leaf)?
            {
                vals[x as usize] = Val::Unknown;
                return Ok(true);
            }
        }
        vals[x as usize] = Val::Unknown;
        Ok(false)
    }
}

/// Whether some model of `rules` is a proper subset of `model` (given as
/// the true atoms over `n` ids).
pub(crate) fn has_smaller_model(
    n: usize,
    rules: Vec<&PropRule>,
    model: &[bool],
    budget: &mut Budget,
) -> Result<bool> {
    let prog = PropProgram::new(n, rules);
    let mut vals: Vec<Val> = model
        .iter()
        .map(|&t| if t { Val::Unknown } else { Val::False })
        .collect();
    // atoms forced by facts are in every model
    for r in &prog.rules {
        if r.pos.is_empty() && r.neg.is_empty() && r.head.len() == 1 {
            vals[r.head[0] as usize] = Val::True;
        }
    }
    let free: Vec<u32> = (0..n as u32)
        .filter(|&a| vals[a as usize] == Val::Unknown)
        .collect();
    if free.is_empty() {
        return Ok(false);
    }
    let order = prog.dependency_order(&free);
    let search = Search {
        prog: &prog,
        support: false,
        first: Val::False,
    };
    search.run(&mut vals, &order, budget, &mut |v| {
        Ok(free.iter().any(|&a| v[a as usize] == Val::False))
    })
}
