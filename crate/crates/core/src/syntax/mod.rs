//! The rule language: terms, atoms, literals, (disjunctive) rules, integrity
//! and weak constraints.
//!
//! Concrete syntax accepted by [`parse_program`]:
//!
//! ```text
//! % line comment
//! color(X,r) | color(X,y) | color(X,g) :- node(X).
//! :- arc(X,Y), color(X,C), color(Y,C).
//! :- cell(X,Y,N), cell(X,Y,N1), N1 <> N.
//! :~ optimize(A,W,P), activity_to_do(A,_). [W:P]
//! node(1).
//! ```
//!
//! Rendering (`Display`) is canonical; `parse_program(&p.to_string())`
//! yields a value structurally equal to `p`.

mod lexer;
mod parser;
mod safety;

use std::collections::BTreeSet;
use std::fmt;

pub use parser::{parse_atom, parse_atom_list, parse_program, parse_program_unchecked};
pub use safety::{unsafe_variables, weak_constraint_unsafe_variables};

use thiserror::Error;

/// Errors raised while reading program text.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsafe variable(s) {} in statement {statement}: {text}", variables.join(", "))]
    Unsafe {
        /// 0-based index of the statement in source order.
        statement: usize,
        variables: Vec<String>,
        text: String,
    },
}

/// A term: variable, constant symbol (identifier or quoted string) or integer.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Integer(i64),
    /// Identifier such as `red`, or a quoted string kept verbatim with its
    /// quotes, e.g. `"RUNNING"`.
    Symbol(String),
    Variable(String),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Variable(name.into())
    }

    pub fn sym(name: impl Into<String>) -> Self {
        Term::Symbol(name.into())
    }

    /// A quoted-string constant built from its unquoted content.
    pub fn string(content: &str) -> Self {
        let mut s = String::with_capacity(content.len() + 2);
        s.push('"');
        for c in content.chars() {
            match c {
                '"' => s.push_str("\\\""),
                '\\' => s.push_str("\\\\"),
                '\n' => s.push_str("\\n"),
                _ => s.push(c),
            }
        }
        s.push('"');
        Term::Symbol(s)
    }

    pub fn is_variable(&self) -> bool {
        matches!(self, Term::Variable(_))
    }

    pub fn is_ground(&self) -> bool {
        !self.is_variable()
    }

    pub fn as_integer(&self) -> Option<i64> {
        match self {
            Term::Integer(v) => Some(*v),
            _ => None,
        }
    }

    /// True for symbols written as quoted strings.
    pub fn is_quoted(&self) -> bool {
        matches!(self, Term::Symbol(s) if s.starts_with('"'))
    }

    /// Content of a quoted string with escapes resolved.
    pub fn unquoted(&self) -> Option<String> {
        match self {
            Term::Symbol(s) if s.starts_with('"') => Some(unescape(&s[1..s.len() - 1])),
            _ => None,
        }
    }

    pub(crate) fn is_anonymous(&self) -> bool {
        matches!(self, Term::Variable(v) if is_anonymous_name(v))
    }
}

pub(crate) fn is_anonymous_name(name: &str) -> bool {
    name.len() > 1 && name.starts_with('_') && name[1..].bytes().all(|b| b.is_ascii_digit())
}

fn unescape(raw: &str) -> String {
    let mut out = String::with_capacity(raw.len());
    let mut chars = raw.chars();
    while let Some(c) = chars.next() {
        if c == '\\' {
            match chars.next() {
                Some('n') => out.push('\n'),
                Some(other) => out.push(other),
                None => out.push('\\'),
            }
        } else {
            out.push(c);
        }
    }
    out
}

/// `name/arity`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature {
    pub name: String,
    pub arity: usize,
}

impl Signature {
    pub fn new(name: impl Into<String>, arity: usize) -> Self {
        Signature {
            name: name.into(),
            arity,
        }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name, self.arity)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub predicate: String,
    pub terms: Vec<Term>,
}

impl Atom {
    pub fn new(predicate: impl Into<String>, terms: Vec<Term>) -> Self {
        Atom {
            predicate: predicate.into(),
            terms,
        }
    }

    pub fn prop(predicate: impl Into<String>) -> Self {
        Atom::new(predicate, Vec::new())
    }

    pub fn arity(&self) -> usize {
        self.terms.len()
    }

    pub fn signature(&self) -> Signature {
        Signature::new(self.predicate.clone(), self.terms.len())
    }

    pub fn is_ground(&self) -> bool {
        self.terms.iter().all(Term::is_ground)
    }

    pub fn variables(&self) -> impl Iterator<Item = &str> {
        self.terms.iter().filter_map(|t| match t {
            Term::Variable(v) => Some(v.as_str()),
            _ => None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub atom: Atom,
    /// Default negation (`not`).
    pub negated: bool,
}

impl Literal {
    pub fn pos(atom: Atom) -> Self {
        Literal {
            atom,
            negated: false,
        }
    }

    pub fn neg(atom: Atom) -> Self {
        Literal {
            atom,
            negated: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CompareOp {
    Eq,
    Ne,
    Lt,
    Gt,
    Le,
    Ge,
}

impl CompareOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CompareOp::Eq => "=",
            CompareOp::Ne => "!=",
            CompareOp::Lt => "<",
            CompareOp::Gt => ">",
            CompareOp::Le => "<=",
            CompareOp::Ge => ">=",
        }
    }
}

/// Operand of a builtin: a term or a binary integer sum.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Expr {
    Term(Term),
    Sum(Term, Term),
}

impl Expr {
    pub fn terms(&self) -> impl Iterator<Item = &Term> {
        let (a, b) = match self {
            Expr::Term(t) => (t, None),
            Expr::Sum(l, r) => (l, Some(r)),
        };
        std::iter::once(a).chain(b)
    }

    /// The lone variable, if this operand is exactly one variable.
    pub fn as_variable(&self) -> Option<&str> {
        match self {
            Expr::Term(Term::Variable(v)) => Some(v),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Builtin {
    pub op: CompareOp,
    pub lhs: Expr,
    pub rhs: Expr,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BodyElement {
    Literal(Literal),
    Builtin(Builtin),
}

impl BodyElement {
    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            BodyElement::Literal(l) => Some(l),
            BodyElement::Builtin(_) => None,
        }
    }
}

impl From<Literal> for BodyElement {
    fn from(l: Literal) -> Self {
        BodyElement::Literal(l)
    }
}

impl From<Builtin> for BodyElement {
    fn from(b: Builtin) -> Self {
        BodyElement::Builtin(b)
    }
}

/// `a1 | ... | an :- b1, ..., bk, not bk+1, ..., not bm.`
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rule {
    pub head: Vec<Atom>,
    pub body: Vec<BodyElement>,
}

impl Rule {
    pub fn new(head: Vec<Atom>, body: Vec<BodyElement>) -> Self {
        Rule { head, body }
    }

    pub fn fact(atom: Atom) -> Self {
        Rule::new(vec![atom], Vec::new())
    }

    pub fn is_constraint(&self) -> bool {
        self.head.is_empty()
    }

    pub fn is_fact(&self) -> bool {
        self.body.is_empty() && self.head.len() == 1
    }

    pub fn literals(&self) -> impl Iterator<Item = &Literal> {
        self.body.iter().filter_map(BodyElement::as_literal)
    }

    /// B+(r)
    pub fn positive_body(&self) -> impl Iterator<Item = &Atom> {
        self.literals().filter(|l| !l.negated).map(|l| &l.atom)
    }

    /// B-(r)
    pub fn negative_body(&self) -> impl Iterator<Item = &Atom> {
        self.literals().filter(|l| l.negated).map(|l| &l.atom)
    }

    pub fn builtins(&self) -> impl Iterator<Item = &Builtin> {
        self.body.iter().filter_map(|e| match e {
            BodyElement::Builtin(b) => Some(b),
            BodyElement::Literal(_) => None,
        })
    }

    pub fn is_ground(&self) -> bool {
        self.head.iter().all(Atom::is_ground)
            && self.body.iter().all(|e| match e {
                BodyElement::Literal(l) => l.atom.is_ground(),
                BodyElement::Builtin(b) => b.lhs.terms().chain(b.rhs.terms()).all(Term::is_ground),
            })
    }
}

/// `:~ body. [weight:level]`
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeakConstraint {
    pub body: Vec<BodyElement>,
    pub weight: Term,
    pub level: Term,
}

impl WeakConstraint {
    pub fn literals(&self) -> impl Iterator<Item = &Literal> {
        self.body.iter().filter_map(BodyElement::as_literal)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Program {
    pub rules: Vec<Rule>,
    pub weak_constraints: Vec<WeakConstraint>,
}

/// EDB / IDB partition of the predicates of a program.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PredicateClasses {
    pub edb: BTreeSet<Signature>,
    pub idb: BTreeSet<Signature>,
}

impl Program {
    pub fn new(rules: Vec<Rule>, weak_constraints: Vec<WeakConstraint>) -> Self {
        Program {
            rules,
            weak_constraints,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty() && self.weak_constraints.is_empty()
    }

    /// Appends all statements of `other`.
    pub fn extend(&mut self, other: Program) {
        self.rules.extend(other.rules);
        self.weak_constraints.extend(other.weak_constraints);
    }

    /// EDB(P): the atoms stated as facts.
    pub fn facts(&self) -> impl Iterator<Item = &Atom> {
        self.rules
            .iter()
            .filter(|r| r.is_fact())
            .map(|r| &r.head[0])
    }

    /// Every atom occurring anywhere in the program.
    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        let rule_atoms = self
            .rules
            .iter()
            .flat_map(|r| r.head.iter().chain(r.literals().map(|l| &l.atom)));
        let weak_atoms = self
            .weak_constraints
            .iter()
            .flat_map(|w| w.literals().map(|l| &l.atom));
        rule_atoms.chain(weak_atoms)
    }

    pub fn predicates(&self) -> BTreeSet<Signature> {
        self.atoms().map(Atom::signature).collect()
    }

    /// A predicate is IDB when it heads some rule that is not a fact;
    /// every other predicate of the program is EDB.
    pub fn classify_predicates(&self) -> PredicateClasses {
        let idb: BTreeSet<Signature> = self
            .rules
            .iter()
            .filter(|r| !r.is_fact())
            .flat_map(|r| r.head.iter().map(Atom::signature))
            .collect();
        let edb = self
            .predicates()
            .into_iter()
            .filter(|s| !idb.contains(s))
            .collect();
        PredicateClasses { edb, idb }
    }

    /// Checks every statement for safety, reporting the first offender.
    pub fn validate(&self) -> Result<(), ParseError> {
        // Statement indices count rules first, then weak constraints; the
        // parser reports source indices itself.
        for (i, r) in self.rules.iter().enumerate() {
            let vars = unsafe_variables(r);
            if !vars.is_empty() {
                return Err(ParseError::Unsafe {
                    statement: i,
                    variables: vars,
                    text: r.to_string(),
                });
            }
        }
        for (i, w) in self.weak_constraints.iter().enumerate() {
            let vars = weak_constraint_unsafe_variables(w);
            if !vars.is_empty() {
                return Err(ParseError::Unsafe {
                    statement: self.rules.len() + i,
                    variables: vars,
                    text: w.to_string(),
                });
            }
        }
        Ok(())
    }
}

impl std::str::FromStr for Program {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_program(s)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Integer(v) => write!(f, "{v}"),
            Term::Symbol(s) => f.write_str(s),
            Term::Variable(_) if self.is_anonymous() => f.write_str("_"),
            Term::Variable(v) => f.write_str(v),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.predicate)?;
        if !self.terms.is_empty() {
            f.write_str("(")?;
            for (i, t) in self.terms.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{t}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            f.write_str("not ")?;
        }
        write!(f, "{}", self.atom)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Term(t) => write!(f, "{t}"),
            Expr::Sum(a, b) => write!(f, "{a} + {b}"),
        }
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.lhs, self.op.symbol(), self.rhs)
    }
}

impl fmt::Display for BodyElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BodyElement::Literal(l) => write!(f, "{l}"),
            BodyElement::Builtin(b) => write!(f, "{b}"),
        }
    }
}

fn write_body(f: &mut fmt::Formatter<'_>, body: &[BodyElement]) -> fmt::Result {
    for (i, e) in body.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{e}")?;
    }
    Ok(())
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.head.iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            write!(f, "{a}")?;
        }
        if !self.body.is_empty() {
            if self.head.is_empty() {
                f.write_str(":- ")?;
            } else {
                f.write_str(" :- ")?;
            }
            write_body(f, &self.body)?;
        }
        f.write_str(".")
    }
}

impl fmt::Display for WeakConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(":~ ")?;
        write_body(f, &self.body)?;
        write!(f, ". [{}:{}]", self.weight, self.level)
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rules {
            writeln!(f, "{r}")?;
        }
        for w in &self.weak_constraints {
            writeln!(f, "{w}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quoted_string_round_trip() {
        let t = Term::string("a \"b\" \\ c");
        assert!(t.is_quoted());
        assert_eq!(t.unquoted().unwrap(), "a \"b\" \\ c");
    }

    #[test]
    fn classify_three_colouring() {
        let p = parse_program(
            "node(1). node(2). arc(1,2).
             color(X,r) | color(X,y) | color(X,g) :- node(X).
             :- arc(X,Y), color(X,C), color(Y,C).",
        )
        .unwrap();
        let c = p.classify_predicates();
        let edb: Vec<String> = c.edb.iter().map(|s| s.to_string()).collect();
        let idb: Vec<String> = c.idb.iter().map(|s| s.to_string()).collect();
        assert_eq!(edb, ["arc/2", "node/1"]);
        assert_eq!(idb, ["color/2"]);
        assert_eq!(p.facts().count(), 3);
    }

    #[test]
    fn fact_with_rule_is_idb() {
        let p = parse_program("a. a :- b.").unwrap();
        let c = p.classify_predicates();
        assert!(c.idb.contains(&Signature::new("a", 0)));
        assert!(c.edb.contains(&Signature::new("b", 0)));
        assert!(!c.edb.contains(&Signature::new("a", 0)));
    }

    #[test]
    fn empty_program_classes() {
        let c = Program::default().classify_predicates();
        assert!(c.edb.is_empty() && c.idb.is_empty());
    }
}
