use super::lexer::{tokenize, Spanned, Tok};
use super::{
    unsafe_variables, weak_constraint_unsafe_variables, Atom, BodyElement, Builtin, Expr, Literal,
    ParseError, Program, Rule, Term, WeakConstraint,
};

enum Statement {
    Rule(Rule),
    Weak(WeakConstraint),
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    /// Fresh-variable counter for `_`, reset per statement.
    anon: usize,
    end: (usize, usize),
}

impl Parser {
    fn new(text: &str) -> Result<Self, ParseError> {
        let toks = tokenize(text)?;
        let lines = text.split('\n').count().max(1);
        let last_col = text.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        Ok(Parser {
            toks,
            pos: 0,
            anon: 0,
            end: (lines, last_col),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|s| &s.tok)
    }

    fn err_here(&self, message: impl Into<String>) -> ParseError {
        let (line, column) = self
            .toks
            .get(self.pos)
            .map_or(self.end, |s| (s.line, s.column));
        ParseError::Syntax {
            line,
            column,
            message: message.into(),
        }
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        match self.peek() {
            Some(t) => self.err_here(format!("expected {wanted}, found {}", t.describe())),
            None => self.err_here(format!("expected {wanted}, found end of input")),
        }
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|s| s.tok.clone());
        self.pos += 1;
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &Tok) -> Result<(), ParseError> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    fn fresh(&mut self) -> Term {
        self.anon += 1;
        Term::Variable(format!("_{}", self.anon))
    }

    fn statement(&mut self) -> Result<Statement, ParseError> {
        self.anon = 0;
        match self.peek() {
            Some(Tok::WeakIf) => {
                self.pos += 1;
                let body = self.body()?;
                self.expect(&Tok::Dot)?;
                self.expect(&Tok::LBracket)?;
                let weight = self.term()?;
                if !self.eat(&Tok::Colon) && !self.eat(&Tok::At) {
                    return Err(self.unexpected("`:`"));
                }
                let level = self.term()?;
                self.expect(&Tok::RBracket)?;
                Ok(Statement::Weak(WeakConstraint {
                    body,
                    weight,
                    level,
                }))
            }
            Some(Tok::If) => {
                self.pos += 1;
                let body = self.body()?;
                self.expect(&Tok::Dot)?;
                Ok(Statement::Rule(Rule::new(Vec::new(), body)))
            }
            _ => {
                let mut head = vec![self.atom()?];
                while self.eat(&Tok::Bar) {
                    head.push(self.atom()?);
                }
                let body = if self.eat(&Tok::If) {
                    self.body()?
                } else {
                    Vec::new()
                };
                self.expect(&Tok::Dot)?;
                Ok(Statement::Rule(Rule::new(head, body)))
            }
        }
    }

    fn body(&mut self) -> Result<Vec<BodyElement>, ParseError> {
        let mut body = vec![self.body_element()?];
        while self.eat(&Tok::Comma) {
            body.push(self.body_element()?);
        }
        Ok(body)
    }

    fn body_element(&mut self) -> Result<BodyElement, ParseError> {
        match self.peek() {
            Some(Tok::Not) => {
                self.pos += 1;
                Ok(Literal::neg(self.atom()?).into())
            }
            Some(Tok::Ident(_)) => {
                let is_builtin_operand = !matches!(self.peek_at(1), Some(Tok::LParen))
                    && matches!(self.peek_at(1), Some(Tok::Cmp(_)) | Some(Tok::Plus));
                if is_builtin_operand {
                    Ok(self.builtin()?.into())
                } else {
                    Ok(Literal::pos(self.atom()?).into())
                }
            }
            Some(Tok::Var(_) | Tok::Anon | Tok::Int(_) | Tok::Str(_)) => Ok(self.builtin()?.into()),
            _ => Err(self.unexpected("a literal or comparison")),
        }
    }

    fn builtin(&mut self) -> Result<Builtin, ParseError> {
        let lhs = self.expr()?;
        let op = match self.next() {
            Some(Tok::Cmp(op)) => op,
            _ => {
                self.pos -= 1;
                return Err(self.unexpected("a comparison operator"));
            }
        };
        let rhs = self.expr()?;
        Ok(Builtin { op, lhs, rhs })
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let a = self.term()?;
        if self.eat(&Tok::Plus) {
            let b = self.term()?;
            if self.peek() == Some(&Tok::Plus) {
                return Err(self.err_here("only one `+` is allowed per operand"));
            }
            Ok(Expr::Sum(a, b))
        } else {
            Ok(Expr::Term(a))
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Var(v)) => {
                self.pos += 1;
                Ok(Term::Variable(v))
            }
            Some(Tok::Anon) => {
                self.pos += 1;
                Ok(self.fresh())
            }
            Some(Tok::Int(v)) => {
                self.pos += 1;
                Ok(Term::Integer(v))
            }
            Some(Tok::Str(s)) => {
                self.pos += 1;
                Ok(Term::Symbol(s))
            }
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                if self.peek() == Some(&Tok::LParen) {
                    return Err(self.err_here("function terms are not supported"));
                }
                Ok(Term::Symbol(s))
            }
            _ => Err(self.unexpected("a term")),
        }
    }

    fn atom(&mut self) -> Result<Atom, ParseError> {
        let name = match self.peek() {
            Some(Tok::Ident(s)) => s.clone(),
            _ => return Err(self.unexpected("a predicate name")),
        };
        self.pos += 1;
        let mut terms = Vec::new();
        if self.eat(&Tok::LParen) {
            terms.push(self.term()?);
            while self.eat(&Tok::Comma) {
                terms.push(self.term()?);
            }
            self.expect(&Tok::RParen)?;
        }
        Ok(Atom::new(name, terms))
    }
}

fn parse_statements(text: &str) -> Result<Vec<Statement>, ParseError> {
    let mut p = Parser::new(text)?;
    let mut out = Vec::new();
    while p.peek().is_some() {
        out.push(p.statement()?);
    }
    Ok(out)
}

fn assemble(statements: Vec<Statement>) -> Program {
    let mut program = Program::default();
    for s in statements {
        match s {
            Statement::Rule(r) => program.rules.push(r),
            Statement::Weak(w) => program.weak_constraints.push(w),
        }
    }
    program
}

/// Parses and safety-checks a program.
pub fn parse_program(text: &str) -> Result<Program, ParseError> {
    let statements = parse_statements(text)?;
    for (i, s) in statements.iter().enumerate() {
        let (vars, text) = match s {
            Statement::Rule(r) => (unsafe_variables(r), r.to_string()),
            Statement::Weak(w) => (weak_constraint_unsafe_variables(w), w.to_string()),
        };
        if !vars.is_empty() {
            return Err(ParseError::Unsafe {
                statement: i,
                variables: vars,
                text,
            });
        }
    }
    Ok(assemble(statements))
}

/// Parses without the safety check; see [`Program::validate`].
pub fn parse_program_unchecked(text: &str) -> Result<Program, ParseError> {
    parse_statements(text).map(assemble)
}

/// Parses a single ground atom such as `cell(1,2,5)`.
pub fn parse_atom(text: &str) -> Result<Atom, ParseError> {
    let mut atoms = parse_atom_list(text)?;
    if atoms.len() != 1 {
        return Err(ParseError::Syntax {
            line: 1,
            column: 1,
            message: format!("expected exactly one atom, found {}", atoms.len()),
        });
    }
    Ok(atoms.remove(0))
}

/// Parses a sequence of ground atoms separated by whitespace and/or commas,
/// as printed in solver witness lines.
pub fn parse_atom_list(text: &str) -> Result<Vec<Atom>, ParseError> {
    let mut p = Parser::new(text)?;
    let mut atoms = Vec::new();
    while p.peek().is_some() {
        let at = p.pos;
        let atom = p.atom()?;
        if !atom.is_ground() {
            p.pos = at;
            return Err(p.err_here("expected a ground atom"));
        }
        atoms.push(atom);
        p.eat(&Tok::Comma);
    }
    Ok(atoms)
}
