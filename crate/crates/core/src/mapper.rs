//! Two-way translation between application records and ground facts.
//!
//! A [`PredicateSchema`] says which record field goes to which argument
//! position and what kind of term it holds. Schemas are collected in a
//! [`SchemaRegistry`], built once and then shared read-only.
//!
//! ```
//! use asp_embed::mapper::{PredicateSchema, SchemaRegistry, ValueKind, MappedRecord, Value};
//!
//! let cell = PredicateSchema::new(
//!     "cell",
//!     [("row", 1, ValueKind::Integer), ("column", 2, ValueKind::Integer), ("value", 3, ValueKind::Integer)],
//! );
//! let reg = SchemaRegistry::new().register(cell).unwrap();
//! let r = MappedRecord::new("cell", 3)
//!     .with("row", Value::Integer(1))
//!     .with("column", Value::Integer(2))
//!     .with("value", Value::Integer(5));
//! assert_eq!(reg.record_to_fact(&r).unwrap().to_string(), "cell(1,2,5)");
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};

use thiserror::Error;

use crate::eval::Interpretation;
use crate::syntax::{Atom, Signature, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("invalid schema for `{predicate}`: {reason}")]
    InvalidSchema { predicate: String, reason: String },
    #[error("a schema for {0} is already registered")]
    DuplicateSchema(Signature),
    #[error("no schema registered for {0}")]
    UnknownSchema(Signature),
    #[error("field `{field}` of {predicate}: expected {expected}, got {found}")]
    FieldKindMismatch {
        predicate: Signature,
        field: String,
        expected: ValueKind,
        found: String,
    },
    #[error("term {position} of `{atom}`: expected {expected}")]
    TermKindMismatch {
        atom: String,
        position: usize,
        expected: ValueKind,
    },
    #[error("schema manifest line {line}: {message}")]
    Manifest { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, MapError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ValueKind {
    Integer,
    /// An identifier constant such as `red`.
    Symbol,
    /// A string constant, written with quotes in programs.
    QuotedString,
}

impl fmt::Display for ValueKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ValueKind::Integer => "integer",
            ValueKind::Symbol => "symbol",
            ValueKind::QuotedString => "quoted_string",
        })
    }
}

impl FromStr for ValueKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "integer" => Ok(ValueKind::Integer),
            "symbol" => Ok(ValueKind::Symbol),
            "quoted_string" | "string" => Ok(ValueKind::QuotedString),
            other => Err(format!("unknown value kind `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Integer(i64),
    Symbol(String),
    /// Stored without quotes.
    QuotedString(String),
}

impl Value {
    pub fn kind(&self) -> ValueKind {
        match self {
            Value::Integer(_) => ValueKind::Integer,
            Value::Symbol(_) => ValueKind::Symbol,
            Value::QuotedString(_) => ValueKind::QuotedString,
        }
    }

    fn describe(&self) -> String {
        match self {
            Value::Integer(v) => format!("integer {v}"),
            Value::Symbol(s) => format!("symbol `{s}`"),
            Value::QuotedString(s) => format!("string {s:?}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    pub field_id: String,
    /// 1-based argument position.
    pub position: usize,
    pub kind: ValueKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredicateSchema {
    pub predicate: String,
    pub fields: Vec<FieldSpec>,
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && s != "not"
}

impl PredicateSchema {
    pub fn new<S: Into<String>>(
        predicate: impl Into<String>,
        fields: impl IntoIterator<Item = (S, usize, ValueKind)>,
    ) -> Self {
        PredicateSchema {
            predicate: predicate.into(),
            fields: fields
                .into_iter()
                .map(|(id, position, kind)| FieldSpec {
                    field_id: id.into(),
                    position,
                    kind,
                })
                .collect(),
        }
    }

    pub fn arity(&self) -> usize {
        self.fields.len()
    }

    pub fn signature(&self) -> Signature {
        Signature::new(self.predicate.clone(), self.arity())
    }

    pub fn validate(&self) -> Result<()> {
        let invalid = |reason: String| MapError::InvalidSchema {
            predicate: self.predicate.clone(),
            reason,
        };
        if !is_identifier(&self.predicate) {
            return Err(invalid("predicate name must be an identifier".into()));
        }
        let positions: BTreeSet<usize> = self.fields.iter().map(|f| f.position).collect();
        let expected: BTreeSet<usize> = (1..=self.arity()).collect();
        if positions != expected {
            let listed: Vec<String> = self.fields.iter().map(|f| f.position.to_string()).collect();
            return Err(invalid(format!(
                "positions {{{}}} are not a permutation of 1..{}",
                listed.join(","),
                self.arity()
            )));
        }
        let ids: BTreeSet<&str> = self.fields.iter().map(|f| f.field_id.as_str()).collect();
        if ids.len() != self.fields.len() {
            return Err(invalid("field ids must be distinct".into()));
        }
        if ids.contains("") {
            return Err(invalid("field ids must be non-empty".into()));
        }
        Ok(())
    }

    fn field_at(&self, position: usize) -> &FieldSpec {
        self.fields
            .iter()
            .find(|f| f.position == position)
            .expect("validated schema covers every position")
    }

    /// Parses `name/arity field:pos:kind ...`.
    pub fn parse_manifest_line(line: &str) -> std::result::Result<Self, String> {
        let mut words = line.split_whitespace();
        let head = words.next().ok_or("empty line")?;
        let (name, arity) = head
            .rsplit_once('/')
            .ok_or_else(|| format!("expected `name/arity`, got `{head}`"))?;
        let arity: usize = arity
            .parse()
            .map_err(|_| format!("bad arity in `{head}`"))?;
        let mut fields = Vec::new();
        for w in words {
            let parts: Vec<&str> = w.split(':').collect();
            let [id, pos, kind] = parts[..] else {
                return Err(format!("expected `field:position:kind`, got `{w}`"));
            };
            let position = pos.parse().map_err(|_| format!("bad position in `{w}`"))?;
            fields.push((id.to_string(), position, kind.parse()?));
        }
        if fields.len() != arity {
            return Err(format!("{head} declares {} fields", fields.len()));
        }
        Ok(PredicateSchema::new(name, fields))
    }
}

/// Field values of one record, keyed by field id.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MappedRecord {
    pub predicate: String,
    pub arity: usize,
    pub values: BTreeMap<String, Value>,
}

impl MappedRecord {
    pub fn new(predicate: impl Into<String>, arity: usize) -> Self {
        MappedRecord {
            predicate: predicate.into(),
            arity,
            values: BTreeMap::new(),
        }
    }

    pub fn with(mut self, field: impl Into<String>, value: Value) -> Self {
        self.values.insert(field.into(), value);
        self
    }

    pub fn get(&self, field: &str) -> Option<&Value> {
        self.values.get(field)
    }

    pub fn integer(&self, field: &str) -> Option<i64> {
        match self.get(field)? {
            Value::Integer(v) => Some(*v),
            _ => None,
        }
    }

    pub fn text(&self, field: &str) -> Option<&str> {
        match self.get(field)? {
            Value::Symbol(s) | Value::QuotedString(s) => Some(s),
            Value::Integer(_) => None,
        }
    }

    pub fn signature(&self) -> Signature {
        Signature::new(self.predicate.clone(), self.arity)
    }
}

/// Builds the fact for `r` under `s`.
pub fn record_to_fact(s: &PredicateSchema, r: &MappedRecord) -> Result<Atom> {
    let mut terms = Vec::with_capacity(s.arity());
    for pos in 1..=s.arity() {
        let f = s.field_at(pos);
        let mismatch = |found: String| MapError::FieldKindMismatch {
            predicate: s.signature(),
            field: f.field_id.clone(),
            expected: f.kind,
            found,
        };
        let value = r
            .values
            .get(&f.field_id)
            .ok_or_else(|| mismatch("nothing".into()))?;
        let term = match (f.kind, value) {
            (ValueKind::Integer, Value::Integer(v)) => Term::Integer(*v),
            (ValueKind::Symbol, Value::Symbol(v)) if is_identifier(v) => Term::sym(v.clone()),
            (ValueKind::QuotedString, Value::QuotedString(v)) => Term::string(v),
            (_, v) => return Err(mismatch(v.describe())),
        };
        terms.push(term);
    }
    Ok(Atom::new(s.predicate.clone(), terms))
}

fn term_to_value(s: &PredicateSchema, a: &Atom, position: usize) -> Result<Value> {
    let f = s.field_at(position);
    let t = &a.terms[position - 1];
    let value = match (f.kind, t) {
        (ValueKind::Integer, Term::Integer(v)) => Some(Value::Integer(*v)),
        (ValueKind::Symbol, Term::Symbol(_)) if !t.is_quoted() => {
            Some(Value::Symbol(t.to_string()))
        }
        (ValueKind::QuotedString, Term::Symbol(_)) => t.unquoted().map(Value::QuotedString),
        _ => None,
    };
    value.ok_or_else(|| MapError::TermKindMismatch {
        atom: a.to_string(),
        position,
        expected: f.kind,
    })
}

/// Result of translating one atom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Translation {
    Mapped(MappedRecord),
    /// No schema for the atom's predicate; carries the warning text.
    Skipped(String),
}

/// Schemas keyed by (name, arity). Registration consumes and returns the
/// registry; afterwards it is only read.
#[derive(Debug, Default)]
pub struct SchemaRegistry {
    schemas: BTreeMap<Signature, PredicateSchema>,
    warnings: AtomicUsize,
}

impl Clone for SchemaRegistry {
    fn clone(&self) -> Self {
        SchemaRegistry {
            schemas: self.schemas.clone(),
            warnings: AtomicUsize::new(self.warning_count()),
        }
    }
}

impl SchemaRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register(mut self, s: PredicateSchema) -> Result<Self> {
        s.validate()?;
        let sig = s.signature();
        if self.schemas.contains_key(&sig) {
            return Err(MapError::DuplicateSchema(sig));
        }
        self.schemas.insert(sig, s);
        Ok(self)
    }

    /// Reads one schema per line; blank lines and `%` comments are skipped.
    pub fn from_manifest(text: &str) -> Result<Self> {
        let mut reg = SchemaRegistry::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('%').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let s = PredicateSchema::parse_manifest_line(line).map_err(|message| {
                MapError::Manifest {
                    line: i + 1,
                    message,
                }
            })?;
            reg = reg.register(s)?;
        }
        Ok(reg)
    }

    pub fn get(&self, predicate: &str, arity: usize) -> Option<&PredicateSchema> {
        self.schemas.get(&Signature::new(predicate, arity))
    }

    pub fn schemas(&self) -> impl Iterator<Item = &PredicateSchema> {
        self.schemas.values()
    }

    pub fn len(&self) -> usize {
        self.schemas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.schemas.is_empty()
    }

    /// Number of atoms skipped so far for lack of a schema.
    pub fn warning_count(&self) -> usize {
        self.warnings.load(Ordering::Relaxed)
    }

    pub fn record_to_fact(&self, r: &MappedRecord) -> Result<Atom> {
        let s = self
            .get(&r.predicate, r.arity)
            .ok_or_else(|| MapError::UnknownSchema(r.signature()))?;
        record_to_fact(s, r)
    }

    pub fn fact_to_record(&self, a: &Atom) -> Result<Translation> {
        let Some(s) = self.get(&a.predicate, a.arity()) else {
            let warning = format!("no schema for {}; `{a}` ignored", a.signature());
            log::warn!("{warning}");
            self.warnings.fetch_add(1, Ordering::Relaxed);
            return Ok(Translation::Skipped(warning));
        };
        let mut record = MappedRecord::new(s.predicate.clone(), s.arity());
        for pos in 1..=s.arity() {
            let value = term_to_value(s, a, pos)?;
            record
                .values
                .insert(s.field_at(pos).field_id.clone(), value);
        }
        Ok(Translation::Mapped(record))
    }

    /// Records for every mappable atom of `i`, plus the number skipped.
    pub fn answer_set_to_records(&self, i: &Interpretation) -> Result<(Vec<MappedRecord>, usize)> {
        let mut records = Vec::new();
        let mut skipped = 0;
        for a in i {
            match self.fact_to_record(a)? {
                Translation::Mapped(r) => records.push(r),
                Translation::Skipped(_) => skipped += 1,
            }
        }
        Ok((records, skipped))
    }
}

/// Typed records with a fixed schema.
pub trait FactMapping: Sized {
    fn schema() -> PredicateSchema;
    fn to_record(&self) -> MappedRecord;
    fn from_record(r: &MappedRecord) -> Option<Self>;
}
