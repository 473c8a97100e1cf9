use std::fmt;

use super::{Result, SolverKind, SystemError};
use crate::mapper::is_identifier;

/// A solver option, e.g. `-filter` `=` `cell` or a bare `0`.
///
/// An option always renders to argv elements directly, so values containing
/// spaces are never split by a shell.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OptionDescriptor {
    pub option_text: String,
    /// Placed between option and value. A whitespace separator yields two
    /// separate arguments.
    pub separator: String,
    pub value: Option<String>,
}

impl OptionDescriptor {
    pub fn flag(text: impl Into<String>) -> Self {
        OptionDescriptor {
            option_text: text.into(),
            separator: String::new(),
            value: None,
        }
    }

    pub fn with_value(
        text: impl Into<String>,
        separator: impl Into<String>,
        value: impl Into<String>,
    ) -> Self {
        OptionDescriptor {
            option_text: text.into(),
            separator: separator.into(),
            value: Some(value.into()),
        }
    }

    pub fn to_args(&self) -> Vec<String> {
        match &self.value {
            None => vec![self.option_text.clone()],
            Some(v) if !self.separator.is_empty() && self.separator.trim().is_empty() => {
                vec![self.option_text.clone(), v.clone()]
            }
            Some(v) => vec![format!("{}{}{}", self.option_text, self.separator, v)],
        }
    }
}

impl fmt::Display for OptionDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.option_text)?;
        if let Some(v) = &self.value {
            write!(f, "{}{}", self.separator, v)?;
        }
        Ok(())
    }
}

/// `-filter=p1,p2,...`: restricts printed models to the given predicates.
pub fn filter_option<S: AsRef<str>>(predicates: &[S]) -> Result<OptionDescriptor> {
    if predicates.is_empty() {
        return Err(SystemError::EmptyFilter);
    }
    if let Some(bad) = predicates.iter().find(|p| !is_identifier(p.as_ref())) {
        return Err(SystemError::InvalidOption(format!(
            "`{}` is not a predicate name",
            bad.as_ref()
        )));
    }
    let names: Vec<&str> = predicates.iter().map(AsRef::as_ref).collect();
    Ok(OptionDescriptor::with_value(
        "-filter",
        "=",
        names.join(","),
    ))
}

/// Number of models to compute, 0 for all: positional for clingo and the
/// reference solver, `-n=<n>` for DLV.
pub fn models_option(n: usize, kind: SolverKind) -> OptionDescriptor {
    match kind {
        SolverKind::Clingo | SolverKind::Reference => OptionDescriptor::flag(n.to_string()),
        SolverKind::Dlv => OptionDescriptor::with_value("-n", "=", n.to_string()),
    }
}
