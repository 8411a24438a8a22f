use std::borrow::Borrow;
use std::fmt;
use std::sync::Arc;

use super::IrError;

/// Keywords of the ST surface syntax. Matched case-insensitively.
pub(crate) const ST_KEYWORDS: &[&str] = &[
    "PROGRAM",
    "END_PROGRAM",
    "VAR_INPUT",
    "VAR_OUTPUT",
    "VAR",
    "VAR_EXTERNAL",
    "END_VAR",
    "IF",
    "THEN",
    "ELSE",
    "ELSIF",
    "END_IF",
    "AND",
    "OR",
    "XOR",
    "NOT",
    "TRUE",
    "FALSE",
    "CONFIGURATION",
    "END_CONFIGURATION",
    "RESOURCE",
    "END_RESOURCE",
    "ON",
    "TASK",
    "WITH",
    "INTERVAL",
    "PRIORITY",
    "LREAL",
    "REAL",
    "BOOL",
];

/// Keywords of the dL surface syntax.
pub(crate) const DL_KEYWORDS: &[&str] = &["true", "false"];

/// A variable name, valid in both surface syntaxes.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ident(Arc<str>);

impl Ident {
    pub fn new(name: &str) -> Result<Ident, IrError> {
        let mut chars = name.chars();
        let valid = match chars.next() {
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
            }
            _ => false,
        };
        if !valid {
            return Err(IrError::InvalidIdent(name.to_string()));
        }
        if is_reserved(name) {
            return Err(IrError::ReservedIdent(name.to_string()));
        }
        Ok(Ident(Arc::from(name)))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

pub(crate) fn is_reserved(name: &str) -> bool {
    ST_KEYWORDS.iter().any(|k| k.eq_ignore_ascii_case(name))
        || DL_KEYWORDS.iter().any(|k| k.eq_ignore_ascii_case(name))
}

impl fmt::Display for Ident {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Ident {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Borrow<str> for Ident {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl TryFrom<&str> for Ident {
    type Error = IrError;

    fn try_from(value: &str) -> Result<Self, Self::Error> {
        Ident::new(value)
    }
}
