//! Interned symbols and tagged parameter values.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// An interned label. Cheap to clone, compared by content.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(s: &str) -> Self {
        Symbol(Arc::from(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol::new(s)
    }
}

impl From<String> for Symbol {
    fn from(s: String) -> Self {
        Symbol(Arc::from(s.as_str()))
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ValueError {
    #[error("cannot compare {left} with {right}: values of different kinds")]
    TagMismatch { left: DomainTag, right: DomainTag },
}

/// The kind of value a parameter ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DomainTag {
    Int,
    Sym,
    Tuple,
    Empty,
}

impl fmt::Display for DomainTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DomainTag::Int => "int",
            DomainTag::Sym => "sym",
            DomainTag::Tuple => "tuple",
            DomainTag::Empty => "empty",
        };
        f.write_str(s)
    }
}

/// A single recorded parameter value: an integer, a symbol, an integer
/// tuple (a grid coordinate), or the distinguished empty marker used when
/// an observer obtains no result.
///
/// Values of different kinds are never silently unequal: semantic
/// comparisons go through [`ParamValue::try_eq`] and fail loudly across
/// kinds. The derived `Ord` is a canonical storage order used only to keep
/// sets and reports deterministic.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ParamValue {
    Int(i64),
    Sym(Symbol),
    Tuple(Vec<i64>),
    Empty,
}

impl ParamValue {
    pub fn sym(s: &str) -> Self {
        ParamValue::Sym(Symbol::new(s))
    }

    pub fn tag(&self) -> DomainTag {
        match self {
            ParamValue::Int(_) => DomainTag::Int,
            ParamValue::Sym(_) => DomainTag::Sym,
            ParamValue::Tuple(_) => DomainTag::Tuple,
            ParamValue::Empty => DomainTag::Empty,
        }
    }

    /// Equality within a kind; comparing across kinds is an error.
    pub fn try_eq(&self, other: &ParamValue) -> Result<bool, ValueError> {
        if self.tag() != other.tag() {
            return Err(ValueError::TagMismatch {
                left: self.tag(),
                right: other.tag(),
            });
        }
        Ok(self == other)
    }

    /// Total order within a kind; comparing across kinds is an error.
    pub fn try_cmp(&self, other: &ParamValue) -> Result<Ordering, ValueError> {
        if self.tag() != other.tag() {
            return Err(ValueError::TagMismatch {
                left: self.tag(),
                right: other.tag(),
            });
        }
        Ok(self.cmp(other))
    }
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Int(n) => write!(f, "{n}"),
            ParamValue::Sym(s) => write!(f, "{s}"),
            ParamValue::Tuple(xs) => {
                write!(f, "(")?;
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
            ParamValue::Empty => write!(f, "∅"),
        }
    }
}
