use alloc::string::String;
use core::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// The ring parameters are unusable (non-prime p, zero level, too large a degree...).
    InvalidSpec(String),
    /// A full enumeration would exceed the configured guard.
    GuardExceeded { what: &'static str, size: u64, limit: u64 },
    /// An element was passed to an operation that requires membership in a subgroup.
    NotMember(&'static str),
    /// A matrix or ring element that must be invertible is not.
    NotInvertible,
    /// A character does not satisfy a genericity hypothesis of the construction.
    Genericity(String),
    /// An identity that holds by theory failed; carries a description of the witness.
    Invariant(String),
    /// Malformed textual input (ring keys, torus keys, serialized numbers).
    Parse(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidSpec(s) => write!(f, "invalid ring spec: {s}"),
            Error::GuardExceeded { what, size, limit } => {
                write!(f, "enumeration guard exceeded for {what}: {size} > {limit}")
            }
            Error::NotMember(what) => write!(f, "element is not in {what}"),
            Error::NotInvertible => write!(f, "element is not invertible"),
            Error::Genericity(s) => write!(f, "genericity precondition failed: {s}"),
            Error::Invariant(s) => write!(f, "invariant violation: {s}"),
            Error::Parse(s) => write!(f, "parse error: {s}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
