use alloc::string::String;
use core::fmt;

/// Errors raised by the algebra layer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    Parse { line: usize, col: usize, msg: String },
    UnknownVariable(String),
    DuplicateVariable(String),
    TooManyVariables(usize),
    NonPrimeModulus(u64),
    RingMismatch,
    NonHomogeneous,
    ZeroIdeal,
    UnitIdeal,
    NotFiniteLength,
    PointNotOnScheme,
    NotWellDefined(String),
    NotSurjective,
    DegenerateData(String),
    PathViolatesLocus(String),
    LengthTooLarge(usize),
    Unsupported(String),
    Inconsistent(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Parse { line, col, msg } => write!(f, "{line}:{col}: {msg}"),
            Error::UnknownVariable(v) => write!(f, "unknown variable `{v}`"),
            Error::DuplicateVariable(v) => write!(f, "variable `{v}` declared twice"),
            Error::TooManyVariables(n) => write!(f, "{n} variables exceed the supported maximum"),
            Error::NonPrimeModulus(p) => write!(f, "modulus {p} is not a supported prime"),
            Error::RingMismatch => write!(f, "operands live in different rings"),
            Error::NonHomogeneous => write!(f, "input is not homogeneous"),
            Error::ZeroIdeal => write!(f, "zero ideal"),
            Error::UnitIdeal => write!(f, "unit ideal"),
            Error::NotFiniteLength => write!(f, "quotient does not have finite length"),
            Error::PointNotOnScheme => write!(f, "point does not lie on the scheme"),
            Error::NotWellDefined(m) => write!(f, "map is not well defined: {m}"),
            Error::NotSurjective => write!(f, "map is not surjective"),
            Error::DegenerateData(m) => write!(f, "degenerate data: {m}"),
            Error::PathViolatesLocus(m) => write!(f, "path leaves the admissible locus: {m}"),
            Error::LengthTooLarge(n) => write!(f, "module of length {n} cannot be classified"),
            Error::Unsupported(m) => write!(f, "unsupported: {m}"),
            Error::Inconsistent(m) => write!(f, "inconsistent data: {m}"),
        }
    }
}
