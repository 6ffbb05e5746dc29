use core::fmt;

use crate::sets::IndexSet;

/// Everything that can go wrong inside the engine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A length vector with no entries, a zero entry, or an oversized sum.
    InvalidLengths(&'static str),
    /// The length vector has a vanishing signed sum; the witness is the subset
    /// whose sum equals half the perimeter.
    NotGeneric { witness: IndexSet },
    /// `n` is outside the range an operation supports.
    UnsupportedN { n: usize, min: usize, max: usize },
    /// A set of genes that is not a valid genetic code candidate.
    InvalidCode(&'static str),
    /// The presentation failed to collapse the way a closed manifold must.
    InconsistentRing(&'static str),
    /// A degree did not match what the operation needs.
    DegreeMismatch { expected: usize, found: usize },
    /// A set that was required to be a subgee is not one.
    NotSubgee(IndexSet),
    /// A tensor position, generator or exponent that does not fit the ring.
    MalformedFactor(&'static str),
    /// A numeric argument out of its range.
    OutOfRange(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidLengths(why) => write!(f, "invalid length vector: {why}"),
            Error::NotGeneric { witness } => {
                write!(f, "length vector is not generic: the subset {witness} sums to half the perimeter")
            }
            Error::UnsupportedN { n, min, max } => {
                write!(f, "n = {n} is outside the supported range {min}..={max}")
            }
            Error::InvalidCode(why) => write!(f, "invalid genetic code: {why}"),
            Error::InconsistentRing(why) => write!(f, "inconsistent cohomology ring: {why}"),
            Error::DegreeMismatch { expected, found } => {
                write!(f, "expected a class of degree {expected}, found degree {found}")
            }
            Error::NotSubgee(s) => write!(f, "{s} is not a subgee"),
            Error::MalformedFactor(why) => write!(f, "malformed certificate factor: {why}"),
            Error::OutOfRange(why) => write!(f, "argument out of range: {why}"),
        }
    }
}

impl core::error::Error for Error {}
