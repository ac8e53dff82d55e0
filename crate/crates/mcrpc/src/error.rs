use std::fmt;

/// Crate-wide error type.
#[derive(Debug)]
pub enum Error {
    /// Invalid model data or violated operation precondition.
    Model(String),
    /// Demand index outside the instance's demand list.
    IndexOutOfRange { index: usize, len: usize },
    /// Arc index outside `1..=n`.
    ArcOutOfRange { arc: u32, n: u32 },
    /// Two routes or families built over rings of different sizes.
    RingSizeMismatch { left: u32, right: u32 },
    /// Collision asked for a crossing pair; collisions are defined only for
    /// parallel demands.
    CrossingPair { p: usize, q: usize },
    /// An enumeration guard was exceeded.
    SizeLimit {
        what: &'static str,
        limit: usize,
        actual: usize,
    },
    /// Operation needs at least one demand.
    EmptyInstance,
    /// The uniform-weight solver was given unequal weights.
    NonUniformWeights,
    /// The cutting-plane loop exceeded its cut ceiling.
    IterationLimit { cuts: usize },
    /// No weight assignment satisfied the fig5 reconstruction conditions.
    Fig5Reconstruction,
    /// Instance or routing file could not be parsed.
    Parse(String),
    Io(std::io::Error),
    /// A condition the implementation guarantees was violated; indicates a bug.
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Model(msg) => write!(f, "{msg}"),
            Error::IndexOutOfRange { index, len } => {
                write!(f, "demand index {index} out of range (instance has {len} demands)")
            }
            Error::ArcOutOfRange { arc, n } => {
                write!(f, "arc {arc} out of range for a ring with {n} arcs")
            }
            Error::RingSizeMismatch { left, right } => {
                write!(f, "mismatched ring sizes: {left} vs {right}")
            }
            Error::CrossingPair { p, q } => {
                write!(f, "demands {p} and {q} cross; collision is defined only for parallel demands")
            }
            Error::SizeLimit { what, limit, actual } => {
                write!(f, "{what}: size {actual} exceeds the guard of {limit}")
            }
            Error::EmptyInstance => write!(f, "operation requires a nonempty demand list"),
            Error::NonUniformWeights => {
                write!(f, "the fixed-parameter solver requires all demand weights to be equal")
            }
            Error::IterationLimit { cuts } => {
                write!(f, "cutting-plane loop exceeded the cut ceiling ({cuts} cuts)")
            }
            Error::Fig5Reconstruction => {
                write!(f, "no weight assignment met the fig5 reconstruction conditions")
            }
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
            Error::Io(err) => write!(f, "io error: {err}"),
            Error::Internal(msg) => write!(f, "internal error: {msg}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(err) => Some(err),
            _ => None,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err)
    }
}
