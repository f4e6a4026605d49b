use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    SelfLoop { vertex: usize },
    VertexOutOfRange { vertex: usize, n: usize },
    UndefinedDensity { n: usize },
    InvalidProbability(f64),
    EmptyGraph,
    IncompleteColoring { vertex: usize },
    ClassOutOfRange { vertex: usize, class: u32, k: u32 },
    SizeMismatch { left: usize, right: usize },
    InvalidColorBudget(u32),
    TooLarge { n: usize, max: usize },
    InvalidSample { p: usize, t: usize },
    IllegalSampleKey,
    InvalidConfig(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::SelfLoop { vertex } => write!(f, "self-loop on vertex {vertex}"),
            Error::VertexOutOfRange { vertex, n } => {
                write!(f, "vertex {vertex} out of range for a graph with {n} vertices")
            }
            Error::UndefinedDensity { n } => {
                write!(f, "density is undefined for a graph with {n} vertices")
            }
            Error::InvalidProbability(d) => write!(f, "edge probability {d} is not in [0, 1]"),
            Error::EmptyGraph => write!(f, "graph must have at least one vertex"),
            Error::IncompleteColoring { vertex } => {
                write!(f, "coloring is incomplete: vertex {vertex} is uncolored")
            }
            Error::ClassOutOfRange { vertex, class, k } => {
                write!(f, "vertex {vertex} has class {class}, outside 0..{k}")
            }
            Error::SizeMismatch { left, right } => {
                write!(f, "size mismatch: {left} vs {right} vertices")
            }
            Error::InvalidColorBudget(k) => write!(f, "color budget k must be >= 1, got {k}"),
            Error::TooLarge { n, max } => {
                write!(f, "graph too large for exhaustive enumeration: n={n} > {max}")
            }
            Error::InvalidSample { p, t } => {
                write!(f, "invalid sample statistics: p={p}, t={t} (need 1 <= p <= t)")
            }
            Error::IllegalSampleKey => write!(f, "sample contains a coloring that is not legal"),
            Error::InvalidConfig(msg) => write!(f, "invalid configuration: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
