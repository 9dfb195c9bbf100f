use thiserror::Error;

/// Errors raised by family construction, the cover machinery, the certificate
/// engine and the search oracle.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("ground set size {0} is outside 1..=64")]
    GroundSetSize(usize),

    #[error("element {elem} is outside [1, {n}]")]
    ElementOutOfRange { elem: usize, n: usize },

    #[error("set {set} has {found} elements, expected {expected}")]
    WrongCardinality {
        set: String,
        expected: usize,
        found: usize,
    },

    #[error("duplicate member {0}")]
    DuplicateMember(String),

    #[error("ground sets differ: {0} vs {1}")]
    GroundMismatch(usize, usize),

    #[error("operation is undefined on the empty family")]
    EmptyFamily,

    #[error("family is not intersecting: {0} and {1} are disjoint")]
    NotIntersecting(String, String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("binomial coefficient with negative top argument ({0}, {1})")]
    NegativeBinomialTop(i64, i64),

    #[error("range too large: {what} would need about {estimate}")]
    RangeTooLarge { what: String, estimate: String },

    #[error("unknown certificate suite `{0}`")]
    UnknownSuite(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("io: {0}")]
    Io(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
