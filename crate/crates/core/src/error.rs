use num_bigint::BigInt;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("input outside domain: {0}")]
    InputDomain(String),

    /// A value could not be built because its defining invariants fail.
    #[error("invalid construction: {0}")]
    Construction(String),

    /// Two objects were combined whose alphabets, orders or dimensions disagree.
    #[error("configuration mismatch: {0}")]
    Configuration(String),

    #[error("precondition failed: {message}")]
    Precondition {
        message: String,
        witness: Option<String>,
    },

    /// A bounded word source ran out before a verdict could be reached.
    #[error("insufficient prefix: needed {needed} symbols")]
    Capacity { needed: usize },

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    /// Malformed or incomplete spec document. `path` locates the offending field.
    #[error("spec error at `{path}`: {message}")]
    Schema { path: String, message: String },

    #[error("bases are multiplicatively dependent, certificate {certificate:?}")]
    DependentBases { certificate: Vec<BigInt> },

    #[error("enclosure too wide: {0}")]
    PrecisionInsufficient(String),

    #[error("precision exhausted at n = {n} after {retries} refinements")]
    PrecisionExhausted { n: u32, retries: u32 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            path: path.into(),
            message: message.into(),
        }
    }
}
