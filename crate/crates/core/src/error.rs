//! Error type shared by all modules of the crate.

use num_bigint::BigInt;
use thiserror::Error;

/// Errors raised by construction, parsing, and precondition checks.
///
/// Algorithmic operations (conjugacy, membership, isomorphism) signal
/// "no" or "unknown" through their return types, not through errors;
/// an `Error` always means the input itself was unusable.
#[derive(Debug, Error)]
pub enum Error {
    /// Matrix entries do not have determinant one.
    #[error("matrix has determinant {det}, expected 1")]
    NotUnimodular { det: BigInt },

    /// Text input could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    /// A word letter refers to a factor index or exponent outside the
    /// free-product signature.
    #[error("malformed word letter: {0}")]
    MalformedWord(String),

    /// Two core graphs over different free-product signatures were combined.
    #[error("free-product signatures differ: {0:?} vs {1:?}")]
    SignatureMismatch(Vec<u32>, Vec<u32>),

    /// The operation requires a nonempty word.
    #[error("operation undefined on the empty word")]
    EmptyWord,

    /// The operation requires a nonzero vector.
    #[error("operation undefined on the zero vector")]
    ZeroVector,

    /// Matrix dimensions do not match the operation's requirements.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A generator tuple does not satisfy the surface relator, or has the
    /// wrong length for the stated genus.
    #[error("not a surface representation: {0}")]
    NotSurfaceRep(String),

    /// The representation is not in normal form, which the operation requires.
    #[error("representation is not in normal form: {0}")]
    NotNormalForm(String),

    /// A bundle operation received structurally unsuitable input.
    #[error("invalid bundle operation: {0}")]
    InvalidBundle(String),
}
