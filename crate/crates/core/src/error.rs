//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Dimensions of two operands do not line up.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// A symmetric pattern was requested with too much side information.
    #[error("antidote count: U+D must be less than K (U={up}, D={down}, K={k})")]
    AntidoteCount { k: usize, up: usize, down: usize },

    /// A construction class's divisibility condition fails for (K, delta, lambda).
    #[error("class condition: {0}")]
    ClassCondition(String),

    /// Several lambda values satisfy the class; the caller must pick one.
    #[error("lambda required: valid values are {0:?}")]
    LambdaRequired(Vec<usize>),

    /// A scalar code was expected but the input has a larger block size.
    #[error("not scalar: code has {0} components per message")]
    NotScalar(usize),

    /// No combination of code symbols decodes the receiver's message.
    #[error("undecodable receiver {0}")]
    Undecodable(usize),

    /// A decoding step would contain two or more still-unknown wanted
    /// components, so neither can be recovered.
    #[error("interference at receiver {receiver}, step {step}: components {components:?} are all unknown")]
    Interference {
        receiver: usize,
        step: usize,
        components: Vec<(usize, usize)>,
    },

    /// Exhaustive search would exceed the enumeration budget.
    #[error("instance too large: {0}")]
    InstanceTooLarge(String),

    /// A problem description violates its invariants.
    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    /// A code description violates its invariants.
    #[error("invalid code: {0}")]
    InvalidCode(String),

    /// JSON parse or serialize failure (includes location on parse).
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}
