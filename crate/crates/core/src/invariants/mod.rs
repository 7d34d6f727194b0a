//! Group actions on the pencil parameters of the `K^2 = 5, 6` families and
//! exact checks of their invariant generators at random rational points.

mod k5;
mod k6;
mod suite;

pub use k5::*;
pub use k6::*;
pub use suite::*;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InvariantError {
    #[error("degenerate parameter point: {0}")]
    Degenerate(&'static str),
    #[error("unsupported case `{0}`; expected K5 or K6")]
    UnsupportedCase(String),
    #[error("number of trials must be positive")]
    NoTrials,
}
