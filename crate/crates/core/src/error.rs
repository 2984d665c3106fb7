use thiserror::Error;

/// Errors raised by the carrier and ensemble operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    /// A textual option label did not match any known variant.
    #[error("unknown {what} '{got}'")]
    UnknownLabel { what: &'static str, got: String },
    /// A carrier was asked for its state before it existed.
    #[error("measurement tick {tick} precedes the carrier reference tick {reference}")]
    TickBeforeReference { tick: u64, reference: u64 },
}
