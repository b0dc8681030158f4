use thiserror::Error;

/// Errors raised by the numerical pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the region where the operation is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// A matrix entry left the representable range while composing a word.
    #[error("matrix entry overflow while composing word of length {word_length}")]
    Overflow { word_length: usize },

    /// The element has |tr| <= 2.
    #[error("element is not hyperbolic (|tr| = {trace})")]
    NotHyperbolic { trace: f64 },

    /// A series or fixed-point iteration failed to settle.
    #[error("convergence failure: {0}")]
    Convergence(String),

    /// The zero ladder s_k(w) stopped converging.
    #[error("ladder failure: {0}")]
    Ladder(String),

    /// The a-priori lower bound fed into the certification is inconsistent
    /// with the interval it produced.
    #[error("prior inconsistency: {0}")]
    Prior(String),

    /// A computed estimate fell outside the interval that should contain it.
    #[error("certification failure: {0}")]
    Certification(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
