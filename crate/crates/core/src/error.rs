use thiserror::Error;

/// Errors raised by the verification engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SmmsError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("evaluation error: {0}")]
    Eval(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("positivity violated: {0}")]
    Positivity(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("fiber nesting deeper than {max} levels")]
    Recursion { max: usize },
    #[error("density form error: {0}")]
    Form(String),
    #[error("inadmissible parameters: {0}")]
    Admissibility(String),
    #[error("integration step produced a non-finite state at t = {t}")]
    Step { t: f64 },
    #[error("contradiction: {0}")]
    Contradiction(String),
}

pub type Result<T> = std::result::Result<T, SmmsError>;
