use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("undeclared symbol `{0}`")]
    UndeclaredSymbol(String),
    #[error("unbound parameter `{0}`")]
    UnboundParameter(String),
    #[error("arity mismatch for `{name}`: expected {expected}, found {found}")]
    Arity {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("cannot unfold `{0}`: recursion argument is neither 0 nor a successor")]
    NotUnfoldable(String),
    #[error("not a standard variable expression: {0}")]
    NotStandard(String),
    #[error("domain collision: {0}")]
    DomainCollision(String),
    #[error("recursion bound {0} exceeded")]
    DepthExceeded(u64),
    #[error("{line}:{col}: syntax error: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("not ground: {0}")]
    NotGround(String),
    #[error("not composable: {0}")]
    NotComposable(String),
    #[error("not V-regular: {0}")]
    NotVRegular(String),
    #[error("state mismatch: {0}")]
    StateMismatch(String),
    #[error("context violated: {0}")]
    ContextViolated(String),
    #[error("extraction failed: {0}")]
    ExtractionFailed(String),
    #[error("invalid theory: {0}")]
    InvalidTheory(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
