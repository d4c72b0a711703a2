use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("function has a pole on the unit circle")]
    PoleOnCircle,
    #[error("denominator is identically zero")]
    ZeroDenominator,
    #[error("polynomial degree {0} exceeds the supported maximum of 64")]
    DegreeOverflow(usize),
    #[error("function is not in the required Hardy space")]
    NotInHardySpace,
    #[error("function is identically zero")]
    ZeroFunction,
    #[error("symbol has a zero or pole on the unit circle")]
    ZeroOrPoleOnCircle,
    #[error("symbol is not bounded on the unit circle")]
    SymbolNotBounded,
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("truncation window {0} exceeds the limit of 4096")]
    WindowOverflow(usize),
    #[error("degenerate symbol: {0}")]
    DegenerateSymbol(String),
    #[error("kernel is trivial, criterion does not apply")]
    TrivialKernel,
    #[error("inputs are not in H2+ and H2- respectively")]
    NotInHardySpaces,
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("function is not in the kernel")]
    NotInKernel,
    #[error("a*a' + b*b' is not identically 1")]
    PartitionOfUnityFails,
    #[error("function is not inner")]
    NotInner,
    #[error("rank decision indeterminate, spectral gap {0:.3e} below 1e3")]
    Indeterminate(f64),
    #[error("unknown property: {0}")]
    UnknownProperty(String),
    #[error("malformed config: {0}")]
    MalformedConfig(String),
    #[error("invalid symbol: {0}")]
    InvalidSymbol(String),
    #[error("invalid operator expression: {0}")]
    InvalidExpression(String),
}

pub type Result<T> = std::result::Result<T, Error>;
