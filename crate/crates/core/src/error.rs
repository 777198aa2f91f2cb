use thiserror::Error;

/// Errors raised by model evaluation, address handling, ray tracing and the
/// brush checkers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("overflow: real part {0} exceeds the exponent budget")]
    Overflow(f64),
    #[error("point {re}+{im}i is not in the half-plane H (threshold {threshold})")]
    OutOfH { re: f64, im: f64, threshold: f64 },
    #[error("inverse branch did not converge after {steps} steps (residual {residual:e})")]
    NoConvergence { steps: usize, residual: f64 },
    #[error("model mismatch: {0}")]
    ModelMismatch(String),
    #[error("point is not in the closure of any tract")]
    NotInTract,
    #[error("infeasible model: {0}")]
    InfeasibleModel(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("inputs are equal")]
    EqualInputs,
    #[error("unsupported alphabet: {0}")]
    UnsupportedAlphabet(String),
    #[error("bad neighborhood spec: {0}")]
    BadSpec(String),
    #[error("sample {index} is not in J(F): orbit exits the tracts at step {step}")]
    NotInJulia { index: usize, step: usize },
    #[error("pullback left H at step {step}")]
    LeftH { step: usize },
    #[error("empty result: {0}")]
    Empty(String),
    #[error("no endpoint found: orbit persists down to t = {0}")]
    NoEndpointFound(f64),
    #[error("bad phi: phi(x) <= x at x = {0}")]
    BadPhi(f64),
    #[error("address mismatch at iterate {0}")]
    AddressMismatch(usize),
    #[error("empty input")]
    EmptyInput,
    #[error("point is not on the hair (distance {0:e})")]
    NotOnHair(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
