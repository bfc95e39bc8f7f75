use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degree violation: {0}")]
    DegreeViolation(String),
    #[error("discriminant equation in k is degenerate and has no root")]
    NoSolution,
    #[error("under-root quadratic is not a perfect square (|disc| = {disc:e})")]
    NotPerfectSquare { disc: f64 },
    #[error("branch selection is ambiguous: {candidates} candidate branches")]
    AmbiguousBranch { candidates: usize },
    #[error("branch index {index} out of range ({len} branches)")]
    BranchIndex { index: usize, len: usize },
    #[error("sigma is not of the form c*s*(1 - q*s) or c*s")]
    UnsupportedSigmaClass,
    #[error("Jacobi recurrence and explicit sum both failed at n = {n}")]
    RecurrenceBreakdown { n: usize },
    #[error("1F1 parameter b = {b} is a nonpositive integer")]
    PoleAtB { b: Complex64 },
    #[error("1F1 series did not converge within {terms} terms (last term {estimate:e})")]
    NonConvergence { terms: usize, estimate: f64 },
    #[error("potential pole at x = {x}")]
    PoleAtX { x: Complex64 },
    #[error("eigenfunction pole at s = {s}")]
    PoleAtS { s: Complex64 },
    #[error("linear approximation is degenerate for q = 1")]
    DegenerateShape,
    #[error("operation not applicable: {0}")]
    NotApplicable(String),
    #[error("no n satisfies the reality condition (V0^2 < 4 q^2 m^2 or window empty)")]
    EmptyWindow,
    #[error("no convergence after {iterations} iterations; trajectory tail {tail:?}")]
    NoConvergence { iterations: usize, tail: Vec<Complex64> },
    #[error("QR iteration did not converge after {sweeps} sweeps")]
    EigensolverFailure { sweeps: usize },
    #[error("invalid potential: {0}")]
    InvalidSpec(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}
