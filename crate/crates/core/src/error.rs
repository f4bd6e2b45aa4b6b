use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PadicError {
    #[error("{0} is not a prime number")]
    NotPrime(u64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("operands live over different primes ({0} and {1})")]
    PrimeMismatch(u64, u64),
    #[error("division by an inexact zero; raise the input precision")]
    InexactZeroDivision,
    #[error("division by zero")]
    DivisionByZero,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("no nonzero digit found within the valuation cap of {0} digits")]
    ValuationCapExceeded(u64),
    #[error("contraction violated: digit {index} of the fixed point read while producing digit {current}")]
    ContractionViolation { index: usize, current: usize },
    #[error("insufficient precision: {0}")]
    PrecisionInsufficient(String),
    #[error("precision error: valuation {valuation} of the window reaches the precision {precision}")]
    PrecisionError { valuation: i64, precision: i64 },
    #[error("output {0} has no entry distinguishable from zero")]
    SurjectivityFailure(usize),
    #[error("the Hensel condition |f(a)| < |f'(a)|^2 cannot be certified")]
    HenselHypothesisFailure,
    #[error("not a square")]
    NotASquare,
    #[error("step {0} missed its minimal precision lattice")]
    LiftPolicyFailure(usize),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

impl PadicError {
    /// True for the errors a caller may recover from by raising precision.
    pub fn is_precision_error(&self) -> bool {
        matches!(
            self,
            PadicError::InexactZeroDivision
                | PadicError::PrecisionError { .. }
                | PadicError::PrecisionInsufficient(_)
                | PadicError::ValuationCapExceeded(_)
                | PadicError::SurjectivityFailure(_)
                | PadicError::LiftPolicyFailure(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, PadicError>;
