use thiserror::Error;

use crate::frames::jacobi::EigenDiagnostics;

/// Which admissibility condition a window fails for a given subgroup.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    /// Condition (i): the DC sample of the window spectrum vanishes.
    DcZero,
    /// Condition (ii): every spectral sample on the coset `ε^t·M` vanishes.
    EmptyCoset(usize),
}

impl std::fmt::Display for Condition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Condition::DcZero => write!(f, "condition (i) fails: y_hat(0) = 0"),
            Condition::EmptyCoset(t) => {
                write!(f, "condition (ii) fails: coset H_{t} carries no nonzero spectral sample")
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {0} exceeds the supported range (p < 2^32)")]
    PrimeTooLarge(u64),
    #[error("{m} has no inverse modulo {p}")]
    NotInvertible { m: u64, p: u64 },
    #[error("{order} does not divide the group order {group_order}")]
    NotADivisor { order: u64, group_order: u64 },
    #[error("signal length {found} does not match p = {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("signal entry {index} is not finite")]
    NonFinite { index: usize },
    #[error("signals live over different primes ({left} vs {right})")]
    ContextMismatch { left: u64, right: u64 },
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("dilation {m} is not in the subgroup of order {order}")]
    NotInSubgroup { m: u64, order: u64 },
    #[error("window signal is identically zero")]
    ZeroWindow,
    #[error("window is not admissible: {0}")]
    Inadmissible(Condition),
    #[error("Jacobi eigensolver did not converge: {0}")]
    EigenNoConvergence(EigenDiagnostics),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
