use std::fmt;

use thiserror::Error;

/// One of the three economic quantities tracked by the growth model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variable {
    Labor,
    Capital,
    Output,
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variable::Labor => "labor",
            Variable::Capital => "capital",
            Variable::Output => "output",
        })
    }
}

/// Which rate condition made a derivation singular.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Degeneracy {
    /// `b1 = 0`: time cannot be eliminated through labor.
    ZeroLaborRate,
    /// `b2 = 0`: time cannot be eliminated through capital.
    ZeroCapitalRate,
    /// `b3 = 0`: output exponent `1/b3` is undefined.
    ZeroOutputRate,
    /// `b1 = b2`: the CRS elasticity formula is singular.
    EqualFactorRates,
}

impl fmt::Display for Degeneracy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Degeneracy::ZeroLaborRate => "labor growth rate b1 is zero",
            Degeneracy::ZeroCapitalRate => "capital growth rate b2 is zero",
            Degeneracy::ZeroOutputRate => "output growth rate b3 is zero",
            Degeneracy::EqualFactorRates => "labor and capital growth rates are equal (b1 = b2)",
        })
    }
}

/// Errors raised by model construction, evaluation and invariant derivation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum MathError {
    #[error("{variable} overflows at t = {t}")]
    Overflow { variable: Variable, t: f64 },
    #[error("parameter `{name}` is not finite")]
    NonFinite { name: &'static str },
    #[error("`{name}` must be strictly positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("alpha must lie strictly inside (0, 1), got {0}")]
    AlphaOutOfRange(f64),
    #[error("CES substitution parameter p must be nonzero")]
    ZeroSubstitution,
    #[error("degenerate model: {0}")]
    Degenerate(Degeneracy),
    #[error("model is not reducible to CES: {0}")]
    NotReducible(ReductionFailure),
}

/// The precondition of the CES reduction that did not hold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReductionFailure {
    /// `|b1 - b2| > tol * max(|b1|, |b2|)`.
    FactorRatesDiffer { b1: f64, b2: f64, tol: f64 },
    /// Both factor rates are zero.
    ZeroFactorRate,
    /// `|ln L0 - ln K0| > tol`.
    LaborCapitalLevelsDiffer { gap: f64, tol: f64 },
    /// `|ln L0 - ln Y0| > tol`.
    LaborOutputLevelsDiffer { gap: f64, tol: f64 },
    /// The tolerance itself was negative or not finite.
    InvalidTolerance { tol: f64 },
}

impl fmt::Display for ReductionFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ReductionFailure::FactorRatesDiffer { b1, b2, tol } => {
                write!(f, "b1 = {b1} and b2 = {b2} differ beyond relative tolerance {tol}")
            }
            ReductionFailure::ZeroFactorRate => f.write_str("b1 = b2 = 0"),
            ReductionFailure::LaborCapitalLevelsDiffer { gap, tol } => {
                write!(f, "|ln L0 - ln K0| = {gap} exceeds {tol}")
            }
            ReductionFailure::LaborOutputLevelsDiffer { gap, tol } => {
                write!(f, "|ln L0 - ln Y0| = {gap} exceeds {tol}")
            }
            ReductionFailure::InvalidTolerance { tol } => write!(f, "invalid tolerance {tol}"),
        }
    }
}
