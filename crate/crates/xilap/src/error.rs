use core::fmt;

/// Failure modes shared by every evaluator in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Error {
    /// Argument sits on a pole.
    Pole,
    /// Argument on the negative real axis of a principal-branch function.
    Branch,
    /// Integer argument beyond the configured sieve bound.
    Range,
    /// Series lost too many digits even in extended precision.
    Cancellation,
    /// Reciprocal of an exact zero.
    ZeroDivision,
    /// Parameters outside the admissible region.
    Domain,
    /// Envelope sum does not converge.
    Divergence,
    /// Transform variable outside the strip of convergence.
    Strip,
    /// Quadrature failed to reach the requested tolerance.
    Convergence,
    /// Identity id not in the catalog.
    UnknownIdentity,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let msg = match self {
            Error::Pole => "argument is a pole",
            Error::Branch => "argument lies on the branch cut",
            Error::Range => "argument exceeds the sieve bound",
            Error::Cancellation => "series cancellation beyond guard",
            Error::ZeroDivision => "division by zero",
            Error::Domain => "argument outside the admissible domain",
            Error::Divergence => "envelope sum diverges",
            Error::Strip => "transform variable outside its strip",
            Error::Convergence => "quadrature did not converge",
            Error::UnknownIdentity => "unknown identity id",
        };
        f.write_str(msg)
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
