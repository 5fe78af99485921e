use thiserror::Error;

/// Errors surfaced by the library. Verification failures are not errors:
/// they are reported through [`crate::report::Report`].
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("double factorial is undefined for {0} (need n >= -1)")]
    DoubleFactorialDomain(i64),

    #[error("wave coefficient index must be non-negative, got {0}")]
    NegativeIndex(i64),

    #[error("p-variable index {0} is not a positive odd integer")]
    InvalidOddIndex(u32),

    #[error("mu key parts must be positive odd integers, got {0:?}")]
    InvalidMuKey(Vec<u32>),

    #[error("y(z) - y(-z) vanishes identically on curve `{0}`; the recursion kernel is undefined")]
    DegenerateCurve(String),

    #[error("(g, n) = ({g}, {n}) is a base case, not produced by the recursion")]
    UnstableTopology { g: u32, n: u32 },

    #[error("correlation tensor for (g, n) = ({g}, {n}) is not symmetric at {mu:?}")]
    AsymmetricTensor { g: u32, n: u32, mu: Vec<u32> },

    #[error("residue produced a term without a pole at z1 = 0 for (g, n) = ({g}, {n})")]
    NonPrincipalTerm { g: u32, n: u32 },

    #[error("no tabulated closed form for genus {g} and shape {shape:?}")]
    UntabulatedFamily { g: u32, shape: Vec<u32> },

    #[error("closed form for shape {shape:?} needs n >= {min}, got {n}")]
    TooFewPoints { shape: Vec<u32>, n: u32, min: u32 },

    #[error("exponential needs a series with zero constant term, found {0}")]
    NonZeroConstant(String),

    #[error("logarithm needs a series with constant term 1, found {0}")]
    ConstantNotOne(String),

    #[error("order {got} is too low; at least {needed} is required")]
    OrderTooLow { needed: u32, got: u32 },

    #[error("cannot parse rational from `{0}`")]
    ParseRational(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
