use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A quantity required as a divisor vanished.
    #[error("singularity: {0}")]
    Singularity(String),

    /// The two roots of the lambda quadratic cannot be told apart at this point.
    #[error("branch ambiguity at z = {re} + {im}i: roots have equal modulus and |z| >= 1")]
    BranchAmbiguity { re: f64, im: f64 },

    /// Pointwise evaluation hit a zero of the generating-function denominator.
    #[error("pole of the generating function at z = {re} + {im}i")]
    Pole { re: f64, im: f64 },

    /// No normalizable edge state exists for these parameters.
    #[error("no localized edge state: decay ratio r = {r} is not below 1")]
    Delocalized { r: f64 },

    /// A request exceeds a fixed work or memory budget.
    #[error("resource limit: {what} = {requested} exceeds the limit of {limit}")]
    Resource {
        what: &'static str,
        requested: usize,
        limit: usize,
    },
}
