use thiserror::Error;

/// Errors raised by the algebra layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parameter mismatch: {0}")]
    ParameterMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("series is not a unit: constant coefficient is {0}, expected 1")]
    NotAUnit(u32),

    #[error("generator index {index} out of range for alphabet of size {alphabet}")]
    GeneratorOutOfRange { index: usize, alphabet: usize },

    #[error("budget exceeded: {what} reached {reached} (budget {budget})")]
    BudgetExceeded {
        what: &'static str,
        reached: usize,
        budget: usize,
    },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("map is not a homomorphism: {0}")]
    NotAHomomorphism(String),

    #[error("cochain is not a 2-cocycle: fails at ({0}, {1}, {2})")]
    NotACocycle(usize, usize, usize),

    #[error("cochain array is not a defining system: fails at entry ({0}, {1})")]
    NotADefiningSystem(usize, usize),

    #[error("class does not vanish at level {0}")]
    ClassDoesNotVanish(usize),

    #[error("equation has no solution: {0}")]
    Unsolvable(String),

    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
