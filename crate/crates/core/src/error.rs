use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("argument {0} is a pole")]
    Pole(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("refinement did not converge: {0}")]
    NonConvergence(String),
    #[error("coefficient window too small: need |j| <= {need}, have {have}")]
    Window { need: i64, have: i64 },
    #[error("singular evaluation at theta = {0}")]
    Singular(f64),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("painleve solver: {0}")]
    Painleve(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;
