use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// An argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Invalid or inconsistent configuration.
    #[error("config error: {0}")]
    Config(String),

    /// A numerical procedure could not reach its accuracy target.
    #[error("numerical error in {context}: achieved {achieved:.3e}, target {target:.3e}")]
    Numerical {
        context: String,
        achieved: f64,
        target: f64,
        /// Best available value when the procedure gave up.
        partial: Option<f64>,
    },
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
