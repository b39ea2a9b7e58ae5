use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cell ({}) lies outside the lattice", fmt_coords(.0))]
    OutOfBounds(Vec<u32>),

    #[error("{0} must not be empty")]
    EmptyInput(&'static str),

    #[error("{0}")]
    Domain(String),

    #[error("{context}: error estimate {achieved:e} above tolerance (partial value {partial})")]
    Convergence {
        context: String,
        partial: f64,
        achieved: f64,
    },

    /// A case the structural guarantees rule out. Reaching it means a bug,
    /// not bad input.
    #[error("structurally impossible case reached: {0}")]
    Impossible(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

fn fmt_coords(c: &[u32]) -> String {
    c.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}
