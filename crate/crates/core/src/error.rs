use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown group `{0}`")]
    UnknownGroup(String),
    #[error("invalid group table: {0}")]
    InvalidTable(String),
    #[error("failed to read `{path}`: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("too many rows in class type: {rows} > {cap}")]
    TooManyRows { rows: usize, cap: usize },
    #[error("state space cap exceeded: n = {n} > {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("table `{0}` is not exact; this operation requires exact character values")]
    InexactTable(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
    #[error("Stieltjes solver failed at z = {re} + {im}i: {reason}")]
    Solver { re: f64, im: f64, reason: String },
    #[error("branch tracking of log failed at x = {0}")]
    Branch(f64),
    #[error("parameter constraint violated: {0}")]
    Constraint(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
