use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown bus id {0}")]
    UnknownBus(usize),

    #[error("unknown line id {0}")]
    UnknownLine(usize),

    #[error("dimension mismatch in {what}: expected {expected}, got {got}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("negative power {0} MW passed where a magnitude is required")]
    NegativePower(f64),

    #[error("column {0} is not binary and cannot be hedged")]
    NotBinary(usize),

    #[error("assignment covers {got} columns but the model has {expected}")]
    MissingColumns { expected: usize, got: usize },

    #[error("scenario {scenario} subproblem is infeasible")]
    ScenarioInfeasible { scenario: usize },

    #[error("model is infeasible")]
    Infeasible,

    #[error("LP relaxation is unbounded (a column is missing a finite bound)")]
    Unbounded,

    #[error("cone {cone} is violated at a point where its tangent is undefined")]
    DegenerateCone { cone: String },

    #[error("LP core failure: {0}")]
    Lp(String),

    #[error("mismatched runs: {0}")]
    Mismatch(String),

    #[error("model file parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
