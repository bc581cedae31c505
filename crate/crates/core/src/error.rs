use thiserror::Error;

/// Errors raised anywhere in the solver stack.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter {param} = {value} outside domain [{lo}, {hi}]")]
    ParameterDomain {
        param: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },
    #[error("degenerate curve: {0}")]
    DegenerateCurve(String),
    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("argument out of domain: {0}")]
    Domain(String),
    #[error("singular system: {0}")]
    Singular(String),
    #[error("GMRES did not converge after {iterations} iterations (residual {residual:.3e})")]
    NotConverged {
        iterations: usize,
        residual: f64,
        best: Vec<num_complex::Complex64>,
    },
    #[error("size mismatch: {0}")]
    Shape(String),
    #[error("configuration error at `{key}`: {msg}")]
    Config { key: String, msg: String },
    #[error("solver failure in {stage}: {source}")]
    Stage {
        stage: String,
        #[source]
        source: Box<Error>,
    },
    #[error("reference store conflict: {0}")]
    ReferenceConflict(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn config(key: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            msg: msg.into(),
        }
    }

    pub fn in_stage(self, stage: impl Into<String>) -> Self {
        Error::Stage {
            stage: stage.into(),
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
