use dea_frame::DeaError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
    #[error("{0}")]
    Numerical(String),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

impl BenchError {
    /// 1 usage, 2 data, 3 numerical.
    pub fn exit_code(&self) -> i32 {
        match self {
            BenchError::Usage(_) => 1,
            BenchError::Data(_) | BenchError::Io { .. } => 2,
            BenchError::Numerical(_) => 3,
        }
    }

    pub fn io(context: impl Into<String>) -> impl FnOnce(std::io::Error) -> Self {
        let context = context.into();
        move |source| BenchError::Io { context, source }
    }
}

impl From<DeaError> for BenchError {
    fn from(e: DeaError) -> Self {
        match e {
            DeaError::Domain(msg) => BenchError::Data(msg),
            DeaError::Contract(msg) => BenchError::Usage(msg),
            e @ (DeaError::Lp(_) | DeaError::Internal(_)) => BenchError::Numerical(e.to_string()),
        }
    }
}

pub type Result<T, E = BenchError> = std::result::Result<T, E>;
