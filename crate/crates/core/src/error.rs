use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("zero density reached the thermodynamics layer")]
    ZeroDensity,
    #[error("{quantity} undefined for state with rho={rho:e}, p={p:e}")]
    Domain {
        quantity: &'static str,
        rho: f64,
        p: f64,
    },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("average outside interior region in cell {cell}: rho={rho:e}, p={p:e}, q={q:e}")]
    AverageOutsideRegion { cell: usize, rho: f64, p: f64, q: f64 },
    #[error("limiter could not restore admissibility in cell {cell}")]
    LimiterFailure { cell: usize },
    #[error("spatial operator failed in cell {cell}: {source}")]
    SpatialOperator {
        cell: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("degenerate state: maximum signal speed {0:e} is not positive")]
    DegenerateSpeed(f64),
    #[error("time step {dt:e} differs from the frozen multistep step {frozen:e}")]
    NonConstantStep { dt: f64, frozen: f64 },
    #[error("CFL bound violated at step {step}: lambda*speed={value:e} > {bound:e}")]
    CflViolation { step: usize, value: f64, bound: f64 },
    #[error("Riemann data generates vacuum")]
    Vacuum,
    #[error("star-state iteration did not converge after {0} iterations")]
    NoConvergence(usize),
    #[error("run aborted at step {step} (t={t}): {source}")]
    Aborted {
        step: usize,
        t: f64,
        #[source]
        source: Box<Error>,
    },
    #[error("cannot resample reference: {0}")]
    Resampling(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// True for failures where the solution left the admissible set, as
    /// opposed to bad input.
    pub fn is_region_violation(&self) -> bool {
        match self {
            Error::AverageOutsideRegion { .. }
            | Error::LimiterFailure { .. }
            | Error::CflViolation { .. }
            | Error::DegenerateSpeed(_)
            | Error::ZeroDensity
            | Error::Domain { .. } => true,
            Error::SpatialOperator { source, .. } | Error::Aborted { source, .. } => {
                source.is_region_violation()
            }
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
