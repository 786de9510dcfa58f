use std::fmt;

use thiserror::Error;

/// Pipeline stage a failure originated in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    BuildMatrices,
    RankReduce,
    SolveGep,
    ExtractFrequencies,
    RecoverAmplitudes,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::BuildMatrices => "build_matrices",
            Stage::RankReduce => "rank_reduce",
            Stage::SolveGep => "solve_gep",
            Stage::ExtractFrequencies => "extract_frequencies",
            Stage::RecoverAmplitudes => "recover_amplitudes",
        })
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("{solver} did not converge after {iterations} iterations ({detail})")]
    NoConvergence { solver: &'static str, iterations: usize, detail: String },
    #[error("matrix is rank deficient at column {column}")]
    RankDeficient { column: usize },
    #[error("frequencies {0} and {1} nearly coincide; amplitude fit is rank deficient")]
    CoalescingFrequencies(usize, usize),
    #[error("no eigenvalue of S exceeds the threshold {threshold}")]
    EmptySpectrum { threshold: String },
    #[error("eigenvalue {index} is zero; no frequency can be assigned")]
    DegenerateEigenvalue { index: usize },
    #[error("line pairs {first:?} and {second:?} produce coinciding difference frequencies")]
    DegenerateDifference { first: (usize, usize), second: (usize, usize) },
    #[error("lambda_min estimate is indeterminate: {0}")]
    IndeterminateEstimate(String),
    #[error("the exponent 2(K-1) vanishes for K = 1")]
    UndefinedExponent,
    #[error("invalid decimal number {0:?}")]
    InvalidNumber(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{stage}: {source}")]
    Stage {
        stage: Stage,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn at(self, stage: Stage) -> Self {
        Error::Stage { stage, source: Box::new(self) }
    }

    /// The innermost error, with stage tags peeled off.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root(),
            other => other,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
