// Copyright 2026 The qpde Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Errors raised anywhere in the compiler, simulator or reference solvers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("grid too small: {0}")]
    GridTooSmall(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("invalid circuit: {0}")]
    Circuit(String),
    #[error("phase solver did not converge: residual {residual:.3e} after {iterations} iterations")]
    PhaseSolve { residual: f64, iterations: usize },
    #[error("postselection failed: {0}")]
    Postselection(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("divergence: {0}")]
    Divergence(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("[{stage}] {source}")]
    Stage { stage: &'static str, source: Box<Error> },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Wrap with the pipeline stage that raised it; already-tagged errors pass through.
    pub fn at(self, stage: &'static str) -> Self {
        match self {
            Error::Stage { .. } => self,
            other => Error::Stage { stage, source: Box::new(other) },
        }
    }
}

/// Tag the error of a fallible stage.
pub trait StageExt<T> {
    fn stage(self, stage: &'static str) -> Result<T>;
}

impl<T, E: Into<Error>> StageExt<T> for std::result::Result<T, E> {
    fn stage(self, stage: &'static str) -> Result<T> {
        self.map_err(|e| e.into().at(stage))
    }
}
