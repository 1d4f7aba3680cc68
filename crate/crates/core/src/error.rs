// Copyright 2026 The coinwalk Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Errors produced anywhere in the walk library.
#[derive(Debug, Error)]
pub enum WalkError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("index {index} out of range (bound {bound})")]
    OutOfRange { index: usize, bound: usize },

    #[error("state is not normalized: squared norm {0}")]
    NotNormalized(f64),

    #[error("matrix is not unitary: max deviation of C^dag C from identity is {0:e}")]
    NonUnitary(f64),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("resource cap exceeded: dimension {dimension} exceeds cap {cap}")]
    ResourceCap { dimension: usize, cap: usize },

    #[error("singular linear system: {0}")]
    Singular(String),

    #[error("config error in `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("at {point}: {source}")]
    GridPoint {
        point: String,
        #[source]
        source: Box<WalkError>,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl WalkError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        WalkError::InvalidArgument(msg.into())
    }

    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        WalkError::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        WalkError::Io {
            path: path.into(),
            source,
        }
    }
}

impl WalkError {
    /// Innermost error, looking through grid-point context.
    pub fn root(&self) -> &WalkError {
        match self {
            WalkError::GridPoint { source, .. } => source.root(),
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, WalkError>;
