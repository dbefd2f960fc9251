//! Error types shared across the crate.

use thiserror::Error;

/// A single latin-condition violation: `symbol` occurs more than once in
/// the given row or column. Coordinates are 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Violation {
    pub row: usize,
    pub col: usize,
    pub symbol: u8,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("symbol {value} out of range 1..={order} at ({row}, {col})")]
    SymbolRange {
        row: usize,
        col: usize,
        value: u8,
        order: usize,
    },

    #[error("layer {layer} is not latin ({} violations, first at ({}, {}))",
            .violations.len(), .violations[0].row, .violations[0].col)]
    NonLatinLayer {
        layer: usize,
        violations: Vec<Violation>,
    },

    #[error("cell ({row}, {col}) holds entries {entries:?}: neither all equal nor all distinct")]
    CellConflict {
        row: usize,
        col: usize,
        entries: Vec<u8>,
    },

    #[error("layers disagree on filled cells at ({row}, {col})")]
    FilledSetMismatch { row: usize, col: usize },

    #[error("{which} {index} content differs between layers 0 and {layer}")]
    ContentMismatch {
        which: &'static str,
        index: usize,
        layer: usize,
    },

    #[error("shape {rows}x{cols} too small for a {mu}-way trade (min side >= mu required)")]
    ShapeTooSmall { mu: usize, rows: usize, cols: usize },

    #[error("gear parameter violation: {0}")]
    ParameterViolation(String),

    #[error("cannot embed order {inner} into order {outer}: inner > floor(outer/2)")]
    EmbedTooLarge { inner: usize, outer: usize },

    #[error("completion failed: {0}")]
    CompletionFailure(String),

    #[error("alphabet collision: {0}")]
    AlphabetCollision(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("internal consistency error: {0}")]
    Internal(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
