use thiserror::Error;

use crate::complex::{CellId, ValidationReport};

/// Errors raised by the library operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown cell {0}")]
    UnknownCell(CellId),

    #[error("cell {0} is declared more than once")]
    DuplicateCell(CellId),

    #[error("cell {cell} lists unknown face {face}")]
    UnknownFace { cell: CellId, face: CellId },

    #[error("cell {cell} lists face {face} more than once")]
    RepeatedFace { cell: CellId, face: CellId },

    #[error("chain dimensions differ ({left} vs {right})")]
    ChainDimensionMismatch { left: isize, right: isize },

    #[error("invalid complex: {0}")]
    InvalidComplex(ValidationReport),

    #[error("cell {0} appears in more than one matched pair")]
    CellMatchedTwice(CellId),

    #[error("cells {face} and {coface} are not an incident face/coface pair")]
    NotIncident { face: CellId, coface: CellId },

    #[error("Morse graph has a directed cycle through {}", fmt_cycle(.0))]
    CyclicMorseGraph(Vec<CellId>),

    #[error("cell {cell} does not strictly exceed the filtration of its face {face}")]
    StrictFaceViolation { cell: CellId, face: CellId },

    #[error("boundary matrix is not reduced: column {column} collides with an earlier column")]
    UnreducedMatrix { column: usize },
}

fn fmt_cycle(cycle: &[CellId]) -> String {
    cycle
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(" -> ")
}

pub type Result<T> = std::result::Result<T, Error>;
