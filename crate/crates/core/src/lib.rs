//! Iterated discrete Morse complexes over Z2: homology by repeated
//! reduction to critical cells, and persistence intervals of filtered
//! complexes, with a boundary-matrix reduction kept alongside as an
//! independent check.
//!
//! ```
//! use itermorse::io::parse_simplicial_format;
//! use itermorse::homology::betti_numbers;
//!
//! let circle = parse_simplicial_format("0 : a\n0 : b\n0 : c\n0 : a b\n0 : b c\n0 : a c\n").unwrap();
//! assert_eq!(betti_numbers(&circle).unwrap(), vec![1, 1]);
//! ```

pub mod complex;
pub mod error;
pub mod generate;
pub mod homology;
pub mod io;
pub mod morse;
pub mod oracle;
pub mod persistence;

pub use complex::{chain_add, Cell, CellId, Chain, ChainComplex, ValidationReport, Violation};
pub use error::{Error, Result};
pub use homology::{betti_numbers, iterate_to_fixpoint, IterationTrace};
pub use morse::{
    build_morse_complex, build_morse_graph, compute_matching, Matching, MatchingPolicy, MorseGraph,
};
pub use persistence::{
    persistence_pipeline, persistence_via_morse, simplify_filtered, Death, PersistenceInterval,
    PersistenceIntervals,
};
