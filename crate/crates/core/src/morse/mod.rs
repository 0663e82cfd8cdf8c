//! Discrete Morse theory on Z2 chain complexes.
//!
//! A matching is represented by edge reversals on the [`MorseGraph`]; the
//! Morse boundary of a critical cell counts, mod 2, the directed paths
//! reaching each critical cell one dimension lower. The resulting
//! [`ChainComplex`] on the critical cells can be fed back in, which is what
//! the iterated constructions in [`crate::homology`] and
//! [`crate::persistence`] do.

mod boundary;
mod graph;
mod matching;

pub use boundary::{morse_boundary, PathCounter};
pub use graph::{build_morse_graph, CycleWitness, MorseGraph};
pub use matching::{compute_matching, Matching, MatchingMode, MatchingPolicy};

pub(crate) use matching::{compute_mates, downward_pair};

use crate::complex::ChainComplex;
use crate::error::Result;

/// Matches `complex` under `policy` and returns the Morse complex on the
/// critical cells together with the matching that produced it.
///
/// Critical cells keep their id, dimension and filtration value.
pub fn build_morse_complex(
    complex: &ChainComplex,
    policy: &MatchingPolicy,
) -> Result<(ChainComplex, Matching)> {
    let mate = compute_mates(complex, policy);
    let morse = morse_complex_from_mates(complex, &mate)?;
    Ok((morse, Matching::from_mates(complex, &mate)))
}

/// Morse complex of `complex` for a caller-supplied matching. Fails if the
/// matching is not a set of incidences of `complex` or is cyclic.
pub fn morse_complex_from_matching(
    complex: &ChainComplex,
    matching: &Matching,
) -> Result<ChainComplex> {
    let mate = matching.mates(complex)?;
    morse_complex_from_mates(complex, &mate)
}

pub(crate) fn morse_complex_from_mates(
    complex: &ChainComplex,
    mate: &[Option<usize>],
) -> Result<ChainComplex> {
    if mate.iter().all(Option::is_none) {
        return Ok(complex.clone());
    }
    let graph = MorseGraph::from_mates(complex, mate);
    let is_critical: Vec<bool> = mate.iter().map(Option::is_none).collect();
    let rows = boundary::morse_boundaries(&graph, &is_critical)?;

    let mut new_pos = vec![usize::MAX; complex.len()];
    let mut cells = Vec::new();
    for (p, cell) in complex.cells().iter().enumerate() {
        if is_critical[p] {
            new_pos[p] = cells.len();
            cells.push(*cell);
        }
    }
    let faces = rows
        .into_iter()
        .enumerate()
        .filter(|(p, _)| is_critical[*p])
        .map(|(_, row)| row.into_iter().map(|q| new_pos[q]).collect())
        .collect();
    Ok(ChainComplex::from_sorted_parts(cells, faces))
}
