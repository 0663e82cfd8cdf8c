//! Betti numbers from the fixpoint of iterated Morse complex construction.

use serde::Serialize;

use crate::complex::ChainComplex;
use crate::error::Result;
use crate::morse::{build_morse_complex, Matching, MatchingPolicy};

/// Record of one run of [`iterate_to_fixpoint`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IterationTrace {
    /// Cardinality of the input and of every complex produced after it.
    /// Strictly decreasing.
    pub sizes: Vec<usize>,
    /// Number of Morse complex constructions, including the final one that
    /// matched nothing.
    pub iterations: usize,
}

impl IterationTrace {
    /// Checks the trace invariants: strictly decreasing sizes and at most
    /// `floor(n / 2) + 1` iterations for an input of `n` cells.
    pub fn is_consistent(&self) -> bool {
        let decreasing = self.sizes.windows(2).all(|w| w[0] > w[1]);
        let bound = self.sizes.first().map_or(1, |n| n / 2 + 1);
        decreasing && self.iterations == self.sizes.len() && self.iterations <= bound
    }
}

/// Applies [`build_morse_complex`] until a construction matches nothing.
pub fn iterate_to_fixpoint(
    complex: &ChainComplex,
    policy: &MatchingPolicy,
) -> Result<(ChainComplex, IterationTrace)> {
    iterate_with(complex, policy, |_, _| {})
}

/// Like [`iterate_to_fixpoint`], calling `observe` with each complex and the
/// matching computed on it (the final call receives an empty matching).
pub fn iterate_with<F>(
    complex: &ChainComplex,
    policy: &MatchingPolicy,
    mut observe: F,
) -> Result<(ChainComplex, IterationTrace)>
where
    F: FnMut(&ChainComplex, &Matching),
{
    complex.ensure_valid()?;
    let mut current = complex.clone();
    let mut sizes = vec![current.len()];
    let mut iterations = 0;
    loop {
        let (next, matching) = build_morse_complex(&current, policy)?;
        iterations += 1;
        observe(&current, &matching);
        if !matching.has_pairs() {
            break;
        }
        sizes.push(next.len());
        current = next;
    }
    Ok((current, IterationTrace { sizes, iterations }))
}

/// Betti numbers over Z2, indexed by dimension `0..=top_dim`.
pub fn betti_numbers(complex: &ChainComplex) -> Result<Vec<usize>> {
    betti_numbers_traced(complex).map(|(b, _)| b)
}

/// [`betti_numbers`] together with the trace of the unconstrained iteration.
pub fn betti_numbers_traced(complex: &ChainComplex) -> Result<(Vec<usize>, IterationTrace)> {
    let (fixpoint, trace) = iterate_to_fixpoint(complex, &MatchingPolicy::unconstrained())?;
    let mut betti = vec![0; complex.top_dim().map_or(0, |d| d + 1)];
    for c in fixpoint.cells() {
        betti[c.dim] += 1;
    }
    Ok((betti, trace))
}
