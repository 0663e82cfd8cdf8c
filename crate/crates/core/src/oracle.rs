//! Linear-algebra ground truth: the standard left-to-right boundary matrix
//! reduction for persistence and Z2 ranks for Betti numbers.
//!
//! Nothing here shares code with the Morse machinery.

use std::collections::HashMap;

use crate::complex::{Cell, ChainComplex};
use crate::error::{Error, Result};
use crate::persistence::{PersistenceInterval, PersistenceIntervals};

/// Boundary matrix with rows and columns in the total cell order. Column
/// `j` lists, ascending, the positions of the faces of cell `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SortedBoundaryMatrix {
    order: Vec<Cell>,
    columns: Vec<Vec<usize>>,
}

impl SortedBoundaryMatrix {
    pub fn size(&self) -> usize {
        self.order.len()
    }

    pub fn order(&self) -> &[Cell] {
        &self.order
    }

    pub fn column(&self, j: usize) -> &[usize] {
        &self.columns[j]
    }

    /// Lowest nonzero row of column `j`.
    pub fn low(&self, j: usize) -> Option<usize> {
        self.columns[j].last().copied()
    }

    /// First column `j` whose low is shared with an earlier column.
    pub fn first_collision(&self) -> Option<usize> {
        let mut owner = HashMap::new();
        (0..self.size()).find(|&j| self.low(j).is_some_and(|l| owner.insert(l, j).is_some()))
    }

    pub fn is_reduced(&self) -> bool {
        self.first_collision().is_none()
    }
}

pub fn build_matrix(complex: &ChainComplex) -> SortedBoundaryMatrix {
    SortedBoundaryMatrix {
        order: complex.cells().to_vec(),
        columns: (0..complex.len())
            .map(|j| complex.faces_at(j).to_vec())
            .collect(),
    }
}

/// One column operation performed during reduction: column `source` was
/// added to column `target`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ColumnAddition {
    pub target: usize,
    pub source: usize,
}

#[derive(Debug, Clone)]
pub struct Reduction {
    pub matrix: SortedBoundaryMatrix,
    pub additions: Vec<ColumnAddition>,
}

fn add_column(target: &[usize], source: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(target.len() + source.len());
    let (mut i, mut j) = (0, 0);
    while i < target.len() && j < source.len() {
        match target[i].cmp(&source[j]) {
            std::cmp::Ordering::Less => {
                out.push(target[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(source[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&target[i..]);
    out.extend_from_slice(&source[j..]);
    out
}

/// Left-to-right reduction: while column `j` shares its low with an earlier
/// nonzero column `k`, add `k` to `j`.
pub fn matrix_reduce(matrix: &SortedBoundaryMatrix) -> Reduction {
    let mut columns = matrix.columns.clone();
    let mut additions = Vec::new();
    let mut low_owner: HashMap<usize, usize> = HashMap::new();
    for j in 0..columns.len() {
        while let Some(&low) = columns[j].last() {
            let Some(&k) = low_owner.get(&low) else {
                low_owner.insert(low, j);
                break;
            };
            columns[j] = add_column(&columns[j], &columns[k]);
            additions.push(ColumnAddition {
                target: j,
                source: k,
            });
        }
    }
    Reduction {
        matrix: SortedBoundaryMatrix {
            order: matrix.order.clone(),
            columns,
        },
        additions,
    }
}

/// Intervals read from a reduced matrix.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OracleIntervals {
    /// Intervals of positive length and infinite intervals.
    pub intervals: PersistenceIntervals,
    /// Pairs whose birth and death coincide, kept apart for diagnostics.
    pub zero_persistence: Vec<PersistenceInterval>,
}

/// Reads intervals off the lows of a reduced matrix: a nonzero column `j`
/// with `low(j) = k` pairs cell `k` with cell `j`; a zero column whose cell
/// is nobody's low starts an infinite interval.
pub fn read_intervals(reduced: &SortedBoundaryMatrix) -> Result<OracleIntervals> {
    if let Some(column) = reduced.first_collision() {
        return Err(Error::UnreducedMatrix { column });
    }
    let n = reduced.size();
    let mut is_low = vec![false; n];
    let mut finite = Vec::new();
    let mut zero = Vec::new();
    for j in 0..n {
        if let Some(k) = reduced.low(j) {
            is_low[k] = true;
            let (b, d) = (&reduced.order[k], &reduced.order[j]);
            let interval = PersistenceInterval::finite(b.dim, b.filtration, d.filtration);
            if b.filtration == d.filtration {
                zero.push(interval);
            } else {
                finite.push(interval);
            }
        }
    }
    for (j, c) in reduced.order.iter().enumerate() {
        if reduced.low(j).is_none() && !is_low[j] {
            finite.push(PersistenceInterval::infinite(c.dim, c.filtration));
        }
    }
    zero.sort_unstable();
    Ok(OracleIntervals {
        intervals: PersistenceIntervals::new(finite),
        zero_persistence: zero,
    })
}

/// `read_intervals(matrix_reduce(build_matrix(complex)))`.
pub fn oracle_intervals(complex: &ChainComplex) -> Result<OracleIntervals> {
    complex.ensure_valid()?;
    read_intervals(&matrix_reduce(&build_matrix(complex)).matrix)
}

/// Rank over Z2 of a 0/1 matrix given as dense bit rows.
fn rank_z2(mut rows: Vec<Vec<u64>>) -> usize {
    let words = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..words * 64 {
        let (w, bit) = (col / 64, 1u64 << (col % 64));
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][w] & bit != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[w] & bit != 0 {
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Betti numbers from `β_p = (n_p − rank ∂_p) − rank ∂_{p+1}`, with ranks
/// computed by dense Gaussian elimination over Z2.
/// The filtration is ignored.
pub fn betti_rank_oracle(complex: &ChainComplex) -> Result<Vec<usize>> {
    complex.ensure_chain_complex()?;
    let Some(top) = complex.top_dim() else {
        return Ok(Vec::new());
    };
    let mut index_in_dim = vec![0usize; complex.len()];
    let mut counts = vec![0usize; top + 1];
    for (p, c) in complex.cells().iter().enumerate() {
        index_in_dim[p] = counts[c.dim];
        counts[c.dim] += 1;
    }
    // rank[p] = rank of the boundary map from p-chains to (p-1)-chains.
    let mut ranks = vec![0usize; top + 2];
    for (p, rank) in ranks.iter_mut().enumerate().take(top + 1).skip(1) {
        let words = counts[p - 1].div_ceil(64);
        let rows: Vec<Vec<u64>> = complex
            .cells()
            .iter()
            .enumerate()
            .filter(|(_, c)| c.dim == p)
            .map(|(q, _)| {
                let mut row = vec![0u64; words];
                for &f in complex.faces_at(q) {
                    let i = index_in_dim[f];
                    row[i / 64] ^= 1 << (i % 64);
                }
                row
            })
            .collect();
        *rank = rank_z2(rows);
    }
    Ok((0..=top)
        .map(|p| counts[p] - ranks[p] - ranks[p + 1])
        .collect())
}
