use std::collections::BTreeMap;

use crate::complex::{CellId, Chain};
use crate::error::{Error, Result};

use super::graph::MorseGraph;

/// Residues mod 2 of the number of paths from `source` to every vertex
/// reached by a sweep that stops at critical cells.
#[derive(Debug, Clone)]
pub struct PathCounter {
    source: CellId,
    counts: BTreeMap<CellId, u8>,
}

impl PathCounter {
    pub fn new(graph: &MorseGraph, source: CellId, critical: &[CellId]) -> Result<Self> {
        let order = graph.topological_order()?;
        let rank = ranks(&order);
        let is_critical = critical_mask(graph, critical)?;
        let s = graph
            .position_of(source)
            .ok_or(Error::UnknownCell(source))?;
        let mut scratch = Scratch::new(graph.vertex_count());
        let counts = sweep(graph, &rank, &is_critical, s, &mut scratch)
            .into_iter()
            .map(|(v, odd)| (graph.id_at(v), odd as u8))
            .collect();
        Ok(PathCounter { source, counts })
    }

    pub fn source(&self) -> CellId {
        self.source
    }

    /// `P_s(v) mod 2`; zero for vertices the sweep never reached.
    pub fn residue(&self, v: CellId) -> u8 {
        self.counts.get(&v).copied().unwrap_or(0)
    }
}

/// Morse boundary of every critical cell: the critical cells one dimension
/// lower reached by an odd number of paths.
pub fn morse_boundary(graph: &MorseGraph, critical: &[CellId]) -> Result<BTreeMap<CellId, Chain>> {
    let is_critical = critical_mask(graph, critical)?;
    let rows = morse_boundaries(graph, &is_critical)?;
    Ok(rows
        .into_iter()
        .enumerate()
        .filter(|(v, _)| is_critical[*v])
        .map(|(v, row)| {
            let chain = Chain::from_cells(
                graph.dim_at(v) as isize - 1,
                row.into_iter().map(|w| graph.id_at(w)),
            );
            (graph.id_at(v), chain)
        })
        .collect())
}

fn critical_mask(graph: &MorseGraph, critical: &[CellId]) -> Result<Vec<bool>> {
    let mut mask = vec![false; graph.vertex_count()];
    for &c in critical {
        let v = graph.position_of(c).ok_or(Error::UnknownCell(c))?;
        mask[v] = true;
    }
    Ok(mask)
}

fn ranks(order: &[usize]) -> Vec<usize> {
    let mut rank = vec![0; order.len()];
    for (r, &v) in order.iter().enumerate() {
        rank[v] = r;
    }
    rank
}

struct Scratch {
    parity: Vec<bool>,
    visited: Vec<bool>,
}

impl Scratch {
    fn new(n: usize) -> Self {
        Scratch {
            parity: vec![false; n],
            visited: vec![false; n],
        }
    }
}

/// One source sweep. Only vertices reachable from `s` without passing
/// through another critical cell are visited; they are processed in
/// topological order so each parity is final before it is propagated.
fn sweep(
    graph: &MorseGraph,
    rank: &[usize],
    is_critical: &[bool],
    s: usize,
    scratch: &mut Scratch,
) -> Vec<(usize, bool)> {
    let mut reached = vec![s];
    scratch.visited[s] = true;
    let mut stack = vec![s];
    while let Some(v) = stack.pop() {
        if v != s && is_critical[v] {
            continue;
        }
        for &w in graph.successors(v) {
            if !scratch.visited[w] {
                scratch.visited[w] = true;
                reached.push(w);
                stack.push(w);
            }
        }
    }
    reached.sort_unstable_by_key(|&v| rank[v]);

    scratch.parity[s] = true;
    for &v in &reached {
        if (v != s && is_critical[v]) || !scratch.parity[v] {
            continue;
        }
        for &w in graph.successors(v) {
            scratch.parity[w] ^= true;
        }
    }

    let out = reached.iter().map(|&v| (v, scratch.parity[v])).collect();
    for &v in &reached {
        scratch.visited[v] = false;
        scratch.parity[v] = false;
    }
    out
}

/// Morse boundary rows indexed by graph vertex; rows of non-critical
/// vertices are empty. Each row lists vertices sorted ascending.
pub(crate) fn morse_boundaries(
    graph: &MorseGraph,
    is_critical: &[bool],
) -> Result<Vec<Vec<usize>>> {
    let order = graph.topological_order()?;
    let rank = ranks(&order);
    let sources: Vec<usize> = (0..graph.vertex_count())
        .filter(|&v| is_critical[v])
        .collect();

    let row_of = |scratch: &mut Scratch, s: usize| -> Vec<usize> {
        let target_dim = graph.dim_at(s).checked_sub(1);
        let mut row: Vec<usize> = sweep(graph, &rank, is_critical, s, scratch)
            .into_iter()
            .filter(|&(v, odd)| {
                odd && v != s && is_critical[v] && Some(graph.dim_at(v)) == target_dim
            })
            .map(|(v, _)| v)
            .collect();
        row.sort_unstable();
        row
    };

    #[cfg(feature = "parallel")]
    let rows: Vec<Vec<usize>> = {
        use rayon::prelude::*;
        let n = graph.vertex_count();
        sources
            .par_iter()
            .map_init(|| Scratch::new(n), |scratch, &s| row_of(scratch, s))
            .collect()
    };
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<Vec<usize>> = {
        let mut scratch = Scratch::new(graph.vertex_count());
        sources.iter().map(|&s| row_of(&mut scratch, s)).collect()
    };

    let mut out = vec![Vec::new(); graph.vertex_count()];
    for (s, row) in sources.into_iter().zip(rows) {
        out[s] = row;
    }
    Ok(out)
}
