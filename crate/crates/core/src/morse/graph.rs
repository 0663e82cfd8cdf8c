use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::complex::{CellId, ChainComplex};
use crate::error::{Error, Result};

use super::matching::Matching;

/// Directed graph over the cells of a complex.
///
/// Every incidence `(A, b)` contributes exactly one edge: `A -> b` when the
/// pair is unmatched and `b -> A` when it is matched. The matching is
/// acyclic exactly when this graph is a DAG.
#[derive(Debug, Clone)]
pub struct MorseGraph {
    ids: Vec<CellId>,
    dims: Vec<usize>,
    out: Vec<Vec<usize>>,
    index: HashMap<CellId, usize>,
}

/// A directed cycle, listed in edge order (the last vertex points back to the first).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleWitness {
    pub cycle: Vec<CellId>,
}

impl fmt::Display for CycleWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.cycle.iter().map(|c| c.to_string()).collect();
        write!(f, "cycle {}", parts.join(" -> "))
    }
}

impl std::error::Error for CycleWitness {}

impl From<CycleWitness> for Error {
    fn from(w: CycleWitness) -> Self {
        Error::CyclicMorseGraph(w.cycle)
    }
}

impl MorseGraph {
    /// Graph of `complex` where the cell at position `p` is matched with the
    /// cell at `mate[p]` (if any). Vertices are complex positions.
    pub(crate) fn from_mates(complex: &ChainComplex, mate: &[Option<usize>]) -> Self {
        let n = complex.len();
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
        for coface in 0..n {
            for &face in complex.faces_at(coface) {
                if mate[face] == Some(coface) {
                    out[face].push(coface);
                } else {
                    out[coface].push(face);
                }
            }
        }
        let ids: Vec<CellId> = complex.cells().iter().map(|c| c.id).collect();
        let index = ids.iter().enumerate().map(|(p, &id)| (id, p)).collect();
        MorseGraph {
            ids,
            dims: complex.cells().iter().map(|c| c.dim).collect(),
            out,
            index,
        }
    }

    /// Builds a graph directly from vertices `(id, dim)` and edges. Intended
    /// for hand-made configurations, including cyclic ones.
    pub fn from_edges(vertices: &[(CellId, usize)], edges: &[(CellId, CellId)]) -> Result<Self> {
        let mut index = HashMap::with_capacity(vertices.len());
        for (p, (id, _)) in vertices.iter().enumerate() {
            if index.insert(*id, p).is_some() {
                return Err(Error::DuplicateCell(*id));
            }
        }
        let mut out = vec![Vec::new(); vertices.len()];
        for (from, to) in edges {
            let f = *index.get(from).ok_or(Error::UnknownCell(*from))?;
            let t = *index.get(to).ok_or(Error::UnknownCell(*to))?;
            out[f].push(t);
        }
        Ok(MorseGraph {
            ids: vertices.iter().map(|v| v.0).collect(),
            dims: vertices.iter().map(|v| v.1).collect(),
            out,
            index,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    pub fn vertex_ids(&self) -> &[CellId] {
        &self.ids
    }

    /// All edges as `(from, to)` id pairs.
    pub fn edges(&self) -> impl Iterator<Item = (CellId, CellId)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(move |(f, succ)| succ.iter().map(move |&t| (self.ids[f], self.ids[t])))
    }

    pub fn has_edge(&self, from: CellId, to: CellId) -> bool {
        let Some(f) = self.position_of(from) else {
            return false;
        };
        self.out[f].iter().any(|&t| self.ids[t] == to)
    }

    pub(crate) fn id_at(&self, v: usize) -> CellId {
        self.ids[v]
    }

    pub(crate) fn dim_at(&self, v: usize) -> usize {
        self.dims[v]
    }

    pub(crate) fn successors(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    pub(crate) fn position_of(&self, id: CellId) -> Option<usize> {
        self.index.get(&id).copied()
    }

    /// Kahn's algorithm. On success returns the vertices in topological order.
    pub(crate) fn topological_order(&self) -> std::result::Result<Vec<usize>, CycleWitness> {
        let n = self.vertex_count();
        let mut indeg = vec![0usize; n];
        for succ in &self.out {
            for &t in succ {
                indeg[t] += 1;
            }
        }
        let mut queue: VecDeque<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &t in &self.out[v] {
                indeg[t] -= 1;
                if indeg[t] == 0 {
                    queue.push_back(t);
                }
            }
        }
        if order.len() == n {
            Ok(order)
        } else {
            Err(self.find_cycle(&indeg))
        }
    }

    /// Every vertex left with positive in-degree after Kahn's algorithm has a
    /// predecessor that is also left, so walking predecessors must repeat.
    fn find_cycle(&self, indeg: &[usize]) -> CycleWitness {
        let n = self.vertex_count();
        let mut pred = vec![usize::MAX; n];
        for (f, succ) in self.out.iter().enumerate() {
            if indeg[f] == 0 {
                continue;
            }
            for &t in succ {
                if indeg[t] > 0 {
                    pred[t] = f;
                }
            }
        }
        let start = (0..n).find(|&v| indeg[v] > 0).expect("a cycle exists");
        let mut seen = vec![usize::MAX; n];
        let mut walk = Vec::new();
        let mut v = start;
        while seen[v] == usize::MAX {
            seen[v] = walk.len();
            walk.push(v);
            v = pred[v];
        }
        let mut cycle: Vec<CellId> = walk[seen[v]..].iter().map(|&p| self.ids[p]).collect();
        cycle.reverse();
        CycleWitness { cycle }
    }

    /// Succeeds iff the graph has no directed cycle.
    pub fn assert_acyclic(&self) -> std::result::Result<(), CycleWitness> {
        self.topological_order().map(|_| ())
    }
}

/// Morse graph of `complex` under `matching`.
pub fn build_morse_graph(complex: &ChainComplex, matching: &Matching) -> Result<MorseGraph> {
    let mate = matching.mates(complex)?;
    Ok(MorseGraph::from_mates(complex, &mate))
}
