use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};

use serde::{Deserialize, Serialize};

use crate::complex::{Cell, CellId, ChainComplex};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchingMode {
    /// Any incident pair may be matched.
    Unconstrained,
    /// A pair `(b, A)` may be matched only when `g(b) == g(A)`.
    FiltrationCompatible,
    /// A pair `(b, A)` may be matched only when `g(b) < g(A)`; `b` is the
    /// face of `A` with maximal filtration (smallest id on ties).
    DownwardMaxFace,
}

/// Restricts which face/coface pairs a matching may contain.
///
/// There is intentionally no tolerance parameter: pairing cells whose
/// filtration values merely lie close together changes persistence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MatchingPolicy {
    pub mode: MatchingMode,
    /// For [`MatchingMode::DownwardMaxFace`]: only cofaces entering exactly
    /// at this level are matched. For the other modes: only cofaces with
    /// filtration at most this value are matched.
    pub level_cap: Option<i64>,
}

impl MatchingPolicy {
    pub fn unconstrained() -> Self {
        MatchingPolicy {
            mode: MatchingMode::Unconstrained,
            level_cap: None,
        }
    }

    pub fn filtration_compatible() -> Self {
        MatchingPolicy {
            mode: MatchingMode::FiltrationCompatible,
            level_cap: None,
        }
    }

    pub fn downward_max_face(level: i64) -> Self {
        MatchingPolicy {
            mode: MatchingMode::DownwardMaxFace,
            level_cap: Some(level),
        }
    }

    /// Whether the pair `(face, coface)` is legal under this policy.
    pub fn admits(&self, face: &Cell, coface: &Cell) -> bool {
        match self.mode {
            MatchingMode::Unconstrained => self.level_cap.is_none_or(|c| coface.filtration <= c),
            MatchingMode::FiltrationCompatible => {
                face.filtration == coface.filtration
                    && self.level_cap.is_none_or(|c| coface.filtration <= c)
            }
            MatchingMode::DownwardMaxFace => {
                face.filtration < coface.filtration
                    && self.level_cap.is_none_or(|c| coface.filtration == c)
            }
        }
    }
}

/// A partial pairing of cells with cofaces. Unpaired cells are critical.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    pairs: Vec<(CellId, CellId)>,
    critical: Vec<CellId>,
}

impl Matching {
    /// The matching with no pairs: every cell is critical.
    pub fn empty(complex: &ChainComplex) -> Self {
        Matching {
            pairs: Vec::new(),
            critical: complex.cells().iter().map(|c| c.id).collect(),
        }
    }

    /// Checks that `pairs` are `(face, coface)` incidences of `complex` and
    /// that no cell is used twice. Acyclicity is not checked here; see
    /// [`MorseGraph::assert_acyclic`](super::MorseGraph::assert_acyclic).
    pub fn new(complex: &ChainComplex, pairs: Vec<(CellId, CellId)>) -> Result<Self> {
        let mut mate = vec![None; complex.len()];
        for &(face, coface) in &pairs {
            let f = complex.position(face)?;
            let c = complex.position(coface)?;
            if complex.faces_at(c).binary_search(&f).is_err() {
                return Err(Error::NotIncident { face, coface });
            }
            for (p, other, id) in [(f, c, face), (c, f, coface)] {
                if mate[p].is_some() {
                    return Err(Error::CellMatchedTwice(id));
                }
                mate[p] = Some(other);
            }
        }
        Ok(Self::from_mates(complex, &mate))
    }

    pub(crate) fn from_mates(complex: &ChainComplex, mate: &[Option<usize>]) -> Self {
        let mut pairs = Vec::new();
        let mut critical = Vec::new();
        for (p, cell) in complex.cells().iter().enumerate() {
            match mate[p] {
                None => critical.push(cell.id),
                Some(q) if complex.cell_at(q).dim > cell.dim => {
                    pairs.push((cell.id, complex.cell_at(q).id))
                }
                Some(_) => {}
            }
        }
        Matching { pairs, critical }
    }

    /// Matched `(face, coface)` pairs, ordered by the face's position.
    pub fn pairs(&self) -> &[(CellId, CellId)] {
        &self.pairs
    }

    /// Unmatched cells, in total order.
    pub fn critical(&self) -> &[CellId] {
        &self.critical
    }

    pub fn pair_count(&self) -> usize {
        self.pairs.len()
    }

    pub fn has_pairs(&self) -> bool {
        !self.pairs.is_empty()
    }

    /// Cell matched with `id`, if any.
    pub fn mate_of(&self, id: CellId) -> Option<CellId> {
        self.pairs.iter().find_map(|&(f, c)| {
            if f == id {
                Some(c)
            } else if c == id {
                Some(f)
            } else {
                None
            }
        })
    }

    /// Mate positions for `complex`, indexed by position.
    pub(crate) fn mates(&self, complex: &ChainComplex) -> Result<Vec<Option<usize>>> {
        let mut mate = vec![None; complex.len()];
        let mut seen = HashSet::new();
        for &(face, coface) in &self.pairs {
            let f = complex.position(face)?;
            let c = complex.position(coface)?;
            if complex.faces_at(c).binary_search(&f).is_err() {
                return Err(Error::NotIncident { face, coface });
            }
            for id in [face, coface] {
                if !seen.insert(id) {
                    return Err(Error::CellMatchedTwice(id));
                }
            }
            mate[f] = Some(c);
            mate[c] = Some(f);
        }
        Ok(mate)
    }
}

/// Computes an acyclic matching of `complex` restricted by `policy`.
///
/// For the unconstrained and filtration-compatible modes this is the
/// coreduction-style greedy procedure: declare the first unmarked cell of
/// minimal dimension critical, then repeatedly match any unmarked cell
/// whose boundary has exactly one unmarked face, as long as the policy
/// admits the pair. For [`MatchingMode::DownwardMaxFace`] at most one pair
/// is produced.
///
/// The complex is expected to be valid (`∂∂ = 0` is what keeps the greedy
/// matching acyclic).
pub fn compute_matching(complex: &ChainComplex, policy: &MatchingPolicy) -> Matching {
    let mate = compute_mates(complex, policy);
    Matching::from_mates(complex, &mate)
}

pub(crate) fn compute_mates(complex: &ChainComplex, policy: &MatchingPolicy) -> Vec<Option<usize>> {
    match policy.mode {
        MatchingMode::DownwardMaxFace => {
            let mut mate = vec![None; complex.len()];
            if let Some((face, coface)) = downward_pair(complex, policy) {
                mate[face] = Some(coface);
                mate[coface] = Some(face);
            }
            mate
        }
        _ => greedy_mates(complex, policy),
    }
}

fn greedy_mates(complex: &ChainComplex, policy: &MatchingPolicy) -> Vec<Option<usize>> {
    let n = complex.len();
    let mut mate: Vec<Option<usize>> = vec![None; n];
    let mut marked = vec![false; n];
    let mut unmarked_faces: Vec<usize> = (0..n).map(|p| complex.faces_at(p).len()).collect();
    let mut candidates: BinaryHeap<Reverse<usize>> = (0..n)
        .filter(|&p| unmarked_faces[p] == 1)
        .map(Reverse)
        .collect();

    let mut by_dim: Vec<Vec<usize>> = vec![Vec::new(); complex.top_dim().map_or(0, |d| d + 1)];
    for (p, c) in complex.cells().iter().enumerate() {
        by_dim[c.dim].push(p);
    }
    let mut cursor = vec![0usize; by_dim.len()];

    let mark = |p: usize,
                marked: &mut Vec<bool>,
                unmarked_faces: &mut Vec<usize>,
                candidates: &mut BinaryHeap<Reverse<usize>>| {
        marked[p] = true;
        for &c in complex.cofaces_at(p) {
            unmarked_faces[c] -= 1;
            if unmarked_faces[c] == 1 && !marked[c] {
                candidates.push(Reverse(c));
            }
        }
    };

    loop {
        // First unmarked cell of minimal dimension, in total order.
        let mut pick = None;
        for (d, cells) in by_dim.iter().enumerate() {
            while cursor[d] < cells.len() && marked[cells[cursor[d]]] {
                cursor[d] += 1;
            }
            if cursor[d] < cells.len() {
                pick = Some(cells[cursor[d]]);
                break;
            }
        }
        let Some(critical) = pick else { break };
        mark(critical, &mut marked, &mut unmarked_faces, &mut candidates);

        while let Some(Reverse(coface)) = candidates.pop() {
            if marked[coface] || unmarked_faces[coface] != 1 {
                continue;
            }
            let face = complex
                .faces_at(coface)
                .iter()
                .copied()
                .find(|&f| !marked[f])
                .expect("exactly one unmarked face");
            if !policy.admits(complex.cell_at(face), complex.cell_at(coface)) {
                continue;
            }
            mate[face] = Some(coface);
            mate[coface] = Some(face);
            mark(coface, &mut marked, &mut unmarked_faces, &mut candidates);
            mark(face, &mut marked, &mut unmarked_faces, &mut candidates);
        }
    }
    mate
}

/// The coface with the smallest id that has an admissible face, paired with
/// its face of maximal filtration (smallest id among ties).
pub(crate) fn downward_pair(
    complex: &ChainComplex,
    policy: &MatchingPolicy,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (p, cell) in complex.cells().iter().enumerate() {
        if best.is_some_and(|(_, c)| complex.cell_at(c).id < cell.id) {
            continue;
        }
        let face = complex
            .faces_at(p)
            .iter()
            .copied()
            .filter(|&f| policy.admits(complex.cell_at(f), cell))
            .max_by_key(|&f| {
                let fc = complex.cell_at(f);
                (fc.filtration, Reverse(fc.id))
            });
        if let Some(f) = face {
            best = Some((f, p));
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn id(v: usize) -> CellId {
        CellId(v)
    }

    #[test]
    fn single_vertex_has_no_pairs() {
        let k = ChainComplex::new(vec![(Cell::new(0, 0, 0), vec![])]).unwrap();
        let m = compute_matching(&k, &MatchingPolicy::unconstrained());
        assert!(!m.has_pairs());
        assert_eq!(m.critical(), &[id(0)]);
    }

    #[test]
    fn single_edge_leaves_one_vertex() {
        let k = ChainComplex::new(vec![
            (Cell::new(0, 0, 0), vec![]),
            (Cell::new(1, 0, 0), vec![]),
            (Cell::new(2, 1, 0), vec![id(0), id(1)]),
        ])
        .unwrap();
        let m = compute_matching(&k, &MatchingPolicy::filtration_compatible());
        assert_eq!(m.pairs(), &[(id(1), id(2))]);
        assert_eq!(m.critical(), &[id(0)]);
    }

    #[test]
    fn parallel_edges_at_higher_levels_admit_no_compatible_pair() {
        let k = ChainComplex::new(vec![
            (Cell::new(0, 0, 0), vec![]),
            (Cell::new(1, 0, 0), vec![]),
            (Cell::new(2, 1, 1), vec![id(0), id(1)]),
            (Cell::new(3, 1, 2), vec![id(0), id(1)]),
        ])
        .unwrap();
        let m = compute_matching(&k, &MatchingPolicy::filtration_compatible());
        assert!(!m.has_pairs());
        assert_eq!(m.critical().len(), 4);
    }

    #[test]
    fn downward_picks_max_face_then_smallest_id() {
        // Edge 3 over vertices 0 (g=0) and 1 (g=2); edge 4 over 1 and 2 (g=2).
        let k = ChainComplex::new(vec![
            (Cell::new(0, 0, 0), vec![]),
            (Cell::new(1, 0, 2), vec![]),
            (Cell::new(2, 0, 2), vec![]),
            (Cell::new(3, 1, 5), vec![id(0), id(1)]),
            (Cell::new(4, 1, 5), vec![id(1), id(2)]),
        ])
        .unwrap();
        let m = compute_matching(&k, &MatchingPolicy::downward_max_face(5));
        assert_eq!(m.pairs(), &[(id(1), id(3))]);

        let none = compute_matching(&k, &MatchingPolicy::downward_max_face(4));
        assert!(!none.has_pairs());
    }

    #[test]
    fn matching_construction_errors() {
        let k = ChainComplex::new(vec![
            (Cell::new(0, 0, 0), vec![]),
            (Cell::new(1, 0, 0), vec![]),
            (Cell::new(2, 1, 0), vec![id(0), id(1)]),
            (Cell::new(3, 0, 0), vec![]),
        ])
        .unwrap();
        assert_eq!(
            Matching::new(&k, vec![(id(3), id(2))]).unwrap_err(),
            Error::NotIncident {
                face: id(3),
                coface: id(2)
            }
        );
        assert_eq!(
            Matching::new(&k, vec![(id(0), id(2)), (id(1), id(2))]).unwrap_err(),
            Error::CellMatchedTwice(id(2))
        );
        assert_eq!(
            Matching::new(&k, vec![(id(9), id(2))]).unwrap_err(),
            Error::UnknownCell(id(9))
        );
        let m = Matching::new(&k, vec![(id(0), id(2))]).unwrap();
        assert_eq!(m.mate_of(id(2)), Some(id(0)));
        assert_eq!(m.critical(), &[id(1), id(3)]);
    }
}
