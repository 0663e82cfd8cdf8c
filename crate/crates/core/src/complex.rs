//! Finite filtered chain complexes with Z2 coefficients.
//!
//! A [`ChainComplex`] stores its cells in the total order
//! `(filtration, dim, id)`. Every algorithm in this crate scans cells in that
//! order, which makes matchings, Morse complexes and boundary matrices
//! deterministic. Boundaries are sparse sets of faces: a face is either
//! present (incidence 1) or absent (incidence 0).

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Identifier of a cell. Unique within a complex and preserved by every
/// operation that derives a new complex from an old one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CellId(pub usize);

impl fmt::Display for CellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<usize> for CellId {
    fn from(v: usize) -> Self {
        CellId(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cell {
    pub id: CellId,
    pub dim: usize,
    pub filtration: i64,
}

impl Cell {
    pub fn new(id: impl Into<CellId>, dim: usize, filtration: i64) -> Self {
        Cell {
            id: id.into(),
            dim,
            filtration,
        }
    }

    /// Key of the total cell order.
    #[inline]
    pub fn order_key(&self) -> (i64, usize, CellId) {
        (self.filtration, self.dim, self.id)
    }
}

/// A Z2 chain: a set of cells of one dimension.
///
/// The dimension is signed so that the boundary of a vertex can be
/// represented as the empty (-1)-chain.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Chain {
    dim: isize,
    support: BTreeSet<CellId>,
}

impl Chain {
    pub fn empty(dim: isize) -> Self {
        Chain {
            dim,
            support: BTreeSet::new(),
        }
    }

    /// Builds a chain from cells. Cells listed twice cancel.
    pub fn from_cells(dim: isize, cells: impl IntoIterator<Item = CellId>) -> Self {
        let mut chain = Chain::empty(dim);
        for c in cells {
            chain.toggle(c);
        }
        chain
    }

    pub fn dim(&self) -> isize {
        self.dim
    }

    pub fn support(&self) -> &BTreeSet<CellId> {
        &self.support
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn contains(&self, c: CellId) -> bool {
        self.support.contains(&c)
    }

    pub fn iter(&self) -> impl Iterator<Item = CellId> + '_ {
        self.support.iter().copied()
    }

    fn toggle(&mut self, c: CellId) {
        if !self.support.remove(&c) {
            self.support.insert(c);
        }
    }
}

/// Z2 sum of two chains of the same dimension (symmetric difference).
pub fn chain_add(x: &Chain, y: &Chain) -> Result<Chain> {
    if x.dim != y.dim {
        return Err(Error::ChainDimensionMismatch {
            left: x.dim,
            right: y.dim,
        });
    }
    Ok(Chain {
        dim: x.dim,
        support: x
            .support
            .symmetric_difference(&y.support)
            .copied()
            .collect(),
    })
}

/// A structural problem found by [`ChainComplex::validate`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// `face` is listed in the boundary of `cell` but is not one dimension lower.
    DimensionMismatch { cell: CellId, face: CellId },
    /// `cell` has odd incidence with the (p-2)-cell `face` through its faces.
    BoundaryOfBoundary { cell: CellId, face: CellId },
    /// `face` enters the filtration after its coface `cell`.
    FiltrationOrder { cell: CellId, face: CellId },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DimensionMismatch { cell, face } => {
                write!(f, "face {face} of cell {cell} has the wrong dimension")
            }
            Violation::BoundaryOfBoundary { cell, face } => {
                write!(f, "boundary of boundary of cell {cell} contains {face}")
            }
            Violation::FiltrationOrder { cell, face } => {
                write!(
                    f,
                    "face {face} has larger filtration than its coface {cell}"
                )
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        let parts: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// A finite filtered chain complex over Z2.
///
/// Cells are addressed either by [`CellId`] or by their position in the
/// total order; positions are what the algorithms work with internally.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainComplex {
    cells: Vec<Cell>,
    faces: Vec<Vec<usize>>,
    cofaces: Vec<Vec<usize>>,
    index: HashMap<CellId, usize>,
}

impl Default for ChainComplex {
    fn default() -> Self {
        ChainComplex::from_sorted_parts(Vec::new(), Vec::new())
    }
}

impl ChainComplex {
    /// Builds a complex from cells and their faces, given in any order.
    ///
    /// Only referential integrity is checked here; dimensional, algebraic
    /// and filtration constraints are reported by [`ChainComplex::validate`].
    pub fn new(entries: impl IntoIterator<Item = (Cell, Vec<CellId>)>) -> Result<Self> {
        let mut entries: Vec<(Cell, Vec<CellId>)> = entries.into_iter().collect();
        entries.sort_by_key(|(c, _)| c.order_key());

        let mut index = HashMap::with_capacity(entries.len());
        for (pos, (cell, _)) in entries.iter().enumerate() {
            if index.insert(cell.id, pos).is_some() {
                return Err(Error::DuplicateCell(cell.id));
            }
        }

        let mut cells = Vec::with_capacity(entries.len());
        let mut faces = Vec::with_capacity(entries.len());
        for (cell, face_ids) in entries {
            let mut row = Vec::with_capacity(face_ids.len());
            for face in face_ids {
                let pos = *index.get(&face).ok_or(Error::UnknownFace {
                    cell: cell.id,
                    face,
                })?;
                row.push(pos);
            }
            row.sort_unstable();
            if let Some(w) = row.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::RepeatedFace {
                    cell: cell.id,
                    face: cells_id_at(&index, w[0]),
                });
            }
            cells.push(cell);
            faces.push(row);
        }
        Ok(Self::from_sorted_parts(cells, faces))
    }

    /// Assembles a complex whose cells are already in total order and whose
    /// face lists hold sorted positions into `cells`.
    pub(crate) fn from_sorted_parts(cells: Vec<Cell>, faces: Vec<Vec<usize>>) -> Self {
        debug_assert!(cells
            .windows(2)
            .all(|w| w[0].order_key() < w[1].order_key()));
        let mut cofaces = vec![Vec::new(); cells.len()];
        for (pos, row) in faces.iter().enumerate() {
            for &f in row {
                cofaces[f].push(pos);
            }
        }
        let index = cells.iter().enumerate().map(|(p, c)| (c.id, p)).collect();
        ChainComplex {
            cells,
            faces,
            cofaces,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Cells in total order.
    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn cell(&self, id: CellId) -> Result<&Cell> {
        self.position(id).map(|p| &self.cells[p])
    }

    pub fn contains(&self, id: CellId) -> bool {
        self.index.contains_key(&id)
    }

    /// Position of a cell in the total order.
    pub fn position(&self, id: CellId) -> Result<usize> {
        self.index.get(&id).copied().ok_or(Error::UnknownCell(id))
    }

    pub fn cell_at(&self, pos: usize) -> &Cell {
        &self.cells[pos]
    }

    /// Positions of the faces of the cell at `pos`, ascending.
    pub fn faces_at(&self, pos: usize) -> &[usize] {
        &self.faces[pos]
    }

    /// Positions of the cofaces of the cell at `pos`, ascending.
    pub fn cofaces_at(&self, pos: usize) -> &[usize] {
        &self.cofaces[pos]
    }

    pub fn incidence_count(&self) -> usize {
        self.faces.iter().map(Vec::len).sum()
    }

    /// Highest cell dimension, or `None` for the empty complex.
    pub fn top_dim(&self) -> Option<usize> {
        self.cells.iter().map(|c| c.dim).max()
    }

    /// Number of cells in each dimension `0..=top_dim`.
    pub fn count_by_dim(&self) -> Vec<usize> {
        let mut counts = vec![0; self.top_dim().map_or(0, |d| d + 1)];
        for c in &self.cells {
            counts[c.dim] += 1;
        }
        counts
    }

    /// Distinct filtration values, ascending.
    pub fn filtration_levels(&self) -> Vec<i64> {
        let mut levels: Vec<i64> = self.cells.iter().map(|c| c.filtration).collect();
        levels.dedup();
        levels
    }

    pub fn boundary_of(&self, id: CellId) -> Result<Chain> {
        let pos = self.position(id)?;
        Ok(Chain::from_cells(
            self.cells[pos].dim as isize - 1,
            self.faces[pos].iter().map(|&f| self.cells[f].id),
        ))
    }

    pub fn coboundary_of(&self, id: CellId) -> Result<Chain> {
        let pos = self.position(id)?;
        Ok(Chain::from_cells(
            self.cells[pos].dim as isize + 1,
            self.cofaces[pos].iter().map(|&f| self.cells[f].id),
        ))
    }

    /// Checks face dimensions, `∂∂ = 0` and filtration monotonicity.
    /// Every violating pair is listed.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let mut parity: HashMap<usize, bool> = HashMap::new();
        for (pos, cell) in self.cells.iter().enumerate() {
            for &f in &self.faces[pos] {
                let face = &self.cells[f];
                if face.dim + 1 != cell.dim {
                    violations.push(Violation::DimensionMismatch {
                        cell: cell.id,
                        face: face.id,
                    });
                }
                if face.filtration > cell.filtration {
                    violations.push(Violation::FiltrationOrder {
                        cell: cell.id,
                        face: face.id,
                    });
                }
            }

            parity.clear();
            for &f in &self.faces[pos] {
                for &ff in &self.faces[f] {
                    let e = parity.entry(ff).or_insert(false);
                    *e = !*e;
                }
            }
            let mut odd: Vec<usize> = parity.iter().filter(|(_, &o)| o).map(|(&p, _)| p).collect();
            odd.sort_unstable();
            violations.extend(odd.into_iter().map(|p| Violation::BoundaryOfBoundary {
                cell: cell.id,
                face: self.cells[p].id,
            }));
        }
        ValidationReport { violations }
    }

    /// Like [`validate`](Self::validate), but turns violations into an error.
    pub fn ensure_valid(&self) -> Result<()> {
        let report = self.validate();
        if report.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidComplex(report))
        }
    }

    /// Like [`ensure_valid`](Self::ensure_valid) but ignores the filtration:
    /// only face dimensions and `∂∂ = 0` are required.
    pub fn ensure_chain_complex(&self) -> Result<()> {
        let mut report = self.validate();
        report
            .violations
            .retain(|v| !matches!(v, Violation::FiltrationOrder { .. }));
        if report.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidComplex(report))
        }
    }

    /// Cells paired with their face ids, in total order.
    pub fn entries(&self) -> impl Iterator<Item = (Cell, Vec<CellId>)> + '_ {
        self.cells.iter().enumerate().map(|(pos, c)| {
            (
                *c,
                self.faces[pos].iter().map(|&f| self.cells[f].id).collect(),
            )
        })
    }
}

fn cells_id_at(index: &HashMap<CellId, usize>, pos: usize) -> CellId {
    index
        .iter()
        .find(|(_, &p)| p == pos)
        .map(|(&id, _)| id)
        .expect("position comes from the index")
}
