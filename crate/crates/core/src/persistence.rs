//! Persistence intervals via filtration-compatible simplification followed
//! by downward Morse matchings processed level by level.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::complex::ChainComplex;
use crate::error::{Error, Result};
use crate::homology::{iterate_to_fixpoint, IterationTrace};
use crate::morse::{downward_pair, morse_complex_from_mates, MatchingPolicy};

/// Right endpoint of an interval. Finite values order before infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Death {
    Finite(i64),
    Infinite,
}

impl fmt::Display for Death {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Death::Finite(v) => write!(f, "{v}"),
            Death::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Death {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Death::Finite(v) => s.serialize_i64(*v),
            Death::Infinite => s.serialize_str("inf"),
        }
    }
}

/// Closed lifetime `[birth, death]` of a homology class of dimension `dim`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct PersistenceInterval {
    pub dim: usize,
    pub birth: i64,
    pub death: Death,
}

impl PersistenceInterval {
    pub fn finite(dim: usize, birth: i64, death: i64) -> Self {
        PersistenceInterval {
            dim,
            birth,
            death: Death::Finite(death),
        }
    }

    pub fn infinite(dim: usize, birth: i64) -> Self {
        PersistenceInterval {
            dim,
            birth,
            death: Death::Infinite,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.death, Death::Finite(_))
    }
}

impl fmt::Display for PersistenceInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.dim, self.birth, self.death)
    }
}

/// Multiset of intervals, kept sorted by `(dim, birth, death)` so that equal
/// multisets compare equal.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize)]
pub struct PersistenceIntervals {
    intervals: Vec<PersistenceInterval>,
}

impl PersistenceIntervals {
    pub fn new(mut intervals: Vec<PersistenceInterval>) -> Self {
        intervals.sort_unstable();
        PersistenceIntervals { intervals }
    }

    pub fn as_slice(&self) -> &[PersistenceInterval] {
        &self.intervals
    }

    pub fn iter(&self) -> impl Iterator<Item = &PersistenceInterval> {
        self.intervals.iter()
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn finite_count(&self) -> usize {
        self.intervals.iter().filter(|i| i.is_finite()).count()
    }

    pub fn infinite_count(&self) -> usize {
        self.len() - self.finite_count()
    }

    /// Number of infinite intervals per dimension, up to `top_dim`.
    pub fn infinite_by_dim(&self, top_dim: Option<usize>) -> Vec<usize> {
        let mut counts = vec![0; top_dim.map_or(0, |d| d + 1)];
        for i in self.intervals.iter().filter(|i| !i.is_finite()) {
            if i.dim >= counts.len() {
                counts.resize(i.dim + 1, 0);
            }
            counts[i.dim] += 1;
        }
        counts
    }
}

impl fmt::Display for PersistenceIntervals {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in &self.intervals {
            writeln!(f, "{i}")?;
        }
        Ok(())
    }
}

impl FromIterator<PersistenceInterval> for PersistenceIntervals {
    fn from_iter<T: IntoIterator<Item = PersistenceInterval>>(iter: T) -> Self {
        PersistenceIntervals::new(iter.into_iter().collect())
    }
}

/// Iterates filtration-compatible Morse complexes to their fixpoint. The
/// result has the persistence of the input and no zero-length pairs.
pub fn simplify_filtered(complex: &ChainComplex) -> Result<ChainComplex> {
    simplify_filtered_traced(complex).map(|(k, _)| k)
}

pub fn simplify_filtered_traced(complex: &ChainComplex) -> Result<(ChainComplex, IterationTrace)> {
    iterate_to_fixpoint(complex, &MatchingPolicy::filtration_compatible())
}

/// Every cell must enter strictly after each of its faces.
fn check_strict_faces(complex: &ChainComplex) -> Result<()> {
    for (p, cell) in complex.cells().iter().enumerate() {
        if let Some(&f) = complex
            .faces_at(p)
            .iter()
            .find(|&&f| complex.cell_at(f).filtration >= cell.filtration)
        {
            return Err(Error::StrictFaceViolation {
                cell: cell.id,
                face: complex.cell_at(f).id,
            });
        }
    }
    Ok(())
}

/// Persistence intervals of a simplified complex (the output of
/// [`simplify_filtered`]).
///
/// Levels are processed in increasing order starting from the second one.
/// At each level, the coface with the smallest id entering at that level is
/// matched with its face of maximal filtration, the interval
/// `[g(face), g(coface)]` is recorded and the Morse complex of the whole
/// current complex replaces it; this repeats until the level has no pair.
/// Survivors give infinite intervals.
pub fn persistence_via_morse(complex: &ChainComplex) -> Result<PersistenceIntervals> {
    let levels = complex.filtration_levels();
    persistence_in_level_order(complex, levels.get(1..).unwrap_or(&[]))
}

/// The level loop of [`persistence_via_morse`] with a caller-chosen level
/// order. Only the increasing order is correct; other orders are exposed to
/// demonstrate that.
pub fn persistence_in_level_order(
    complex: &ChainComplex,
    levels: &[i64],
) -> Result<PersistenceIntervals> {
    persistence_observed(complex, levels, |_| {})
}

/// [`persistence_in_level_order`], calling `observe` on every complex
/// produced by a committed pair.
pub fn persistence_observed<F>(
    complex: &ChainComplex,
    levels: &[i64],
    mut observe: F,
) -> Result<PersistenceIntervals>
where
    F: FnMut(&ChainComplex),
{
    complex.ensure_valid()?;
    check_strict_faces(complex)?;

    let mut current = complex.clone();
    let mut intervals = Vec::with_capacity(complex.len());
    for &level in levels {
        let policy = MatchingPolicy::downward_max_face(level);
        while let Some((face, coface)) = downward_pair(&current, &policy) {
            let mut mate = vec![None; current.len()];
            mate[face] = Some(coface);
            mate[coface] = Some(face);
            let b = current.cell_at(face);
            let a = current.cell_at(coface);
            intervals.push(PersistenceInterval::finite(
                b.dim,
                b.filtration,
                a.filtration,
            ));
            current = morse_complex_from_mates(&current, &mate)?;
            observe(&current);
        }
    }
    intervals.extend(
        current
            .cells()
            .iter()
            .map(|c| PersistenceInterval::infinite(c.dim, c.filtration)),
    );
    Ok(PersistenceIntervals::new(intervals))
}

/// Outcome of [`persistence_pipeline_traced`].
#[derive(Debug, Clone)]
pub struct PipelineReport {
    pub intervals: PersistenceIntervals,
    pub simplified: ChainComplex,
    pub trace: IterationTrace,
}

/// End-to-end persistence of a filtered complex: [`simplify_filtered`]
/// followed by [`persistence_via_morse`].
pub fn persistence_pipeline(complex: &ChainComplex) -> Result<PersistenceIntervals> {
    persistence_pipeline_traced(complex).map(|r| r.intervals)
}

pub fn persistence_pipeline_traced(complex: &ChainComplex) -> Result<PipelineReport> {
    let (simplified, trace) = simplify_filtered_traced(complex)?;
    let intervals = persistence_via_morse(&simplified)?;
    Ok(PipelineReport {
        intervals,
        simplified,
        trace,
    })
}
