//! Text formats for filtered complexes and JSON documents for results.
//!
//! Boundary format, one cell per line (faces must be declared earlier):
//!
//! ```text
//! # id dim filtration : faces
//! 0 0 0 :
//! 1 0 0 :
//! 2 1 0 : 0 1
//! ```
//!
//! Simplicial format, one simplex per line given by its vertex labels; every
//! proper face must be listed somewhere in the file:
//!
//! ```text
//! # filtration : vertices
//! 0 : a
//! 0 : b
//! 1 : a b
//! ```

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Write as _};
use std::path::Path;

use serde::Serialize;
use thiserror::Error;

use crate::complex::{Cell, CellId, ChainComplex, Violation};
use crate::homology::IterationTrace;
use crate::persistence::PersistenceIntervals;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("expected `{0}`")]
    Syntax(&'static str),
    #[error("`{0}` is not an integer filtration value")]
    BadFiltration(String),
    #[error("`{0}` is not a valid {1}")]
    BadNumber(String, &'static str),
    #[error("cell {0} is declared twice")]
    DuplicateCell(CellId),
    #[error("face {0} has not been declared")]
    UnknownFace(CellId),
    #[error("face {0} is listed twice")]
    RepeatedFace(CellId),
    #[error("face {face} has dimension {face_dim}, expected {expected}")]
    DimensionMismatch {
        face: CellId,
        face_dim: usize,
        expected: usize,
    },
    #[error("a {0}-cell must list its faces")]
    MissingFaces(usize),
    #[error("face {face} enters at {face_filtration}, after its coface at {filtration}")]
    FiltrationOrder {
        face: String,
        face_filtration: i64,
        filtration: i64,
    },
    #[error("boundary of boundary is not zero: {0}")]
    BoundaryOfBoundary(String),
    #[error("simplex {{{0}}} is listed twice")]
    DuplicateSimplex(String),
    #[error("simplex repeats vertex `{0}`")]
    RepeatedVertex(String),
    #[error("face {{{0}}} of this simplex is not listed")]
    MissingFace(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

fn err(line: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, kind }
}

/// Strips comments and splits `lhs : rhs`. Returns `None` for blank lines.
fn split_line(raw: &str) -> Option<(&str, Option<&str>)> {
    let text = raw.split('#').next().unwrap_or("").trim();
    if text.is_empty() {
        return None;
    }
    Some(match text.split_once(':') {
        Some((l, r)) => (l.trim(), Some(r.trim())),
        None => (text, None),
    })
}

fn parse_filtration(tok: &str, line: usize) -> Result<i64, ParseError> {
    tok.parse()
        .map_err(|_| err(line, ParseErrorKind::BadFiltration(tok.to_string())))
}

pub fn parse_boundary_format(text: &str) -> Result<ChainComplex, ParseError> {
    let mut declared: HashMap<CellId, (usize, i64, usize)> = HashMap::new();
    let mut entries = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let Some((head, faces)) = split_line(raw) else {
            continue;
        };
        let head: Vec<&str> = head.split_whitespace().collect();
        let [id, dim, filtration] = head[..] else {
            return Err(err(
                line,
                ParseErrorKind::Syntax("id dim filtration : faces"),
            ));
        };
        let id = CellId(
            id.parse()
                .map_err(|_| err(line, ParseErrorKind::BadNumber(id.to_string(), "cell id")))?,
        );
        let dim: usize = dim.parse().map_err(|_| {
            err(
                line,
                ParseErrorKind::BadNumber(dim.to_string(), "dimension"),
            )
        })?;
        let filtration = parse_filtration(filtration, line)?;
        if dim > 0 && faces.is_none() {
            return Err(err(line, ParseErrorKind::MissingFaces(dim)));
        }

        let mut face_ids = Vec::new();
        for tok in faces.unwrap_or("").split_whitespace() {
            let face =
                CellId(tok.parse().map_err(|_| {
                    err(line, ParseErrorKind::BadNumber(tok.to_string(), "face id"))
                })?);
            let &(face_dim, face_filtration, _) = declared
                .get(&face)
                .ok_or_else(|| err(line, ParseErrorKind::UnknownFace(face)))?;
            if face_dim + 1 != dim {
                return Err(err(
                    line,
                    ParseErrorKind::DimensionMismatch {
                        face,
                        face_dim,
                        expected: dim.wrapping_sub(1),
                    },
                ));
            }
            if face_filtration > filtration {
                return Err(err(
                    line,
                    ParseErrorKind::FiltrationOrder {
                        face: face.to_string(),
                        face_filtration,
                        filtration,
                    },
                ));
            }
            if face_ids.contains(&face) {
                return Err(err(line, ParseErrorKind::RepeatedFace(face)));
            }
            face_ids.push(face);
        }
        if declared.insert(id, (dim, filtration, line)).is_some() {
            return Err(err(line, ParseErrorKind::DuplicateCell(id)));
        }
        entries.push((Cell::new(id, dim, filtration), face_ids));
    }

    let complex = ChainComplex::new(entries).expect("references were checked while parsing");
    if let Some(v) = complex.validate().violations.into_iter().next() {
        let Violation::BoundaryOfBoundary { cell, .. } = v else {
            unreachable!("dimensions and filtration order were checked while parsing");
        };
        let line = declared[&cell].2;
        return Err(err(line, ParseErrorKind::BoundaryOfBoundary(v.to_string())));
    }
    Ok(complex)
}

pub fn parse_simplicial_format(text: &str) -> Result<ChainComplex, ParseError> {
    // Simplex (sorted vertex indices) -> (filtration, line, id).
    let mut simplices: BTreeMap<Vec<usize>, (i64, usize, CellId)> = BTreeMap::new();
    let mut labels: HashMap<String, usize> = HashMap::new();
    let mut names: Vec<String> = Vec::new();
    let mut next_id = 0usize;

    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let Some((head, verts)) = split_line(raw) else {
            continue;
        };
        let Some(verts) = verts else {
            return Err(err(line, ParseErrorKind::Syntax("filtration : v0 v1 ...")));
        };
        let filtration = parse_filtration(head, line)?;
        let mut simplex = Vec::new();
        for tok in verts.split_whitespace() {
            let v = *labels.entry(tok.to_string()).or_insert_with(|| {
                names.push(tok.to_string());
                names.len() - 1
            });
            if simplex.contains(&v) {
                return Err(err(line, ParseErrorKind::RepeatedVertex(tok.to_string())));
            }
            simplex.push(v);
        }
        if simplex.is_empty() {
            return Err(err(line, ParseErrorKind::Syntax("filtration : v0 v1 ...")));
        }
        simplex.sort_unstable();
        if simplices.contains_key(&simplex) {
            return Err(err(
                line,
                ParseErrorKind::DuplicateSimplex(show(&simplex, &names)),
            ));
        }
        simplices.insert(simplex, (filtration, line, CellId(next_id)));
        next_id += 1;
    }

    let mut entries = Vec::with_capacity(simplices.len());
    for (simplex, &(filtration, line, id)) in &simplices {
        let mut faces = Vec::new();
        if simplex.len() > 1 {
            for skip in 0..simplex.len() {
                let face: Vec<usize> = simplex
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != skip)
                    .map(|(_, &v)| v)
                    .collect();
                let &(face_filtration, _, face_id) = simplices
                    .get(&face)
                    .ok_or_else(|| err(line, ParseErrorKind::MissingFace(show(&face, &names))))?;
                if face_filtration > filtration {
                    return Err(err(
                        line,
                        ParseErrorKind::FiltrationOrder {
                            face: format!("{{{}}}", show(&face, &names)),
                            face_filtration,
                            filtration,
                        },
                    ));
                }
                faces.push(face_id);
            }
        }
        entries.push((Cell::new(id, simplex.len() - 1, filtration), faces));
    }
    Ok(ChainComplex::new(entries).expect("simplicial faces are well formed"))
}

fn show(simplex: &[usize], names: &[String]) -> String {
    simplex
        .iter()
        .map(|&v| names[v].as_str())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Writes `complex` in boundary format, cells in total order (so every face
/// precedes its cofaces).
pub fn write_boundary_format(complex: &ChainComplex) -> String {
    let mut out = String::from("# id dim filtration : faces\n");
    for (cell, faces) in complex.entries() {
        let _ = write!(out, "{} {} {} :", cell.id, cell.dim, cell.filtration);
        for f in faces {
            let _ = write!(out, " {f}");
        }
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Boundary,
    Simplicial,
}

impl Format {
    /// `.bnd` is boundary format, `.smp` simplicial.
    pub fn from_path(path: &Path) -> Option<Format> {
        match path.extension()?.to_str()? {
            "bnd" => Some(Format::Boundary),
            "smp" => Some(Format::Simplicial),
            _ => None,
        }
    }

    pub fn parse(self, text: &str) -> Result<ChainComplex, ParseError> {
        match self {
            Format::Boundary => parse_boundary_format(text),
            Format::Simplicial => parse_simplicial_format(text),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Boundary => "boundary",
            Format::Simplicial => "simplicial",
        })
    }
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "boundary" | "bnd" => Ok(Format::Boundary),
            "simplicial" | "smp" => Ok(Format::Simplicial),
            _ => Err(format!(
                "unknown format `{s}` (expected boundary or simplicial)"
            )),
        }
    }
}

#[derive(Serialize)]
struct BettiDocument<'a> {
    betti: &'a [usize],
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<&'a IterationTrace>,
}

#[derive(Serialize)]
struct IntervalsDocument<'a> {
    intervals: &'a [crate::persistence::PersistenceInterval],
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<&'a IterationTrace>,
}

/// `{"betti": [...]}`, with an optional `trace` field.
pub fn betti_json(betti: &[usize], trace: Option<&IterationTrace>) -> String {
    serde_json::to_string(&BettiDocument { betti, trace }).expect("serializable")
}

/// `{"intervals": [{"dim", "birth", "death"}]}` with `"inf"` for infinite deaths.
pub fn intervals_json(intervals: &PersistenceIntervals, trace: Option<&IterationTrace>) -> String {
    serde_json::to_string(&IntervalsDocument {
        intervals: intervals.as_slice(),
        trace,
    })
    .expect("serializable")
}

/// Betti vector as a single space-separated line.
pub fn betti_text(betti: &[usize]) -> String {
    betti
        .iter()
        .map(|b| b.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}
