#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::Path;

use itermorse::io::Format;
use itermorse::oracle::SortedBoundaryMatrix;
use itermorse::{Cell, CellId, ChainComplex, MorseGraph};

pub fn fixture(name: &str) -> ChainComplex {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name);
    let text = std::fs::read_to_string(&path).unwrap();
    Format::from_path(&path).unwrap().parse(&text).unwrap()
}

pub fn id(v: usize) -> CellId {
    CellId(v)
}

/// Triangles A=10, X=11, Y=12 with A and X sharing x=5, A and Y sharing
/// y=6, X and Y sharing d=8. Matching x into X and y into Y gives two
/// paths from A down to d.
pub fn two_paths() -> ChainComplex {
    let v = |i: usize| (Cell::new(i, 0, 0), vec![]);
    let e = |i: usize, a: usize, b: usize| (Cell::new(i, 1, 0), vec![id(a), id(b)]);
    let t = |i: usize, f: [usize; 3]| (Cell::new(i, 2, 0), f.map(id).to_vec());
    ChainComplex::new(vec![
        v(0),
        v(1),
        v(2),
        v(4),
        e(5, 0, 1),
        e(6, 0, 2),
        e(7, 1, 2),
        e(8, 0, 4),
        e(9, 1, 4),
        e(13, 2, 4),
        t(10, [5, 6, 7]),
        t(11, [5, 8, 9]),
        t(12, [6, 8, 13]),
    ])
    .unwrap()
}

/// Number of directed paths from `from` to `to`, by exhaustive search.
pub fn count_paths(graph: &MorseGraph, from: CellId, to: CellId) -> u64 {
    let edges: Vec<(CellId, CellId)> = graph.edges().collect();
    fn go(edges: &[(CellId, CellId)], at: CellId, to: CellId) -> u64 {
        if at == to {
            return 1;
        }
        edges
            .iter()
            .filter(|e| e.0 == at)
            .map(|e| go(edges, e.1, to))
            .sum()
    }
    go(&edges, from, to)
}

/// Reduces a copy of `matrix` by adding, in an order chosen by `pick`, any
/// earlier column into a later one with the same low, until no two columns
/// share a low. Dense and deliberately simple.
pub fn naive_lows(
    matrix: &SortedBoundaryMatrix,
    mut pick: impl FnMut(usize) -> usize,
) -> Vec<Option<usize>> {
    let n = matrix.size();
    let mut cols: Vec<Vec<bool>> = (0..n)
        .map(|j| {
            let mut c = vec![false; n];
            for &i in matrix.column(j) {
                c[i] = true;
            }
            c
        })
        .collect();
    let low = |c: &Vec<bool>| c.iter().rposition(|&x| x);
    loop {
        let mut collisions = Vec::new();
        for j in 0..n {
            for k in j + 1..n {
                if low(&cols[j]).is_some() && low(&cols[j]) == low(&cols[k]) {
                    collisions.push((j, k));
                }
            }
        }
        if collisions.is_empty() {
            return cols.iter().map(low).collect();
        }
        let (j, k) = collisions[pick(collisions.len())];
        let src = cols[j].clone();
        for (x, y) in cols[k].iter_mut().zip(src) {
            *x ^= y;
        }
    }
}

pub fn support_set(complex: &ChainComplex, id: CellId) -> BTreeSet<CellId> {
    complex.boundary_of(id).unwrap().support().clone()
}
