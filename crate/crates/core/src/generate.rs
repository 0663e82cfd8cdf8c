//! Generators for test inputs: seeded random cell complexes, exhaustive
//! enumeration of tiny complexes, and Vietoris-Rips style flag complexes.

use std::collections::{BTreeSet, HashMap};

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::{Cell, CellId, ChainComplex};

/// Shape of the complexes drawn by [`random_complex`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomConfig {
    pub max_cells: usize,
    pub max_dim: usize,
    /// Filtration values lie in `0..=max_level`.
    pub max_level: i64,
    pub max_vertices: usize,
}

impl Default for RandomConfig {
    fn default() -> Self {
        RandomConfig {
            max_cells: 60,
            max_dim: 3,
            max_level: 6,
            max_vertices: 8,
        }
    }
}

/// Cells under construction, indexed by insertion order.
#[derive(Default)]
struct Builder {
    dims: Vec<usize>,
    filtration: Vec<i64>,
    faces: Vec<Vec<usize>>,
    by_dim: Vec<Vec<usize>>,
    simplices: HashMap<Vec<usize>, usize>,
}

impl Builder {
    fn push(&mut self, dim: usize, filtration: i64, faces: Vec<usize>) -> usize {
        let i = self.dims.len();
        self.dims.push(dim);
        self.filtration.push(filtration);
        self.faces.push(faces);
        if self.by_dim.len() <= dim {
            self.by_dim.resize(dim + 1, Vec::new());
        }
        self.by_dim[dim].push(i);
        i
    }

    fn cells_of(&self, dim: usize) -> &[usize] {
        self.by_dim.get(dim).map_or(&[], Vec::as_slice)
    }

    fn face_level(&self, faces: &[usize]) -> i64 {
        faces.iter().map(|&f| self.filtration[f]).max().unwrap_or(0)
    }

    /// Finishes with ids given by `ids[insertion index]`.
    fn finish(self, ids: &[usize]) -> ChainComplex {
        let entries = (0..self.dims.len()).map(|i| {
            (
                Cell::new(ids[i], self.dims[i], self.filtration[i]),
                self.faces[i].iter().map(|&f| CellId(ids[f])).collect(),
            )
        });
        ChainComplex::new(entries).expect("generated complexes are well formed")
    }
}

fn xor_into(acc: &mut BTreeSet<usize>, faces: &[usize]) {
    for &f in faces {
        if !acc.remove(&f) {
            acc.insert(f);
        }
    }
}

/// Proposes the boundary of a new `dim`-cell: a simplex over existing
/// faces, the boundary of a sum of existing `dim`-cells, or (for edges) a
/// pair of vertices. Every proposal is a cycle, so `∂∂ = 0` is kept.
fn propose<R: Rng>(
    b: &Builder,
    dim: usize,
    vertices: usize,
    rng: &mut R,
) -> Option<(Vec<usize>, Option<Vec<usize>>)> {
    if dim == 1 {
        let mut vs: Vec<usize> = (0..vertices).collect();
        vs.shuffle(rng);
        let (x, y) = (vs[0].min(vs[1]), vs[0].max(vs[1]));
        let key = vec![x, y];
        if b.simplices.contains_key(&key) && !rng.random_bool(0.3) {
            return None;
        }
        let faces = vec![b.simplices[&vec![x]], b.simplices[&vec![y]]];
        let key = (!b.simplices.contains_key(&key)).then_some(key);
        return Some((faces, key));
    }
    if rng.random_bool(0.6) {
        let mut vs: Vec<usize> = (0..vertices).collect();
        vs.shuffle(rng);
        let mut simplex = vs[..(dim + 1).min(vertices)].to_vec();
        if simplex.len() != dim + 1 {
            return None;
        }
        simplex.sort_unstable();
        if b.simplices.contains_key(&simplex) {
            return None;
        }
        let mut faces = Vec::with_capacity(dim + 1);
        for skip in 0..=dim {
            let mut face = simplex.clone();
            face.remove(skip);
            faces.push(*b.simplices.get(&face)?);
        }
        return Some((faces, Some(simplex)));
    }
    let pool = b.cells_of(dim);
    if pool.is_empty() {
        return None;
    }
    let k = rng.random_range(1..=pool.len().min(3));
    let mut acc = BTreeSet::new();
    for &c in pool.choose_multiple(rng, k) {
        xor_into(&mut acc, &b.faces[c]);
    }
    (!acc.is_empty()).then(|| (acc.into_iter().collect(), None))
}

/// A random filtered Z2 cell complex drawn from `seed`.
///
/// Cells are simplices over at most `max_vertices` labelled points, mixed
/// with non-simplicial cells: parallel edges and higher cells glued along
/// the boundary of a sum of existing cells. Filtration values are monotone
/// and frequently tied. Ids are a random permutation so that id order
/// carries no structure.
pub fn random_complex(seed: u64, config: &RandomConfig) -> ChainComplex {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let target = rng.random_range(config.max_cells.min(4)..=config.max_cells);
    let vertices = rng
        .random_range(config.max_vertices.min(2)..=config.max_vertices)
        .min(target);
    let mut b = Builder::default();
    for v in 0..vertices {
        let g = rng.random_range(0..=config.max_level / 2);
        let i = b.push(0, g, Vec::new());
        b.simplices.insert(vec![v], i);
    }
    let mut attempts = 0;
    while b.dims.len() < target && attempts < 20 * config.max_cells && vertices > 1 {
        attempts += 1;
        let dim = rng.random_range(1..=config.max_dim);
        let Some((faces, simplex)) = propose(&b, dim, vertices, &mut rng) else {
            continue;
        };
        let floor = b.face_level(&faces);
        let g = (floor + [0, 0, 1, 2][rng.random_range(0..4)]).min(config.max_level.max(floor));
        let i = b.push(dim, g, faces);
        if let Some(s) = simplex {
            b.simplices.insert(s, i);
        }
    }
    let mut ids: Vec<usize> = (0..b.dims.len()).collect();
    ids.shuffle(&mut rng);
    b.finish(&ids)
}

/// Calls `visit` on every filtered complex with at most `max_cells` cells
/// and filtration values in `0..=max_level`, built from vertices, edges
/// between two distinct vertices, and higher cells whose boundary is any
/// nonempty cycle of the cells one dimension down.
///
/// Cells of one dimension are generated as a non-decreasing sequence of
/// boundaries and vertex filtrations are non-decreasing, which removes the
/// most obvious relabellings; the enumeration is otherwise not up to
/// isomorphism. Ids follow insertion order.
pub fn enumerate_complexes<F: FnMut(&ChainComplex)>(
    max_cells: usize,
    max_level: i64,
    mut visit: F,
) {
    for vertices in 1..=max_cells {
        let mut b = Builder::default();
        for _ in 0..vertices {
            b.push(0, 0, Vec::new());
        }
        enumerate_above(&mut b, 1, max_cells, &mut |b| {
            let shape = Shape {
                dims: b.dims.clone(),
                faces: b.faces.clone(),
            };
            assign_filtrations(&shape, max_level, &mut visit);
        });
    }
}

struct Shape {
    dims: Vec<usize>,
    faces: Vec<Vec<usize>>,
}

/// Nonempty cycles on the cells of dimension `dim - 1` (as sorted face
/// lists), in a fixed order.
fn cycles(b: &Builder, dim: usize) -> Vec<Vec<usize>> {
    let pool = b.cells_of(dim - 1);
    if dim == 1 {
        let mut out = Vec::new();
        for (i, &x) in pool.iter().enumerate() {
            for &y in &pool[i + 1..] {
                out.push(vec![x, y]);
            }
        }
        return out;
    }
    let n = pool.len();
    if n > 16 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        let chain: Vec<usize> = (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| pool[i])
            .collect();
        let mut boundary = BTreeSet::new();
        for &c in &chain {
            xor_into(&mut boundary, &b.faces[c]);
        }
        if boundary.is_empty() {
            out.push(chain);
        }
    }
    out
}

fn enumerate_above(b: &mut Builder, dim: usize, max_cells: usize, emit: &mut dyn FnMut(&Builder)) {
    emit(b);
    if b.dims.len() >= max_cells || b.cells_of(dim - 1).is_empty() {
        return;
    }
    let options = cycles(b, dim);
    // Cells of this dimension: non-decreasing sequences over `options`.
    fn extend(
        b: &mut Builder,
        dim: usize,
        options: &[Vec<usize>],
        from: usize,
        max_cells: usize,
        emit: &mut dyn FnMut(&Builder),
    ) {
        for k in from..options.len() {
            if b.dims.len() >= max_cells {
                return;
            }
            b.push(dim, 0, options[k].clone());
            enumerate_above(b, dim + 1, max_cells, emit);
            extend(b, dim, options, k, max_cells, emit);
            b.dims.pop();
            b.filtration.pop();
            b.faces.pop();
            b.by_dim[dim].pop();
        }
    }
    extend(b, dim, options.as_slice(), 0, max_cells, emit);
}

/// Visits every monotone filtration of `shape` with values in
/// `0..=max_level`, vertex values non-decreasing.
fn assign_filtrations<F: FnMut(&ChainComplex)>(shape: &Shape, max_level: i64, visit: &mut F) {
    let n = shape.dims.len();
    let mut g = vec![0i64; n];
    fn go<F: FnMut(&ChainComplex)>(
        shape: &Shape,
        i: usize,
        g: &mut Vec<i64>,
        max_level: i64,
        visit: &mut F,
    ) {
        if i == shape.dims.len() {
            let entries = (0..g.len()).map(|c| {
                (
                    Cell::new(c, shape.dims[c], g[c]),
                    shape.faces[c].iter().map(|&f| CellId(f)).collect(),
                )
            });
            visit(&ChainComplex::new(entries).expect("enumerated complexes are well formed"));
            return;
        }
        let mut lo = shape.faces[i].iter().map(|&f| g[f]).max().unwrap_or(0);
        if shape.dims[i] == 0 && i > 0 {
            lo = lo.max(g[i - 1]);
        }
        for v in lo..=max_level {
            g[i] = v;
            go(shape, i + 1, g, max_level, visit);
        }
    }
    go(shape, 0, &mut g, max_level, visit);
}

/// Points in the unit cube with a Vietoris-Rips filtration.
#[derive(Debug, Clone)]
pub struct FlagConfig {
    pub points: usize,
    /// Edges longer than this (in quantized units) are left out.
    pub max_edge: i64,
    /// Distances are multiplied by this and rounded up to integers.
    pub scale: f64,
    pub max_dim: usize,
}

impl Default for FlagConfig {
    fn default() -> Self {
        FlagConfig {
            points: 140,
            max_edge: 35,
            scale: 100.0,
            max_dim: 3,
        }
    }
}

/// Flag complex of random points: vertices enter at 0, an edge at the
/// quantized distance between its endpoints, a clique at its longest edge.
/// Cliques up to `max_dim` vertices + 1 are included.
pub fn flag_complex(seed: u64, config: &FlagConfig) -> ChainComplex {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<[f64; 3]> = (0..config.points)
        .map(|_| [rng.random(), rng.random(), rng.random()])
        .collect();
    let n = pts.len();
    let mut weight = vec![vec![i64::MAX; n]; n];
    let mut adj = vec![Vec::new(); n];
    for i in 0..n {
        for j in i + 1..n {
            let d2: f64 = (0..3).map(|k| (pts[i][k] - pts[j][k]).powi(2)).sum();
            let w = (d2.sqrt() * config.scale).ceil() as i64;
            if w <= config.max_edge {
                weight[i][j] = w;
                weight[j][i] = w;
                adj[i].push(j);
            }
        }
    }

    let mut b = Builder::default();
    for v in 0..n {
        let i = b.push(0, 0, Vec::new());
        b.simplices.insert(vec![v], i);
    }
    // Cliques grown by appending a larger neighbour of every member.
    let mut layer: Vec<Vec<usize>> = (0..n).map(|v| vec![v]).collect();
    for dim in 1..=config.max_dim {
        let mut next = Vec::new();
        for s in &layer {
            let last = *s.last().expect("nonempty");
            for &w in &adj[last] {
                if s.iter().all(|&u| weight[u][w] != i64::MAX) {
                    let mut t = s.clone();
                    t.push(w);
                    next.push(t);
                }
            }
        }
        for t in &next {
            let faces: Vec<usize> = (0..=dim)
                .map(|skip| {
                    let mut f = t.clone();
                    f.remove(skip);
                    b.simplices[&f]
                })
                .collect();
            let g = if dim == 1 {
                weight[t[0]][t[1]]
            } else {
                b.face_level(&faces)
            };
            let i = b.push(dim, g, faces);
            b.simplices.insert(t.clone(), i);
        }
        layer = next;
    }
    let ids: Vec<usize> = (0..b.dims.len()).collect();
    b.finish(&ids)
}
