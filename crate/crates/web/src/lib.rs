//! Browser bindings. Each export takes plain values and returns a JSON
//! string, so the same functions are tested natively.

use serde::Serialize;
use wasm_bindgen::prelude::wasm_bindgen;

use itermorse::generate::{flag_complex, FlagConfig};
use itermorse::homology::{betti_numbers_traced, IterationTrace};
use itermorse::io::{write_boundary_format, Format};
use itermorse::persistence::{persistence_pipeline_traced, PersistenceInterval};
use itermorse::ChainComplex;

#[derive(Serialize)]
struct Barcode<'a> {
    cells: usize,
    cells_by_dim: Vec<usize>,
    intervals: &'a [PersistenceInterval],
    trace: &'a IterationTrace,
}

#[derive(Serialize)]
struct Homology<'a> {
    cells: usize,
    betti: &'a [usize],
    trace: &'a IterationTrace,
}

#[derive(Serialize)]
struct Simplified<'a> {
    cells: usize,
    boundary: String,
    intervals: &'a [PersistenceInterval],
    trace: &'a IterationTrace,
}

#[derive(Serialize)]
struct Failure {
    error: String,
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("serializable")
}

fn failure(error: impl ToString) -> String {
    json(&Failure {
        error: error.to_string(),
    })
}

fn parse(text: &str, format: &str) -> Result<ChainComplex, String> {
    let format: Format = format.parse()?;
    let complex = format.parse(text).map_err(|e| e.to_string())?;
    let report = complex.validate();
    if !report.is_valid() {
        return Err(report.to_string());
    }
    Ok(complex)
}

/// Persistence barcode of a Vietoris-Rips filtration on `points` random
/// points of the unit cube, edges up to `max_edge` hundredths.
#[wasm_bindgen]
pub fn flag_barcode(points: usize, max_edge: i32, max_dim: usize, seed: u32) -> String {
    if points > 400 || max_dim > 3 {
        return failure("at most 400 points and dimension 3");
    }
    let config = FlagConfig {
        points,
        max_edge: i64::from(max_edge),
        max_dim,
        ..FlagConfig::default()
    };
    let k = flag_complex(u64::from(seed), &config);
    match persistence_pipeline_traced(&k) {
        Ok(r) => json(&Barcode {
            cells: k.len(),
            cells_by_dim: k.count_by_dim(),
            intervals: r.intervals.as_slice(),
            trace: &r.trace,
        }),
        Err(e) => failure(e),
    }
}

/// Betti numbers of a complex pasted in `boundary` or `simplicial` format.
#[wasm_bindgen]
pub fn homology(text: &str, format: &str) -> String {
    let k = match parse(text, format) {
        Ok(k) => k,
        Err(e) => return failure(e),
    };
    match betti_numbers_traced(&k) {
        Ok((betti, trace)) => json(&Homology {
            cells: k.len(),
            betti: &betti,
            trace: &trace,
        }),
        Err(e) => failure(e),
    }
}

/// Filtration-compatible fixpoint of a pasted complex, in boundary format,
/// with its persistence intervals.
#[wasm_bindgen]
pub fn simplify(text: &str, format: &str) -> String {
    let k = match parse(text, format) {
        Ok(k) => k,
        Err(e) => return failure(e),
    };
    match persistence_pipeline_traced(&k) {
        Ok(r) => json(&Simplified {
            cells: r.simplified.len(),
            boundary: write_boundary_format(&r.simplified),
            intervals: r.intervals.as_slice(),
            trace: &r.trace,
        }),
        Err(e) => failure(e),
    }
}
