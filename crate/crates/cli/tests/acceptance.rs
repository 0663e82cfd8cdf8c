//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines are always printed.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use itermorse::generate::{
    enumerate_complexes, flag_complex, random_complex, FlagConfig, RandomConfig,
};
use itermorse::homology::{iterate_to_fixpoint, iterate_with};
use itermorse::io::{write_boundary_format, Format};
use itermorse::morse::{morse_complex_from_matching, PathCounter};
use itermorse::oracle::{betti_rank_oracle, build_matrix, matrix_reduce, oracle_intervals};
use itermorse::persistence::{
    persistence_in_level_order, persistence_observed, simplify_filtered_traced,
};
use itermorse::{
    build_morse_graph, chain_add, Cell, CellId, Chain, ChainComplex, Death, Matching,
    MatchingPolicy, PersistenceInterval as I, PersistenceIntervals,
};

const DUNCE_LIMIT: Duration = Duration::from_secs(1);
const EQUIVALENCE_LIMIT: Duration = Duration::from_secs(60);
const FLAG_LIMIT: Duration = Duration::from_secs(300);
const RANDOM_INSTANCES: u64 = 1000;
const EXHAUSTIVE_CELLS: usize = 8;
const EXHAUSTIVE_LEVELS: i64 = 2;
const FLAG_SEED: u64 = 2026;

type Outcome = Result<String, String>;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(name)
}

fn load(name: &str) -> ChainComplex {
    let path = fixture(name);
    Format::from_path(&path)
        .unwrap()
        .parse(&std::fs::read_to_string(&path).unwrap())
        .unwrap()
}

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_itermorse"))
        .args(args)
        .output()
        .expect("cli runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn id(v: usize) -> CellId {
    CellId(v)
}

fn dunce_hat() -> Outcome {
    let path = fixture("dunce.smp");
    let start = Instant::now();
    let out = cli(&["homology", path.to_str().unwrap()]);
    let elapsed = start.elapsed();
    ensure(out.status.success(), || {
        format!("exit {:?}", out.status.code())
    })?;
    ensure(stdout_of(&out) == "1 0 0\n", || {
        format!("betti {:?}", stdout_of(&out))
    })?;
    ensure(elapsed < DUNCE_LIMIT, || format!("took {elapsed:?}"))?;
    let (fix, trace) = iterate_to_fixpoint(&load("dunce.smp"), &MatchingPolicy::unconstrained())
        .map_err(|e| e.to_string())?;
    ensure(fix.len() == 1, || {
        format!("fixpoint has {} cells", fix.len())
    })?;
    Ok(format!(
        "betti 1 0 0, fixpoint sizes {:?}, cli {elapsed:.2?}",
        trace.sizes
    ))
}

fn two_cones() -> Outcome {
    let path = fixture("fig8.bnd");
    let out = cli(&["persist", path.to_str().unwrap()]);
    let expected = "0 1 3\n0 1 inf\n1 4 6\n1 5 6\n";
    ensure(stdout_of(&out) == expected, || {
        format!("persist printed {:?}", stdout_of(&out))
    })?;
    let k = load("fig8.bnd");
    let (s, _) = simplify_filtered_traced(&k).map_err(|e| e.to_string())?;
    let oracle = oracle_intervals(&k).map_err(|e| e.to_string())?.intervals;
    let law = 2 * oracle.finite_count() + oracle.infinite_count();
    ensure(s.len() == 7 && law == 7, || {
        format!("fixpoint {} cells, 2p+k = {law}", s.len())
    })?;
    Ok(format!(
        "4 intervals, fixpoint 7 cells = 2*{} + {}",
        oracle.finite_count(),
        oracle.infinite_count()
    ))
}

fn square_reduction() -> Outcome {
    let path = fixture("fig10.bnd");
    let out = cli(&["reduce", path.to_str().unwrap()]);
    let expected = "0 0 1\n0 0 1\n0 0 2\n0 0 inf\n1 3 inf\n";
    ensure(stdout_of(&out) == expected, || {
        format!("reduce printed {:?}", stdout_of(&out))
    })?;
    let names = ["a", "b", "c", "d", "ab", "ac", "bd", "cd"];
    let m = build_matrix(&load("fig10.bnd"));
    let name = |pos: usize| names[m.order()[pos].id.0];
    let adds: Vec<String> = matrix_reduce(&m)
        .additions
        .iter()
        .map(|a| format!("{}+={}", name(a.target), name(a.source)))
        .collect();
    ensure(adds == ["cd+=bd", "cd+=ac", "cd+=ab"], || {
        format!("additions {adds:?}")
    })?;
    Ok(format!("additions {}", adds.join(", ")))
}

fn level_order() -> Outcome {
    let path = fixture("fig12.bnd");
    let out = cli(&["check", path.to_str().unwrap()]);
    ensure(out.status.code() == Some(0), || {
        format!("check exit {:?}", out.status.code())
    })?;
    ensure(stdout_of(&out) == "0 0 1\n0 0 inf\n1 2 inf\n", || {
        format!("check printed {:?}", stdout_of(&out))
    })?;
    let wrong =
        persistence_in_level_order(&load("fig12.bnd"), &[2, 1]).map_err(|e| e.to_string())?;
    let expected = PersistenceIntervals::new(vec![
        I::finite(0, 0, 2),
        I::infinite(0, 0),
        I::infinite(1, 1),
    ]);
    ensure(wrong == expected, || {
        format!("reversed levels gave {:?}", wrong.to_string())
    })?;
    Ok("in order {[0,1],[0,inf],[2,inf]}; reversed {[0,2],[0,inf],[1,inf]}".into())
}

/// Failures found on one instance, per criterion 5, 6 and 7.
#[derive(Default)]
struct Tally {
    instances: usize,
    failures: [Vec<String>; 3],
}

impl Tally {
    fn record(&mut self, which: usize, k: &ChainComplex, what: String) {
        if self.failures[which].len() < 3 {
            self.failures[which].push(format!("{what}\n{}", write_boundary_format(k)));
        }
    }
}

fn examine(k: &ChainComplex, tally: &mut Tally) {
    tally.instances += 1;
    let oracle = match oracle_intervals(k) {
        Ok(o) => o.intervals,
        Err(e) => return tally.record(0, k, format!("oracle failed: {e}")),
    };
    let betti = betti_rank_oracle(k).expect("valid input");

    // Structural checks run along every loop of the pipeline.
    let mut structural = Vec::new();
    let mut observe = |c: &ChainComplex, m: &Matching, track_betti: bool| {
        match build_morse_graph(c, m) {
            Ok(g) => {
                if let Err(w) = g.assert_acyclic() {
                    structural.push(format!("cyclic Morse graph: {w}"));
                }
            }
            Err(e) => structural.push(format!("graph: {e}")),
        }
        if !c.validate().is_valid() {
            structural.push(format!("invalid Morse complex: {}", c.validate()));
        }
        if track_betti {
            let mut b = betti_rank_oracle(c).expect("chain complex");
            b.resize(betti.len(), 0);
            if b != betti {
                structural.push(format!("betti changed to {b:?} from {betti:?}"));
            }
        }
    };
    let unconstrained = iterate_with(k, &MatchingPolicy::unconstrained(), |c, m| {
        observe(c, m, true)
    });
    let compatible = iterate_with(k, &MatchingPolicy::filtration_compatible(), |c, m| {
        observe(c, m, false)
    });
    let (Ok((fix, _)), Ok((simplified, _))) = (unconstrained, compatible) else {
        return tally.record(0, k, "iteration failed".into());
    };
    let mut fixpoint_betti = vec![0; betti.len()];
    for c in fix.cells() {
        fixpoint_betti[c.dim] += 1;
    }
    if fixpoint_betti != betti {
        structural.push(format!(
            "betti_numbers {fixpoint_betti:?} != rank oracle {betti:?}"
        ));
    }

    let levels = simplified.filtration_levels();
    let ours = persistence_observed(&simplified, levels.get(1..).unwrap_or(&[]), |c| {
        if !c.validate().is_valid() {
            structural.push(format!("invalid complex in level loop: {}", c.validate()));
        }
    });
    let ours = match ours {
        Ok(i) => i,
        Err(e) => return tally.record(0, k, format!("persistence failed: {e}")),
    };
    for i in ours.iter() {
        if let Death::Finite(d) = i.death {
            if d <= i.birth {
                structural.push(format!("non-positive interval {i}"));
            }
        }
    }

    if ours != oracle {
        tally.record(0, k, format!("morse:\n{ours}oracle:\n{oracle}"));
    }
    let law = 2 * oracle.finite_count() + oracle.infinite_count();
    if simplified.len() != law {
        tally.record(1, k, format!("{} cells, 2p+k = {law}", simplified.len()));
    }
    for s in structural {
        tally.record(2, k, s);
    }
}

fn equivalence_sweep() -> (Tally, Duration) {
    let start = Instant::now();
    let mut tally = Tally::default();
    enumerate_complexes(EXHAUSTIVE_CELLS, EXHAUSTIVE_LEVELS, |k| {
        examine(k, &mut tally)
    });
    let config = RandomConfig::default();
    for seed in 0..RANDOM_INSTANCES {
        examine(&random_complex(seed, &config), &mut tally);
    }
    (tally, start.elapsed())
}

fn report(tally: &Tally, which: usize, elapsed: Option<Duration>, what: &str) -> Outcome {
    if let Some(f) = tally.failures[which].first() {
        return Err(format!(
            "{} failing instance(s) shown, first:\n{f}",
            tally.failures[which].len()
        ));
    }
    if let Some(t) = elapsed {
        ensure(t < EQUIVALENCE_LIMIT, || format!("sweep took {t:?}"))?;
    }
    let time = elapsed.map_or(String::new(), |t| format!(" in {t:.1?}"));
    Ok(format!("{what} on {} instances{time}", tally.instances))
}

/// Morse complex of one pair against `(∂A_i \ b) Δ (∂A \ b)`.
fn single_pair_holds(k: &ChainComplex, b: CellId, a: CellId) -> Result<(), String> {
    let m = Matching::new(k, vec![(b, a)]).map_err(|e| e.to_string())?;
    let morse = morse_complex_from_matching(k, &m).map_err(|e| e.to_string())?;
    let del_a = k.boundary_of(a).unwrap();
    let strip = |x: &Chain, c: CellId| Chain::from_cells(x.dim(), x.iter().filter(|&f| f != c));
    for c in morse.cells() {
        let bd = k.boundary_of(c.id).unwrap();
        let expected = if bd.contains(b) {
            chain_add(&strip(&bd, b), &strip(&del_a, b)).unwrap()
        } else {
            strip(&bd, a)
        };
        let got = morse.boundary_of(c.id).unwrap();
        if got != expected {
            return Err(format!(
                "pair ({b}, {a}), cell {}: {got:?} != {expected:?}",
                c.id
            ));
        }
    }
    Ok(())
}

fn path_parity() -> Outcome {
    let v = |i: usize| (Cell::new(i, 0, 0), vec![]);
    let e = |i: usize, a: usize, b: usize| (Cell::new(i, 1, 0), vec![id(a), id(b)]);
    let t = |i: usize, f: [usize; 3]| (Cell::new(i, 2, 0), f.map(id).to_vec());
    let fig3 = ChainComplex::new(vec![
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
    .unwrap();
    let m = Matching::new(&fig3, vec![(id(5), id(11)), (id(6), id(12))]).unwrap();
    let g = build_morse_graph(&fig3, &m).map_err(|e| e.to_string())?;
    let kappa = PathCounter::new(&g, id(10), m.critical())
        .map_err(|e| e.to_string())?
        .residue(id(8));
    ensure(kappa == 0, || format!("kappa(A, d) = {kappa}"))?;

    let (mut complexes, mut pairs) = (0usize, 0usize);
    let mut first_failure = None;
    enumerate_complexes(EXHAUSTIVE_CELLS, 0, |k| {
        complexes += 1;
        for c in k.cells() {
            for f in k.boundary_of(c.id).unwrap().iter() {
                pairs += 1;
                if let Err(e) = single_pair_holds(k, f, c.id) {
                    first_failure.get_or_insert(e);
                }
            }
        }
    });
    if let Some(e) = first_failure {
        return Err(e);
    }
    Ok(format!(
        "kappa(A, d) = 0; formula holds for {pairs} pairs on {complexes} complexes"
    ))
}

fn parse_trace(stderr: &str) -> Option<Vec<usize>> {
    let line = stderr.lines().find(|l| l.starts_with("trace: sizes "))?;
    let body = line.trim_start_matches("trace: sizes ");
    body.split(" (")
        .next()?
        .split_whitespace()
        .map(|s| s.parse().ok())
        .collect()
}

fn scalability() -> Outcome {
    let k = flag_complex(FLAG_SEED, &FlagConfig::default());
    ensure((5_000..=20_000).contains(&k.len()), || {
        format!("flag complex has {} cells", k.len())
    })?;
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR"));
    std::fs::create_dir_all(dir).map_err(|e| e.to_string())?;
    let path = dir.join("flag.bnd");
    std::fs::write(&path, write_boundary_format(&k)).map_err(|e| e.to_string())?;
    let p = path.to_str().unwrap();

    let start = Instant::now();
    let persist = cli(&["persist", "--trace", p]);
    let check = cli(&["check", "--trace", p]);
    let elapsed = start.elapsed();
    ensure(persist.status.success(), || {
        format!("persist exit {:?}", persist.status.code())
    })?;
    ensure(check.status.code() == Some(0), || {
        format!(
            "check exit {:?}: {}",
            check.status.code(),
            String::from_utf8_lossy(&check.stderr)
        )
    })?;
    ensure(elapsed < FLAG_LIMIT, || format!("took {elapsed:?}"))?;
    let sizes = parse_trace(&String::from_utf8_lossy(&persist.stderr)).ok_or("no trace printed")?;
    ensure(sizes.windows(2).all(|w| w[0] > w[1]), || {
        format!("sizes {sizes:?}")
    })?;
    let dims = k.count_by_dim();
    Ok(format!(
        "{} cells {dims:?}, trace {sizes:?}, persist+check {elapsed:.1?}",
        k.len()
    ))
}

fn main() {
    let (tally, elapsed) = equivalence_sweep();
    let criteria: Vec<(&str, Outcome)> = vec![
        ("dunce hat homology", dunce_hat()),
        ("two-cone persistence and fixpoint", two_cones()),
        ("square matrix reduction", square_reduction()),
        ("level order on the two-edge circle", level_order()),
        (
            "oracle equivalence",
            report(&tally, 0, Some(elapsed), "pipeline == oracle"),
        ),
        (
            "cardinality law",
            report(&tally, 1, None, "|fixpoint| = 2p + k"),
        ),
        (
            "structural invariants",
            report(&tally, 2, None, "acyclic, valid, positive, betti stable"),
        ),
        ("path-count parity and single-pair formula", path_parity()),
        ("flag complex scalability", scalability()),
    ];
    let mut failed = 0;
    for (n, (name, outcome)) in criteria.iter().enumerate() {
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail}", n + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why}", n + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
