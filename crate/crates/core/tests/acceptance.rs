//! Acceptance suite. Prints one PASS/FAIL line per criterion.
//!
//! Criteria whose input files are not present (the two random DIMACS
//! benchmarks are not redistributable here) are reported as FAIL with the
//! reason `input unavailable`; they do not change the exit status, every
//! other failure does. Point `KDCLUB_DIMACS_DIR` at a directory holding
//! `C125.9.clq` and `san200_0.7_1.clq` to run them.

mod common;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{corpus, geometric_mean, random_graph, rng, testdata, worked_example, Case, TOGGLES};
use kdclub::bound::{
    club, extract, kdbb_edge_bound, kdbb_vertex_bound, partition_by_deficiency,
    staircase_increment,
};
use kdclub::io::{read_instance, Format};
use kdclub::oracle::{brute_force, maximum};
use kdclub::reduce::{coloring_rule_deletes, degree_rule_deletes, preprocess, ReduceConfig};
use kdclub::report::{emit_records, Emit, RunRecord};
use kdclub::search::fast_lb;
use kdclub::{solve, Graph, GraphOptions, SolveStatus, SolverConfig, Vertex};
use rand::Rng;

const CORPUS_SIZE: usize = 510;
const CORPUS_SEED: u64 = 0x5eed_0001;
const MIN_SOUNDNESS_STATES: usize = 2000;
const ABLATION_GRAPHS: usize = 30;
const ABLATION_SEED: u64 = 0x5eed_0002;

const WORKED_EXAMPLE_BUDGET: Duration = Duration::from_secs(1);
const ORACLE_BUDGET: Duration = Duration::from_secs(600);
const SOUNDNESS_BUDGET: Duration = Duration::from_secs(600);
const STAIRCASE_BUDGET: Duration = Duration::from_secs(1);
const PREPROCESS_BUDGET: Duration = Duration::from_secs(300);
const JOHNSON_BUDGET: Duration = Duration::from_secs(120);
const RANDOM_DIMACS_BUDGET: Duration = Duration::from_secs(600);

enum Verdict {
    Pass(String),
    Fail(String),
    Unavailable(String),
}

type Check = fn() -> Verdict;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Verdict::Fail(format!($($msg)+));
        }
    };
}

fn within(started: Instant, budget: Duration) -> Result<(), String> {
    let spent = started.elapsed();
    if spent <= budget {
        Ok(())
    } else {
        Err(format!("took {:.2}s, budget {:.0}s", spent.as_secs_f64(), budget.as_secs_f64()))
    }
}

fn others(g: &Graph, skip: &[Vertex]) -> Vec<Vertex> {
    g.vertices().filter(|v| !skip.contains(v)).collect()
}

fn worked_example_values() -> Verdict {
    let started = Instant::now();
    for options in [GraphOptions::always_dense(), GraphOptions::always_sparse()] {
        let g = worked_example(options);
        let c = others(&g, &[0]);
        let mut part = partition_by_deficiency(&g, &[0], &c, 1);
        ensure!(part.classes == vec![vec![1, 2, 3, 4, 5], vec![6]], "partition {:?}", part.classes);
        part.color(&g);
        ensure!(part.color_counts == vec![3, 1], "color counts {:?}", part.color_counts);
        let buckets = extract(&g, 1, &[0], &c);
        ensure!(buckets.counts == vec![3, 3], "bucket sizes {:?}", buckets.counts);
        let cb = club(&g, 1, &[0], &c);
        ensure!(cb == 5, "club = {cb}");
        let ub = kdbb_vertex_bound(&g, 1, &[], 0);
        ensure!(ub == 7, "degree bound = {ub}");
        ensure!(!degree_rule_deletes(&g, 1, 6, 0), "degree rule removed v0 at lb 6");
        ensure!(coloring_rule_deletes(&g, 1, 6, 0), "coloring rule kept v0 at lb 6");
    }
    if let Err(e) = within(started, WORKED_EXAMPLE_BUDGET) {
        return Verdict::Fail(e);
    }
    Verdict::Pass("C0={v1..v5} C1={v6}, r=(3,1), |P|=(3,3), club=5, degree bound=7".into())
}

fn oracle_equivalence() -> Verdict {
    let started = Instant::now();
    let cases = corpus(CORPUS_SIZE, CORPUS_SEED);
    let mut runs = 0;
    for (i, case) in cases.iter().enumerate() {
        let expected = maximum(&case.graph, case.k).unwrap().size;
        for (pre, bnb) in TOGGLES {
            let config = SolverConfig {
                club_in_preprocess: pre,
                club_in_bnb: bnb,
                ..SolverConfig::with_k(case.k)
            };
            let r = solve(&case.graph, &config);
            runs += 1;
            ensure!(
                r.status == SolveStatus::Optimal && r.best_size == expected,
                "case {i} (n={}, p={}, k={}, pre={pre}, bnb={bnb}): solver {} vs oracle {expected}",
                case.n,
                case.density,
                case.k,
                r.best_size
            );
        }
    }
    if let Err(e) = within(started, ORACLE_BUDGET) {
        return Verdict::Fail(e);
    }
    Verdict::Pass(format!("{} instances, {runs} runs, all exact", cases.len()))
}

fn bound_dominance() -> Verdict {
    let mut vertex_checks = 0;
    let mut edge_checks = 0;
    for (i, Case { graph: g, k, .. }) in corpus(CORPUS_SIZE, CORPUS_SEED).iter().enumerate() {
        for v in g.vertices() {
            let cb = club(g, *k, &[v], &others(g, &[v]));
            let ub = kdbb_vertex_bound(g, *k, &[], v);
            ensure!(cb <= ub, "case {i} vertex {v}: club {cb} > {ub}");
            vertex_checks += 1;
        }
        for (u, v) in g.edges() {
            let cb = club(g, *k, &[u, v], &others(g, &[u, v]));
            let ub = kdbb_edge_bound(g, *k, &[], u, v);
            ensure!(cb <= ub, "case {i} edge ({u},{v}): club {cb} > {ub}");
            edge_checks += 1;
        }
    }
    Verdict::Pass(format!("{vertex_checks} vertices, {edge_checks} edges"))
}

fn bound_soundness() -> Verdict {
    let started = Instant::now();
    let cases = corpus(CORPUS_SIZE, CORPUS_SEED);
    let mut r = rng(CORPUS_SEED ^ 0xabc);
    let mut states = 0;
    let mut tight = 0;
    while states < MIN_SOUNDNESS_STATES {
        for (i, case) in cases.iter().enumerate() {
            let (s, c) = common::random_state(&case.graph, case.k, &mut r);
            let mut allowed = s.clone();
            allowed.extend(&c);
            let truth = brute_force(&case.graph, case.k, &s, &allowed).unwrap().size;
            let cb = club(&case.graph, case.k, &s, &c);
            ensure!(cb >= truth, "case {i} S={s:?}: club {cb} < optimum {truth}");
            tight += usize::from(cb == truth);
            states += 1;
        }
    }
    if let Err(e) = within(started, SOUNDNESS_BUDGET) {
        return Verdict::Fail(e);
    }
    Verdict::Pass(format!("{states} states, bound tight on {tight}"))
}

fn staircase_exactness() -> Verdict {
    fn best(r: usize, t: usize) -> usize {
        if r == 1 {
            return t * t.saturating_sub(1) / 2;
        }
        (0..=t)
            .map(|x| x * x.saturating_sub(1) / 2 + best(r - 1, t - x))
            .min()
            .unwrap()
    }
    let started = Instant::now();
    for r in 1..=5 {
        for t in 0..=12 {
            let got = staircase_increment(r, t);
            let want = best(r, t);
            ensure!(got == want, "r={r} t={t}: {got} vs {want}");
        }
    }
    if let Err(e) = within(started, STAIRCASE_BUDGET) {
        return Verdict::Fail(e);
    }
    Verdict::Pass("r <= 5, t <= 12".into())
}

fn preprocessing_safety() -> Verdict {
    let started = Instant::now();
    let mut removed = 0;
    let cases = corpus(CORPUS_SIZE, CORPUS_SEED);
    for (i, case) in cases.iter().enumerate() {
        let (lb, _) = fast_lb(&case.graph, case.k);
        let before = maximum(&case.graph, case.k).unwrap().size;
        for use_club in [true, false] {
            let config = ReduceConfig {
                use_club,
                ..ReduceConfig::default()
            };
            let mut h = case.graph.clone();
            let first = preprocess(&mut h, case.k, lb, &config);
            removed += first.vertices_removed();
            let after = maximum(&h, case.k).unwrap().size;
            ensure!(
                after.max(lb) == before.max(lb),
                "case {i} club={use_club}: lb {lb}, optimum {before} -> {after}"
            );
            let second = preprocess(&mut h, case.k, lb, &config);
            ensure!(
                second.vertices_removed() + second.edges_removed() == 0,
                "case {i} club={use_club}: second pass removed {} vertices, {} edges",
                second.vertices_removed(),
                second.edges_removed()
            );
        }
    }
    if let Err(e) = within(started, PREPROCESS_BUDGET) {
        return Verdict::Fail(e);
    }
    Verdict::Pass(format!("{} instances, {removed} vertices removed in total", cases.len()))
}

/// Solves `g` under every toggle combination; all must finish inside
/// `budget` and agree.
fn agreeing_runs(name: &str, g: &Graph, k: usize, budget: Duration) -> Result<String, String> {
    let mut sizes = Vec::new();
    let mut default_run = String::new();
    for (pre, bnb) in TOGGLES {
        let config = SolverConfig {
            club_in_preprocess: pre,
            club_in_bnb: bnb,
            time_limit: budget,
            ..SolverConfig::with_k(k)
        };
        let r = solve(g, &config);
        if r.status != SolveStatus::Optimal {
            return Err(format!("{name} k={k} pre={pre} bnb={bnb}: not solved within {budget:?}"));
        }
        if pre && bnb {
            default_run = format!(
                "{name} k={k}: size {} in {:.2}s, {} nodes",
                r.best_size,
                r.total_time.as_secs_f64(),
                r.tree_nodes
            );
        }
        sizes.push(r.best_size);
    }
    if sizes.iter().any(|&s| s != sizes[0]) {
        return Err(format!("{name} k={k}: toggles disagree {sizes:?}"));
    }
    Ok(default_run)
}

fn desk_johnson() -> Verdict {
    let path = testdata("johnson8-4-4.clq");
    let g = match read_instance(&path, Format::Auto) {
        Ok(inst) => inst.graph,
        Err(e) => return Verdict::Fail(format!("{}: {e}", path.display())),
    };
    ensure!(g.vertex_count() == 70 && g.edge_count() == 1855, "fixture is not 70/1855");
    let mut lines = Vec::new();
    for k in [1, 3] {
        match agreeing_runs("johnson8-4-4", &g, k, JOHNSON_BUDGET) {
            Ok(line) => lines.push(line),
            Err(e) => return Verdict::Fail(e),
        }
    }
    Verdict::Pass(lines.join("; "))
}

fn find_dimacs(names: &[&str]) -> Option<PathBuf> {
    let mut dirs = Vec::new();
    if let Some(dir) = std::env::var_os("KDCLUB_DIMACS_DIR") {
        dirs.push(PathBuf::from(dir));
    }
    dirs.push(testdata(""));
    dirs.iter()
        .flat_map(|d| names.iter().map(move |n| d.join(n)))
        .find(|p| p.is_file())
}

fn desk_random_dimacs(label: &str, names: &[&str], shape: (usize, usize)) -> Verdict {
    let Some(path) = find_dimacs(names) else {
        return Verdict::Unavailable(format!(
            "{label}: none of {names:?} found in KDCLUB_DIMACS_DIR or testdata"
        ));
    };
    let g = match read_instance(&path, Format::Auto) {
        Ok(inst) => inst.graph,
        Err(e) => return Verdict::Fail(format!("{}: {e}", path.display())),
    };
    ensure!(
        (g.vertex_count(), g.edge_count()) == shape,
        "{} has |V|={} |E|={}, expected {shape:?}",
        path.display(),
        g.vertex_count(),
        g.edge_count()
    );
    match agreeing_runs(label, &g, 3, RANDOM_DIMACS_BUDGET) {
        Ok(line) => Verdict::Pass(line),
        Err(e) => Verdict::Fail(e),
    }
}

fn desk_c125() -> Verdict {
    desk_random_dimacs("C125-9", &["C125.9.clq", "C125-9.clq", "C125.9"], (125, 6963))
}

fn desk_san200() -> Verdict {
    desk_random_dimacs(
        "san200-0-7-1",
        &["san200_0.7_1.clq", "san200-0-7-1.clq", "san200_0.7_1"],
        (200, 13930),
    )
}

fn ablation_signal() -> Verdict {
    let mut r = rng(ABLATION_SEED);
    let mut with_club = Vec::new();
    let mut without = Vec::new();
    for i in 0..ABLATION_GRAPHS {
        let n = r.gen_range(40..=80);
        let g = random_graph(n, 0.5, &mut r);
        let mut sizes = [0; 2];
        for (slot, bnb) in [true, false].into_iter().enumerate() {
            let config = SolverConfig {
                club_in_bnb: bnb,
                ..SolverConfig::with_k(3)
            };
            let res = solve(&g, &config);
            ensure!(res.status == SolveStatus::Optimal, "graph {i}: timeout");
            sizes[slot] = res.best_size;
            if bnb {
                with_club.push(res.tree_nodes);
            } else {
                without.push(res.tree_nodes);
            }
        }
        ensure!(sizes[0] == sizes[1], "graph {i}: sizes differ {sizes:?}");
    }
    let a = geometric_mean(&with_club);
    let b = geometric_mean(&without);
    ensure!(a.total_cmp(&b).is_lt(), "geometric mean nodes {a:.1} (coloring) vs {b:.1} (degree)");
    Verdict::Pass(format!(
        "geometric mean tree nodes {a:.1} with coloring bound vs {b:.1} without ({:.2}x)",
        b / a
    ))
}

fn determinism() -> Verdict {
    let mut graphs: Vec<(String, Graph, usize)> = corpus(30, CORPUS_SEED ^ 0x77)
        .into_iter()
        .enumerate()
        .map(|(i, c)| (format!("random-{i}"), c.graph, c.k))
        .collect();
    let mut r = rng(9);
    graphs.push(("dense-60".into(), random_graph(60, 0.6, &mut r), 2));
    if let Ok(inst) = read_instance(&testdata("johnson8-4-4.clq"), Format::Auto) {
        graphs.push(("johnson8-4-4".into(), inst.graph, 3));
    }
    let emit = |seed: u64| -> Vec<u8> {
        let records: Vec<RunRecord> = graphs
            .iter()
            .map(|(name, g, k)| {
                let config = SolverConfig {
                    seed,
                    ..SolverConfig::with_k(*k)
                };
                RunRecord::new(name, g, &config, &solve(g, &config)).without_timing()
            })
            .collect();
        emit_records(&records, Emit::Csv)
    };
    for seed in [0, 12345] {
        let first = emit(seed);
        let second = emit(seed);
        ensure!(first == second, "seed {seed}: CSV differs between repeats");
    }
    Verdict::Pass(format!("{} runs x 2 seeds, byte-identical CSV", graphs.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, Check); 11] = [
        ("worked example", worked_example_values),
        ("oracle equivalence", oracle_equivalence),
        ("bound dominance", bound_dominance),
        ("bound soundness", bound_soundness),
        ("staircase exactness", staircase_exactness),
        ("preprocessing safety and fixed point", preprocessing_safety),
        ("desk-scale johnson8-4-4", desk_johnson),
        ("desk-scale C125-9", desk_c125),
        ("desk-scale san200-0-7-1", desk_san200),
        ("ablation signal", ablation_signal),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    let mut unavailable = 0;
    for (name, check) in criteria {
        let started = Instant::now();
        let verdict = check();
        let secs = started.elapsed().as_secs_f64();
        match verdict {
            Verdict::Pass(detail) => println!("PASS  {name}  [{secs:.2}s]  {detail}"),
            Verdict::Fail(detail) => {
                failed += 1;
                println!("FAIL  {name}  [{secs:.2}s]  {detail}");
            }
            Verdict::Unavailable(detail) => {
                unavailable += 1;
                println!("FAIL  {name}  [{secs:.2}s]  input unavailable: {detail}");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed, {unavailable} failed for missing input",
        criteria.len() - failed - unavailable
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
