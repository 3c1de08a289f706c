//! Command-line driver: solves each input file for every requested `k` and
//! prints one record per run.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::Parser;
use kdclub::io::{read_instance, Format, Instance};
use kdclub::oracle::{self, MAX_ORACLE_VERTICES};
use kdclub::report::{emit_records, Emit, RunRecord};
use kdclub::{solve, GraphOptions, SolveStatus, SolverConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_TIMEOUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "kdclub", version, about = "Exact maximum k-defective clique solver")]
pub struct Args {
    /// Graph files (DIMACS clique, edge list or MatrixMarket).
    #[arg(required = true)]
    pub instances: Vec<PathBuf>,

    /// Missing-edge budget; repeat or comma-separate for a sweep.
    #[arg(long = "k", value_delimiter = ',', default_value = "1")]
    pub k: Vec<usize>,

    /// Wall-clock limit per run, in seconds.
    #[arg(long, default_value_t = 1800.0)]
    pub time_limit: f64,

    /// Tie-break seed for the branching order; 0 keeps lowest-id order.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Skip the coloring-bound reduction rules.
    #[arg(long)]
    pub no_club_pre: bool,

    /// Use the degree-based bound instead of the coloring bound in the search.
    #[arg(long)]
    pub no_club_bnb: bool,

    /// Cross-check each answer by exhaustive search (graphs of at most 24 vertices).
    #[arg(long)]
    pub oracle_check: bool,

    /// Input format: auto, dimacs, edge-list or matrix-market.
    #[arg(long, default_value = "auto")]
    pub format: Format,

    /// Write records to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Record encoding: table, csv or json.
    #[arg(long, default_value = "table")]
    pub emit: Emit,

    /// Graph density at which the bit-matrix layout is used.
    #[arg(long, default_value_t = GraphOptions::default().density_threshold)]
    pub density_threshold: f64,

    /// Print each solution, using the ids from the input file, to stderr.
    #[arg(long)]
    pub witness: bool,

    /// Progress messages on stderr.
    #[arg(long)]
    pub trace: bool,
}

fn label_of(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn config_for(args: &Args, k: usize) -> Result<SolverConfig, String> {
    if !(args.time_limit.is_finite() && args.time_limit >= 0.0) {
        return Err(format!("invalid --time-limit {}", args.time_limit));
    }
    Ok(SolverConfig {
        k,
        time_limit: Duration::from_secs_f64(args.time_limit.min(1e9)),
        seed: args.seed,
        club_in_preprocess: !args.no_club_pre,
        club_in_bnb: !args.no_club_bnb,
        density_threshold: args.density_threshold,
        trace: args.trace,
        ..SolverConfig::default()
    })
}

fn run_instance(
    args: &Args,
    label: &str,
    instance: &Instance,
    records: &mut Vec<RunRecord>,
    err: &mut dyn Write,
) -> Result<(), String> {
    let g = &instance.graph;
    for &k in &args.k {
        let config = config_for(args, k)?;
        let result = solve(g, &config);
        if args.witness {
            let labels: Vec<&str> = result.witness.iter().map(|&v| instance.label(v)).collect();
            let _ = writeln!(err, "{label} k={k}: {}", labels.join(" "));
        }
        if args.oracle_check {
            if g.vertex_count() > MAX_ORACLE_VERTICES {
                let _ = writeln!(
                    err,
                    "warning: {label} has {} vertices; oracle check needs at most {MAX_ORACLE_VERTICES}, skipped",
                    g.vertex_count()
                );
            } else if result.status == SolveStatus::Optimal {
                let expected = oracle::maximum(g, k).map_err(|e| e.to_string())?.size;
                if expected != result.best_size {
                    return Err(format!(
                        "{label} k={k}: solver found {} but exhaustive search found {expected}",
                        result.best_size
                    ));
                }
            }
        }
        records.push(RunRecord::new(label, g, &config, &result));
    }
    Ok(())
}

/// Runs the driver with explicit output streams and returns the exit code:
/// 0 when every run finished, 2 when any hit the time limit, 1 on error.
pub fn run_with_io<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(args) => args,
        Err(e) if e.use_stderr() => {
            let _ = write!(err, "{}", e.render());
            return EXIT_ERROR;
        }
        Err(e) => {
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    let mut records = Vec::new();
    for path in &args.instances {
        let label = label_of(path);
        let instance = match read_instance(path, args.format) {
            Ok(i) => i,
            Err(e) => {
                let _ = writeln!(err, "error: {}: {e}", path.display());
                return EXIT_ERROR;
            }
        };
        if args.trace {
            let _ = writeln!(
                err,
                "{label}: |V|={} |E|={}",
                instance.graph.vertex_count(),
                instance.graph.edge_count()
            );
        }
        if let Err(e) = run_instance(&args, &label, &instance, &mut records, err) {
            let _ = writeln!(err, "error: {e}");
            return EXIT_ERROR;
        }
    }
    let bytes = emit_records(&records, args.emit);
    let written = match &args.out {
        Some(path) => fs::write(path, &bytes).map_err(|e| format!("{}: {e}", path.display())),
        None => out.write_all(&bytes).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "error: cannot write records: {e}");
        return EXIT_ERROR;
    }
    if records.iter().any(|r| r.status == SolveStatus::Timeout) {
        EXIT_TIMEOUT
    } else {
        EXIT_OK
    }
}

pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with_io(argv, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}
