//! The `collatz-lab` command line.
//!
//! Exit codes: 0 when everything ran and every check passed, 1 for usage
//! or I/O errors, 2 when a sweep or search turned up a counterexample.
//! Results go to standard output (or `--out`); progress goes to standard error.

pub mod args;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::Parser;
use serde::Serialize;

use collatz_lab::beta_chain::verify_beta_chain_range;
use collatz_lab::blocks::verify_blocks_range;
use collatz_lab::dynamics::convergence_sweep;
use collatz_lab::polyline::verify_polyline_range;
use collatz_lab::residue::verify_transitions_with;
use collatz_lab::{
    backward_tree, classify, records_sweep, search_cycles, to_polyline, trajectory, ClassifiedInt,
    CollatzMap, CycleSolution, Nat, RecordKind,
};

use crate::args::{
    Cli, Command, CyclesAction, Format, MapArg, RecordArg, VerifyArgs, VerifyTarget,
};
use crate::report::{export_report, ConfigEcho, VerificationReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_COUNTEREXAMPLE: i32 = 2;

type Failure = Box<dyn std::error::Error + Send + Sync>;

/// The class transition table used by `verify transitions`.
pub type TransitionTable = fn(&ClassifiedInt) -> ClassifiedInt;

/// Replaceable internals, so tests can feed in a corrupted table.
#[derive(Clone, Copy)]
pub struct Hooks {
    pub transition: TransitionTable,
}

impl Default for Hooks {
    fn default() -> Self {
        Hooks {
            transition: collatz_lab::transition_symbolic,
        }
    }
}

pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, stdout, stderr, &Hooks::default())
}

pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write, hooks: &Hooks) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{e}");
                    EXIT_ERROR
                }
            };
        }
    };
    match execute(&cli, stdout, stderr, hooks) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_ERROR
        }
    }
}

fn execute(
    cli: &Cli,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
    hooks: &Hooks,
) -> Result<i32, Failure> {
    let format = cli.output.format;
    let workers = match cli.output.workers {
        Some(w) => w,
        None => std::thread::available_parallelism().map_or(1, |n| n.get() as u64),
    };
    let (bytes, code) = match &cli.command {
        Command::Classify { n } => (classify_cmd(&n.parse()?, format)?, EXIT_OK),
        Command::Trajectory { n, map, limit } => {
            (trajectory_cmd(&n.parse()?, *map, *limit, format)?, EXIT_OK)
        }
        Command::Polyline { n } => (polyline_cmd(&n.parse()?, format)?, EXIT_OK),
        Command::Verify(v) => verify_cmd(v, workers, format, stderr, hooks)?,
        Command::Cycles {
            action: CyclesAction::Search { n_max, budget },
        } => cycles_cmd(*n_max, *budget, format)?,
        Command::Records { kind, max, limit } => {
            (records_cmd(*kind, *max, *limit, format)?, EXIT_OK)
        }
        Command::Tree { depth } => (tree_cmd(*depth, format)?, EXIT_OK),
    };
    match &cli.output.out {
        Some(path) => std::fs::write(path, &bytes)
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?,
        None => stdout.write_all(&bytes)?,
    }
    Ok(code)
}

fn to_json<T: Serialize>(v: &T) -> Result<Vec<u8>, Failure> {
    let mut out = serde_json::to_vec_pretty(v)?;
    out.push(b'\n');
    Ok(out)
}

fn to_csv<const N: usize>(
    header: [&str; N],
    rows: impl IntoIterator<Item = [String; N]>,
) -> Result<Vec<u8>, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    Ok(w.into_inner().map_err(|e| e.to_string())?)
}

fn classify_cmd(z: &Nat, format: Format) -> Result<Vec<u8>, Failure> {
    let c = classify(z);
    let (z, class, k) = (z.to_string(), c.class.name().to_string(), c.k.to_string());
    match format {
        Format::Text => Ok(format!("{z} = {} (k={k})\n", c.class.symbol()).into_bytes()),
        Format::Json => to_json(&serde_json::json!({ "z": z, "class": class, "k": k })),
        Format::Csv => to_csv(["z", "class", "k"], [[z, class, k]]),
    }
}

fn trajectory_cmd(z: &Nat, map: MapArg, limit: u64, format: Format) -> Result<Vec<u8>, Failure> {
    let map = match map {
        MapArg::C => CollatzMap::C,
        MapArg::T => CollatzMap::T,
    };
    let t = trajectory(z, map, limit)?;
    let values: Vec<String> = t.values.iter().map(Nat::to_string).collect();
    match format {
        Format::Text => Ok(format!("{}\nsteps: {}\n", values.join(" "), t.steps).into_bytes()),
        Format::Json => to_json(&serde_json::json!({
            "start": z.to_string(),
            "map": if map == CollatzMap::C { "C" } else { "T" },
            "steps": t.steps.to_string(),
            "values": values,
        })),
        Format::Csv => to_csv(
            ["step", "value"],
            values
                .into_iter()
                .enumerate()
                .map(|(i, v)| [i.to_string(), v]),
        ),
    }
}

fn polyline_cmd(z: &Nat, format: Format) -> Result<Vec<u8>, Failure> {
    let p = to_polyline(z);
    let class = collatz_lab::class_from_polyline(&p);
    let (x, s) = (p.x().to_string(), p.s().to_string());
    match format {
        Format::Text => Ok(format!("{z} = {p} {}\n", class.symbol()).into_bytes()),
        Format::Json => to_json(&serde_json::json!({
            "z": z.to_string(), "x": x, "s": s, "class": class.name(),
        })),
        Format::Csv => to_csv(
            ["z", "x", "s", "class"],
            [[z.to_string(), x, s, class.name().into()]],
        ),
    }
}

fn verify_cmd(
    v: &VerifyArgs,
    workers: u64,
    format: Format,
    stderr: &mut dyn Write,
    hooks: &Hooks,
) -> Result<(Vec<u8>, i32), Failure> {
    let target = v.target;
    let start = v.start.unwrap_or(target.default_start());
    let max = v.max.unwrap_or(target.default_max());
    if start > max {
        return Err(format!("empty range: --start {start} exceeds --max {max}").into());
    }
    if start == 0 && target.default_start() == 1 {
        return Err(format!(
            "verify {} ranges over positive integers; --start must be >= 1",
            target.name()
        )
        .into());
    }
    let _ = writeln!(
        stderr,
        "verify {}: {start}..={max} on {workers} worker(s)",
        target.name()
    );
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(usize::try_from(workers)?)
        .build()?;
    let range = start..=max;
    let limit = v.limit;
    let table = hooks.transition;
    let began = Instant::now();
    let sweep = pool.install(|| match target {
        VerifyTarget::Transitions => verify_transitions_with(range, table),
        VerifyTarget::BetaChain => verify_beta_chain_range(range),
        VerifyTarget::Blocks => verify_blocks_range(range, limit),
        VerifyTarget::Polyline => verify_polyline_range(range),
        VerifyTarget::Convergence => convergence_sweep(range, limit),
    });
    let report = VerificationReport::new(
        format!("verify {}", target.name()),
        &sweep,
        began.elapsed(),
        ConfigEcho {
            target: target.name().into(),
            start,
            max,
            step_limit: limit,
            workers,
        },
    );
    let _ = writeln!(stderr, "done in {} ms", report.elapsed_ms);
    let code = if report.passed() {
        EXIT_OK
    } else {
        EXIT_COUNTEREXAMPLE
    };
    Ok((export_report(&report, format)?, code))
}

#[derive(Serialize)]
struct SolutionRow {
    n: String,
    m_seq: Vec<String>,
    e_seq: Vec<String>,
    k0: String,
    is_integer: bool,
    is_nonneg: bool,
    simulated_ok: bool,
    trivial: bool,
}

impl From<&CycleSolution> for SolutionRow {
    fn from(s: &CycleSolution) -> Self {
        let strings = |xs: &[u64]| xs.iter().map(u64::to_string).collect();
        SolutionRow {
            n: s.candidate.n().to_string(),
            m_seq: strings(s.candidate.m_seq()),
            e_seq: strings(s.candidate.e_seq()),
            k0: s.k0.to_string(),
            is_integer: s.is_integer,
            is_nonneg: s.is_nonneg,
            simulated_ok: s.simulated_ok,
            trivial: s.is_trivial_cycle(),
        }
    }
}

fn cycles_cmd(n_max: usize, budget: u64, format: Format) -> Result<(Vec<u8>, i32), Failure> {
    let solutions = search_cycles(n_max, budget)?;
    let rows: Vec<SolutionRow> = solutions.iter().map(Into::into).collect();
    let code = if rows.iter().all(|r| r.trivial) {
        EXIT_OK
    } else {
        EXIT_COUNTEREXAMPLE
    };
    let bytes = match format {
        Format::Text => {
            let mut s = format!(
                "cycles search (n <= {n_max}, budget {budget}): {} solution(s)\n",
                rows.len()
            );
            for r in &rows {
                s.push_str(&format!(
                    "  n={} m=[{}] e=[{}] k0={}{}{}\n",
                    r.n,
                    r.m_seq.join(","),
                    r.e_seq.join(","),
                    r.k0,
                    if r.simulated_ok {
                        " simulated"
                    } else {
                        " not-simulated"
                    },
                    if r.trivial {
                        " (trivial cycle 1 → 4 → 2)"
                    } else {
                        ""
                    }
                ));
            }
            s.into_bytes()
        }
        Format::Json => to_json(&serde_json::json!({
            "command": "cycles search",
            "n_max": n_max.to_string(),
            "budget": budget.to_string(),
            "solutions": rows,
        }))?,
        Format::Csv => to_csv(
            [
                "n",
                "m_seq",
                "e_seq",
                "k0",
                "is_integer",
                "is_nonneg",
                "simulated_ok",
            ],
            rows.iter().map(|r| {
                [
                    r.n.clone(),
                    r.m_seq.join(" "),
                    r.e_seq.join(" "),
                    r.k0.clone(),
                    r.is_integer.to_string(),
                    r.is_nonneg.to_string(),
                    r.simulated_ok.to_string(),
                ]
            }),
        )?,
    };
    Ok((bytes, code))
}

fn records_cmd(kind: RecordArg, max: u64, limit: u64, format: Format) -> Result<Vec<u8>, Failure> {
    let (kind, name) = match kind {
        RecordArg::Delay => (RecordKind::Delay, "delay"),
        RecordArg::Glide => (RecordKind::Glide, "glide"),
    };
    let table = records_sweep(max, kind, limit)?;
    let rows = table
        .entries
        .iter()
        .map(|e| [e.n.to_string(), e.value.to_string()]);
    match format {
        Format::Text => {
            let mut s = format!("{name} records up to {max}: {}\n", table.entries.len());
            for [n, v] in rows {
                s.push_str(&format!("{n:>12} {v:>6}\n"));
            }
            Ok(s.into_bytes())
        }
        Format::Json => to_json(&serde_json::json!({
            "kind": name,
            "max": max.to_string(),
            "entries": rows.map(|[n, value]| serde_json::json!({ "n": n, "value": value })).collect::<Vec<_>>(),
        })),
        Format::Csv => to_csv(["n", "value"], rows),
    }
}

fn tree_cmd(depth: u64, format: Format) -> Result<Vec<u8>, Failure> {
    let tree = backward_tree(depth);
    let rows = tree.nodes.iter().map(|n| {
        [
            n.value.to_string(),
            n.depth.to_string(),
            n.parent.as_ref().map(Nat::to_string).unwrap_or_default(),
        ]
    });
    match format {
        Format::Text => {
            let mut s = format!(
                "backward tree to depth {depth}: {} nodes\n",
                tree.nodes.len()
            );
            for [v, d, p] in rows {
                if p.is_empty() {
                    s.push_str(&format!("{d:>3} {v}\n"));
                } else {
                    s.push_str(&format!("{d:>3} {v} -> {p}\n"));
                }
            }
            Ok(s.into_bytes())
        }
        Format::Json => to_json(&serde_json::json!({
            "depth": depth.to_string(),
            "nodes": rows.map(|[value, depth, parent]| serde_json::json!({
                "value": value, "depth": depth, "parent": parent,
            })).collect::<Vec<_>>(),
        })),
        Format::Csv => to_csv(["value", "depth", "parent"], rows),
    }
}
