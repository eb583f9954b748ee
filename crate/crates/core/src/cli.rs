//! Command-line surface: argument parsing, file discovery, and report
//! emission for the four commands.
//!
//! Every command writes a JSON-lines report — a [`RunHeader`] first, then
//! command-specific lines — to `--out` when given, otherwise to standard
//! output. A short human-readable summary goes to the channel the JSON is
//! not using (stdout when the report goes to a file, stderr otherwise),
//! so machine output is never polluted. Exit codes: 0 for success with no
//! survivor, 1 for operational errors, 2 when the search finds a
//! survivor.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::codes::{extremal_bound, LinearCode};
use crate::construct::{load_code, sample_extremal, save_code, WalkConfig};
use crate::designs::{load_design, params_from, DesignParams};
use crate::error::{Error, Result};
use crate::gf2::DEFAULT_ENUMERATION_BUDGET;
use crate::obstruction::{
    check_c3perp_bound, check_dual_min_weight_bounds, check_bordered_doubly_even_preconditions,
    BorderedDualReport, DualBoundReport,
};
use crate::report::RunHeader;
use crate::search::{
    run_pipeline, Outcome, PipelineConfig, Verdict, Witness, DEFAULT_CLIQUE_CAP,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_SURVIVOR: i32 = 2;

#[derive(Parser)]
#[command(
    name = "qsd40",
    version,
    about = "Self-dual code construction and the two-stage design search at length 40"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect a code file: dimensions, self-duality, minimum weight,
    /// weight enumerator.
    Info {
        /// Generator matrix file ("n k" header, then 0/1 rows).
        code: PathBuf,
        /// Enumeration budget: full scans are skipped for dimension > budget.
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_BUDGET)]
        budget: usize,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample doubly even self-dual codes of extremal minimum weight by
    /// random neighbor descent, writing one file per code.
    Sample {
        /// Output directory for the sampled codes.
        #[arg(long)]
        out: PathBuf,
        /// RNG seed; identical seeds reproduce identical files.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Walk length in neighbor steps.
        #[arg(long, default_value_t = 100)]
        steps: usize,
        /// Extra walks on fresh RNG streams if a walk retains nothing.
        #[arg(long, default_value_t = 4)]
        max_restarts: usize,
        /// Code length (a positive multiple of 8).
        #[arg(long, default_value_t = 40)]
        length: usize,
        /// Required minimum weight; defaults to the extremal bound.
        #[arg(long)]
        min_weight: Option<usize>,
    },
    /// Run the two-stage search over a directory of code files and emit
    /// the JSON-lines verdict stream.
    Search {
        /// Directory of *.code files.
        #[arg(long)]
        codes: PathBuf,
        /// Write the verdict stream here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads (0 = all available). Never changes output bytes.
        #[arg(long, default_value_t = 0)]
        workers: usize,
        /// Cap on 8-cliques counted or enumerated per pair graph.
        #[arg(long, default_value_t = DEFAULT_CLIQUE_CAP)]
        clique_cap: u64,
        /// Attach per-task elapsed_ms to verdicts (breaks byte-for-byte
        /// comparability between runs).
        #[arg(long)]
        timings: bool,
    },
    /// Analyze a design file: 2-design parameters, intersection numbers,
    /// quasi-symmetry, and the dual minimum-weight bounds.
    Design {
        /// Design file ("v b" header, then one block per line).
        #[arg(long)]
        design: PathBuf,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Parses arguments and runs the selected command, returning the process
/// exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}

fn dispatch(command: Command) -> Result<i32> {
    match command {
        Command::Info { code, budget, out } => cmd_info(&code, budget, out.as_deref()),
        Command::Sample {
            out,
            seed,
            steps,
            max_restarts,
            length,
            min_weight,
        } => cmd_sample(&out, seed, steps, max_restarts, length, min_weight),
        Command::Search {
            codes,
            out,
            workers,
            clique_cap,
            timings,
        } => cmd_search(&codes, out.as_deref(), workers, clique_cap, timings),
        Command::Design { design, out } => cmd_design(&design, out.as_deref()),
    }
}

/// Report destination: JSON lines to the file or stdout; human text to
/// whichever of stdout/stderr the JSON is not using.
struct Sink {
    file: Option<fs::File>,
}

impl Sink {
    fn new(out: Option<&Path>) -> Result<Self> {
        let file = match out {
            Some(path) => Some(fs::File::create(path)?),
            None => None,
        };
        Ok(Sink { file })
    }

    fn emit<T: Serialize>(&mut self, value: &T) -> Result<()> {
        let line = serde_json::to_string(value).expect("report types serialize");
        match &mut self.file {
            Some(f) => writeln!(f, "{line}")?,
            None => println!("{line}"),
        }
        Ok(())
    }

    fn human(&self, text: &str) {
        if self.file.is_some() {
            println!("{text}");
        } else {
            eprintln!("{text}");
        }
    }
}

#[derive(Serialize)]
struct InfoReport {
    n: usize,
    k: usize,
    doubly_even: bool,
    self_dual: bool,
    min_weight: Option<usize>,
    extremal_bound: Option<usize>,
    is_extremal: Option<bool>,
    weight_enumerator: Option<Vec<u64>>,
    note: Option<String>,
}

fn cmd_info(path: &Path, budget: usize, out: Option<&Path>) -> Result<i32> {
    let code = load_code(path)?;
    let mut sink = Sink::new(out)?;
    sink.emit(&RunHeader::new(
        "info",
        &[("budget", budget.to_string())],
        None,
    ))?;
    let n = code.length();
    let k = code.dimension();
    let doubly_even = code.is_doubly_even();
    let self_dual = code.is_self_dual();
    let (min_weight, weight_enumerator, note) = match code.weight_enumerator_budgeted(budget) {
        Ok(we) => {
            let min = we.iter().enumerate().skip(1).find(|&(_, &c)| c > 0).map(|(w, _)| w);
            (min, Some(we), None)
        }
        Err(Error::EnumerationBudget { dimension, budget }) => (
            None,
            None,
            Some(format!(
                "weight scan skipped: dimension {dimension} exceeds budget {budget}"
            )),
        ),
        Err(e) => return Err(e),
    };
    let bound = if doubly_even && self_dual {
        extremal_bound(n).ok()
    } else {
        None
    };
    let report = InfoReport {
        n,
        k,
        doubly_even,
        self_dual,
        min_weight,
        extremal_bound: bound,
        is_extremal: match (bound, min_weight) {
            (Some(b), Some(d)) => Some(d == b),
            _ => None,
        },
        weight_enumerator,
        note: note.clone(),
    };
    sink.emit(&report)?;
    let mut line = format!("n={n} k={k}");
    if self_dual {
        line.push_str(" self-dual");
    }
    if doubly_even {
        line.push_str(" doubly-even");
    }
    if let Some(d) = min_weight {
        line.push_str(&format!(" d={d}"));
    }
    if let Some(n) = &note {
        line.push_str(&format!(" ({n})"));
    }
    sink.human(&line);
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct SampleReport {
    codes_written: usize,
    directory: String,
}

fn cmd_sample(
    out: &Path,
    seed: u64,
    steps: usize,
    max_restarts: usize,
    length: usize,
    min_weight: Option<usize>,
) -> Result<i32> {
    let target_min_weight = match min_weight {
        Some(w) => w,
        None => extremal_bound(length)?,
    };
    let config = WalkConfig {
        seed,
        steps,
        target_length: length,
        target_min_weight,
        max_restarts,
    };
    let codes = sample_extremal(&config)?;
    fs::create_dir_all(out)?;
    for (index, code) in codes.iter().enumerate() {
        save_code(code, &out.join(format!("code_{index:03}.code")))?;
    }
    let mut sink = Sink::new(None)?;
    sink.emit(&RunHeader::new(
        "sample",
        &[
            ("steps", steps.to_string()),
            ("max_restarts", max_restarts.to_string()),
            ("length", length.to_string()),
            ("min_weight", target_min_weight.to_string()),
        ],
        Some(seed),
    ))?;
    sink.emit(&SampleReport {
        codes_written: codes.len(),
        directory: out.display().to_string(),
    })?;
    sink.human(&format!(
        "wrote {} [{length},{},{target_min_weight}] codes to {} (seed {seed})",
        codes.len(),
        length / 2,
        out.display()
    ));
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct SummaryLine<'a> {
    summary: &'a crate::search::PipelineSummary,
}

fn cmd_search(
    dir: &Path,
    out: Option<&Path>,
    workers: usize,
    clique_cap: u64,
    timings: bool,
) -> Result<i32> {
    // deterministic discovery: *.code files in name order
    let mut files: Vec<PathBuf> = fs::read_dir(dir)?
        .collect::<std::io::Result<Vec<_>>>()?
        .into_iter()
        .map(|entry| entry.path())
        .filter(|p| p.extension().is_some_and(|e| e == "code"))
        .collect();
    files.sort();
    // parse failures become error verdicts in place; the batch continues
    let mut failures: Vec<(usize, Verdict)> = Vec::new();
    let mut parsed: Vec<(String, LinearCode)> = Vec::new();
    for (position, path) in files.iter().enumerate() {
        let id = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| position.to_string());
        match load_code(path) {
            Ok(code) => parsed.push((id, code)),
            Err(e) => {
                eprintln!("skipping {}: {e}", path.display());
                failures.push((
                    position,
                    Verdict {
                        code_id: id,
                        t: None,
                        outcome: Outcome::Error,
                        witness: Some(Witness::Message {
                            message: e.to_string(),
                        }),
                        clique_count: None,
                        elapsed_ms: None,
                    },
                ));
            }
        }
    }
    let config = PipelineConfig {
        workers,
        clique_cap,
        timings,
    };
    let mut run = run_pipeline(&parsed, &config);
    run.summary.codes = files.len();
    run.summary.errors += failures.len();
    let mut sink = Sink::new(out)?;
    sink.emit(&RunHeader::new(
        "search",
        &[
            ("clique_cap", clique_cap.to_string()),
            ("timings", timings.to_string()),
        ],
        None,
    ))?;
    // merge the two verdict streams back into directory order
    let mut failure_iter = failures.into_iter().peekable();
    let mut verdict_iter = run.verdicts.iter().peekable();
    let mut parsed_ids = parsed.iter().map(|(id, _)| id.as_str());
    for position in 0..files.len() {
        if failure_iter.peek().is_some_and(|(p, _)| *p == position) {
            sink.emit(&failure_iter.next().expect("peeked").1)?;
        } else {
            let id = parsed_ids.next().expect("non-failure positions parsed");
            while verdict_iter.peek().is_some_and(|v| v.code_id == id) {
                sink.emit(verdict_iter.next().expect("peeked"))?;
            }
        }
    }
    sink.emit(&SummaryLine {
        summary: &run.summary,
    })?;
    let s = &run.summary;
    sink.human(&format!(
        "{} codes, {} tasks: {} excluded at stage 1, {} at stage 2, {} survivors, {} errors",
        s.codes, s.tasks, s.excluded_stage1, s.excluded_stage2, s.survivors, s.errors
    ));
    if s.survivors > 0 {
        Ok(EXIT_SURVIVOR)
    } else if s.errors > 0 {
        Ok(EXIT_ERROR)
    } else {
        Ok(EXIT_OK)
    }
}

#[derive(Serialize)]
struct DesignReport {
    v: usize,
    b: usize,
    block_size: Option<usize>,
    is_2design: bool,
    lambda: Option<usize>,
    params: Option<DesignParams>,
    params_note: Option<String>,
    intersection_numbers: Option<Vec<usize>>,
    quasi_symmetric: Option<[usize; 2]>,
    bordered_doubly_even_preconditions: Option<bool>,
    dual_bounds: Option<DualBoundReport>,
    bordered_dual_bound: Option<BorderedDualReport>,
}

fn cmd_design(path: &Path, out: Option<&Path>) -> Result<i32> {
    let design = load_design(path)?;
    let mut sink = Sink::new(out)?;
    sink.emit(&RunHeader::new("design", &[], None))?;
    let v = design.points();
    let b = design.block_count();
    let block_size = design.block_size();
    // infer λ from the first point pair, then verify it holds for all
    let lambda_guess = (v >= 2).then(|| {
        design
            .blocks()
            .iter()
            .filter(|block| block.get(1) && block.get(2))
            .count()
    });
    let is_2design = lambda_guess.is_some_and(|l| design.is_2design(l));
    let lambda = lambda_guess.filter(|_| is_2design);
    let intersection_numbers = match design.intersection_numbers() {
        Ok(numbers) => Some(numbers),
        Err(Error::DegenerateDesign) => None,
        Err(e) => return Err(e),
    };
    let quasi_symmetric = match design.is_quasi_symmetric() {
        Ok(pair) => pair.map(|(x, y)| [x, y]),
        Err(Error::DegenerateDesign) => None,
        Err(e) => return Err(e),
    };
    let bordered_doubly_even_preconditions = match (quasi_symmetric, block_size) {
        (Some([x, y]), Some(k)) => Some(check_bordered_doubly_even_preconditions(v, k, x, y)),
        _ => None,
    };
    let (params, params_note) = match (is_2design, lambda, block_size) {
        (true, Some(l), Some(k)) => match params_from(v, k, l) {
            Ok(p) => (Some(p), None),
            Err(e) => (None, Some(e.to_string())),
        },
        _ => (None, None),
    };
    let (dual_bounds, bordered_dual_bound) = match &params {
        Some(p) => (
            Some(check_dual_min_weight_bounds(&design, p)?),
            Some(check_c3perp_bound(&design, p)?),
        ),
        None => (None, None),
    };
    let report = DesignReport {
        v,
        b,
        block_size,
        is_2design,
        lambda,
        params,
        params_note,
        intersection_numbers,
        quasi_symmetric,
        bordered_doubly_even_preconditions,
        dual_bounds: dual_bounds.clone(),
        bordered_dual_bound: bordered_dual_bound.clone(),
    };
    sink.emit(&report)?;
    let mut line = match (is_2design, lambda, block_size, &report.params) {
        (true, Some(l), Some(k), Some(p)) => {
            format!("2-({v},{k},{l}), r={}, b={}", p.r, p.b)
        }
        (true, Some(l), Some(k), None) => format!("2-({v},{k},{l}), b={b}"),
        _ => format!("not a 2-design: v={v} b={b}"),
    };
    match &report.intersection_numbers {
        Some(numbers) => {
            let list = numbers
                .iter()
                .map(|n| n.to_string())
                .collect::<Vec<_>>()
                .join(",");
            line.push_str(&format!(", intersections {{{list}}}"));
        }
        None => line.push_str(", intersections undefined"),
    }
    match quasi_symmetric {
        Some([x, y]) => line.push_str(&format!(", quasi-symmetric x={x} y={y}")),
        None => line.push_str(", not quasi-symmetric"),
    }
    if let Some(bounds) = &dual_bounds {
        line.push_str(if bounds.holds() {
            ", dual bounds hold"
        } else {
            ", dual bounds VIOLATED"
        });
    }
    if let Some(bound) = &bordered_dual_bound {
        line.push_str(if bound.holds {
            ", bordered dual bound holds"
        } else {
            ", bordered dual bound VIOLATED"
        });
    }
    sink.human(&line);
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn flags_parse() {
        let cli = Cli::try_parse_from([
            "qsd40", "search", "--codes", "dir", "--workers", "4", "--clique-cap", "500",
            "--timings",
        ])
        .unwrap();
        match cli.command {
            Command::Search {
                workers,
                clique_cap,
                timings,
                ..
            } => {
                assert_eq!(workers, 4);
                assert_eq!(clique_cap, 500);
                assert!(timings);
            }
            _ => panic!("expected search"),
        }
        let cli = Cli::try_parse_from([
            "qsd40", "sample", "--out", "d", "--seed", "7", "--steps", "50", "--length", "24",
        ])
        .unwrap();
        match cli.command {
            Command::Sample {
                seed,
                steps,
                length,
                min_weight,
                max_restarts,
                ..
            } => {
                assert_eq!((seed, steps, length), (7, 50, 24));
                assert_eq!(min_weight, None);
                assert_eq!(max_restarts, 4);
            }
            _ => panic!("expected sample"),
        }
        assert!(Cli::try_parse_from(["qsd40", "sample"]).is_err()); // --out required
    }
}
