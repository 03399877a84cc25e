use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use braidwork::cli::cache::Cache;
use braidwork::cli::catalog;
use braidwork::cli::{parse_spec, render_text, run, RunOptions};

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

/// Exact computations for braided vector spaces.
#[derive(Parser)]
#[command(name = "braidwork", version)]
struct Args {
    /// Job file in the line-oriented grammar.
    #[arg(long, short, required_unless_present = "catalog")]
    input: Option<PathBuf>,
    /// Run only the named tasks (repeatable).
    #[arg(long)]
    task: Vec<String>,
    /// Override the degree of every degree-indexed task and the budget.
    #[arg(long)]
    degree: Option<usize>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Directory for cached task results; caching is off without it.
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    /// Ignore the cache even if --cache-dir is given.
    #[arg(long)]
    no_cache: bool,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Record per-task wall-clock times (reports are then not reproducible).
    #[arg(long)]
    timing: bool,
    /// Run the built-in example catalog and compare with expected values.
    #[arg(long)]
    catalog: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    braidwork::par::set_jobs(args.jobs);
    let cache = match (&args.cache_dir, args.no_cache) {
        (Some(dir), false) => match Cache::open(dir) {
            Ok(c) => Some(c),
            Err(e) => {
                eprintln!("error: cannot open cache directory {}: {e}", dir.display());
                return ExitCode::from(1);
            }
        },
        _ => None,
    };
    let opts = RunOptions { cache, timing: args.timing };

    if args.catalog {
        let results: Vec<_> = catalog::entries().iter().map(|e| catalog::check_entry(e, &opts)).collect();
        match args.format {
            Format::Json => emit(&format!("{}\n", serde_json::to_string_pretty(&results).expect("serializable"))),
            Format::Text => {
                let mut out = String::new();
                for r in &results {
                    out.push_str(&format!("{} {}\n", if r.passed { "PASS" } else { "FAIL" }, r.name));
                    for m in &r.mismatches {
                        out.push_str(&format!("  {m}\n"));
                    }
                }
                emit(&out);
            }
        }
        return if results.iter().all(|r| r.passed) { ExitCode::SUCCESS } else { ExitCode::from(2) };
    }

    let path = args.input.expect("clap enforces --input");
    let text = match std::fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", path.display());
            return ExitCode::from(1);
        }
    };
    let mut job = match parse_spec(&text) {
        Ok(j) => j,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    if let Some(d) = args.degree {
        job.override_degree(d);
    }
    if !args.task.is_empty() {
        job.filter_tasks(&args.task);
    }
    let report = match run(&job, &text, &opts) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(if e.kind() == "internal" { 2 } else { 1 });
        }
    };
    match args.format {
        Format::Json => emit(&format!("{}\n", serde_json::to_string_pretty(&report).expect("serializable"))),
        Format::Text => emit(&render_text(&report)),
    }
    if report.has_internal_error() {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    }
}

/// Writes to stdout; a closed pipe downstream is not an error.
fn emit(s: &str) {
    let _ = std::io::stdout().lock().write_all(s.as_bytes());
}
