//! Command-line driver: instance I/O, batch queries, self tests,
//! benchmarks and SVG rendering.
//!
//! Exit codes: 0 success, 1 self-test mismatch, 2 I/O or parse failure,
//! 3 degenerate input.

use clap::{Parser, Subcommand};
use rayon::prelude::*;

use crate::bench::{self, LcqVariant};
use crate::geom::Error;
use crate::io::{format_answers, parse_instance, parse_queries};
use crate::selftest::{self, TestMode};
use crate::svg::{render, Overlay};

#[derive(Parser)]
#[command(name = "esq", about = "largest empty circle and rectangle queries")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the index for an instance file and answer a batch of queries.
    Query {
        #[arg(long)]
        instance: String,
        #[arg(long)]
        queries: String,
        /// Answers document destination.
        #[arg(long)]
        out: String,
    },
    /// Randomized index-versus-oracle comparison.
    Selftest {
        /// lcq | convex | simple | points | rect
        #[arg(long)]
        mode: String,
        #[arg(long, default_value_t = 32)]
        n_max: usize,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Time builds and queries over instance sizes, emitting CSV.
    Bench {
        /// lcq | convex | simple | points | rect
        #[arg(long)]
        mode: String,
        /// Comma-separated instance sizes.
        #[arg(long)]
        n: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        csv: String,
        /// Queries per size.
        #[arg(long, default_value_t = 2000)]
        queries: usize,
        /// tree | sweep | both (lcq mode only)
        #[arg(long, default_value = "tree")]
        lcq: String,
    },
    /// Render an instance, its queries and their answers to SVG.
    Render {
        #[arg(long)]
        instance: String,
        #[arg(long)]
        queries: Option<String>,
        #[arg(long)]
        svg: String,
        /// none | axis | voronoi | grid
        #[arg(long, default_value = "none")]
        overlay: String,
    },
}

pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            // Help and version requests are successes.
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::DegenerateInput(_) | Error::NotConvex | Error::NotSimple => 3,
                _ => 2,
            }
        }
    }
}

fn run(cli: Cli) -> Result<i32, Error> {
    match cli.command {
        Command::Query { instance, queries, out } => {
            let inst = parse_instance(&read(&instance)?)?;
            let qs = parse_queries(&read(&queries)?)?;
            let built = inst.build()?;
            // The index is immutable; answer the batch in parallel while
            // keeping input order.
            let answers: Vec<_> = qs.par_iter().map(|&q| built.query(q)).collect();
            write(&out, &format_answers(&answers))?;
            Ok(0)
        }
        Command::Selftest { mode, n_max, trials, seed } => {
            let mode: TestMode = mode.parse()?;
            let report = selftest::run(mode, n_max, trials, seed);
            println!("{}", selftest::summarize(mode, &report));
            for f in report.failures.iter().take(10) {
                println!("  {f}");
            }
            Ok(if report.passed() { 0 } else { 1 })
        }
        Command::Bench { mode, n, seed, csv, queries, lcq } => {
            let sizes: Result<Vec<usize>, _> = n.split(',').map(|s| s.trim().parse()).collect();
            let sizes = sizes.map_err(|_| Error::Parse(format!("bad size list '{n}'")))?;
            let variants: Vec<LcqVariant> = match (mode.as_str(), lcq.as_str()) {
                (_, "tree") => vec![LcqVariant::Tree],
                ("lcq", "sweep") => vec![LcqVariant::Sweep],
                ("lcq", "both") => vec![LcqVariant::Tree, LcqVariant::Sweep],
                (_, other) => return Err(Error::Parse(format!("bad lcq variant '{other}'"))),
            };
            let mut records = Vec::new();
            for &n in &sizes {
                for &v in &variants {
                    let rec = bench::run_one(&mode, n, seed, queries, v)?;
                    println!(
                        "{} n={} build={}ns mean_query={:.0}ns",
                        mode, n, rec.build_ns, rec.mean_query_ns
                    );
                    records.push(rec);
                }
            }
            write(&csv, &bench::to_csv(&records))?;
            Ok(0)
        }
        Command::Render { instance, queries, svg, overlay } => {
            let inst = parse_instance(&read(&instance)?)?;
            let qs = match &queries {
                Some(path) => parse_queries(&read(path)?)?,
                None => Vec::new(),
            };
            let overlay: Overlay = overlay.parse()?;
            let built = inst.build()?;
            let answers: Vec<_> = qs.iter().map(|&q| built.query(q)).collect();
            let doc = render(&inst, Some(&built), &qs, &answers, overlay);
            write(&svg, &doc)?;
            Ok(0)
        }
    }
}

fn read(path: &str) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{path}: {e}")))
}

fn write(path: &str, content: &str) -> Result<(), Error> {
    std::fs::write(path, content).map_err(|e| Error::Io(format!("{path}: {e}")))
}
