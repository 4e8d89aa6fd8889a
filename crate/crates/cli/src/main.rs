use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use lrpc_core::bound::{product_success_bound, to_decimal};
use lrpc_core::sim::{build_extension, emit_csv, run_trials, CsvOptions, ExperimentConfig};
use lrpc_core::CodeParams;

mod selftest;

#[derive(Parser)]
#[command(name = "lrpc-sim", version, about = "Decoding-failure experiments for LRPC codes over finite rings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CodeArgs {
    /// Ring spec, e.g. `Z4`, `Z6`, `GR(4,2)`, `Z4[x]/(x^2)` or `Z2 x Z9`.
    #[arg(long)]
    ring: String,
    /// Extension clause, e.g. `m=20` or `m=5 f=x^5+x^2+1`.
    #[arg(long)]
    ext: Option<String>,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    lambda: usize,
    /// Error ranks `a..b` (inclusive) or a single value.
    #[arg(long, value_parser = parse_range)]
    t: RangeInclusive<usize>,
    #[arg(long, default_value_t = 6)]
    precision: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Monte Carlo decoding-failure rates as CSV.
    Simulate {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        fresh_code_per_trial: bool,
        /// Fill the wall_ms column (output is then no longer reproducible).
        #[arg(long)]
        timing: bool,
        /// Append an empty external_bound column.
        #[arg(long)]
        with_external_bound: bool,
    },
    /// Theoretical success lower bound per t.
    Bound {
        #[command(flatten)]
        code: CodeArgs,
    },
    /// Checks built-in golden vectors.
    Selftest,
}

fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let parse = |x: &str| x.trim().parse::<usize>().map_err(|e| format!("{x:?}: {e}"));
    match s.split_once("..") {
        Some((a, b)) => {
            let b = b.strip_prefix('=').unwrap_or(b);
            Ok(parse(a)?..=parse(b)?)
        }
        None => {
            let t = parse(s)?;
            Ok(t..=t)
        }
    }
}

fn ext_arg(ext: &Option<String>) -> Option<String> {
    ext.as_ref().map(|e| if e.trim_start().starts_with("ext") { e.clone() } else { format!("ext {e}") })
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run() -> anyhow::Result<ExitCode> {
    match Cli::parse().command {
        Command::Simulate { code, trials, seed, out, fresh_code_per_trial, timing, with_external_bound } => {
            let cfg = ExperimentConfig {
                ring: code.ring.clone(),
                ext: ext_arg(&code.ext),
                params: CodeParams::new(code.n, code.k, code.lambda)?,
                t_min: *code.t.start(),
                t_max: *code.t.end(),
                trials,
                seed,
                fresh_code_per_trial,
            };
            let records = run_trials(&cfg)?;
            let opts = CsvOptions { precision: code.precision, timing, external_bound: with_external_bound };
            match out {
                Some(path) => {
                    let f = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
                    let mut w = BufWriter::new(f);
                    emit_csv(&records, opts, &mut w)?;
                    w.flush()?;
                }
                None => emit_csv(&records, opts, io::stdout().lock())?,
            }
        }
        Command::Bound { code } => {
            let ext = build_extension(&code.ring, ext_arg(&code.ext).as_deref())?;
            let params = CodeParams::new(code.n, code.k, code.lambda)?;
            println!("t,bound_success");
            for t in code.t {
                let factors: Vec<(u64, usize)> = ext.ring().factors().iter().map(|r| (r.q(), t)).collect();
                match product_success_bound(&factors, params, ext.m()) {
                    Ok(b) => println!("{t},{}", to_decimal(&b, code.precision)),
                    Err(e) => println!("{t},  # {e}"),
                }
            }
        }
        Command::Selftest => {
            let checks = selftest::run_all()?;
            let failed = checks.iter().filter(|c| !c.ok).count();
            for c in &checks {
                println!("{} {}", if c.ok { "PASS" } else { "FAIL" }, c.name);
            }
            if failed > 0 {
                bail!("{failed} of {} checks failed", checks.len());
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
