use std::fs;
use std::io::{self, BufWriter, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use planeloc::dynamic_locate::Period;
use planeloc::gen::SegmentShape;
use planeloc::trace::{
    format_trace, gen_trace, parse_trace, run_trace, GenConfig, Mix, RunConfig, TraceError, BENCH_HEADER,
};

/// Replay point-location traces against the dynamic locator.
///
/// Trace lines: `I x1 y1 x2 y2`, `D k`, `Q x y`, `S x1 y1 x2 y2`, `R`.
/// Coordinates are integers, decimals or `p/q`; `#` starts a comment.
#[derive(Parser, Debug)]
#[command(name = "planeloc", version)]
struct Cli {
    /// Trace file; `-` or absent reads stdin.
    input: Option<PathBuf>,

    /// Run the brute-force oracle in lockstep; stop at the first divergence.
    #[arg(long)]
    check: bool,

    /// Write per-op timings and counters as CSV.
    #[arg(long, value_name = "CSV")]
    bench: Option<PathBuf>,

    /// Seed for trace generation and internal randomization.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Generate a random trace with this many ops instead of reading one.
    #[arg(long, value_name = "N_OPS")]
    gen: Option<usize>,

    /// Insert:delete:query percentages for --gen.
    #[arg(long, default_value = "40:20:40")]
    mix: Mix,

    /// Coordinate range for --gen.
    #[arg(long, default_value_t = 10_000)]
    range: i64,

    /// Print the generated trace instead of running it.
    #[arg(long, requires = "gen")]
    emit: bool,

    /// Reject inserts that interact with a live edge.
    #[arg(long)]
    strict_validate: bool,

    /// Rebuild after every K updates instead of the default period.
    #[arg(long, value_name = "K", value_parser = clap::value_parser!(u64).range(1..))]
    force_period: Option<u64>,
}

fn read_input(path: Option<&PathBuf>) -> io::Result<String> {
    match path {
        Some(p) if p.as_os_str() != "-" => fs::read_to_string(p),
        _ => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn run(cli: Cli) -> Result<(), Box<dyn std::error::Error>> {
    let ops = match cli.gen {
        Some(n_ops) => {
            let shape = SegmentShape { range: cli.range, max_len: (cli.range / 6).max(1), ..SegmentShape::default() };
            gen_trace(&GenConfig { seed: cli.seed, n_ops, mix: cli.mix, shape })
        }
        None => parse_trace(&read_input(cli.input.as_ref())?)?,
    };
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    if cli.emit {
        out.write_all(format_trace(&ops).as_bytes())?;
        return Ok(());
    }
    let cfg = RunConfig {
        check: cli.check,
        strict: cli.strict_validate,
        period: cli.force_period.map_or(Period::Auto, |k| Period::Fixed(k as usize)),
        seed: cli.seed,
        bench: cli.bench.is_some(),
    };
    let report = run_trace(&ops, &cfg)?;
    out.write_all(report.text().as_bytes())?;
    if let Some(path) = cli.bench {
        let mut csv = BufWriter::new(fs::File::create(path)?);
        writeln!(csv, "{BENCH_HEADER}")?;
        for r in &report.bench {
            writeln!(csv, "{r}")?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("planeloc: {e}");
            match e.downcast_ref::<TraceError>() {
                Some(TraceError::Divergence { .. }) => ExitCode::from(2),
                _ => ExitCode::FAILURE,
            }
        }
    }
}
