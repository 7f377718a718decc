use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use drinfeld::drinfeld::random_instance;
use drinfeld::solver::{verify_charpoly, Algorithm};
use drinfeld::FqPoly;
use drinfeld_cli::{
    child_seed, format_instance, parse_instance, render_csv, run_bench, timed_solve, BenchConfig,
    ResultRecord, CSV_HEADER,
};

/// Frobenius trace and norm of rank-two Drinfeld modules over finite fields.
#[derive(Parser)]
#[command(name = "drinfeld", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance file.
    Gen(GenArgs),
    /// Solve an instance: print the trace and norm coefficients.
    Charpoly(CharpolyArgs),
    /// Check a claimed (A, B) pair against an instance.
    Verify(VerifyArgs),
    /// Time the solvers over a parameter grid and write a CSV.
    Bench(BenchArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Prime base field order.
    #[arg(long)]
    q: u64,
    /// Extension degree.
    #[arg(long)]
    n: usize,
    /// Index of the characteristic subfield, must divide n.
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CharpolyArgs {
    /// Instance file path.
    instance: PathBuf,
    /// Algorithm: gekeler, det, mc or oracle.
    #[arg(long, default_value = "mc")]
    alg: Algorithm,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Append a result record to this CSV file (header created if new).
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Instance file path.
    instance: PathBuf,
    /// Little-endian trace coefficients, comma- or space-separated.
    #[arg(long)]
    a: String,
    /// Little-endian norm coefficients.
    #[arg(long)]
    b: String,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated prime list.
    #[arg(long, value_delimiter = ',', default_value = "499")]
    q: Vec<u64>,
    /// Comma-separated extension degrees.
    #[arg(long, value_delimiter = ',', default_value = "16,24,32,48,64")]
    n: Vec<usize>,
    /// Comma-separated subfield indices; cells with m not dividing n are
    /// skipped with a warning.
    #[arg(long, value_delimiter = ',', default_value = "2")]
    m: Vec<usize>,
    /// Comma-separated algorithms.
    #[arg(long, value_delimiter = ',', default_value = "gekeler,mc")]
    alg: Vec<Algorithm>,
    /// Repetitions per grid cell.
    #[arg(long, default_value_t = 4)]
    reps: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Gen(args) => cmd_gen(args),
        Command::Charpoly(args) => cmd_charpoly(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Bench(args) => cmd_bench(args),
    }
}

fn cmd_gen(args: GenArgs) -> ExitCode {
    match random_instance(args.q, args.n, args.m, args.seed) {
        Ok(dm) => {
            let text = format_instance(&dm);
            match args.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, text) {
                        eprintln!("error: writing {}: {e}", path.display());
                        return ExitCode::FAILURE;
                    }
                }
                None => print!("{text}"),
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn read_instance(path: &PathBuf) -> Result<drinfeld_cli::RawInstance, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("reading {}: {e}", path.display()))?;
    parse_instance(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn cmd_charpoly(args: CharpolyArgs) -> ExitCode {
    let raw = match read_instance(&args.instance) {
        Ok(raw) => raw,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    };
    let solve_seed = child_seed(args.seed, &[args.alg as u64 + 1]);
    match timed_solve(&raw, args.alg, solve_seed) {
        Ok((dm, res, seconds)) => {
            let fmt = |coeffs: &[u64]| {
                coeffs
                    .iter()
                    .map(u64::to_string)
                    .collect::<Vec<_>>()
                    .join(" ")
            };
            println!("A {}", fmt(res.a.coeffs()));
            println!("B {}", fmt(res.b.coeffs()));
            if let Some(path) = args.csv {
                let record = ResultRecord::from_result(&dm, &res, seconds);
                if let Err(e) = append_csv(&path, &record) {
                    eprintln!("error: {e}");
                    return ExitCode::FAILURE;
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn append_csv(path: &PathBuf, record: &ResultRecord) -> Result<(), String> {
    use std::io::Write;
    let fresh = !path.exists();
    let mut file = std::fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|e| format!("opening {}: {e}", path.display()))?;
    let mut out = String::new();
    if fresh {
        out.push_str(CSV_HEADER);
        out.push('\n');
    }
    out.push_str(&record.to_csv_line());
    out.push('\n');
    file.write_all(out.as_bytes())
        .map_err(|e| format!("writing {}: {e}", path.display()))
}

fn parse_coeff_list(s: &str) -> Result<Vec<u64>, String> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<u64>().map_err(|e| format!("bad coefficient {p:?}: {e}")))
        .collect()
}

fn cmd_verify(args: VerifyArgs) -> ExitCode {
    let outcome = (|| -> Result<bool, String> {
        let raw = read_instance(&args.instance)?;
        let dm = drinfeld_cli::build_module(&raw)?;
        let a = FqPoly::new(dm.fq(), &parse_coeff_list(&args.a)?);
        let b = FqPoly::new(dm.fq(), &parse_coeff_list(&args.b)?);
        Ok(verify_charpoly(&dm, &a, &b, 20))
    })();
    match outcome {
        Ok(true) => {
            println!("ok");
            ExitCode::SUCCESS
        }
        Ok(false) => {
            println!("mismatch");
            ExitCode::FAILURE
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn cmd_bench(args: BenchArgs) -> ExitCode {
    let workers = std::env::var("DRINFELD_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .unwrap_or(1);
    let cfg = BenchConfig {
        qs: args.q,
        ns: args.n,
        ms: args.m,
        algs: args.alg,
        reps: args.reps,
        seed: args.seed,
        workers,
    };
    let out = run_bench(&cfg);
    for warning in &out.skipped {
        eprintln!("warning: {warning}");
    }
    if out.records.is_empty() {
        eprintln!("error: empty grid");
        return ExitCode::FAILURE;
    }
    if let Err(e) = std::fs::write(&args.out, render_csv(&out.records)) {
        eprintln!("error: writing {}: {e}", args.out.display());
        return ExitCode::FAILURE;
    }
    // summary block: per-algorithm means over the n sweep, then the fitted
    // log-log slopes
    let mut by_alg_n: std::collections::BTreeMap<(String, usize), (f64, u32)> =
        std::collections::BTreeMap::new();
    for r in &out.records {
        let e = by_alg_n.entry((r.alg.to_string(), r.n)).or_insert((0.0, 0));
        e.0 += r.seconds;
        e.1 += 1;
    }
    for ((alg, n), (total, count)) in &by_alg_n {
        println!("mean {alg} n={n} {:.6}s over {count} runs", total / *count as f64);
    }
    for (alg, slope) in &out.slopes {
        println!("slope {alg} {slope:.3}");
    }
    ExitCode::SUCCESS
}
