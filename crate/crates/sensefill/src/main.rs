//! Command-line driver: generate instances, solve them, sweep grids, and
//! validate allocations by simulation.
//!
//! Exit codes: 0 on success, 1 on a usage error, 2 on a runtime error.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use sensefill::{io, parse_method, run_sweep, solve_with, ResultRow, SweepSpec};
use sensefill_core::{generate_instance, simulate, Method, DEFAULT_ENUMERATION_CAP};

#[derive(Parser)]
#[command(
    name = "sensefill",
    version,
    about = "Joint sensing-channel selection and water-filling power allocation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance and write it as JSON.
    Gen(GenArgs),
    /// Solve one instance file; prints a results CSV row.
    Solve(SolveArgs),
    /// Run a seed × SNR × method grid and emit results CSV.
    Sweep(SweepArgs),
    /// Solve, then Monte Carlo the allocation against the capacity model.
    Simulate(SimulateArgs),
}

#[derive(Args)]
struct GenArgs {
    /// RNG seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of channels N.
    #[arg(long)]
    n: usize,
    /// Sensing budget L (at most N).
    #[arg(long)]
    l: usize,
    /// Per-channel average SNR in dB at unit mean noise.
    #[arg(long = "snr-db", allow_hyphen_values = true)]
    snr_db: f64,
    /// Taps in the fading impulse response.
    #[arg(long, default_value_t = 4)]
    taps: usize,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    /// Instance JSON file.
    #[arg(long = "in")]
    input: PathBuf,
    /// coarse | fine | exhaustive.
    #[arg(long)]
    method: String,
    /// Seed label for the CSV row (not used in solving).
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Enumeration cap for the exhaustive method.
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
    cap: u64,
    /// Prepend the CSV header line.
    #[arg(long)]
    header: bool,
    /// Also print a JSON detail record (powers, iteration trace).
    #[arg(long)]
    json: bool,
    /// Write wall_ms as 0 for byte-reproducible output.
    #[arg(long)]
    stable_output: bool,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    l: usize,
    #[arg(long, default_value_t = 4)]
    taps: usize,
    /// SNR grid in dB: a single value or inclusive start:stop:step.
    #[arg(long = "snr-db", allow_hyphen_values = true)]
    snr_db: String,
    /// Seeds: comma list (1,2,9) or inclusive range (1..100).
    #[arg(long)]
    seeds: String,
    /// Comma list of methods to run.
    #[arg(long, default_value = "coarse,fine,exhaustive")]
    methods: String,
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
    cap: u64,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    threads: Option<usize>,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write wall_ms as 0 for byte-reproducible output.
    #[arg(long)]
    stable_output: bool,
}

#[derive(Args)]
struct SimulateArgs {
    /// Instance JSON file.
    #[arg(long = "in")]
    input: PathBuf,
    /// coarse | fine | exhaustive.
    #[arg(long, default_value = "fine")]
    method: String,
    /// Number of simulated slots.
    #[arg(long, default_value_t = 100_000)]
    slots: u64,
    /// Simulation RNG seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
    cap: u64,
    /// Print the report as JSON instead of key: value lines.
    #[arg(long)]
    json: bool,
}

enum AppError {
    Usage(String),
    Runtime(String),
}

impl From<io::Error> for AppError {
    fn from(e: io::Error) -> Self {
        AppError::Runtime(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help/--version land here too; those are not errors.
            let code = if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(AppError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(AppError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<(), AppError> {
    match cli.command {
        Command::Gen(args) => cmd_gen(args),
        Command::Solve(args) => cmd_solve(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Simulate(args) => cmd_simulate(args),
    }
}

fn cmd_gen(args: GenArgs) -> Result<(), AppError> {
    let inst = generate_instance(args.seed, args.n, args.l, args.snr_db, args.taps)
        .map_err(|e| AppError::Usage(e.to_string()))?;
    match &args.out {
        Some(path) => io::write_instance_file(path, &inst)?,
        None => println!("{}", io::write_instance(&inst)),
    }
    Ok(())
}

fn method_arg(name: &str) -> Result<Method, AppError> {
    parse_method(name).ok_or_else(|| {
        AppError::Usage(format!(
            "unknown method `{name}` (expected coarse, fine, or exhaustive)"
        ))
    })
}

/// SNR of the sweep convention that generated an instance: `P = N·10^(snr/10)`.
fn implied_snr_db(inst: &sensefill_core::Instance) -> f64 {
    10.0 * (inst.power_budget / inst.n() as f64).log10()
}

fn cmd_solve(args: SolveArgs) -> Result<(), AppError> {
    let method = method_arg(&args.method)?;
    let inst = io::read_instance_file(&args.input)?;
    let start = Instant::now();
    let result = solve_with(&inst, method, args.cap)?;
    let wall_ms = if args.stable_output { 0.0 } else { start.elapsed().as_secs_f64() * 1e3 };

    let row = ResultRow::from_result(args.seed, implied_snr_db(&inst), &inst, &result, wall_ms);
    if args.header {
        println!("{}", ResultRow::HEADER);
    }
    println!("{}", row.to_csv_line());
    if args.json {
        println!("{}", io::result_detail(&inst, &result));
    }
    Ok(())
}

fn cmd_sweep(args: SweepArgs) -> Result<(), AppError> {
    let spec = SweepSpec {
        n: args.n,
        l: args.l,
        taps: args.taps,
        snrs_db: parse_snr_grid(&args.snr_db).map_err(AppError::Usage)?,
        seeds: parse_seeds(&args.seeds).map_err(AppError::Usage)?,
        methods: args
            .methods
            .split(',')
            .map(|m| method_arg(m.trim()))
            .collect::<Result<Vec<_>, _>>()?,
        cap: args.cap,
        stable_output: args.stable_output,
        threads: args.threads,
    };
    if spec.methods.is_empty() || spec.seeds.is_empty() || spec.snrs_db.is_empty() {
        return Err(AppError::Usage("sweep grid is empty".into()));
    }

    let rows = run_sweep(&spec)?;
    let mut out = String::with_capacity(rows.len() * 96);
    out.push_str(ResultRow::HEADER);
    out.push('\n');
    for row in &rows {
        out.push_str(&row.to_csv_line());
        out.push('\n');
    }
    match &args.out {
        Some(path) => std::fs::write(path, out).map_err(|e| AppError::Runtime(e.to_string()))?,
        None => print!("{out}"),
    }
    Ok(())
}

fn cmd_simulate(args: SimulateArgs) -> Result<(), AppError> {
    if args.slots == 0 {
        return Err(AppError::Usage("--slots must be at least 1".into()));
    }
    let method = method_arg(&args.method)?;
    let inst = io::read_instance_file(&args.input)?;
    let result = solve_with(&inst, method, args.cap)?;
    let sim = simulate(&inst, &result.sensing, &result.alloc, args.slots, args.seed)
        .map_err(|e| AppError::Runtime(e.to_string()))?;

    let analytical = result.alloc.capacity_nats;
    let band_pass = (sim.empirical_rate - analytical).abs() <= 3.0 * sim.rate_stderr;
    if args.json {
        let report = serde_json::json!({
            "method": result.method.name(),
            "analytical_capacity_nats": analytical,
            "analytical_capacity_bits": analytical / std::f64::consts::LN_2,
            "empirical_rate_nats": sim.empirical_rate,
            "rate_stderr": sim.rate_stderr,
            "band_3_stderr": if band_pass { "pass" } else { "fail" },
            "empirical_avg_power": sim.empirical_avg_power,
            "power_stderr": sim.power_stderr,
            "power_budget": inst.power_budget,
            "slots": sim.slots,
            "sim_seed": args.seed,
        });
        println!("{report}");
    } else {
        println!("method: {}", result.method.name());
        println!("analytical_capacity_nats: {analytical}");
        println!("analytical_capacity_bits: {}", analytical / std::f64::consts::LN_2);
        println!("empirical_rate_nats: {}", sim.empirical_rate);
        println!("rate_stderr: {}", sim.rate_stderr);
        println!("band_3_stderr: {}", if band_pass { "pass" } else { "fail" });
        println!("empirical_avg_power: {}", sim.empirical_avg_power);
        println!("power_stderr: {}", sim.power_stderr);
        println!("power_budget: {}", inst.power_budget);
        println!("slots: {}", sim.slots);
    }
    Ok(())
}

/// Inclusive `start:stop:step` grid, or a single value.
fn parse_snr_grid(text: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = text.split(':').collect();
    let parse = |s: &str| -> Result<f64, String> {
        s.trim().parse().map_err(|e| format!("bad SNR value `{s}`: {e}"))
    };
    match parts.as_slice() {
        [single] => Ok(vec![parse(single)?]),
        [start, stop, step] => {
            let (start, stop, step) = (parse(start)?, parse(stop)?, parse(step)?);
            if step <= 0.0 {
                return Err("SNR step must be positive".into());
            }
            if stop < start {
                return Err("SNR stop must be at least start".into());
            }
            let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
            Ok((0..count).map(|i| start + i as f64 * step).collect())
        }
        _ => Err(format!("bad SNR grid `{text}` (want value or start:stop:step)")),
    }
}

/// `a..b` inclusive range, or comma-separated values.
fn parse_seeds(text: &str) -> Result<Vec<u64>, String> {
    if let Some((a, b)) = text.split_once("..") {
        let lo: u64 = a.trim().parse().map_err(|e| format!("bad seed `{a}`: {e}"))?;
        let hi: u64 = b.trim().parse().map_err(|e| format!("bad seed `{b}`: {e}"))?;
        if hi < lo {
            return Err(format!("seed range `{text}` is empty"));
        }
        return Ok((lo..=hi).collect());
    }
    text.split(',')
        .map(|s| s.trim().parse().map_err(|e| format!("bad seed `{s}`: {e}")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snr_grid_parsing() {
        assert_eq!(parse_snr_grid("10").unwrap(), vec![10.0]);
        assert_eq!(
            parse_snr_grid("-10:30:5").unwrap(),
            vec![-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0]
        );
        assert_eq!(parse_snr_grid("0:1:0.5").unwrap(), vec![0.0, 0.5, 1.0]);
        assert!(parse_snr_grid("5:0:1").is_err());
        assert!(parse_snr_grid("0:5:0").is_err());
        assert!(parse_snr_grid("a:b").is_err());
    }

    #[test]
    fn seed_list_parsing() {
        assert_eq!(parse_seeds("1..4").unwrap(), vec![1, 2, 3, 4]);
        assert_eq!(parse_seeds("7").unwrap(), vec![7]);
        assert_eq!(parse_seeds("3,1,9").unwrap(), vec![3, 1, 9]);
        assert!(parse_seeds("9..3").is_err());
        assert!(parse_seeds("x").is_err());
    }
}
