//! Command-line front end: construct, extend, verify, decode, sweep, golden.
//!
//! JSON is the interchange format; `--format matrix` emits the dense 0/1
//! text form for external oracles. All commands are deterministic for fixed
//! flags and inputs. Exit codes: 0 success, 1 verification failure, 2
//! usage or parse error.

use clap::{Args, Parser, Subcommand, ValueEnum};
use indexcode::extend::KnownComponents;
use indexcode::{
    build_schedule, capacity, construct, decode_with_schedule, encode, minrank_oracle,
    one_sided_problem, side_info_for, substitute, verify_against_problem, BitVec, CodeClass,
    ConstructionParams, DecodingSchedule, Error, LinearCode, ProblemSpec, Rational,
};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::fmt::Write as _;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "indexcode",
    about = "Construct, extend, and verify linear index codes for symmetric side-information broadcast problems",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate the scalar code for a construction class.
    Construct(ConstructArgs),
    /// Extend a scalar code into a vector code and emit its decoding schedule.
    Extend(ExtendArgs),
    /// Check a code against a problem: decodability, rate, capacity.
    Verify(VerifyArgs),
    /// Random encode/decode round trips through a schedule.
    Decode(DecodeArgs),
    /// Construct and verify across parameter ranges.
    Sweep(SweepArgs),
    /// Compare generated codes against the reference listings.
    Golden(GoldenArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CodeFormat {
    Json,
    Matrix,
}

#[derive(Args)]
struct ConstructArgs {
    /// Construction class id (1-3, 5-10).
    #[arg(long)]
    class: u8,
    /// Number of messages.
    #[arg(long = "K")]
    k: usize,
    /// One-sided antidote count of the target problem.
    #[arg(long)]
    delta: usize,
    /// Class parameter for classes 5-10; required when several values fit.
    #[arg(long)]
    lambda: Option<usize>,
    #[arg(long, value_enum, default_value = "json")]
    format: CodeFormat,
    /// Also write the generated problem JSON here.
    #[arg(long)]
    problem_out: Option<PathBuf>,
}

#[derive(Args)]
struct ExtendArgs {
    /// Scalar code JSON file.
    #[arg(long)]
    code: PathBuf,
    /// Extension count; the output code has U+1 components per message.
    #[arg(long)]
    u: usize,
    /// Seed one-sided antidote count; defaults to K minus the code length.
    #[arg(long)]
    delta: Option<usize>,
    /// Write the decoding schedule JSON here.
    #[arg(long)]
    schedule: Option<PathBuf>,
    /// Also write the extended problem JSON here.
    #[arg(long)]
    problem_out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: CodeFormat,
}

#[derive(Args)]
struct VerifyArgs {
    /// Problem JSON file.
    #[arg(long)]
    problem: PathBuf,
    /// Code JSON file.
    #[arg(long)]
    code: PathBuf,
    /// Also certify minimum length by exhaustive search (small instances).
    #[arg(long)]
    oracle: bool,
}

#[derive(Args)]
struct DecodeArgs {
    /// Vector code JSON file.
    #[arg(long)]
    code: PathBuf,
    /// Decoding schedule JSON file.
    #[arg(long)]
    schedule: PathBuf,
    /// Number of random messages to round-trip.
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// RNG seed for the trials.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Decode this specific message (0/1 string) instead of random trials.
    #[arg(long)]
    message: Option<String>,
}

#[derive(Args)]
struct SweepArgs {
    /// K range, as `N` or `A..B` (inclusive).
    #[arg(long = "K", value_parser = parse_range, default_value = "2..40")]
    k: RangeInclusive<usize>,
    /// Delta range, as `N` or `A..B`; defaults to everything below K.
    #[arg(long, value_parser = parse_range)]
    delta: Option<RangeInclusive<usize>>,
    /// Extension range, as `N` or `A..B`.
    #[arg(long, value_parser = parse_range, default_value = "0")]
    u: RangeInclusive<usize>,
    /// Comma-separated class ids to include.
    #[arg(long, value_delimiter = ',')]
    classes: Option<Vec<u8>>,
    /// `all` or a fixed lambda value.
    #[arg(long, default_value = "all")]
    lambda: String,
    /// Add an exhaustive minimum-length column for in-budget instances.
    #[arg(long)]
    oracle: bool,
    #[arg(long, value_enum, default_value = "table")]
    format: TableFormat,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableFormat {
    Table,
    Csv,
}

#[derive(Args)]
struct GoldenArgs {
    #[arg(long, value_enum, default_value = "table")]
    format: TableFormat,
}

enum Failure {
    /// Exit 1: inputs parsed but verification or decoding failed.
    Verification(String),
    /// Exit 2: bad usage or unparseable input.
    Usage(String),
}

impl Failure {
    fn usage(context: &str, e: &Error) -> Self {
        Failure::Usage(format!("{context}: {e}"))
    }
}

fn classify(context: &str, e: Error) -> Failure {
    match e {
        Error::Undecodable(_) | Error::Interference { .. } => {
            Failure::Verification(format!("{context}: {e}"))
        }
        other => Failure::Usage(format!("{context}: {other}")),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Construct(args) => cmd_construct(&args),
        Command::Extend(args) => cmd_extend(&args),
        Command::Verify(args) => cmd_verify(&args),
        Command::Decode(args) => cmd_decode(&args),
        Command::Sweep(args) => cmd_sweep(&args),
        Command::Golden(args) => cmd_golden(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(2)
        }
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents)
        .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}

fn print_code(code: &LinearCode, format: CodeFormat) -> Result<(), Failure> {
    match format {
        CodeFormat::Json => {
            let json = code
                .to_json()
                .map_err(|e| Failure::usage("serialize", &e))?;
            println!("{json}");
        }
        CodeFormat::Matrix => print!("{}", code.to_matrix_text()),
    }
    Ok(())
}

fn cmd_construct(args: &ConstructArgs) -> Result<(), Failure> {
    let class = CodeClass::from_id(args.class).map_err(|e| Failure::usage("class", &e))?;
    let params = ConstructionParams::new(class, args.k, args.delta, args.lambda);
    let code = construct(&params).map_err(|e| classify("construct", e))?;
    if let Some(path) = &args.problem_out {
        let problem =
            one_sided_problem(args.k, args.delta).map_err(|e| Failure::usage("problem", &e))?;
        let json = problem
            .to_json()
            .map_err(|e| Failure::usage("problem", &e))?;
        write_file(path, &format!("{json}\n"))?;
    }
    print_code(&code, args.format)
}

fn cmd_extend(args: &ExtendArgs) -> Result<(), Failure> {
    let text = read_file(&args.code)?;
    let scalar = LinearCode::from_json(&text)
        .map_err(|e| Failure::Usage(format!("{}: {e}", args.code.display())))?;
    let k = scalar.num_messages();
    let delta = match args.delta {
        Some(d) => d,
        None => k.checked_sub(scalar.len()).filter(|&d| d > 0).ok_or_else(|| {
            Failure::Usage(format!(
                "cannot infer the seed antidote count from a length-{} code over {k} messages; pass --delta",
                scalar.len()
            ))
        })?,
    };
    let problem = one_sided_problem(k, delta).map_err(|e| Failure::usage("seed problem", &e))?;
    let schedule = build_schedule(&scalar, args.u, &problem).map_err(|e| classify("extend", e))?;
    let code = substitute(&scalar, args.u).map_err(|e| classify("extend", e))?;
    if let Some(path) = &args.schedule {
        let json = schedule
            .to_json()
            .map_err(|e| Failure::usage("schedule", &e))?;
        write_file(path, &format!("{json}\n"))?;
    }
    if let Some(path) = &args.problem_out {
        let extended = schedule
            .extended_problem()
            .map_err(|e| Failure::usage("problem", &e))?;
        let json = extended
            .to_json()
            .map_err(|e| Failure::usage("problem", &e))?;
        write_file(path, &format!("{json}\n"))?;
    }
    print_code(&code, args.format)
}

fn cmd_verify(args: &VerifyArgs) -> Result<(), Failure> {
    let problem = ProblemSpec::from_json(&read_file(&args.problem)?)
        .map_err(|e| Failure::Usage(format!("{}: {e}", args.problem.display())))?;
    let code = LinearCode::from_json(&read_file(&args.code)?)
        .map_err(|e| Failure::Usage(format!("{}: {e}", args.code.display())))?;
    let code_id = args.code.display().to_string();
    let mut report =
        verify_against_problem(&problem, &code, &code_id).map_err(|e| classify("verify", e))?;
    if args.oracle {
        match minrank_oracle(&problem, code.len()) {
            Ok(result) => {
                let text = match result {
                    Some(l) => format!("exhaustive minimum length within {}: {l}", code.len()),
                    None => format!("no code of length <= {} exists", code.len()),
                };
                report.notes.push(text);
            }
            Err(e) => report.notes.push(format!("oracle skipped: {e}")),
        }
    }
    let json = report.to_json().map_err(|e| Failure::usage("report", &e))?;
    println!("{json}");
    if report.all_decodable {
        Ok(())
    } else {
        Err(Failure::Verification(
            "verification failed: undecodable receivers".into(),
        ))
    }
}

#[derive(Serialize)]
struct DecodeReport {
    trials: usize,
    receivers: usize,
    failures: Vec<String>,
    ok: bool,
}

fn cmd_decode(args: &DecodeArgs) -> Result<(), Failure> {
    let code = LinearCode::from_json(&read_file(&args.code)?)
        .map_err(|e| Failure::Usage(format!("{}: {e}", args.code.display())))?;
    let schedule = DecodingSchedule::from_json(&read_file(&args.schedule)?)
        .map_err(|e| Failure::Usage(format!("{}: {e}", args.schedule.display())))?;
    if schedule.k != code.num_messages()
        || schedule.u + 1 != code.block_size()
        || schedule.l != code.len()
    {
        return Err(Failure::Usage(format!(
            "schedule (K={}, u={}, l={}) does not match code (K={}, t={}, l={})",
            schedule.k,
            schedule.u,
            schedule.l,
            code.num_messages(),
            code.block_size(),
            code.len()
        )));
    }
    let problem = schedule
        .extended_problem()
        .map_err(|e| Failure::usage("schedule", &e))?;
    let t = code.block_size();
    let len = code.num_messages() * t;

    let mut messages = Vec::new();
    if let Some(bits) = &args.message {
        if bits.len() != len || bits.chars().any(|c| c != '0' && c != '1') {
            return Err(Failure::Usage(format!(
                "--message must be {len} characters of 0/1"
            )));
        }
        messages.push(BitVec::from_bits(bits));
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
        for _ in 0..args.trials {
            let mut m = BitVec::zeros(len);
            for i in 0..len {
                m.set(i, rng.random());
            }
            messages.push(m);
        }
    }

    let mut failures = Vec::new();
    for (trial, message) in messages.iter().enumerate() {
        let word = encode(&code, message).map_err(|e| Failure::usage("encode", &e))?;
        for k in 1..=code.num_messages() {
            let side: KnownComponents = side_info_for(&problem, t, message, k);
            match decode_with_schedule(&schedule, &word, &side, k) {
                Ok(block) => {
                    for (i, &bit) in block.iter().enumerate() {
                        if bit != message.get((k - 1) * t + i) {
                            failures.push(format!(
                                "trial {trial}: receiver {k} component {} mismatched",
                                i + 1
                            ));
                        }
                    }
                }
                Err(e) => failures.push(format!("trial {trial}: receiver {k}: {e}")),
            }
        }
    }
    let report = DecodeReport {
        trials: messages.len(),
        receivers: code.num_messages(),
        ok: failures.is_empty(),
        failures,
    };
    println!("{}", serde_json::to_string_pretty(&report).unwrap());
    if report.ok {
        Ok(())
    } else {
        Err(Failure::Verification("decode round trips failed".into()))
    }
}

struct SweepRow {
    k: usize,
    delta: usize,
    class: u8,
    lambda: Option<usize>,
    u: usize,
    length: usize,
    rate: Rational,
    capacity: Rational,
    optimal: bool,
    verified: bool,
    minrank: Option<String>,
}

fn cmd_sweep(args: &SweepArgs) -> Result<(), Failure> {
    if args.k.is_empty() || args.u.is_empty() {
        return Err(Failure::Usage("empty sweep range".into()));
    }
    let lambda_fixed: Option<usize> =
        match args.lambda.as_str() {
            "all" => None,
            s => Some(s.parse().map_err(|_| {
                Failure::Usage(format!("--lambda must be `all` or a number, got {s}"))
            })?),
        };
    let mut instances = Vec::new();
    for k in args.k.clone() {
        let deltas = match &args.delta {
            Some(r) => r.clone(),
            None => 1..=k.saturating_sub(1),
        };
        for delta in deltas {
            if delta == 0 || delta >= k {
                continue;
            }
            for class in indexcode::construct::CONSTRUCTIBLE_CLASSES {
                if let Some(filter) = &args.classes {
                    if !filter.contains(&class.id()) {
                        continue;
                    }
                }
                let lambdas = if class.uses_lambda() {
                    indexcode::valid_lambdas(class, k, delta)
                        .into_iter()
                        .filter(|l| lambda_fixed.is_none_or(|fixed| fixed == *l))
                        .map(Some)
                        .collect()
                } else if ConstructionParams::new(class, k, delta, None)
                    .resolved()
                    .is_ok()
                {
                    vec![None]
                } else {
                    Vec::new()
                };
                for lambda in lambdas {
                    for u in args.u.clone() {
                        if u + delta + u < k {
                            instances.push((ConstructionParams::new(class, k, delta, lambda), u));
                        }
                    }
                }
            }
        }
    }

    let oracle = args.oracle;
    let rows: Vec<Result<SweepRow, String>> = instances
        .par_iter()
        .map(|&(params, u)| sweep_row(params, u, oracle))
        .collect();

    let mut any_failed = false;
    let mut out = String::new();
    let header = if oracle {
        "K,delta,class,lambda,U,length,rate,capacity,optimal,verified,minrank"
    } else {
        "K,delta,class,lambda,U,length,rate,capacity,optimal,verified"
    };
    match args.format {
        TableFormat::Csv => {
            let _ = writeln!(out, "{header}");
        }
        TableFormat::Table => {
            let _ = writeln!(out, "{}", header.replace(',', "\t"));
        }
    }
    for row in rows {
        match row {
            Ok(r) => {
                if !r.verified {
                    any_failed = true;
                }
                let lambda = r.lambda.map_or_else(|| "-".into(), |l| l.to_string());
                let minrank = if oracle {
                    format!(",{}", r.minrank.as_deref().unwrap_or("-"))
                } else {
                    String::new()
                };
                let line = format!(
                    "{},{},{},{},{},{},{},{},{},{}{}",
                    r.k,
                    r.delta,
                    r.class,
                    lambda,
                    r.u,
                    r.length,
                    r.rate,
                    r.capacity,
                    r.optimal,
                    r.verified,
                    minrank
                );
                match args.format {
                    TableFormat::Csv => {
                        let _ = writeln!(out, "{line}");
                    }
                    TableFormat::Table => {
                        let _ = writeln!(out, "{}", line.replace(',', "\t"));
                    }
                }
            }
            Err(msg) => {
                any_failed = true;
                eprintln!("{msg}");
            }
        }
    }
    print!("{out}");
    if any_failed {
        Err(Failure::Verification(
            "sweep found failing instances".into(),
        ))
    } else {
        Ok(())
    }
}

fn sweep_row(params: ConstructionParams, u: usize, oracle: bool) -> Result<SweepRow, String> {
    let tag = format!(
        "K={} delta={} class={} lambda={:?} u={u}",
        params.k,
        params.delta,
        params.class.id(),
        params.lambda
    );
    let scalar = construct(&params).map_err(|e| format!("{tag}: {e}"))?;
    let code = if u == 0 {
        scalar.clone()
    } else {
        substitute(&scalar, u).map_err(|e| format!("{tag}: {e}"))?
    };
    let problem = indexcode::extended_problem(params.k, u, params.delta)
        .map_err(|e| format!("{tag}: {e}"))?;
    let report =
        verify_against_problem(&problem, &code, &tag).map_err(|e| format!("{tag}: {e}"))?;
    let cap = capacity(params.k, u, params.delta + u).map_err(|e| format!("{tag}: {e}"))?;
    let minrank = if oracle && u == 0 {
        match minrank_oracle(&problem, code.len()) {
            Ok(Some(l)) => Some(l.to_string()),
            Ok(None) => Some(format!(">{}", code.len())),
            Err(_) => None,
        }
    } else {
        None
    };
    Ok(SweepRow {
        k: params.k,
        delta: params.delta,
        class: params.class.id(),
        lambda: params.lambda,
        u,
        length: code.len(),
        rate: report.rate,
        capacity: cap,
        optimal: report.optimal,
        verified: report.all_decodable,
        minrank,
    })
}

fn cmd_golden(args: &GoldenArgs) -> Result<(), Failure> {
    let checks = indexcode::golden::check_all();
    match args.format {
        TableFormat::Csv => {
            println!("id,passed,errata_rows,notes");
            for c in &checks {
                println!(
                    "{},{},{:?},{:?}",
                    c.id,
                    c.passed,
                    c.errata_rows,
                    c.notes.join("; ")
                );
            }
        }
        TableFormat::Table => {
            for c in &checks {
                let verdict = if c.passed { "ok" } else { "FAIL" };
                println!("{:12} {verdict}", c.id);
                for note in &c.notes {
                    println!("{:12}   {note}", "");
                }
            }
        }
    }
    if checks.iter().all(|c| c.passed) {
        Ok(())
    } else {
        Err(Failure::Verification(
            "golden comparison found unexplained differences".into(),
        ))
    }
}

fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    if let Some((lo, hi)) = s.split_once("..") {
        let lo: usize = lo
            .trim()
            .parse()
            .map_err(|_| format!("bad range start in {s:?}"))?;
        let hi: usize = hi
            .trim()
            .parse()
            .map_err(|_| format!("bad range end in {s:?}"))?;
        if lo > hi {
            return Err(format!("empty range {s:?}"));
        }
        Ok(lo..=hi)
    } else {
        let v: usize = s.trim().parse().map_err(|_| format!("bad number {s:?}"))?;
        Ok(v..=v)
    }
}
