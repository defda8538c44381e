use std::collections::BTreeSet;
use std::fs::{File, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use octic_cert::curves::{bounded_integral_points, minimal_model, EllPoint};
use octic_cert::descent::{two_descent, Conclusion};
use octic_cert::factorcheck::irreducible_over_Z;
use octic_cert::family::ordered_pairs;
use octic_cert::pipeline::{
    summarize, sweep_pair, verify, CurveBlock, PipelineVerdict, PointsBlock, SweepRecord,
    DEFAULT_HEIGHT,
};
use octic_cert::{CuboidParams, EllCurve, Poly, Rat, SCHEMA_VERSION};
use rayon::prelude::*;
use serde_json::{json, Value};

/// Search bound for integral points in `curve-report`.
const INTEGRAL_POINT_BOUND: u64 = 100;

/// Minimal models with a known Cremona label.
const CREMONA_LABELS: &[([i64; 5], &str)] = &[([0, 1, 0, -24, 36], "48a3")];

#[derive(Parser)]
#[command(
    name = "octic-cert",
    version,
    about = "Exact irreducibility certificates for the even octic family"
)]
struct Cli {
    /// Indent JSON output.
    #[arg(long, global = true)]
    json_pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every stage of the certificate for one pair.
    Verify {
        #[arg(long)]
        a: BigInt,
        #[arg(long)]
        u: BigInt,
        /// Height bound of the quartic point search.
        #[arg(long, default_value_t = DEFAULT_HEIGHT)]
        height: u64,
    },
    /// Minimal model, conductor, torsion, rank and integral points of E.
    CurveReport,
    /// Rational points on v² = 16y⁴ + 136y² + 1.
    Points {
        #[arg(long)]
        height: u64,
    },
    /// The complete 2-descent on E.
    Descent,
    /// Check every ordered coprime pair a ≠ u ≤ max, one JSON line each.
    Sweep {
        #[arg(long)]
        max: u64,
        /// Worker threads; defaults to the number of cores.
        #[arg(long)]
        jobs: Option<usize>,
        /// JSON-lines file of finished pairs; skipped on start, appended to.
        #[arg(long)]
        resume: Option<PathBuf>,
    },
    /// Irreducibility over ℤ of a polynomial given constant term first.
    Oracle {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        coeffs: Vec<BigInt>,
    },
}

enum Failure {
    Usage(String),
    Verification,
    Io(io::Error),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<octic_cert::Error> for Failure {
    fn from(e: octic_cert::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn with_schema(value: impl serde::Serialize) -> Value {
    let mut value = serde_json::to_value(value).expect("reports serialize");
    if let Value::Object(map) = &mut value {
        map.insert("schema_version".into(), json!(SCHEMA_VERSION));
    }
    value
}

fn emit(value: &Value, pretty: bool) -> io::Result<()> {
    let mut out = io::stdout().lock();
    if pretty {
        serde_json::to_writer_pretty(&mut out, value)?;
    } else {
        serde_json::to_writer(&mut out, value)?;
    }
    writeln!(out)
}

fn cmd_verify(a: BigInt, u: BigInt, height: u64, pretty: bool) -> Result<(), Failure> {
    let params = CuboidParams::new(a, u).map_err(|e| Failure::Usage(e.to_string()))?;
    let report = verify(&params, height)?;
    emit(&with_schema(&report), pretty)?;
    match report.verdict {
        PipelineVerdict::IrreducibleVerified => Ok(()),
        PipelineVerdict::Failure(stage) => {
            log::error!("verification failed at stage {stage:?}");
            Err(Failure::Verification)
        }
    }
}

fn cremona_label(e: &EllCurve) -> Option<&'static str> {
    CREMONA_LABELS
        .iter()
        .find(|(c, _)| EllCurve::from_ints(*c).as_ref() == Ok(e))
        .map(|(_, label)| *label)
}

fn cmd_curve_report(pretty: bool) -> Result<(), Failure> {
    let e = EllCurve::e_model();
    let block = CurveBlock::compute()?;
    let minimal = minimal_model(&e)?;
    let descent = two_descent(&e)?;
    let integral = bounded_integral_points(&e, INTEGRAL_POINT_BOUND)?;
    let conductor = serde_json::to_value(&block.conductor).expect("reports serialize");
    let rank = (descent.conclusion == Conclusion::RankZeroProved).then_some(0);
    let torsion_points: Vec<Value> = block
        .torsion
        .points
        .iter()
        .zip(&block.torsion.point_orders)
        .map(|(p, n)| json!({ "point": p, "order": n }))
        .collect();
    let report = json!({
        "curve": e,
        "minimal_model": minimal,
        "cremona_reference": cremona_label(&minimal),
        "conductor": conductor["conductor"],
        "local_reduction": conductor["local"],
        "minimal_discriminant": conductor["minimal_discriminant"],
        "j_invariant": block.j_invariant,
        "torsion": {
            "invariants": block.torsion.group_invariants,
            "order": block.torsion.order,
            "points": torsion_points,
        },
        "rank": rank,
        "rank_bounds": {
            "lower": descent.rank_lower,
            "upper": descent.rank_upper,
            "selmer_rank": descent.selmer_rank,
            "conclusion": descent.conclusion,
        },
        "integral_points": {
            "bound": INTEGRAL_POINT_BOUND,
            "points": integral,
        },
        "quartic": {
            "I": block.i,
            "J": block.j,
            "jacobian": block.e0,
            "isomorphic_to_curve": block.e0_e_isomorphic,
            "disc_ratio": block.disc_ratio,
        },
    });
    emit(&with_schema(report), pretty)?;
    Ok(())
}

fn cmd_points(height: u64, pretty: bool) -> Result<(), Failure> {
    let block = PointsBlock::compute(height)?;
    let images: Vec<Value> = block
        .points
        .iter()
        .zip(&block.images)
        .map(|(p, q)| json!({ "point": p, "image": q }))
        .collect();
    let report = json!({
        "height": height,
        "count": block.points.len(),
        "points": block.points,
        "tau_set": block.tau_set,
        "map_to_curve": images,
        "injective": block.images.iter().collect::<BTreeSet<&EllPoint>>().len() == block.points.len(),
    });
    emit(&with_schema(report), pretty)?;
    Ok(())
}

fn cmd_descent(pretty: bool) -> Result<(), Failure> {
    let report = two_descent(&EllCurve::e_model())?;
    emit(&with_schema(&report), pretty)?;
    if report.conclusion == Conclusion::RankZeroProved {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn read_resume(path: &Path) -> io::Result<Vec<SweepRecord>> {
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => return Err(e),
    };
    let mut done = Vec::new();
    for line in BufReader::new(file).lines() {
        let line = line?;
        // a line cut short by an interruption is recomputed
        let Ok(value) = serde_json::from_str::<Value>(&line) else {
            continue;
        };
        if value.get("summary").is_some() {
            continue;
        }
        if let Ok(record) = serde_json::from_value::<SweepRecord>(value) {
            done.push(record);
        }
    }
    Ok(done)
}

/// Opens the resume file for appending, ending a torn last line first.
fn open_resume(path: &Path) -> io::Result<File> {
    let torn = match std::fs::read(path) {
        Ok(bytes) => bytes.last().is_some_and(|&b| b != b'\n'),
        Err(e) if e.kind() == io::ErrorKind::NotFound => false,
        Err(e) => return Err(e),
    };
    let mut file = OpenOptions::new().create(true).append(true).open(path)?;
    if torn {
        writeln!(file)?;
    }
    Ok(file)
}

fn cmd_sweep(max: u64, jobs: Option<usize>, resume: Option<PathBuf>) -> Result<(), Failure> {
    if max < 2 {
        return Err(Failure::Usage("--max must be at least 2".into()));
    }
    let start = Instant::now();
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = jobs {
        pool = pool.num_threads(jobs);
    }
    let pool = pool.build().map_err(|e| Failure::Usage(e.to_string()))?;

    let pairs = ordered_pairs(max);
    let wanted: BTreeSet<(u64, u64)> = pairs.iter().copied().collect();
    let mut previous = match &resume {
        Some(path) => read_resume(path)?,
        None => Vec::new(),
    };
    previous.retain(|r| wanted.contains(&(r.a, r.u)));
    previous.sort_by_key(|r| (r.a, r.u));
    previous.dedup_by_key(|r| (r.a, r.u));
    let done: BTreeSet<(u64, u64)> = previous.iter().map(|r| (r.a, r.u)).collect();
    let todo: Vec<(u64, u64)> = pairs
        .into_iter()
        .filter(|pair| !done.contains(pair))
        .collect();
    log::info!(
        "sweep: {} pairs, {} already done",
        todo.len() + done.len(),
        done.len()
    );

    let mut sink = match &resume {
        Some(path) => Some(open_resume(path)?),
        None => None,
    };
    let mut records = previous;
    let chunk = pool.current_num_threads().max(1) * 8;
    for batch in todo.chunks(chunk) {
        let results: Vec<SweepRecord> = pool.install(|| {
            batch
                .par_iter()
                .map(|&(a, u)| sweep_pair(a, u))
                .collect::<Result<_, _>>()
        })?;
        let mut out = io::stdout().lock();
        for record in results {
            // through Value so keys come out sorted
            let value = serde_json::to_value(&record).expect("records serialize");
            let line = value.to_string();
            writeln!(out, "{line}")?;
            if let Some(file) = sink.as_mut() {
                writeln!(file, "{line}")?;
            }
            records.push(record);
        }
        out.flush()?;
    }
    records.sort_by_key(|r| (r.a, r.u));
    let summary = summarize(max, &records);
    let failed = !summary.failures.is_empty();
    let mut trailer = with_schema(&summary);
    trailer["wall_time_ms"] = json!(start.elapsed().as_millis() as u64);
    trailer["resumed"] = json!(done.len());
    emit(&json!({ "summary": trailer }), false)?;
    if failed {
        Err(Failure::Verification)
    } else {
        Ok(())
    }
}

fn cmd_oracle(coeffs: Vec<BigInt>, pretty: bool) -> Result<(), Failure> {
    let f = Poly::new(coeffs.iter().map(Rat::from).collect());
    let cert = irreducible_over_Z(&f)?;
    emit(
        &with_schema(json!({ "input": f, "certificate": cert })),
        pretty,
    )?;
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    let pretty = cli.json_pretty;
    if !matches!(cli.command, Command::Sweep { .. }) {
        rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build_global()
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    match cli.command {
        Command::Verify { a, u, height } => cmd_verify(a, u, height, pretty),
        Command::CurveReport => cmd_curve_report(pretty),
        Command::Points { height } => cmd_points(height, pretty),
        Command::Descent => cmd_descent(pretty),
        Command::Sweep { max, jobs, resume } => cmd_sweep(max, jobs, resume),
        Command::Oracle { coeffs } => cmd_oracle(coeffs, pretty),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("OCTIC_CERT_LOG", "warn"))
        .init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        // a closed stdout, as under `| head`, ends the run quietly
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
