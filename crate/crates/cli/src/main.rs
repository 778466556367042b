use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use kolmozip::kclab::{joint_bound_report, phi, phi_curve};
use kolmozip::pipeline::{
    compress_conditional, compress_with, decompress_conditional, decompress_conditional_with,
    scaling_ladder, CompressedArtifact, SessionOptions,
};
use kolmozip::predictors::{LearningRate, PredictorConfig, PredictorKind};
use kolmozip::sources::{corpus_text, worksheet_corpus, write_records, MarkovSpec};
use kolmozip::BitString;
use serde_json::json;

/// Exit status for bad arguments, unreadable inputs and invalid settings.
const EXIT_USAGE: u8 = 1;
/// Exit status for malformed or undecodable artifacts.
const EXIT_DATA: u8 = 2;

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
}

impl From<kolmozip::Error> for CliError {
    fn from(e: kolmozip::Error) -> Self {
        use kolmozip::Error::*;
        match e {
            Format(_) | UnsupportedVersion(_) | TruncatedStream(_) | ContextMismatch { .. } => {
                CliError::Data(e.to_string())
            }
            _ => CliError::Usage(e.to_string()),
        }
    }
}

type CliResult<T = ()> = Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(
    name = "kolmozip",
    version,
    about = "Compression by online learning, plus a small complexity workbench"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compress a file
    Compress(CompressArgs),
    /// Decompress an artifact
    Decompress(DecompressArgs),
    /// Compress a file conditioned on a context file
    Ccompress(CcompressArgs),
    /// Generate synthetic corpora
    #[command(subcommand)]
    Gen(GenCommand),
    /// Compress one input under several models
    Ladder(LadderArgs),
    /// Complexity estimates on the toy machine
    #[command(subcommand)]
    Kc(KcCommand),
}

#[derive(Args, Debug)]
struct ModelArgs {
    /// uniform, freq:K or neural:K,W
    #[arg(long, value_name = "SPEC", default_value = "freq:2")]
    model: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Learning rate for neural models
    #[arg(long, value_name = "RATE")]
    lr: Option<f64>,
}

impl ModelArgs {
    fn config(&self) -> CliResult<PredictorConfig> {
        config_for(&self.model, self.seed, self.lr)
    }
}

fn config_for(spec: &str, seed: u64, lr: Option<f64>) -> CliResult<PredictorConfig> {
    let kind: PredictorKind = spec.parse()?;
    let mut config = PredictorConfig::new(kind, seed);
    if let Some(rate) = lr {
        config = config.with_learning_rate(LearningRate::from_f64(rate)?);
    }
    Ok(config)
}

#[derive(Args, Debug)]
struct CompressArgs {
    input: PathBuf,
    output: PathBuf,
    #[command(flatten)]
    model: ModelArgs,
    /// Decode again and compare predictor digests after every byte
    #[arg(long)]
    audit: bool,
}

#[derive(Args, Debug)]
struct DecompressArgs {
    input: PathBuf,
    output: PathBuf,
    /// Context the artifact was compressed against
    #[arg(long, value_name = "FILE")]
    context: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CcompressArgs {
    target: PathBuf,
    output: PathBuf,
    #[arg(long, value_name = "FILE")]
    context: PathBuf,
    #[command(flatten)]
    model: ModelArgs,
}

#[derive(Subcommand, Debug)]
enum GenCommand {
    /// Sample a random Markov source
    Markov {
        #[arg(long)]
        order: u8,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        len: usize,
        #[arg(long, default_value_t = 256)]
        alphabet: u16,
        /// Added to every transition weight; larger is closer to uniform
        #[arg(long, default_value_t = 1)]
        concentration: u32,
        output: PathBuf,
    },
    /// Addition exercises with worked carries
    Worksheet {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        count: usize,
        /// Write plain concatenated text instead of length-prefixed records
        #[arg(long)]
        raw: bool,
        output: PathBuf,
    },
}

#[derive(Args, Debug)]
struct LadderArgs {
    input: PathBuf,
    /// Comma-separated model specs, e.g. uniform,freq:2,neural:2,16
    #[arg(long)]
    models: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum KcCommand {
    /// Budgeted conditional complexity estimate
    Phi {
        #[arg(long)]
        x: String,
        #[arg(long, default_value = "")]
        y: String,
        #[arg(long, required_unless_present = "curve")]
        t: Option<u64>,
        /// Evaluate at each budget of a nondecreasing list
        #[arg(long, value_delimiter = ',')]
        curve: Option<Vec<u64>>,
    },
    /// Joint-complexity bound for one pair
    Joint {
        #[arg(long)]
        x: String,
        #[arg(long, default_value = "")]
        y: String,
        #[arg(long)]
        t: u64,
    },
}

fn read(path: &Path) -> CliResult<Vec<u8>> {
    fs::read(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

/// Writes through a temporary file in the destination directory so a failed
/// run never leaves a partial output behind.
fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let fail = |e: io::Error| CliError::Usage(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(fail)?;
    tmp.write_all(bytes).map_err(fail)?;
    tmp.persist(path).map_err(|e| fail(e.error))?;
    Ok(())
}

fn bit_arg(s: &str) -> CliResult<BitString> {
    Ok(s.parse()?)
}

fn emit(line: &str) {
    println!("{line}");
}

fn compress_cmd(args: &CompressArgs) -> CliResult {
    let input = read(&args.input)?;
    let config = args.model.config()?;
    let options = if args.audit {
        SessionOptions::audit()
    } else {
        SessionOptions::default()
    };
    let (artifact, stats) = compress_with(&input, &config, options)?;
    let bytes = artifact.serialize();
    let mut report = serde_json::to_value(stats.report(&config)).expect("report serializes");
    if args.audit {
        let (decoded, trace) =
            decompress_conditional_with(&CompressedArtifact::deserialize(&bytes)?, &[], Some(1))?;
        if decoded != input || trace.digests != stats.digests {
            return Err(CliError::Data(
                "audit failed: decoder diverged from encoder".into(),
            ));
        }
        report["audit_digests"] = json!(trace.digests.len());
        report["final_digest"] = json!(trace.digests.last().map(|(_, d)| d.to_string()));
    }
    write_atomic(&args.output, &bytes)?;
    eprintln!(
        "{}: {} -> {} bytes, {:.4} bpb ({})",
        args.input.display(),
        input.len(),
        bytes.len(),
        stats.bpb(),
        config.kind
    );
    emit(&report.to_string());
    Ok(())
}

fn decompress_cmd(args: &DecompressArgs) -> CliResult {
    let artifact = CompressedArtifact::deserialize(&read(&args.input)?)?;
    let context = match &args.context {
        Some(p) => read(p)?,
        None => Vec::new(),
    };
    let out = decompress_conditional(&artifact, &context)?;
    write_atomic(&args.output, &out)?;
    eprintln!("{}: {} bytes", args.output.display(), out.len());
    Ok(())
}

fn ccompress_cmd(args: &CcompressArgs) -> CliResult {
    let target = read(&args.target)?;
    let context = read(&args.context)?;
    let config = args.model.config()?;
    let (artifact, stats) = compress_conditional(&target, &context, &config)?;
    let bytes = artifact.serialize();
    write_atomic(&args.output, &bytes)?;
    let mut report = serde_json::to_value(stats.report(&config)).expect("report serializes");
    report["context_bytes"] = json!(context.len());
    eprintln!(
        "{}: {} -> {} bytes given {} context bytes",
        args.target.display(),
        target.len(),
        bytes.len(),
        context.len()
    );
    emit(&report.to_string());
    Ok(())
}

fn gen_cmd(cmd: &GenCommand) -> CliResult {
    match cmd {
        GenCommand::Markov {
            order,
            seed,
            len,
            alphabet,
            concentration,
            output,
        } => {
            let spec = MarkovSpec::random(*order, *alphabet, *concentration, *seed)?;
            let data = spec.generate(*len)?;
            write_atomic(output, &data)?;
            let h = spec.entropy_rate::<f64>();
            eprintln!(
                "{}: {len} bytes, entropy rate {h:.4} bits/symbol",
                output.display()
            );
            emit(&json!({"source": "markov", "order": order, "alphabet": alphabet, "seed": seed, "len": len, "entropy_rate": h}).to_string());
        }
        GenCommand::Worksheet {
            seed,
            count,
            raw,
            output,
        } => {
            let records = worksheet_corpus(*seed, *count);
            let data = if *raw {
                corpus_text(&records)
            } else {
                let mut buf = Vec::new();
                write_records(&mut buf, &records).expect("writing to memory");
                buf
            };
            write_atomic(output, &data)?;
            eprintln!(
                "{}: {count} records, {} bytes",
                output.display(),
                data.len()
            );
            emit(
                &json!({"source": "worksheet", "seed": seed, "count": count, "bytes": data.len()})
                    .to_string(),
            );
        }
    }
    Ok(())
}

/// Splits a model list on commas. A piece that does not start a spec (the
/// width in `neural:K,W`) is glued back onto the previous one.
fn split_models(list: &str) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for piece in list.split(',') {
        match out.last_mut() {
            Some(prev) if !piece.is_empty() && piece.bytes().all(|b| b.is_ascii_digit()) => {
                prev.push(',');
                prev.push_str(piece);
            }
            _ => out.push(piece.to_owned()),
        }
    }
    out
}

fn ladder_cmd(args: &LadderArgs) -> CliResult {
    let input = read(&args.input)?;
    let configs = split_models(&args.models)
        .iter()
        .map(|m| config_for(m, args.seed, None))
        .collect::<CliResult<Vec<_>>>()?;
    for report in scaling_ladder(&input, &configs)? {
        eprintln!("{:>14}  {:.4} bpb", report.config, report.bpb);
        emit(&report.to_json());
    }
    Ok(())
}

fn kc_cmd(cmd: &KcCommand) -> CliResult {
    match cmd {
        KcCommand::Phi { x, y, t, curve } => {
            let (x, y) = (bit_arg(x)?, bit_arg(y)?);
            let estimates = match curve {
                Some(schedule) => phi_curve(&x, &y, schedule)?,
                None => vec![phi(t.expect("clap requires t without curve"), &x, &y)?],
            };
            for e in estimates {
                eprintln!(
                    "phi(t={}) = {} bits (ceiling {})",
                    e.budget, e.value_bits, e.ceiling_bits
                );
                emit(&e.to_json());
            }
        }
        KcCommand::Joint { x, y, t } => {
            let r = joint_bound_report(&bit_arg(x)?, &bit_arg(y)?, *t)?;
            eprintln!(
                "joint {} vs bound {}: gap {}",
                r.joint_bits, r.bound_bits, r.gap
            );
            emit(&serde_json::to_string(&r).expect("report serializes"));
        }
    }
    Ok(())
}

fn configure_threads() -> CliResult {
    let Ok(value) = std::env::var("KOLMOZIP_THREADS") else {
        return Ok(());
    };
    let n: usize = value.parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        CliError::Usage(format!(
            "KOLMOZIP_THREADS={value:?} is not a positive integer"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn run(cli: Cli) -> CliResult {
    configure_threads()?;
    match &cli.command {
        Command::Compress(a) => compress_cmd(a),
        Command::Decompress(a) => decompress_cmd(a),
        Command::Ccompress(a) => ccompress_cmd(a),
        Command::Gen(g) => gen_cmd(g),
        Command::Ladder(a) => ladder_cmd(a),
        Command::Kc(k) => kc_cmd(k),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("kolmozip: {e}");
            ExitCode::from(match e {
                CliError::Usage(_) => EXIT_USAGE,
                CliError::Data(_) => EXIT_DATA,
            })
        }
    }
}
