use std::fs;
use std::io::{self, Read};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use qdel::channel::{corrupt, CorruptSpec};
use qdel::format::CodecFile;
use qdel::report::{full_report, redundancy_report};
use qdel::tables::TableCache;
use qdel::text::{format_word, parse_word};
use qdel::verify::{roundtrip_verify, Scope};
use qdel_core::codec::{build_codec, Codec};
use qdel_core::params::{param_validate, CodeParams, Mode, ValidParams};
use qdel_core::sketch::SketchProviderId;

#[derive(Parser)]
#[command(name = "qdel", version, about = "Two-deletion and burst-deletion codes over even alphabets")]
struct Cli {
    /// Directory for cached colored tables (CLRT files).
    #[arg(long, global = true)]
    table_cache: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Encode a message.
    Encode(IoArgs),
    /// Decode a received word.
    Decode(IoArgs),
    /// Delete symbols from a word with a seeded channel.
    Corrupt(CorruptArgs),
    /// Round-trip verification, exhaustive or random.
    Verify(VerifyArgs),
    /// Redundancy per stage against the asymptotic formulas.
    Report(ReportArgs),
    /// Quick end-to-end check of all three codes.
    Selftest,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Twodel,
    BurstBin,
    BurstQ,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProviderArg {
    Verbatim,
    Colored,
}

#[derive(Args, Clone)]
struct CodeArgs {
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Message length in symbols (bits for burst-bin).
    #[arg(long)]
    n: Option<usize>,
    /// Alphabet size (default 4, or 2 for burst-bin).
    #[arg(long)]
    q: Option<u32>,
    /// Longest burst (two-deletion codes use 2).
    #[arg(long, default_value_t = 2)]
    t: usize,
    #[arg(long, value_enum, default_value = "verbatim")]
    provider: ProviderArg,
    /// Regularity constant (windows of d log n bits).
    #[arg(long)]
    d: Option<u32>,
    /// Window stride of the two-deletion code.
    #[arg(long)]
    rho: Option<usize>,
    /// Density window of the burst codes.
    #[arg(long)]
    delta: Option<usize>,
    /// Window stride of the burst codes.
    #[arg(long)]
    delta_prime: Option<usize>,
    /// Longest string the colored provider handles.
    #[arg(long)]
    w_max: Option<usize>,
    /// Take parameters from the header of a QDEL file.
    #[arg(long)]
    params_file: Option<PathBuf>,
}

#[derive(Args)]
struct IoArgs {
    #[command(flatten)]
    code: CodeArgs,
    /// Word as LEN:HEX (binary) or space-separated digits; stdin if absent.
    #[arg(long)]
    input: Option<String>,
    /// Read the word and its parameters from a QDEL file.
    #[arg(long = "in")]
    in_file: Option<PathBuf>,
    /// Also write the result as a QDEL file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CorruptArgs {
    #[command(flatten)]
    io: IoArgs,
    #[arg(long, conflicts_with = "burst")]
    deletions: Option<usize>,
    #[arg(long)]
    burst: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    code: CodeArgs,
    #[arg(long, conflicts_with = "trials")]
    exhaustive: bool,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct ReportArgs {
    #[command(flatten)]
    code: CodeArgs,
    /// Report all three codes at (n, q, t).
    #[arg(long)]
    all: bool,
}

/// Usage errors exit with 2, decode failures with 1.
enum Failure {
    Usage(anyhow::Error),
    Decode(anyhow::Error),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.into())
    }
}

fn params_from(args: &CodeArgs) -> anyhow::Result<ValidParams> {
    let mut p = if let Some(path) = &args.params_file {
        let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        CodecFile::from_bytes(&bytes)?.params
    } else {
        let mode = match args.mode.context("--mode is required")? {
            ModeArg::Twodel => Mode::TwoDel,
            ModeArg::BurstBin => Mode::BurstBin,
            ModeArg::BurstQ => Mode::BurstQ,
        };
        let q = args.q.unwrap_or(if mode == Mode::BurstBin { 2 } else { 4 });
        let mut p = CodeParams::new(mode, args.n.context("--n is required")?, q, args.t);
        if let Some(d) = args.d {
            p.d = d;
            p = p.with_default_rho();
        }
        if let Some(delta) = args.delta {
            p = p.with_delta(delta);
        }
        p
    };
    if let ProviderArg::Colored = args.provider {
        p.provider = SketchProviderId::Colored;
    }
    if let Some(r) = args.rho {
        p.rho = r;
    }
    if let Some(dp) = args.delta_prime {
        p.delta_prime = dp;
    }
    if let Some(w) = args.w_max {
        p.w_max = w;
    }
    param_validate(&p).map_err(|errs| {
        let msgs: Vec<String> = errs.iter().map(ToString::to_string).collect();
        anyhow::anyhow!(msgs.join("; "))
    })
}

fn codec_for(vp: &ValidParams, cache: &TableCache) -> anyhow::Result<Box<dyn Codec>> {
    let provider = match vp.params.mode {
        Mode::TwoDel => Some(cache.provider(vp)?),
        _ => None,
    };
    Ok(build_codec(vp, provider)?)
}

/// Parameters and input word from `--in`, or from the flags and text.
fn read_input(io: &IoArgs) -> anyhow::Result<(ValidParams, Vec<u32>)> {
    if let Some(path) = &io.in_file {
        let f = CodecFile::from_bytes(&fs::read(path).with_context(|| format!("reading {}", path.display()))?)?;
        return Ok((ValidParams::new(&f.params)?, f.symbols));
    }
    let vp = params_from(&io.code)?;
    let text = match &io.input {
        Some(s) => s.clone(),
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            s
        }
    };
    let word = parse_word(&text, vp.params.code_q())?;
    Ok((vp, word))
}

fn emit(vp: &ValidParams, word: &[u32], out: &Option<PathBuf>) -> anyhow::Result<()> {
    println!("{}", format_word(word, vp.params.code_q()));
    if let Some(path) = out {
        fs::write(path, CodecFile::new(vp, word.to_vec()).to_bytes()?)?;
    }
    Ok(())
}

fn selftest(cache: &TableCache) -> Result<(), Failure> {
    let cases = [
        CodeParams::new(Mode::TwoDel, 3, 4, 2).with_rho(63),
        CodeParams::new(Mode::BurstBin, 6, 2, 2).with_delta(8),
        CodeParams::new(Mode::BurstQ, 4, 4, 2).with_delta(8),
    ];
    let mut ok = true;
    for p in cases {
        let vp = ValidParams::new(&p)?;
        let codec = codec_for(&vp, cache)?;
        let rep = roundtrip_verify(codec.as_ref(), Scope::Exhaustive)?;
        println!("{:<10} n={} q={} cases {:>7} failures {}", p.mode, p.n, p.code_q(), rep.cases, rep.failures.len());
        ok &= rep.ok();
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::Decode(anyhow::anyhow!("selftest failed")))
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let cache = TableCache::new(cli.table_cache);
    match cli.cmd {
        Cmd::Encode(io) => {
            let (vp, u) = read_input(&io)?;
            let x = codec_for(&vp, &cache)?.encode(&u)?;
            emit(&vp, &x, &io.out)?;
        }
        Cmd::Decode(io) => {
            let (vp, y) = read_input(&io)?;
            let codec = codec_for(&vp, &cache)?;
            let u = codec.decode(&y).map_err(|e| Failure::Decode(e.into()))?;
            emit(&vp, &u, &io.out)?;
        }
        Cmd::Corrupt(args) => {
            let spec = match (args.deletions, args.burst) {
                (Some(k), None) => CorruptSpec::Deletions(k),
                (None, Some(t)) => CorruptSpec::Burst(t),
                _ => return Err(anyhow::anyhow!("give exactly one of --deletions and --burst").into()),
            };
            let (vp, x) = read_input(&args.io)?;
            let c = corrupt(&x, spec, args.seed)?;
            eprintln!("deleted {:?}", c.deleted);
            emit(&vp, &c.word, &args.io.out)?;
        }
        Cmd::Verify(args) => {
            let vp = params_from(&args.code)?;
            let codec = codec_for(&vp, &cache)?;
            let scope = if args.exhaustive {
                Scope::Exhaustive
            } else {
                Scope::Random { trials: args.trials, seed: args.seed }
            };
            let rep = roundtrip_verify(codec.as_ref(), scope)?;
            print!("{rep}");
            if !rep.ok() {
                return Err(Failure::Decode(anyhow::anyhow!("{} failures", rep.failures.len())));
            }
        }
        Cmd::Report(args) => {
            if args.all {
                let q = args.code.q.unwrap_or(4);
                print!("{}", full_report(args.code.n.context("--n is required")?, q, args.code.t)?);
            } else {
                print!("{}", redundancy_report(&params_from(&args.code)?));
            }
        }
        Cmd::Selftest => selftest(&cache)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Decode(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
