//! `rpim`: compress, decompress and inspect `.rpim` containers, and run the
//! corpus benchmark.
//!
//! Exit codes: 0 success, 1 usage error, 2 corrupt or unsupported data,
//! 3 I/O error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rpim_core::bench::{self, BenchError, ReportFormat};
use rpim_core::codec;
use rpim_core::container::{self, PayloadKind};
use rpim_core::image::{BmpError, LinearizationMode};
use rpim_core::repair::CompressorConfig;

#[derive(Parser, Debug)]
#[command(name = "rpim", version, about = "Lossless Re-Pair compression for BMP images and raw files")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compress a 24-bit BMP (or any file with --raw) into an .rpim container
    Compress {
        input: PathBuf,
        output: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Zigzag)]
        mode: ModeArg,
        /// Treat the input as an opaque byte stream
        #[arg(long)]
        raw: bool,
        /// Stop once no pair occurs this many times
        #[arg(long = "min-freq", default_value_t = 2, value_parser = clap::value_parser!(u64).range(2..))]
        min_freq: u64,
    },
    /// Restore the original BMP or byte stream from a container
    Decompress { input: PathBuf, output: PathBuf },
    /// Print container metadata
    Inspect { input: PathBuf },
    /// Compress every BMP in a directory in every mode and report ratios
    Bench {
        corpus_dir: PathBuf,
        /// Write the synthetic corpus into the directory first
        #[arg(long)]
        generate: bool,
        #[arg(long, value_enum, default_value_t = FormatArg::Table)]
        format: FormatArg,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Row,
    Zigzag,
    SplitRow,
    SplitZigzag,
}

impl From<ModeArg> for LinearizationMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Row => LinearizationMode::RowMajor,
            ModeArg::Zigzag => LinearizationMode::ZigZag,
            ModeArg::SplitRow => LinearizationMode::ChannelSplitRowMajor,
            ModeArg::SplitZigzag => LinearizationMode::ChannelSplitZigZag,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Table,
    Csv,
}

enum Failure {
    Usage(String),
    Data(String),
    Io(String),
}

impl Failure {
    fn io(path: &Path, err: std::io::Error) -> Self {
        Failure::Io(format!("{}: {err}", path.display()))
    }

    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Data(_) => 2,
            Failure::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Data(m) | Failure::Io(m) => m,
        }
    }
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure::io(path, e))
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    fs::write(path, bytes).map_err(|e| Failure::io(path, e))
}

fn compress(input: &Path, output: &Path, mode: LinearizationMode, raw: bool, min_freq: u64) -> Result<(), Failure> {
    let config = usize::try_from(min_freq)
        .ok()
        .and_then(|m| CompressorConfig::new(m).ok())
        .ok_or_else(|| Failure::Usage(format!("invalid --min-freq {min_freq}")))?;
    let data = read(input)?;
    let artifact = if raw {
        codec::compress_raw(&data, config)
    } else {
        codec::compress_bmp(&data, mode, config).map_err(|e| match e {
            codec::Error::Bmp(BmpError::NotBmp) => Failure::Data(format!(
                "{}: not a BMP file; convert to 24-bit uncompressed BMP or pass --raw",
                input.display()
            )),
            other => Failure::Data(format!("{}: {other}", input.display())),
        })?
    };
    let bytes = container::serialize(&artifact);
    write(output, &bytes)?;
    let ratio = if data.is_empty() { 0.0 } else { bytes.len() as f64 / data.len() as f64 };
    eprintln!(
        "in={} out={} ratio={ratio:.4} rules={}",
        data.len(),
        bytes.len(),
        artifact.grammar().len()
    );
    Ok(())
}

fn decompress(input: &Path, output: &Path) -> Result<(), Failure> {
    let bytes = read(input)?;
    let out = codec::decompress_container(&bytes).map_err(|e| Failure::Data(format!("{}: {e}", input.display())))?;
    write(output, &out)
}

fn inspect(input: &Path) -> Result<(), Failure> {
    let bytes = read(input)?;
    let a = container::deserialize(&bytes).map_err(|e| Failure::Data(format!("{}: {e}", input.display())))?;
    let counts = format!(
        "rules={} seq={} expanded={}",
        a.grammar().len(),
        a.sequence().len(),
        a.expanded_len()
    );
    match a.kind() {
        PayloadKind::RawStream { .. } => println!("kind=raw {counts}"),
        PayloadKind::Image(g) => println!(
            "kind=image width={} height={} channels={} mode={} {counts}",
            g.width, g.height, g.channels, g.mode
        ),
    }
    Ok(())
}

fn corpus_seed() -> Result<u64, Failure> {
    match std::env::var("RPIM_SEED") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("RPIM_SEED must be a decimal unsigned integer, got {s:?}"))),
        Err(_) => Ok(bench::DEFAULT_SEED),
    }
}

fn run_bench(dir: &Path, generate: bool, format: FormatArg) -> Result<(), Failure> {
    if generate {
        bench::generate_corpus(dir, corpus_seed()?).map_err(|e| Failure::io(dir, e))?;
    }
    let inputs = bench::load_corpus(dir).map_err(bench_failure)?;
    let rows = bench::run_bench(&inputs, &LinearizationMode::ALL, CompressorConfig::default()).map_err(bench_failure)?;
    let format = match format {
        FormatArg::Table => ReportFormat::Table,
        FormatArg::Csv => ReportFormat::Csv,
    };
    print!("{}", bench::emit_report(&rows, format));
    Ok(())
}

fn bench_failure(e: BenchError) -> Failure {
    match e {
        BenchError::Io { .. } => Failure::Io(e.to_string()),
        BenchError::Bmp { .. } | BenchError::Corruption { .. } => Failure::Data(e.to_string()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Compress {
            input,
            output,
            mode,
            raw,
            min_freq,
        } => compress(&input, &output, mode.into(), raw, min_freq),
        Command::Decompress { input, output } => decompress(&input, &output),
        Command::Inspect { input } => inspect(&input),
        Command::Bench {
            corpus_dir,
            generate,
            format,
        } => run_bench(&corpus_dir, generate, format),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("rpim: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}
