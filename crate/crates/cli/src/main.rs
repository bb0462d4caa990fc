use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};

use bzc::analysis::WidthMode;
use bzc::codec::{compress_file, decompress_container};
use bzc::experiment::{bench, run_experiment, ExperimentConfig, ExperimentKind, CSV_HEADER, DEFAULT_SAMPLES};
use bzc::graph::{bits_to_graph, encode_graph, parse_edge_list, to_edge_list};
use bzc::{BitSequence, Error};

#[derive(Parser)]
#[command(name = "bzc", version, about = "Compress Bernoulli bit sequences and G(v,p) graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum CodingMode {
    Direct,
    Block,
}

#[derive(Clone, Copy, ValueEnum)]
enum InputFormat {
    /// ASCII '0'/'1' characters
    Bits,
    /// `v <count>` line, then one `i j` pair per line
    Edgelist,
}

#[derive(Subcommand)]
enum Command {
    /// Compress a bit file or an edge list into a container.
    Compress {
        input: PathBuf,
        #[arg(long)]
        p: f64,
        #[arg(long, value_enum, default_value = "direct")]
        mode: CodingMode,
        #[arg(long)]
        block_len: Option<u32>,
        #[arg(long, value_enum, default_value = "bits")]
        format: InputFormat,
        #[arg(long, short)]
        output: PathBuf,
    },
    /// Restore the bit file or edge list stored in a container.
    Decompress {
        input: PathBuf,
        #[arg(long, short)]
        output: PathBuf,
    },
    /// Run a preset and write CSV rows.
    Experiment {
        /// table1, table2, sweep-p or sweep-n
        kind: String,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "capacity")]
        width_mode: String,
        /// Defaults to standard output.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Time encode+decode per n and report time(2n)/time(n).
    Bench {
        #[arg(long, value_delimiter = ',', default_values_t = [100_000u64, 200_000, 400_000, 800_000, 1_600_000])]
        n: Vec<u64>,
        #[arg(long, default_value_t = 0.1)]
        p: f64,
        #[arg(long, default_value_t = 3)]
        repetitions: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Failures that are the caller's fault rather than the data's.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

fn read_bits(path: &Path) -> anyhow::Result<BitSequence> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let body = text.strip_suffix('\n').unwrap_or(&text);
    let body = body.strip_suffix('\r').unwrap_or(body);
    if let Some(c) = body.chars().find(|c| *c != '0' && *c != '1') {
        return Err(Error::Parse(format!("unexpected character {c:?} in bit file")).into());
    }
    Ok(body.parse()?)
}

fn write_output(path: &Path, data: &[u8]) -> anyhow::Result<()> {
    fs::write(path, data).with_context(|| format!("writing {}", path.display()))
}

fn compress(
    input: &Path,
    p: f64,
    mode: CodingMode,
    block_len: Option<u32>,
    format: InputFormat,
    output: &Path,
) -> anyhow::Result<()> {
    let block_len = match (mode, block_len) {
        (CodingMode::Direct, None) => 0,
        (CodingMode::Direct, Some(_)) => return Err(usage("--block-len needs --mode block")),
        (CodingMode::Block, None) => return Err(usage("--mode block needs --block-len")),
        (CodingMode::Block, Some(0)) => return Err(usage("--block-len must be at least 1")),
        (CodingMode::Block, Some(b)) => b,
    };
    let (original_bits, container) = match format {
        InputFormat::Bits => {
            let bits = read_bits(input)?;
            (bits.len() as u64, compress_file(&bits, p, block_len)?)
        }
        InputFormat::Edgelist => {
            let text = fs::read_to_string(input).with_context(|| format!("reading {}", input.display()))?;
            let g = parse_edge_list(&text)?;
            (bzc::graph::pair_count(g.vertex_count())?, encode_graph(&g, p, block_len)?)
        }
    };
    write_output(output, &container)?;
    let compressed = container.len() as u64 * 8;
    let mut out = io::stdout().lock();
    writeln!(out, "original bits: {original_bits}")?;
    writeln!(out, "compressed bits: {compressed}")?;
    writeln!(out, "ratio: {:.4}", compressed as f64 / original_bits.max(1) as f64)?;
    Ok(())
}

fn decompress(input: &Path, output: &Path) -> anyhow::Result<()> {
    let bytes = fs::read(input).with_context(|| format!("reading {}", input.display()))?;
    let (header, bits) = decompress_container(&bytes)?;
    let text = if header.mode.is_graph() {
        to_edge_list(&bits_to_graph(&bits, header.n_or_v)?)
    } else {
        format!("{bits}\n")
    };
    write_output(output, text.as_bytes())
}

fn experiment(kind: &str, samples: u64, seed: u64, width_mode: &str, output: Option<&Path>) -> anyhow::Result<()> {
    let kind: ExperimentKind = kind.parse().map_err(|e: Error| usage(e.to_string()))?;
    let width_mode: WidthMode = width_mode.parse().map_err(|e: Error| usage(e.to_string()))?;
    if samples == 0 {
        return Err(usage("--samples must be at least 1"));
    }
    let rows = run_experiment(&ExperimentConfig { kind, samples, seed, width_mode })?;
    let mut csv = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    csv.write_record(CSV_HEADER.split(','))?;
    for row in &rows {
        csv.write_record(row.csv_fields())?;
    }
    let data = csv.into_inner()?;
    match output {
        Some(path) => write_output(path, &data),
        None => Ok(io::stdout().lock().write_all(&data)?),
    }
}

fn run_bench(ns: &[u64], p: f64, repetitions: u32, seed: u64) -> anyhow::Result<()> {
    if ns.iter().any(|&n| n == 0) {
        bail!(usage("n must be positive"));
    }
    let rows = bench(ns, p, repetitions, seed)?;
    let mut out = io::stdout().lock();
    writeln!(out, "n,seconds,encoded_bits,ratio")?;
    for r in rows {
        let ratio = r.ratio.map(|x| format!("{x:.3}")).unwrap_or_default();
        writeln!(out, "{},{:.6},{},{}", r.n, r.seconds, r.encoded_bits, ratio)?;
    }
    Ok(())
}

fn configure_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("BZC_THREADS") {
        let n: usize = v.trim().parse().map_err(|_| usage(format!("BZC_THREADS={v:?} is not a count")))?;
        if n > 0 {
            rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<()> {
    configure_threads()?;
    match cli.command {
        Command::Compress { input, p, mode, block_len, format, output } => {
            compress(&input, p, mode, block_len, format, &output)
        }
        Command::Decompress { input, output } => decompress(&input, &output),
        Command::Experiment { kind, samples, seed, width_mode, output } => {
            experiment(&kind, samples, seed, &width_mode, output.as_deref())
        }
        Command::Bench { n, p, repetitions, seed } => run_bench(&n, p, repetitions, seed),
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
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.is::<Usage>() {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
