use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use llr_scl::{Kernel, MetricMode};

mod commands;
mod error;

use error::CliError;

/// Polar-code construction, LLR-domain list decoding, Monte-Carlo
/// simulation and hardware cost estimates.
#[derive(Debug, Parser)]
#[command(name = "llrscl", version, about, propagate_version = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a frozen-bit mask from Bhattacharyya reliabilities.
    Construct(ConstructArgs),
    /// Decode rows of channel LLRs read from a CSV file.
    Decode(DecodeArgs),
    /// Run a seeded BPSK/AWGN FER/BER sweep.
    Simulate(SimulateArgs),
    /// Compare gate counts of the LLR-based and LL-based list decoders.
    Costmodel(CostArgs),
    /// Print the Batcher odd-even merge network for a given size.
    Sortnet(SortnetArgs),
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    /// Block length (power of two).
    #[arg(long)]
    pub n: usize,
    /// Number of free (information) bits.
    #[arg(long)]
    pub k: usize,
    /// Design Bhattacharyya parameter of the channel, in (0, 1).
    #[arg(long, default_value_t = llr_scl::polar_code::DEFAULT_DESIGN_Z0)]
    pub z0: f64,
    /// Output mask file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricArg {
    Approx,
    Exact,
}

impl From<MetricArg> for MetricMode {
    fn from(m: MetricArg) -> Self {
        match m {
            MetricArg::Approx => MetricMode::Approx,
            MetricArg::Exact => MetricMode::Exact,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KernelArg {
    Minsum,
    Exact,
}

impl From<KernelArg> for Kernel {
    fn from(k: KernelArg) -> Self {
        match k {
            KernelArg::Minsum => Kernel::MinSum,
            KernelArg::Exact => Kernel::Exact,
        }
    }
}

/// Decoder flags shared by `decode` and `simulate`.
#[derive(Debug, Args)]
pub struct DecoderArgs {
    /// List size L.
    #[arg(long, default_value_t = 4)]
    pub list: usize,
    /// Path-metric update.
    #[arg(long, value_enum, default_value_t = MetricArg::Approx)]
    pub metric: MetricArg,
    /// Check-node (`f`) kernel.
    #[arg(long, value_enum, default_value_t = KernelArg::Minsum)]
    pub kernel: KernelArg,
    /// Fixed-point width in bits; 0 or omitted decodes in floating point.
    /// The fixed-point datapath always uses min-sum and the approximate metric.
    #[arg(long)]
    pub q: Option<u32>,
    /// Fixed-point step size (LLR value of one LSB).
    #[arg(long, default_value_t = llr_scl::QuantSpec::DEFAULT_SCALE)]
    pub scale: f64,
}

#[derive(Debug, Args)]
pub struct DecodeArgs {
    /// Frozen-mask file written by `construct`.
    #[arg(long)]
    pub mask: PathBuf,
    /// CSV of channel LLRs, one frame of n values per row, no header; `-` for stdin.
    #[arg(long)]
    pub llrs: PathBuf,
    #[command(flatten)]
    pub decoder: DecoderArgs,
    /// Also run the likelihood-domain reference decoder and report agreement.
    #[arg(long)]
    pub oracle_check: bool,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Block length; taken from --mask when given.
    #[arg(long, required_unless_present = "mask")]
    pub n: Option<usize>,
    /// Number of free bits; taken from --mask when given.
    #[arg(long, required_unless_present = "mask")]
    pub k: Option<usize>,
    #[command(flatten)]
    pub decoder: DecoderArgs,
    /// Eb/N0 sweep in dB: a single value or `start:step:stop` (inclusive).
    #[arg(long, default_value = "1.0:0.5:3.0")]
    pub snr: String,
    /// Seed for every random draw of the run.
    #[arg(long, default_value_t = commands::DEFAULT_SEED)]
    pub seed: u64,
    /// Frames per SNR point (upper bound when --min-errors is set).
    #[arg(long, default_value_t = 10_000)]
    pub frames: u64,
    /// Stop a point after this many frame errors; 0 disables early stopping.
    #[arg(long, default_value_t = 0)]
    pub min_errors: u64,
    /// Design parameter for the code construction.
    #[arg(long, default_value_t = llr_scl::polar_code::DEFAULT_DESIGN_Z0)]
    pub z0: f64,
    /// Transmit the all-zero codeword instead of random messages.
    #[arg(long)]
    pub all_zero: bool,
    /// Use a pinned frozen-mask file instead of constructing the code.
    #[arg(long, conflicts_with = "z0")]
    pub mask: Option<PathBuf>,
    /// Worker threads (0 = all cores). Results do not depend on this.
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
    /// Evaluate frames on the calling thread only.
    #[arg(long)]
    pub sequential: bool,
    /// CSV output path; a JSON manifest is written next to it.
    #[arg(long, default_value = "simulation.csv")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct CostArgs {
    #[arg(long, default_value_t = 1024)]
    pub n: usize,
    /// List size (power of two).
    #[arg(long, default_value_t = 4)]
    pub list: usize,
    /// Message width in bits.
    #[arg(long, default_value_t = 6)]
    pub q: u32,
    /// Print the report as JSON.
    #[arg(long)]
    pub json: bool,
    /// Check the model against the published n = 1024, L = 4 comparison; exit 3 on mismatch.
    #[arg(long)]
    pub paper_check: bool,
}

#[derive(Debug, Args)]
pub struct SortnetArgs {
    /// Number of inputs (power of two).
    #[arg(long, default_value_t = 8)]
    pub size: usize,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let args: Vec<String> = std::env::args().collect();
    match commands::run(cli.command, &args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("llrscl: {err}");
            err.exit_code()
        }
    }
}

impl From<llr_scl::Error> for CliError {
    fn from(err: llr_scl::Error) -> Self {
        CliError::data(err)
    }
}
