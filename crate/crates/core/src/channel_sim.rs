//! BPSK over AWGN and a seeded Monte-Carlo FER/BER engine.
//!
//! Every frame draws from its own ChaCha20 stream: the key comes from the
//! user seed (`ChaCha20Rng::seed_from_u64`) and the stream number is
//! `snr_index << 40 | frame_index`. A frame is therefore the same no matter
//! which decoder runs it, in which order, or on which thread. Frames are
//! processed in fixed batches of [`BATCH_FRAMES`]; the early-stop check
//! runs only between batches, so the number of frames simulated does not
//! depend on the degree of parallelism either.

use std::ops::Range;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::datapath::{FloatDatapath, MetricMode};
use crate::error::{Error, Result};
use crate::llr_kernels::{clamp_llr, Kernel};
use crate::polar_code::{construct_frozen_set, encode, CodeSpec, DEFAULT_DESIGN_Z0};
use crate::quantization::{FixedDatapath, QuantSpec};
use crate::scl_decoder::{SclDecoder, SclOutput};

/// Frames evaluated between early-stop checks.
pub const BATCH_FRAMES: u64 = 256;

/// Human-readable description of the per-frame random streams.
pub const RNG_ALGORITHM: &str =
    "ChaCha20 (rand_chacha 0.9): key = seed_from_u64(seed), stream = snr_index << 40 | frame_index; \
     message bits then StandardNormal (ziggurat) noise samples";

/// 97.5% standard normal quantile.
const Z_95: f64 = 1.959_963_984_540_054;

/// Noise variance for unit-energy BPSK at the given `Eb/N0` and code rate.
pub fn noise_variance(ebn0_db: f64, rate: f64) -> f64 {
    1.0 / (2.0 * rate * 10f64.powf(ebn0_db / 10.0))
}

/// Maps bits to `1 - 2b`, adds Gaussian noise and returns clamped channel
/// LLRs `2y / σ²`.
pub fn bpsk_awgn_llrs<R: Rng + ?Sized>(
    codeword: &[u8],
    ebn0_db: f64,
    rate: f64,
    rng: &mut R,
) -> Vec<f64> {
    let var = noise_variance(ebn0_db, rate);
    let sigma = var.sqrt();
    codeword
        .iter()
        .map(|&b| {
            let s = 1.0 - 2.0 * f64::from(b & 1);
            let noise: f64 = rng.sample(StandardNormal);
            clamp_llr(2.0 * (s + sigma * noise) / var)
        })
        .collect()
}

/// Wilson score interval at 95% confidence.
pub fn wilson_interval(successes: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z_95 * Z_95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z_95 / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    // the bounds are exactly 0 / 1 at the extremes; pin them against rounding
    let lo = if successes == 0 {
        0.0
    } else {
        (center - half).max(0.0)
    };
    let hi = if successes == trials {
        1.0
    } else {
        (center + half).min(1.0)
    };
    (lo, hi)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub n: usize,
    pub k: usize,
    pub list_size: usize,
    /// Eb/N0 operating points in dB.
    pub snr_db: Vec<f64>,
    pub max_frames: u64,
    /// Stop a point once this many frame errors were seen (0 = never).
    pub min_errors: u64,
    pub seed: u64,
    pub metric: MetricMode,
    pub kernel: Kernel,
    /// Fixed-point datapath; `None` runs in floating point.
    pub quant: Option<QuantSpec>,
    /// Transmit the all-zero codeword instead of random messages.
    pub all_zero: bool,
    pub design_z0: f64,
}

impl SimConfig {
    pub fn new(n: usize, k: usize, list_size: usize, snr_db: Vec<f64>) -> Self {
        Self {
            n,
            k,
            list_size,
            snr_db,
            max_frames: 10_000,
            min_errors: 0,
            seed: 0,
            metric: MetricMode::Approx,
            kernel: Kernel::MinSum,
            quant: None,
            all_zero: false,
            design_z0: DEFAULT_DESIGN_Z0,
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidConfig(msg.to_string()));
        if self.list_size == 0 {
            return bad("list size must be at least 1");
        }
        if self.max_frames == 0 {
            return bad("max_frames must be at least 1");
        }
        if self.snr_db.is_empty() {
            return bad("no SNR points");
        }
        if self.snr_db.iter().any(|s| !s.is_finite()) {
            return bad("SNR points must be finite");
        }
        Ok(())
    }
}

/// Counters and statistics for one SNR point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointResult {
    pub ebn0_db: f64,
    pub frames: u64,
    pub frame_errors: u64,
    pub bit_errors: u64,
    pub fer: f64,
    pub ber: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl PointResult {
    fn from_tally(ebn0_db: f64, tally: Tally, k: usize) -> Self {
        let (ci_low, ci_high) = wilson_interval(tally.frame_errors, tally.frames);
        Self {
            ebn0_db,
            frames: tally.frames,
            frame_errors: tally.frame_errors,
            bit_errors: tally.bit_errors,
            fer: tally.frame_errors as f64 / tally.frames as f64,
            ber: tally.bit_errors as f64 / (tally.frames as f64 * k as f64),
            ci_low,
            ci_high,
        }
    }

    /// Half-width of the 95% interval.
    pub fn half_width(&self) -> f64 {
        (self.ci_high - self.ci_low) / 2.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub points: Vec<PointResult>,
}

impl SimResult {
    /// CSV with header `ebn0_db,frames,frame_errors,bit_errors,fer,ber,ci_low,ci_high`.
    pub fn to_csv(&self) -> String {
        let mut writer = csv::Writer::from_writer(Vec::new());
        for point in &self.points {
            writer.serialize(point).expect("in-memory CSV write");
        }
        String::from_utf8(writer.into_inner().expect("in-memory CSV flush")).expect("ASCII CSV")
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct Tally {
    frames: u64,
    frame_errors: u64,
    bit_errors: u64,
}

impl Tally {
    fn merge(self, other: Tally) -> Tally {
        Tally {
            frames: self.frames + other.frames,
            frame_errors: self.frame_errors + other.frame_errors,
            bit_errors: self.bit_errors + other.bit_errors,
        }
    }
}

/// How frames within a batch are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    #[cfg(feature = "parallel")]
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        #[cfg(feature = "parallel")]
        return Execution::Parallel;
        #[cfg(not(feature = "parallel"))]
        return Execution::Sequential;
    }
}

/// One transmitted frame.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    pub message: Vec<u8>,
    pub codeword: Vec<u8>,
    pub llrs: Vec<f64>,
}

#[derive(Debug, Clone)]
enum FrameDecoder {
    Float(SclDecoder<FloatDatapath>),
    Fixed(SclDecoder<FixedDatapath>),
}

impl FrameDecoder {
    fn decode(&self, llrs: &[f64]) -> Result<SclOutput> {
        match self {
            FrameDecoder::Float(d) => d.decode(llrs),
            FrameDecoder::Fixed(d) => d.decode(llrs),
        }
    }
}

/// A configured Monte-Carlo experiment.
#[derive(Debug, Clone)]
pub struct Simulation {
    config: SimConfig,
    code: CodeSpec,
    decoder: FrameDecoder,
}

impl Simulation {
    /// Builds the code from `(n, k, design_z0)`.
    pub fn new(config: SimConfig) -> Result<Self> {
        let code = construct_frozen_set(config.n, config.k, config.design_z0)?;
        Self::with_code(config, code)
    }

    /// Uses a pinned code; its `n` and `k` must match the config.
    pub fn with_code(config: SimConfig, code: CodeSpec) -> Result<Self> {
        config.validate()?;
        if code.n() != config.n || code.k() != config.k {
            return Err(Error::InvalidConfig(format!(
                "code is ({}, {}) but config says ({}, {})",
                code.n(),
                code.k(),
                config.n,
                config.k
            )));
        }
        let decoder = match config.quant {
            Some(q) => FrameDecoder::Fixed(SclDecoder::new(
                code.clone(),
                config.list_size,
                FixedDatapath::new(q),
            )?),
            None => FrameDecoder::Float(SclDecoder::new(
                code.clone(),
                config.list_size,
                FloatDatapath::new(config.kernel, config.metric),
            )?),
        };
        Ok(Self {
            config,
            code,
            decoder,
        })
    }

    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    pub fn code(&self) -> &CodeSpec {
        &self.code
    }

    /// The RNG stream for a frame.
    pub fn frame_rng(&self, snr_index: usize, frame_index: u64) -> ChaCha20Rng {
        let mut rng = ChaCha20Rng::seed_from_u64(self.config.seed);
        rng.set_stream(((snr_index as u64) << 40) | frame_index);
        rng
    }

    /// Regenerates frame `frame_index` of SNR point `snr_index`.
    pub fn frame(&self, snr_index: usize, frame_index: u64) -> Frame {
        let mut rng = self.frame_rng(snr_index, frame_index);
        let message: Vec<u8> = if self.config.all_zero {
            vec![0; self.code.k()]
        } else {
            (0..self.code.k())
                .map(|_| u8::from(rng.random::<bool>()))
                .collect()
        };
        let codeword = encode(&self.code, &message).expect("message has k bits");
        let llrs = bpsk_awgn_llrs(
            &codeword,
            self.config.snr_db[snr_index],
            self.code.rate(),
            &mut rng,
        );
        Frame {
            message,
            codeword,
            llrs,
        }
    }

    fn frame_outcome(&self, snr_index: usize, frame_index: u64) -> Tally {
        let frame = self.frame(snr_index, frame_index);
        let out = self
            .decoder
            .decode(&frame.llrs)
            .expect("frame length matches code");
        let bit_errors = out
            .message
            .iter()
            .zip(&frame.message)
            .filter(|(a, b)| a != b)
            .count() as u64;
        Tally {
            frames: 1,
            frame_errors: u64::from(bit_errors > 0),
            bit_errors,
        }
    }

    fn run_batch(&self, snr_index: usize, frames: Range<u64>, exec: Execution) -> Tally {
        match exec {
            Execution::Sequential => frames
                .map(|f| self.frame_outcome(snr_index, f))
                .fold(Tally::default(), Tally::merge),
            #[cfg(feature = "parallel")]
            Execution::Parallel => frames
                .into_par_iter()
                .map(|f| self.frame_outcome(snr_index, f))
                .reduce(Tally::default, Tally::merge),
        }
    }

    /// Simulates one SNR point.
    pub fn run_point(&self, snr_index: usize, exec: Execution) -> PointResult {
        let mut tally = Tally::default();
        while tally.frames < self.config.max_frames {
            let end = (tally.frames + BATCH_FRAMES).min(self.config.max_frames);
            tally = tally.merge(self.run_batch(snr_index, tally.frames..end, exec));
            if self.config.min_errors > 0 && tally.frame_errors >= self.config.min_errors {
                break;
            }
        }
        PointResult::from_tally(self.config.snr_db[snr_index], tally, self.code.k())
    }

    pub fn run(&self, exec: Execution) -> SimResult {
        SimResult {
            points: (0..self.config.snr_db.len())
                .map(|i| self.run_point(i, exec))
                .collect(),
        }
    }
}

/// Runs the whole sweep with the default execution strategy.
pub fn run_monte_carlo(config: &SimConfig) -> Result<SimResult> {
    Ok(Simulation::new(config.clone())?.run(Execution::default()))
}
