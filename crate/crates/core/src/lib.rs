//! Successive-cancellation list (SCL) decoding of polar codes carried out
//! entirely in the log-likelihood-ratio domain.
//!
//! The crate is organised bottom-up:
//!
//! - [`polar_code`]: frozen-set construction and the polar transform.
//! - [`llr_kernels`]: the `f`/`g` update rules and hard decisions.
//! - [`sc_decoder`]: an iterative successive-cancellation decoder whose
//!   per-path state is also what the list decoder clones.
//! - [`scl_decoder`]: path-metric updates, sorting-network pruning and the
//!   list decoder itself.
//! - [`sorting_network`]: Batcher odd-even merge networks.
//! - [`likelihood_oracle`]: a likelihood-domain reference decoder and a
//!   brute-force ML decoder used to check the fast path.
//! - [`quantization`]: a `q`-bit fixed-point datapath.
//! - [`channel_sim`]: BPSK/AWGN Monte-Carlo FER/BER simulation.
//! - [`cost_model`]: gate, memory and latency estimates of the hardware.
//!
//! ```
//! use llr_scl::{construct_frozen_set, encode, scl_decode, Kernel, MetricMode};
//!
//! let spec = construct_frozen_set(16, 8, 0.5).unwrap();
//! let message = [1, 0, 1, 1, 0, 0, 1, 0];
//! let codeword = encode(&spec, &message).unwrap();
//! let llrs: Vec<f64> = codeword.iter().map(|&b| if b == 0 { 4.0 } else { -4.0 }).collect();
//! let out = scl_decode(&spec, &llrs, 4, MetricMode::Approx, Kernel::MinSum).unwrap();
//! assert_eq!(out.message, message);
//! ```

pub mod channel_sim;
pub mod cost_model;
pub mod datapath;
pub mod error;
pub mod likelihood_oracle;
pub mod llr_kernels;
pub mod polar_code;
pub mod quantization;
pub mod sc_decoder;
pub mod scl_decoder;
pub mod sorting_network;

pub use channel_sim::{run_monte_carlo, Execution, PointResult, SimConfig, SimResult, Simulation};
pub use cost_model::{compare as compare_costs, CostReport};
pub use datapath::{Datapath, FloatDatapath, MetricMode};
pub use error::{Error, Result};
pub use llr_kernels::Kernel;
pub use polar_code::{construct_frozen_set, encode, CodeSpec};
pub use quantization::{FixedDatapath, QuantSpec};
pub use sc_decoder::{sc_decode, ScOutput};
pub use scl_decoder::{scl_decode, SclDecoder, SclOutput};
pub use sorting_network::{build_batcher, ComparatorNetwork};

/// Library version, recorded in simulation manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
