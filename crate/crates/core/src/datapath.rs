//! Arithmetic backends shared by the SC and SCL decoders.
//!
//! A [`Datapath`] fixes the message type flowing through the `f`/`g`
//! kernels and the path-metric type updated by the metric computation unit.
//! [`FloatDatapath`] works on `f64`; the q-bit fixed-point model lives in
//! [`crate::quantization::FixedDatapath`].

use std::fmt::Debug;

use serde::{Deserialize, Serialize};

use crate::llr_kernels::{self, clamp_llr, Kernel};
use crate::scl_decoder::{mcu_approx, mcu_exact};

/// How child path metrics are derived from the parent metric and the
/// last-stage LLR.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricMode {
    /// Penalize by `|llr|` only when the bit disagrees with the LLR sign.
    Approx,
    /// `M - ln(1 + e^{∓llr})`, the exact log-probability update.
    Exact,
}

pub trait Datapath: Sync {
    type Llr: Copy + Default + Debug + Send + Sync;
    type Metric: Copy + PartialOrd + Debug + Send + Sync;

    /// Converts a (real-valued) channel LLR into the datapath format.
    fn load(&self, channel_llr: f64) -> Self::Llr;
    fn f(&self, a: Self::Llr, b: Self::Llr) -> Self::Llr;
    fn g(&self, a: Self::Llr, b: Self::Llr, u_sum: u8) -> Self::Llr;
    /// Hard decision: 0 iff the LLR is non-negative.
    fn decide(&self, llr: Self::Llr) -> u8;
    fn initial_metric(&self) -> Self::Metric;
    fn update_metric(&self, metric: Self::Metric, llr: Self::Llr, bit: u8) -> Self::Metric;
    fn metric_value(&self, metric: Self::Metric) -> f64;
    fn llr_value(&self, llr: Self::Llr) -> f64;

    /// Hook run on the survivor metrics after each decoded bit. Adding the
    /// same offset to every metric never changes a decision.
    fn renormalize(&self, _metrics: &mut [Self::Metric]) {}
}

/// Floating-point datapath.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FloatDatapath {
    pub kernel: Kernel,
    pub metric: MetricMode,
}

impl FloatDatapath {
    pub fn new(kernel: Kernel, metric: MetricMode) -> Self {
        Self { kernel, metric }
    }
}

impl Datapath for FloatDatapath {
    type Llr = f64;
    type Metric = f64;

    #[inline]
    fn load(&self, channel_llr: f64) -> f64 {
        clamp_llr(channel_llr)
    }

    #[inline]
    fn f(&self, a: f64, b: f64) -> f64 {
        self.kernel.f(a, b)
    }

    #[inline]
    fn g(&self, a: f64, b: f64, u_sum: u8) -> f64 {
        llr_kernels::g(a, b, u_sum)
    }

    #[inline]
    fn decide(&self, llr: f64) -> u8 {
        llr_kernels::hard_decision(llr)
    }

    fn initial_metric(&self) -> f64 {
        0.0
    }

    #[inline]
    fn update_metric(&self, metric: f64, llr: f64, bit: u8) -> f64 {
        match self.metric {
            MetricMode::Approx => mcu_approx(metric, llr, bit),
            MetricMode::Exact => mcu_exact(metric, llr, bit),
        }
    }

    fn metric_value(&self, metric: f64) -> f64 {
        metric
    }

    fn llr_value(&self, llr: f64) -> f64 {
        llr
    }
}
