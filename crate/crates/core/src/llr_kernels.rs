//! LLR-domain `f` (check) and `g` (variable) kernels.
//!
//! An LLR is `ln(Pr(bit = 0, ·) / Pr(bit = 1, ·))`; positive values favor 0.
//! `sign(0)` is taken as `+1` throughout.

use serde::{Deserialize, Serialize};

/// Magnitude bound applied to channel LLRs (about `1 - 1e-13` certainty).
pub const LLR_MAX: f64 = 30.0;

/// Clamps a channel LLR into `[-LLR_MAX, LLR_MAX]`; NaN maps to 0.
#[inline]
pub fn clamp_llr(x: f64) -> f64 {
    if x.is_nan() {
        0.0
    } else {
        x.clamp(-LLR_MAX, LLR_MAX)
    }
}

/// Which `f` kernel an SC/SCL decoder uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kernel {
    /// `sign(a) sign(b) min(|a|, |b|)`.
    MinSum,
    /// Exact boxplus `2 atanh(tanh(a/2) tanh(b/2))`.
    Exact,
}

impl Kernel {
    #[inline]
    pub fn f(self, a: f64, b: f64) -> f64 {
        match self {
            Kernel::MinSum => f_minsum(a, b),
            Kernel::Exact => f_exact(a, b),
        }
    }
}

/// `ln(1 + e^x)` without overflow.
#[inline]
pub fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

#[inline]
fn sign_product(a: f64, b: f64) -> f64 {
    if (a < 0.0) != (b < 0.0) {
        -1.0
    } else {
        1.0
    }
}

/// Min-sum check node.
#[inline]
pub fn f_minsum(a: f64, b: f64) -> f64 {
    let m = a.abs().min(b.abs());
    if m == 0.0 {
        return 0.0;
    }
    sign_product(a, b) * m
}

/// Exact check node, evaluated as
/// `ln((1 + e^{a+b}) / (e^a + e^b))`
/// = `sign(a) sign(b) min(|a|,|b|) + ln(1 + e^{-|a+b|}) - ln(1 + e^{-|a-b|})`.
#[inline]
pub fn f_exact(a: f64, b: f64) -> f64 {
    let base = f_minsum(a, b);
    let corr = (-(a + b).abs()).exp().ln_1p() - (-(a - b).abs()).exp().ln_1p();
    let out = base + corr;
    // The correction never flips the sign; guard the rounding at |a| == |b|.
    if base > 0.0 {
        out.max(0.0)
    } else if base < 0.0 {
        out.min(0.0)
    } else {
        0.0
    }
}

/// Variable node: `a (-1)^{u_sum} + b`.
#[inline]
pub fn g(a: f64, b: f64, u_sum: u8) -> f64 {
    if u_sum & 1 == 0 {
        b + a
    } else {
        b - a
    }
}

/// Hard decision on an LLR: 0 iff `llr >= 0`.
#[inline]
pub fn hard_decision(llr: f64) -> u8 {
    u8::from(llr < 0.0)
}
