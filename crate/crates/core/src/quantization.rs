//! q-bit fixed-point model of the processing element and metric unit.
//!
//! Codes live in the symmetric range `[-(2^(q-1) - 1), 2^(q-1) - 1]`, so
//! two's-complement and sign-magnitude forms cover the same values and
//! negation never overflows. All additions saturate. A real LLR `x` maps to
//! the code `round(x / scale)` (ties away from zero), then clamps.

use serde::{Deserialize, Serialize};

use crate::datapath::Datapath;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantSpec {
    q: u32,
    scale: f64,
}

/// A q-bit two's-complement LLR or metric code.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FixedLlr(i32);

impl FixedLlr {
    pub fn code(self) -> i32 {
        self.0
    }
}

impl QuantSpec {
    pub const DEFAULT_Q: u32 = 6;
    pub const DEFAULT_SCALE: f64 = 0.5;

    /// `q` is the total width (2..=31); `scale` is the LLR value of one
    /// quantization step.
    pub fn new(q: u32, scale: f64) -> Result<Self> {
        if !(2..=31).contains(&q) {
            return Err(Error::InvalidWidth(q));
        }
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::InvalidScale(scale));
        }
        Ok(Self { q, scale })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Largest representable magnitude, `2^(q-1) - 1`.
    pub fn max_code(&self) -> i32 {
        (1 << (self.q - 1)) - 1
    }

    fn saturate(&self, x: i64) -> FixedLlr {
        let max = self.max_code() as i64;
        FixedLlr(x.clamp(-max, max) as i32)
    }

    /// Wraps a raw code, rejecting values outside the symmetric range.
    pub fn fixed(&self, code: i32) -> Result<FixedLlr> {
        let magnitude = code.unsigned_abs();
        if magnitude > self.max_code() as u32 {
            return Err(Error::MagnitudeOverflow {
                magnitude,
                q: self.q,
            });
        }
        Ok(FixedLlr(code))
    }

    pub fn quantize(&self, x: f64) -> FixedLlr {
        if x.is_nan() {
            return FixedLlr(0);
        }
        let scaled = (x / self.scale).round();
        let max = self.max_code() as f64;
        FixedLlr(scaled.clamp(-max, max) as i32)
    }

    pub fn dequantize(&self, x: FixedLlr) -> f64 {
        x.0 as f64 * self.scale
    }

    /// Two's complement to (sign, magnitude); sign 1 means negative.
    pub fn c2s(&self, x: FixedLlr) -> (u8, u32) {
        (u8::from(x.0 < 0), x.0.unsigned_abs())
    }

    /// Sign-magnitude to two's complement.
    pub fn s2c(&self, sign: u8, magnitude: u32) -> Result<FixedLlr> {
        if magnitude > self.max_code() as u32 {
            return Err(Error::MagnitudeOverflow {
                magnitude,
                q: self.q,
            });
        }
        let m = magnitude as i32;
        Ok(FixedLlr(if sign & 1 == 1 { -m } else { m }))
    }

    pub fn sat_add(&self, a: FixedLlr, b: FixedLlr) -> FixedLlr {
        self.saturate(a.0 as i64 + b.0 as i64)
    }

    /// Min-sum check node in sign-magnitude form.
    pub fn f_minsum(&self, a: FixedLlr, b: FixedLlr) -> FixedLlr {
        let (sa, ma) = self.c2s(a);
        let (sb, mb) = self.c2s(b);
        let m = ma.min(mb);
        let sign = if m == 0 { 0 } else { sa ^ sb };
        self.s2c(sign, m).expect("magnitude within range")
    }

    /// Variable node `a (-1)^u + b`, saturating.
    pub fn g(&self, a: FixedLlr, b: FixedLlr, u_sum: u8) -> FixedLlr {
        let a = if u_sum & 1 == 1 { FixedLlr(-a.0) } else { a };
        self.sat_add(b, a)
    }

    /// Approximate metric update: subtract `|llr|` iff `bit` disagrees with
    /// the sign of `llr`.
    pub fn mcu_approx(&self, metric: FixedLlr, llr: FixedLlr, bit: u8) -> FixedLlr {
        let (sign, magnitude) = self.c2s(llr);
        if sign == bit & 1 {
            metric
        } else {
            self.sat_add(metric, FixedLlr(-(magnitude as i32)))
        }
    }
}

impl Default for QuantSpec {
    fn default() -> Self {
        Self {
            q: Self::DEFAULT_Q,
            scale: Self::DEFAULT_SCALE,
        }
    }
}

/// Fixed-point datapath: min-sum `f`, saturating `g`, approximate metric
/// update. Survivor metrics are shifted so the best is 0 after every bit,
/// which keeps them inside the q-bit range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedDatapath {
    pub spec: QuantSpec,
}

impl FixedDatapath {
    pub fn new(spec: QuantSpec) -> Self {
        Self { spec }
    }
}

impl Datapath for FixedDatapath {
    type Llr = FixedLlr;
    type Metric = FixedLlr;

    fn load(&self, channel_llr: f64) -> FixedLlr {
        self.spec.quantize(channel_llr)
    }

    #[inline]
    fn f(&self, a: FixedLlr, b: FixedLlr) -> FixedLlr {
        self.spec.f_minsum(a, b)
    }

    #[inline]
    fn g(&self, a: FixedLlr, b: FixedLlr, u_sum: u8) -> FixedLlr {
        self.spec.g(a, b, u_sum)
    }

    #[inline]
    fn decide(&self, llr: FixedLlr) -> u8 {
        u8::from(llr.0 < 0)
    }

    fn initial_metric(&self) -> FixedLlr {
        FixedLlr(0)
    }

    #[inline]
    fn update_metric(&self, metric: FixedLlr, llr: FixedLlr, bit: u8) -> FixedLlr {
        self.spec.mcu_approx(metric, llr, bit)
    }

    fn metric_value(&self, metric: FixedLlr) -> f64 {
        self.spec.dequantize(metric)
    }

    fn llr_value(&self, llr: FixedLlr) -> f64 {
        self.spec.dequantize(llr)
    }

    fn renormalize(&self, metrics: &mut [FixedLlr]) {
        if let Some(&best) = metrics.iter().max() {
            for m in metrics.iter_mut() {
                *m = self.spec.sat_add(*m, FixedLlr(-best.0));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::llr_kernels::{f_minsum, LLR_MAX};
    use crate::polar_code::{construct_frozen_set, encode};
    use crate::sc_decoder::sc_decode_with;
    use crate::scl_decoder::SclDecoder;

    fn q(bits: u32) -> QuantSpec {
        QuantSpec::new(bits, 1.0).unwrap()
    }

    #[test]
    fn spec_validation() {
        assert_eq!(QuantSpec::new(1, 1.0), Err(Error::InvalidWidth(1)));
        assert_eq!(QuantSpec::new(6, 0.0), Err(Error::InvalidScale(0.0)));
        assert_eq!(q(4).max_code(), 7);
        assert_eq!(q(6).max_code(), 31);
        assert!(q(4).fixed(-8).is_err());
        assert_eq!(q(4).fixed(-7).unwrap().code(), -7);
    }

    #[test]
    fn sign_magnitude_examples() {
        let s = q(4);
        assert_eq!(s.c2s(FixedLlr(0)), (0, 0));
        assert_eq!(s.s2c(0, 0).unwrap(), FixedLlr(0));
        assert_eq!(s.c2s(FixedLlr(-3)), (1, 3));
        assert_eq!(s.s2c(1, 3).unwrap(), FixedLlr(-3));
        assert_eq!(s.c2s(FixedLlr(7)), (0, 7));
        assert_eq!(
            s.s2c(0, 8),
            Err(Error::MagnitudeOverflow { magnitude: 8, q: 4 })
        );
    }

    #[test]
    fn sign_magnitude_round_trip_exhaustive() {
        for bits in 2..=8 {
            let s = q(bits);
            for code in -s.max_code()..=s.max_code() {
                let x = s.fixed(code).unwrap();
                let (sign, mag) = s.c2s(x);
                assert_eq!(s.s2c(sign, mag).unwrap(), x);
            }
        }
    }

    #[test]
    fn saturating_addition() {
        let s = q(4);
        assert_eq!(s.sat_add(FixedLlr(7), FixedLlr(3)), FixedLlr(7));
        assert_eq!(s.sat_add(FixedLlr(-7), FixedLlr(-5)), FixedLlr(-7));
        assert_eq!(s.sat_add(FixedLlr(2), FixedLlr(3)), FixedLlr(5));
    }

    #[test]
    fn saturating_addition_is_monotone() {
        for bits in [3u32, 4, 6] {
            let s = q(bits);
            let range = -s.max_code()..=s.max_code();
            for a in range.clone() {
                for b in range.clone() {
                    let here = s.sat_add(FixedLlr(a), FixedLlr(b));
                    if a < s.max_code() {
                        assert!(s.sat_add(FixedLlr(a + 1), FixedLlr(b)) >= here);
                    }
                    if b < s.max_code() {
                        assert!(s.sat_add(FixedLlr(a), FixedLlr(b + 1)) >= here);
                    }
                }
            }
        }
    }

    #[test]
    fn quantizer_examples() {
        assert_eq!(q(6).quantize(0.0), FixedLlr(0));
        assert_eq!(q(6).quantize(100.0), FixedLlr(31));
        assert_eq!(q(6).quantize(-100.0), FixedLlr(-31));
        assert_eq!(q(6).quantize(2.5), FixedLlr(3));
        assert_eq!(q(6).quantize(-2.5), FixedLlr(-3));
        assert_eq!(q(6).quantize(f64::NAN), FixedLlr(0));
        let half = QuantSpec::new(6, 0.5).unwrap();
        assert_eq!(half.quantize(1.3), FixedLlr(3));
        assert_eq!(half.dequantize(FixedLlr(3)), 1.5);
    }

    #[test]
    fn quantized_metric_update() {
        let s = q(6);
        assert_eq!(s.mcu_approx(FixedLlr(-1), FixedLlr(3), 1), FixedLlr(-4));
        assert_eq!(s.mcu_approx(FixedLlr(-1), FixedLlr(3), 0), FixedLlr(-1));
        assert_eq!(s.mcu_approx(FixedLlr(-1), FixedLlr(-3), 0), FixedLlr(-4));
        assert_eq!(s.mcu_approx(FixedLlr(-30), FixedLlr(5), 1), FixedLlr(-31));
        assert_eq!(s.mcu_approx(FixedLlr(-2), FixedLlr(0), 1), FixedLlr(-2));
    }

    #[test]
    fn quantized_kernels_match_float_images() {
        let s = q(6);
        for a in -31..=31 {
            for b in -31..=31 {
                let (fa, fb) = (FixedLlr(a), FixedLlr(b));
                let float = f_minsum(s.dequantize(fa), s.dequantize(fb));
                assert_eq!(s.f_minsum(fa, fb), s.quantize(float), "a={a} b={b}");
                for u in 0..2u8 {
                    let sum = if u == 0 { a + b } else { b - a };
                    if sum.abs() <= 31 {
                        assert_eq!(s.g(fa, fb, u), FixedLlr(sum));
                    }
                }
            }
        }
    }

    #[test]
    fn renormalize_shifts_best_to_zero() {
        let dp = FixedDatapath::new(q(6));
        let mut m = [FixedLlr(-4), FixedLlr(-2), FixedLlr(-31)];
        dp.renormalize(&mut m);
        assert_eq!(m, [FixedLlr(-2), FixedLlr(0), FixedLlr(-29)]);
    }

    #[test]
    fn fixed_point_decoders_recover_noiseless_frames() {
        let spec = construct_frozen_set(64, 32, 0.5).unwrap();
        let dp = FixedDatapath::new(QuantSpec::default());
        let dec = SclDecoder::new(spec.clone(), 4, dp).unwrap();
        let msg: Vec<u8> = (0..32).map(|i| (i * 7 % 3 == 0) as u8).collect();
        let cw = encode(&spec, &msg).unwrap();
        let llrs: Vec<f64> = cw
            .iter()
            .map(|&b| (1.0 - 2.0 * b as f64) * LLR_MAX)
            .collect();
        assert_eq!(sc_decode_with(&spec, &llrs, &dp).unwrap().message, msg);
        assert_eq!(dec.decode(&llrs).unwrap().message, msg);
    }
}
