//! Reference decoders working directly on joint probabilities.
//!
//! Messages are pairs `(Pr(bit = 0, ·), Pr(bit = 1, ·))` combined by the
//! likelihood-form `f`/`g` units; a path metric is the last-stage
//! probability of the chosen bit. Nothing here touches LLRs except the
//! conversions at the boundary, so this module serves as an independent
//! check of the LLR decoders. Speed is not a goal: every leaf is recomputed
//! from the channel.
//!
//! Probabilities are held as [`Prob`], a float with an unbounded binary
//! exponent, so products over hundreds of channel outputs neither underflow
//! nor lose relative precision.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul};

use crate::error::{Error, Result};
use crate::polar_code::{apply_transform, CodeSpec};

/// Largest block length accepted by [`brute_force_best_path`].
pub const BRUTE_FORCE_MAX_N: usize = 20;

/// Non-negative real `mant · 2^exp2` with `mant` in `[0.5, 1)` (or zero).
#[derive(Clone, Copy, PartialEq)]
pub struct Prob {
    mant: f64,
    exp2: i64,
}

impl Prob {
    pub const ZERO: Prob = Prob { mant: 0.0, exp2: 0 };
    pub const ONE: Prob = Prob { mant: 0.5, exp2: 1 };

    /// Panics on negative or non-finite input.
    pub fn new(x: f64) -> Self {
        assert!(
            x.is_finite() && x >= 0.0,
            "probability must be finite and non-negative, got {x}"
        );
        Self::normalized(x, 0)
    }

    fn normalized(mut mant: f64, mut exp2: i64) -> Self {
        if mant == 0.0 {
            return Self::ZERO;
        }
        if mant < f64::MIN_POSITIVE {
            mant *= 2f64.powi(64);
            exp2 -= 64;
        }
        let bits = mant.to_bits();
        let field = ((bits >> 52) & 0x7ff) as i64;
        exp2 += field - 1022;
        let mant = f64::from_bits((bits & !(0x7ffu64 << 52)) | (1022u64 << 52));
        Self { mant, exp2 }
    }

    pub fn is_zero(self) -> bool {
        self.mant == 0.0
    }

    /// Natural logarithm (`-inf` for zero).
    pub fn ln(self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else {
            self.mant.ln() + self.exp2 as f64 * std::f64::consts::LN_2
        }
    }

    /// Nearest `f64` (may underflow to 0 or overflow to infinity).
    pub fn value(self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let e = self.exp2.clamp(-1100, 1100) as i32;
        // split to keep each factor representable
        self.mant * 2f64.powi(e / 2) * 2f64.powi(e - e / 2)
    }
}

impl Mul for Prob {
    type Output = Prob;

    fn mul(self, other: Prob) -> Prob {
        if self.is_zero() || other.is_zero() {
            return Prob::ZERO;
        }
        Prob::normalized(self.mant * other.mant, self.exp2 + other.exp2)
    }
}

impl Add for Prob {
    type Output = Prob;

    fn add(self, other: Prob) -> Prob {
        if self.is_zero() {
            return other;
        }
        if other.is_zero() {
            return self;
        }
        let (big, small) = if self.exp2 >= other.exp2 {
            (self, other)
        } else {
            (other, self)
        };
        let shift = (small.exp2 - big.exp2).max(-1100) as i32;
        let aligned = small.mant * 2f64.powi(shift / 2) * 2f64.powi(shift - shift / 2);
        Prob::normalized(big.mant + aligned, big.exp2)
    }
}

impl Div for Prob {
    type Output = Prob;

    fn div(self, other: Prob) -> Prob {
        assert!(!other.is_zero(), "division by zero probability");
        if self.is_zero() {
            return Prob::ZERO;
        }
        Prob::normalized(self.mant / other.mant, self.exp2 - other.exp2)
    }
}

impl PartialOrd for Prob {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(match (self.is_zero(), other.is_zero()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            (false, false) => self
                .exp2
                .cmp(&other.exp2)
                .then(self.mant.total_cmp(&other.mant)),
        })
    }
}

impl fmt::Debug for Prob {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Prob(ln = {})", self.ln())
    }
}

impl From<f64> for Prob {
    fn from(x: f64) -> Self {
        Prob::new(x)
    }
}

/// Joint probabilities `(Pr(bit = 0, ·), Pr(bit = 1, ·))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LikelihoodPair {
    pub p0: Prob,
    pub p1: Prob,
}

impl LikelihoodPair {
    /// Panics unless both entries are non-negative with a positive sum.
    pub fn new(p0: f64, p1: f64) -> Self {
        assert!(p0 + p1 > 0.0, "pair must not be all zero");
        Self {
            p0: Prob::new(p0),
            p1: Prob::new(p1),
        }
    }

    /// Normalized pair whose log-ratio is `llr`.
    pub fn from_llr(llr: f64) -> Self {
        Self {
            p0: Prob::new(1.0 / (1.0 + (-llr).exp())),
            p1: Prob::new(1.0 / (1.0 + llr.exp())),
        }
    }

    pub fn get(&self, bit: u8) -> Prob {
        if bit & 1 == 0 {
            self.p0
        } else {
            self.p1
        }
    }

    /// `ln(p0 / p1)`.
    pub fn llr(&self) -> f64 {
        self.p0.ln() - self.p1.ln()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let s = Prob::new(factor);
        Self {
            p0: self.p0 * s,
            p1: self.p1 * s,
        }
    }
}

/// `(a0 b0 + a1 b1, a0 b1 + a1 b0)`.
pub fn f_lik(a: LikelihoodPair, b: LikelihoodPair) -> LikelihoodPair {
    LikelihoodPair {
        p0: a.p0 * b.p0 + a.p1 * b.p1,
        p1: a.p0 * b.p1 + a.p1 * b.p0,
    }
}

/// `(a_{u} b0, a_{1-u} b1)`.
pub fn g_lik(a: LikelihoodPair, b: LikelihoodPair, u_sum: u8) -> LikelihoodPair {
    LikelihoodPair {
        p0: a.get(u_sum) * b.p0,
        p1: a.get(u_sum ^ 1) * b.p1,
    }
}

/// 0 when frozen or `a0 >= a1`, else 1.
pub fn h_decide(a: LikelihoodPair, frozen: bool) -> u8 {
    if frozen || a.p0 >= a.p1 {
        0
    } else {
        1
    }
}

/// Likelihood images of channel LLRs.
pub fn pairs_from_llrs(llrs: &[f64]) -> Vec<LikelihoodPair> {
    llrs.iter().map(|&l| LikelihoodPair::from_llr(l)).collect()
}

/// Last-stage pair for bit `prefix.len()` given the decided `prefix`.
pub fn leaf_pair(channel: &[LikelihoodPair], prefix: &[u8]) -> LikelihoodPair {
    if channel.len() == 1 {
        return channel[0];
    }
    let half = channel.len() / 2;
    let (left, right) = channel.split_at(half);
    if prefix.len() < half {
        let upper: Vec<LikelihoodPair> =
            left.iter().zip(right).map(|(&a, &b)| f_lik(a, b)).collect();
        leaf_pair(&upper, prefix)
    } else {
        let sums = apply_transform(&prefix[..half]).expect("power-of-two prefix");
        let lower: Vec<LikelihoodPair> = left
            .iter()
            .zip(right)
            .zip(&sums)
            .map(|((&a, &b), &u)| g_lik(a, b, u))
            .collect();
        leaf_pair(&lower, &prefix[half..])
    }
}

/// A decoded path and its joint probability.
#[derive(Debug, Clone, PartialEq)]
pub struct LikelihoodPath {
    pub u: Vec<u8>,
    pub metric: Prob,
}

impl LikelihoodPath {
    pub fn ln_metric(&self) -> f64 {
        self.metric.ln()
    }
}

fn check_channel(spec: &CodeSpec, channel: &[LikelihoodPair]) -> Result<()> {
    if channel.len() != spec.n() {
        return Err(Error::LengthMismatch {
            expected: spec.n(),
            actual: channel.len(),
        });
    }
    Ok(())
}

/// Likelihood-domain SC: follow the locally best child at every level.
pub fn sc_decode_lik(spec: &CodeSpec, channel: &[LikelihoodPair]) -> Result<LikelihoodPath> {
    check_channel(spec, channel)?;
    let mut u = Vec::with_capacity(spec.n());
    let mut metric = Prob::ONE;
    for i in 0..spec.n() {
        let pair = leaf_pair(channel, &u);
        let bit = h_decide(pair, spec.is_frozen(i));
        metric = pair.get(bit);
        u.push(bit);
    }
    Ok(LikelihoodPath { u, metric })
}

/// Likelihood-domain SCL. Returns the final survivors, best first.
///
/// Candidates are ordered by (parent, bit 0 before 1); on free bits they
/// are stably sorted by descending probability and cut to `list_size`.
pub fn scl_decode_lik(
    spec: &CodeSpec,
    channel: &[LikelihoodPair],
    list_size: usize,
) -> Result<Vec<LikelihoodPath>> {
    check_channel(spec, channel)?;
    if list_size == 0 {
        return Err(Error::InvalidListSize);
    }
    let mut paths = vec![LikelihoodPath {
        u: Vec::new(),
        metric: Prob::ONE,
    }];
    for i in 0..spec.n() {
        let frozen = spec.is_frozen(i);
        let mut candidates = Vec::with_capacity(2 * paths.len());
        for path in &paths {
            let pair = leaf_pair(channel, &path.u);
            for bit in if frozen { 0..1 } else { 0..2 } {
                let mut u = path.u.clone();
                u.push(bit);
                candidates.push(LikelihoodPath {
                    u,
                    metric: pair.get(bit),
                });
            }
        }
        if !frozen {
            candidates.sort_by(|a, b| b.metric.partial_cmp(&a.metric).unwrap_or(Ordering::Equal));
            candidates.truncate(list_size);
        }
        paths = candidates;
    }
    paths.sort_by(|a, b| b.metric.partial_cmp(&a.metric).unwrap_or(Ordering::Equal));
    Ok(paths)
}

/// Exhaustive maximum over all frozen-consistent `u`; ties resolve to the
/// lexicographically smallest `u`.
pub fn brute_force_best_path(
    spec: &CodeSpec,
    channel: &[LikelihoodPair],
) -> Result<LikelihoodPath> {
    check_channel(spec, channel)?;
    let n = spec.n();
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::TooLarge(n));
    }
    let k = spec.k();
    let mut best: Option<LikelihoodPath> = None;
    for word in 0u64..(1u64 << k) {
        // first free position is the most significant bit
        let message: Vec<u8> = (0..k).map(|j| ((word >> (k - 1 - j)) & 1) as u8).collect();
        let u = spec.place_message(&message)?;
        let metric = leaf_pair(channel, &u[..n - 1]).get(u[n - 1]);
        if best.as_ref().is_none_or(|b| metric > b.metric) {
            best = Some(LikelihoodPath { u, metric });
        }
    }
    Ok(best.expect("k >= 1"))
}
