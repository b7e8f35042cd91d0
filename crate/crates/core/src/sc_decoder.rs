//! LLR-based successive cancellation decoding.
//!
//! [`ScState`] holds the per-decoder memory: `2n - 1` LLR slots arranged by
//! stage (the channel stage holds `n`, each following stage half as many)
//! and the left-child partial sums that feed the `g` kernels. Bits are
//! decoded one at a time; before bit `i` only the stages below the deepest
//! node shared with bit `i - 1` are recomputed.

use crate::datapath::{Datapath, FloatDatapath, MetricMode};
use crate::error::{Error, Result};
use crate::llr_kernels::Kernel;
use crate::polar_code::CodeSpec;

#[derive(Debug, Clone)]
pub struct ScState<T> {
    m: u32,
    llr: Vec<T>,
    psum: Vec<u8>,
    scratch: Vec<u8>,
    next_bit: usize,
}

impl<T: Copy + Default> ScState<T> {
    /// Loads the channel stage. `channel.len()` must be a power of two.
    pub fn new(channel: &[T]) -> Result<Self> {
        let n = channel.len();
        if !n.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(n));
        }
        let mut llr = vec![T::default(); 2 * n - 1];
        llr[..n].copy_from_slice(channel);
        Ok(Self {
            m: n.trailing_zeros(),
            llr,
            psum: vec![0; n - 1],
            scratch: vec![0; n],
            next_bit: 0,
        })
    }

    pub fn n(&self) -> usize {
        1 << self.m
    }

    /// Number of LLR slots held, always `2n - 1`.
    pub fn llr_slot_count(&self) -> usize {
        self.llr.len()
    }

    /// Index of the next bit to be decided.
    pub fn next_bit(&self) -> usize {
        self.next_bit
    }

    #[inline]
    fn stage_offset(&self, stage: u32) -> usize {
        2 * self.n() - 2 * (self.n() >> stage)
    }

    #[inline]
    fn psum_offset(&self, depth: u32) -> usize {
        self.n() - 2 * (self.n() >> depth)
    }

    /// LLRs currently stored for `stage` (0 = channel, `m` = leaf).
    pub fn stage_llrs(&self, stage: u32) -> &[T] {
        let off = self.stage_offset(stage);
        &self.llr[off..off + (self.n() >> stage)]
    }

    /// Partial sums of the most recent left child at `depth` (1..=m),
    /// i.e. the `û_sum` inputs of the `g` kernels at `depth - 1`.
    pub fn partial_sums(&self, depth: u32) -> &[u8] {
        assert!(depth >= 1 && depth <= self.m, "depth out of range");
        let off = self.psum_offset(depth);
        &self.psum[off..off + (self.n() >> depth)]
    }

    /// Re-encoded codeword estimate, available once all `n` bits are absorbed.
    pub fn codeword(&self) -> Option<&[u8]> {
        (self.next_bit == self.n()).then_some(&self.scratch[..])
    }

    /// Computes the last-stage LLR for bit [`Self::next_bit`].
    pub fn leaf_llr<D: Datapath<Llr = T>>(&mut self, dp: &D) -> T {
        let i = self.next_bit;
        assert!(i < self.n(), "all bits already decoded");
        let m = self.m;
        let mut stage = if i == 0 {
            0
        } else {
            m - 1 - i.trailing_zeros()
        };
        if i > 0 {
            self.kernel_stage(stage, |a, b, j, psum| dp.g(a, b, psum[j]));
            stage += 1;
        }
        while stage < m {
            self.kernel_stage(stage, |a, b, _, _| dp.f(a, b));
            stage += 1;
        }
        self.llr[self.llr.len() - 1]
    }

    /// Fills stage `stage + 1` from stage `stage`.
    #[inline]
    fn kernel_stage(&mut self, stage: u32, op: impl Fn(T, T, usize, &[u8]) -> T) {
        let half = self.n() >> (stage + 1);
        let src = self.stage_offset(stage);
        let dst = self.stage_offset(stage + 1);
        let poff = self.psum_offset(stage + 1);
        let (lower, upper) = self.llr.split_at_mut(dst);
        let input = &lower[src..src + 2 * half];
        let (a, b) = input.split_at(half);
        let psum = &self.psum[poff..poff + half];
        for (j, out) in upper[..half].iter_mut().enumerate() {
            *out = op(a[j], b[j], j, psum);
        }
    }

    /// Absorbs the decision `u` for bit `i`, which must equal [`Self::next_bit`].
    pub fn update_partial_sums(&mut self, i: usize, u: u8) -> Result<()> {
        if i != self.next_bit || i >= self.n() {
            return Err(Error::OutOfOrder {
                expected: self.next_bit,
                actual: i,
            });
        }
        let m = self.m;
        self.scratch[0] = u & 1;
        let mut len = 1;
        for depth in (1..=m).rev() {
            let off = self.psum_offset(depth);
            if (i >> (m - depth)) & 1 == 0 {
                self.psum[off..off + len].copy_from_slice(&self.scratch[..len]);
                break;
            }
            self.scratch.copy_within(0..len, len);
            for (s, &p) in self.scratch[..len]
                .iter_mut()
                .zip(&self.psum[off..off + len])
            {
                *s ^= p;
            }
            len *= 2;
        }
        self.next_bit += 1;
        Ok(())
    }
}

/// Result of a hard-output SC or SCL decode.
#[derive(Debug, Clone, PartialEq)]
pub struct ScOutput {
    pub message: Vec<u8>,
    pub u_hat: Vec<u8>,
    pub codeword: Vec<u8>,
}

/// SC decoding over an arbitrary datapath.
pub fn sc_decode_with<D: Datapath>(
    spec: &CodeSpec,
    channel_llrs: &[f64],
    dp: &D,
) -> Result<ScOutput> {
    let n = spec.n();
    if channel_llrs.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: channel_llrs.len(),
        });
    }
    let channel: Vec<D::Llr> = channel_llrs.iter().map(|&x| dp.load(x)).collect();
    let mut state = ScState::new(&channel)?;
    let mut u_hat = Vec::with_capacity(n);
    for i in 0..n {
        let llr = state.leaf_llr(dp);
        let bit = if spec.is_frozen(i) { 0 } else { dp.decide(llr) };
        state.update_partial_sums(i, bit)?;
        u_hat.push(bit);
    }
    let codeword = state.codeword().expect("all bits absorbed").to_vec();
    Ok(ScOutput {
        message: spec.extract_message(&u_hat),
        u_hat,
        codeword,
    })
}

/// Floating-point SC decoding.
pub fn sc_decode(spec: &CodeSpec, channel_llrs: &[f64], kernel: Kernel) -> Result<ScOutput> {
    // The metric mode is irrelevant for SC.
    sc_decode_with(
        spec,
        channel_llrs,
        &FloatDatapath::new(kernel, MetricMode::Approx),
    )
}
