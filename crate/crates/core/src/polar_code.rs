//! Polar code definition, frozen-set construction and encoding.
//!
//! Bits are stored as `u8` values in `{0, 1}`. Indices are 0-based
//! internally; the mask file format lists positions 1..=n left to right.
//! Everything uses natural (non bit-reversed) order: the encoder computes
//! `x = u · F^{⊗m}` with `F = [[1, 0], [1, 1]]`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Default Bhattacharyya design parameter for [`construct_frozen_set`].
pub const DEFAULT_DESIGN_Z0: f64 = 0.5;

/// An `(n, k)` polar code: block length, free-bit count and frozen mask.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CodeSpec {
    n: usize,
    k: usize,
    m: u32,
    frozen: Vec<bool>,
}

impl CodeSpec {
    /// Builds a code from an explicit frozen mask (`true` = frozen).
    pub fn from_mask(frozen: Vec<bool>) -> Result<Self> {
        let n = frozen.len();
        if !n.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(n));
        }
        let k = frozen.iter().filter(|&&f| !f).count();
        if k == 0 {
            return Err(Error::InvalidK { n, k });
        }
        Ok(Self {
            n,
            k,
            m: n.trailing_zeros(),
            frozen,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// log2 of the block length.
    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }

    pub fn frozen_mask(&self) -> &[bool] {
        &self.frozen
    }

    pub fn is_frozen(&self, index: usize) -> bool {
        self.frozen[index]
    }

    /// Free (information) positions in ascending order.
    pub fn free_positions(&self) -> impl Iterator<Item = usize> + '_ {
        self.frozen
            .iter()
            .enumerate()
            .filter(|(_, &f)| !f)
            .map(|(i, _)| i)
    }

    /// Places `message` into the free positions of an otherwise all-zero `u`.
    pub fn place_message(&self, message: &[u8]) -> Result<Vec<u8>> {
        if message.len() != self.k {
            return Err(Error::LengthMismatch {
                expected: self.k,
                actual: message.len(),
            });
        }
        let mut u = vec![0u8; self.n];
        for (pos, &bit) in self.free_positions().zip(message) {
            u[pos] = bit & 1;
        }
        Ok(u)
    }

    /// Reads the free positions of `u` back out as a message.
    pub fn extract_message(&self, u: &[u8]) -> Vec<u8> {
        self.free_positions().map(|pos| u[pos]).collect()
    }

    /// Serializes to the frozen-mask file format: `"n k\n"` then one
    /// character per position (`'1'` frozen, `'0'` free) and a newline.
    pub fn to_mask_file(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.k);
        out.extend(self.frozen.iter().map(|&f| if f { '1' } else { '0' }));
        out.push('\n');
        out
    }
}

impl fmt::Display for CodeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}) polar code", self.n, self.k)
    }
}

impl FromStr for CodeSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::MaskFormat("empty input".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let [n, k] = fields.as_slice() else {
            return Err(Error::MaskFormat(format!(
                "header must be \"n k\", got {header:?}"
            )));
        };
        let n: usize = n
            .parse()
            .map_err(|_| Error::MaskFormat(format!("bad n {n:?}")))?;
        let k: usize = k
            .parse()
            .map_err(|_| Error::MaskFormat(format!("bad k {k:?}")))?;
        let body = lines
            .next()
            .ok_or_else(|| Error::MaskFormat("missing mask line".into()))?
            .trim();
        if lines.any(|l| !l.trim().is_empty()) {
            return Err(Error::MaskFormat("trailing content after mask line".into()));
        }
        let frozen = body
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::MaskFormat(format!("unexpected character {other:?}"))),
            })
            .collect::<Result<Vec<bool>>>()?;
        if frozen.len() != n {
            return Err(Error::MaskFormat(format!(
                "mask has {} positions, header says {n}",
                frozen.len()
            )));
        }
        let spec = CodeSpec::from_mask(frozen)?;
        if spec.k != k {
            return Err(Error::MaskFormat(format!(
                "mask has {} free positions, header says {k}",
                spec.k
            )));
        }
        Ok(spec)
    }
}

fn check_length(n: usize) -> Result<u32> {
    if n.is_power_of_two() {
        Ok(n.trailing_zeros())
    } else {
        Err(Error::NotPowerOfTwo(n))
    }
}

/// Bhattacharyya parameters of the `n` synthetic channels, in natural order,
/// obtained from the BEC recursion `z -> (2z - z², z²)`.
pub fn bhattacharyya_parameters(n: usize, design_z0: f64) -> Result<Vec<f64>> {
    check_length(n)?;
    if !(design_z0 > 0.0 && design_z0 < 1.0) {
        return Err(Error::InvalidDesignZ(design_z0));
    }
    let mut z = vec![design_z0];
    while z.len() < n {
        z = z.iter().flat_map(|&v| [2.0 * v - v * v, v * v]).collect();
    }
    Ok(z)
}

/// Freezes the `n - k` positions with the largest Bhattacharyya parameter.
/// Equal parameters freeze the lower index first.
pub fn construct_frozen_set(n: usize, k: usize, design_z0: f64) -> Result<CodeSpec> {
    let z = bhattacharyya_parameters(n, design_z0)?;
    if k == 0 || k > n {
        return Err(Error::InvalidK { n, k });
    }
    CodeSpec::from_mask(freeze_least_reliable(&z, k))
}

fn freeze_least_reliable(z: &[f64], k: usize) -> Vec<bool> {
    let n = z.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| z[b].total_cmp(&z[a]).then(a.cmp(&b)));
    let mut frozen = vec![false; n];
    for &idx in &order[..n - k] {
        frozen[idx] = true;
    }
    frozen
}

/// In-place butterfly transform `x = u · F^{⊗m}` (natural order).
/// The transform is its own inverse over GF(2).
pub fn transform_in_place(bits: &mut [u8]) {
    let n = bits.len();
    debug_assert!(n.is_power_of_two());
    let mut half = 1;
    while half < n {
        for block in bits.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, &b) in lo.iter_mut().zip(hi.iter()) {
                *a ^= b;
            }
        }
        half *= 2;
    }
}

/// The raw `u -> x` transform without frozen-bit placement.
pub fn apply_transform(bits: &[u8]) -> Result<Vec<u8>> {
    check_length(bits.len())?;
    let mut out = bits.to_vec();
    transform_in_place(&mut out);
    Ok(out)
}

/// Encodes a `k`-bit message into an `n`-bit codeword.
pub fn encode(spec: &CodeSpec, message: &[u8]) -> Result<Vec<u8>> {
    let mut u = spec.place_message(message)?;
    transform_in_place(&mut u);
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Generator matrix F^{⊗m} built by Kronecker products, used as an
    /// independent check of the butterfly.
    fn generator(n: usize) -> Vec<Vec<u8>> {
        let mut g = vec![vec![1u8]];
        while g.len() < n {
            let s = g.len();
            let mut next = vec![vec![0u8; 2 * s]; 2 * s];
            for r in 0..s {
                for c in 0..s {
                    next[r][c] = g[r][c];
                    next[r + s][c] = g[r][c];
                    next[r + s][c + s] = g[r][c];
                }
            }
            g = next;
        }
        g
    }

    fn matrix_encode(u: &[u8]) -> Vec<u8> {
        let g = generator(u.len());
        (0..u.len())
            .map(|c| {
                u.iter()
                    .enumerate()
                    .fold(0u8, |acc, (r, &b)| acc ^ (b & g[r][c]))
            })
            .collect()
    }

    #[test]
    fn construction_small_examples() {
        let z = bhattacharyya_parameters(2, 0.5).unwrap();
        assert_eq!(z, vec![0.75, 0.25]);
        let spec = construct_frozen_set(2, 1, 0.5).unwrap();
        assert_eq!(spec.frozen_mask(), &[true, false]);

        let z = bhattacharyya_parameters(4, 0.5).unwrap();
        assert_eq!(z, vec![0.9375, 0.5625, 0.4375, 0.0625]);
        let spec = construct_frozen_set(4, 2, 0.5).unwrap();
        assert_eq!(spec.frozen_mask(), &[true, true, false, false]);

        let spec = construct_frozen_set(8, 8, 0.5).unwrap();
        assert!(spec.frozen_mask().iter().all(|&f| !f));
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            construct_frozen_set(3, 1, 0.5),
            Err(Error::NotPowerOfTwo(3))
        );
        assert_eq!(
            construct_frozen_set(4, 0, 0.5),
            Err(Error::InvalidK { n: 4, k: 0 })
        );
        assert_eq!(
            construct_frozen_set(4, 5, 0.5),
            Err(Error::InvalidK { n: 4, k: 5 })
        );
        assert_eq!(
            construct_frozen_set(4, 2, 1.0),
            Err(Error::InvalidDesignZ(1.0))
        );
    }

    #[test]
    fn construction_ties_freeze_lower_index() {
        assert_eq!(
            freeze_least_reliable(&[0.5; 4], 2),
            vec![true, true, false, false]
        );
        assert_eq!(
            freeze_least_reliable(&[0.1, 0.7, 0.7, 0.2], 2),
            vec![false, true, true, false]
        );
        assert_eq!(
            freeze_least_reliable(&[0.1, 0.7, 0.7, 0.2], 3),
            vec![false, true, false, false]
        );
    }

    #[test]
    fn frozen_sets_are_nested() {
        for n in [8usize, 32, 256] {
            let mut prev = construct_frozen_set(n, 1, 0.5).unwrap();
            for k in 2..=n {
                let next = construct_frozen_set(n, k, 0.5).unwrap();
                for i in 0..n {
                    assert!(!next.is_frozen(i) || prev.is_frozen(i), "n={n} k={k} i={i}");
                }
                prev = next;
            }
        }
    }

    #[test]
    fn transform_examples() {
        assert_eq!(apply_transform(&[0, 0]).unwrap(), vec![0, 0]);
        assert_eq!(apply_transform(&[1, 0]).unwrap(), vec![1, 0]);
        assert_eq!(apply_transform(&[0, 1]).unwrap(), vec![1, 1]);
        assert_eq!(apply_transform(&[0, 0, 0, 1]).unwrap(), vec![1, 1, 1, 1]);
        assert_eq!(apply_transform(&[0, 0, 1]), Err(Error::NotPowerOfTwo(3)));
    }

    #[test]
    fn transform_matches_generator_matrix_exhaustively() {
        for n in [1usize, 2, 4, 8, 16] {
            for word in 0u32..(1 << n) {
                let u: Vec<u8> = (0..n).map(|i| ((word >> i) & 1) as u8).collect();
                let x = apply_transform(&u).unwrap();
                assert_eq!(x, matrix_encode(&u));
                assert_eq!(apply_transform(&x).unwrap(), u);
            }
        }
    }

    #[test]
    fn encode_places_message_in_free_positions() {
        let spec = construct_frozen_set(4, 4, 0.5).unwrap();
        assert_eq!(encode(&spec, &[0, 0, 0, 1]).unwrap(), vec![1, 1, 1, 1]);
        let spec = construct_frozen_set(8, 4, 0.5).unwrap();
        assert_eq!(encode(&spec, &[0; 4]).unwrap(), vec![0; 8]);
        assert_eq!(
            encode(&spec, &[0; 3]),
            Err(Error::LengthMismatch {
                expected: 4,
                actual: 3
            })
        );
        let cw = encode(&spec, &[1, 0, 1, 1]).unwrap();
        let u = apply_transform(&cw).unwrap();
        assert_eq!(spec.extract_message(&u), vec![1, 0, 1, 1]);
    }

    #[test]
    fn mask_file_round_trip_and_errors() {
        let spec = construct_frozen_set(4, 2, 0.5).unwrap();
        let text = spec.to_mask_file();
        assert_eq!(text, "4 2\n1100\n");
        assert_eq!(text.parse::<CodeSpec>().unwrap(), spec);
        assert!("4 3\n1100\n".parse::<CodeSpec>().is_err());
        assert!("4 2\n110\n".parse::<CodeSpec>().is_err());
        assert!("4 2\n11x0\n".parse::<CodeSpec>().is_err());
        assert!("3 1\n110\n".parse::<CodeSpec>().is_err());
        assert!("".parse::<CodeSpec>().is_err());
    }

    proptest! {
        #[test]
        fn transform_is_involution(m in 0u32..=8, seed in any::<u64>()) {
            let n = 1usize << m;
            let u: Vec<u8> = (0..n).map(|i| ((seed.rotate_left(i as u32 % 64) ^ (i as u64 * 0x9e37)) & 1) as u8).collect();
            let x = apply_transform(&u).unwrap();
            prop_assert_eq!(apply_transform(&x).unwrap(), u);
        }

        #[test]
        fn encode_is_linear(a in proptest::collection::vec(0u8..2, 32), b in proptest::collection::vec(0u8..2, 32)) {
            let spec = construct_frozen_set(32, 32, 0.5).unwrap();
            let sum: Vec<u8> = a.iter().zip(&b).map(|(x, y)| x ^ y).collect();
            let lhs = encode(&spec, &sum).unwrap();
            let rhs: Vec<u8> = encode(&spec, &a).unwrap().iter().zip(encode(&spec, &b).unwrap()).map(|(x, y)| x ^ y).collect();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn construction_is_deterministic(m in 1u32..=10, frac in 0.0f64..1.0, z0 in 0.01f64..0.99) {
            let n = 1usize << m;
            let k = ((n as f64 * frac) as usize).clamp(1, n);
            let a = construct_frozen_set(n, k, z0).unwrap();
            let b = construct_frozen_set(n, k, z0).unwrap();
            prop_assert_eq!(a.frozen_mask().iter().filter(|&&f| f).count(), n - k);
            prop_assert_eq!(a, b);
        }
    }
}
