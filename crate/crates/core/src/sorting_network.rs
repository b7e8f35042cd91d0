//! Batcher odd-even merge sorting networks.
//!
//! Networks sort in descending order: a comparator `(i, j)` with `i < j`
//! leaves the larger value at position `i`, swapping only on strict
//! inequality. For `2^i` inputs the network has `i(i+1)/2` layers.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// A layered compare-and-swap schedule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComparatorNetwork {
    size: usize,
    layers: Vec<Vec<(usize, usize)>>,
}

impl ComparatorNetwork {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn layers(&self) -> &[Vec<(usize, usize)>] {
        &self.layers
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn comparator_count(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }

    /// Sorts `values` in descending order, returning the sorted values and
    /// the permutation mapping each output slot to its original index.
    pub fn apply<T: PartialOrd + Copy>(&self, values: &[T]) -> Result<(Vec<T>, Vec<usize>)> {
        let perm = self.apply_by(values, |a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal))?;
        Ok((perm.iter().map(|&i| values[i]).collect(), perm))
    }

    /// Runs the network with an arbitrary comparator and returns the output
    /// permutation (output slot -> input index). A comparator swaps when the
    /// lower slot compares strictly less than the upper slot.
    pub fn apply_by<T>(
        &self,
        values: &[T],
        mut cmp: impl FnMut(&T, &T) -> Ordering,
    ) -> Result<Vec<usize>> {
        if values.len() != self.size {
            return Err(Error::LengthMismatch {
                expected: self.size,
                actual: values.len(),
            });
        }
        let mut perm: Vec<usize> = (0..self.size).collect();
        for layer in &self.layers {
            for &(i, j) in layer {
                if cmp(&values[perm[i]], &values[perm[j]]) == Ordering::Less {
                    perm.swap(i, j);
                }
            }
        }
        Ok(perm)
    }
}

impl fmt::Display for ComparatorNetwork {
    /// One line per layer, wires numbered from 1.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "size {}: {} comparators in {} layers",
            self.size,
            self.comparator_count(),
            self.depth()
        )?;
        for (idx, layer) in self.layers.iter().enumerate() {
            write!(f, "layer {}:", idx + 1)?;
            for &(i, j) in layer {
                write!(f, " ({},{})", i + 1, j + 1)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Builds the odd-even merge sort network for `size = 2^i`, `i >= 1`.
pub fn build_batcher(size: usize) -> Result<ComparatorNetwork> {
    if size < 2 || !size.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(size));
    }
    let mut layers = Vec::new();
    let mut p = 1;
    while p < size {
        let mut k = p;
        while k >= 1 {
            let mut layer = Vec::new();
            let mut j = k % p;
            while j + k < size {
                for i in 0..k.min(size - j - k) {
                    if (i + j) / (2 * p) == (i + j + k) / (2 * p) {
                        layer.push((i + j, i + j + k));
                    }
                }
                j += 2 * k;
            }
            layers.push(layer);
            k /= 2;
        }
        p *= 2;
    }
    Ok(ComparatorNetwork { size, layers })
}

/// Critical-path depth `i(i+1)/2` of a `2^i`-input Batcher sorter, in
/// compare-and-swap delays.
pub fn depth_formula(log2_size: u32) -> Result<usize> {
    if log2_size < 1 {
        return Err(Error::NotPowerOfTwo(1 << log2_size));
    }
    let i = log2_size as usize;
    Ok(i * (i + 1) / 2)
}
