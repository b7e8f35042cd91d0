//! LLR-based successive cancellation list decoding.
//!
//! Every survival path carries its own [`ScState`]. For each bit, each path
//! produces its last-stage LLR; the metric computation unit turns that LLR
//! and the parent metric into child metrics; on free bits the `L` children
//! with the largest metrics survive, on frozen bits every path keeps its
//! bit-0 child.
//!
//! Selection order is deterministic: candidates are enumerated by
//! (parent index, bit 0 before bit 1) and equal metrics favor the earlier
//! candidate. Survivors are kept in descending metric order.

use std::cmp::Ordering;

use crate::datapath::{Datapath, FloatDatapath, MetricMode};
use crate::error::{Error, Result};
use crate::llr_kernels::{softplus, Kernel};
use crate::polar_code::CodeSpec;
use crate::sc_decoder::ScState;
use crate::sorting_network::{build_batcher, ComparatorNetwork};

/// Approximate metric update: unchanged when `bit` agrees with the sign of
/// `llr` (0 with `llr >= 0`, 1 with `llr < 0`), else reduced by `|llr|`.
#[inline]
pub fn mcu_approx(metric: f64, llr: f64, bit: u8) -> f64 {
    let disagrees = (bit & 1 == 1) != (llr < 0.0);
    if disagrees {
        metric - llr.abs()
    } else {
        metric
    }
}

/// Exact metric update: `M + c - ln(1 + e^c)` for bit 0, `M - ln(1 + e^c)`
/// for bit 1.
#[inline]
pub fn mcu_exact(metric: f64, llr: f64, bit: u8) -> f64 {
    // c - ln(1 + e^c) == -ln(1 + e^-c)
    if bit & 1 == 0 {
        metric - softplus(-llr)
    } else {
        metric - softplus(llr)
    }
}

/// A survival path: decided prefix, path metric and private SC state.
pub struct DecodePath<D: Datapath> {
    pub prefix: Vec<u8>,
    pub metric: D::Metric,
    pub state: ScState<D::Llr>,
}

// Derives would demand `D: Clone`/`D: Debug`, which the path never stores.
impl<D: Datapath> Clone for DecodePath<D> {
    fn clone(&self) -> Self {
        Self {
            prefix: self.prefix.clone(),
            metric: self.metric,
            state: self.state.clone(),
        }
    }
}

impl<D: Datapath> std::fmt::Debug for DecodePath<D> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DecodePath")
            .field("prefix", &self.prefix)
            .field("metric", &self.metric)
            .field("state", &self.state)
            .finish()
    }
}

impl<D: Datapath> DecodePath<D> {
    /// The single root path for a frame.
    pub fn root(dp: &D, channel_llrs: &[f64]) -> Result<Self> {
        let channel: Vec<D::Llr> = channel_llrs.iter().map(|&x| dp.load(x)).collect();
        Ok(Self {
            prefix: Vec::with_capacity(channel.len()),
            metric: dp.initial_metric(),
            state: ScState::new(&channel)?,
        })
    }
}

/// A child path proposed during expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Candidate<M> {
    pub parent: usize,
    pub bit: u8,
    pub metric: M,
}

/// What happened while decoding one bit, for observers.
#[derive(Debug)]
pub struct StepTrace<'a, M> {
    pub bit_index: usize,
    pub frozen: bool,
    pub parent_metrics: &'a [M],
    pub candidates: &'a [Candidate<M>],
    /// Indices into `candidates`, best first.
    pub survivors: &'a [usize],
    /// Metric gap between the last survivor and the best pruned candidate,
    /// when anything was pruned.
    pub boundary_gap: Option<f64>,
}

/// Picks the largest candidates, using a Batcher network whenever the
/// candidate count is a power of two and a stable comparison sort otherwise.
#[derive(Debug, Clone)]
pub struct Selector {
    networks: Vec<ComparatorNetwork>,
}

impl Selector {
    /// Prepares networks for up to `2 * list_size` candidates.
    pub fn new(list_size: usize) -> Self {
        let mut networks = Vec::new();
        let mut size = 2;
        while size <= 2 * list_size {
            networks.push(build_batcher(size).expect("power of two"));
            size *= 2;
        }
        Self { networks }
    }

    /// Returns candidate indices in descending metric order; on equal
    /// metrics the lower index comes first.
    pub fn rank<M: PartialOrd>(&self, metrics: &[M]) -> Vec<usize> {
        let greater = |a: &usize, b: &usize| -> Ordering {
            metrics[*a]
                .partial_cmp(&metrics[*b])
                .unwrap_or(Ordering::Equal)
                .then(b.cmp(a))
        };
        let count = metrics.len();
        let idx: Vec<usize> = (0..count).collect();
        if count.is_power_of_two() && count >= 2 {
            let slot = count.trailing_zeros() as usize - 1;
            if let Some(net) = self.networks.get(slot) {
                return net.apply_by(&idx, greater).expect("sized network");
            }
        }
        let mut idx = idx;
        idx.sort_by(|a, b| greater(b, a));
        idx
    }
}

fn expand_prune_step<D: Datapath>(
    paths: Vec<DecodePath<D>>,
    leaf_llrs: &[D::Llr],
    frozen: bool,
    list_size: usize,
    dp: &D,
    selector: &Selector,
    observer: &mut dyn FnMut(&StepTrace<'_, D::Metric>),
) -> Result<Vec<DecodePath<D>>> {
    if paths.is_empty() {
        return Err(Error::EmptyPathList);
    }
    if list_size == 0 {
        return Err(Error::InvalidListSize);
    }
    if leaf_llrs.len() != paths.len() {
        return Err(Error::LengthMismatch {
            expected: paths.len(),
            actual: leaf_llrs.len(),
        });
    }
    let bit_index = paths[0].state.next_bit();
    let parent_metrics: Vec<D::Metric> = paths.iter().map(|p| p.metric).collect();

    let bits: &[u8] = if frozen { &[0] } else { &[0, 1] };
    let candidates: Vec<Candidate<D::Metric>> = paths
        .iter()
        .zip(leaf_llrs)
        .enumerate()
        .flat_map(|(parent, (path, &llr))| {
            bits.iter().map(move |&bit| Candidate {
                parent,
                bit,
                metric: dp.update_metric(path.metric, llr, bit),
            })
        })
        .collect();

    let (survivors, boundary_gap) = if frozen {
        ((0..candidates.len()).collect::<Vec<_>>(), None)
    } else {
        let metrics: Vec<D::Metric> = candidates.iter().map(|c| c.metric).collect();
        let mut order = selector.rank(&metrics);
        let gap = (order.len() > list_size).then(|| {
            dp.metric_value(metrics[order[list_size - 1]])
                - dp.metric_value(metrics[order[list_size]])
        });
        order.truncate(list_size);
        (order, gap)
    };

    observer(&StepTrace {
        bit_index,
        frozen,
        parent_metrics: &parent_metrics,
        candidates: &candidates,
        survivors: &survivors,
        boundary_gap,
    });

    let mut uses = vec![0usize; paths.len()];
    for &s in &survivors {
        uses[candidates[s].parent] += 1;
    }
    let mut parents: Vec<Option<DecodePath<D>>> = paths.into_iter().map(Some).collect();
    let mut next = Vec::with_capacity(survivors.len());
    for &s in &survivors {
        let cand = candidates[s];
        uses[cand.parent] -= 1;
        let mut child = if uses[cand.parent] > 0 {
            parents[cand.parent].clone().expect("parent still present")
        } else {
            parents[cand.parent].take().expect("parent used once")
        };
        child.prefix.push(cand.bit);
        child.metric = cand.metric;
        child.state.update_partial_sums(bit_index, cand.bit)?;
        next.push(child);
    }
    let mut metrics: Vec<D::Metric> = next.iter().map(|p| p.metric).collect();
    dp.renormalize(&mut metrics);
    for (p, m) in next.iter_mut().zip(metrics) {
        p.metric = m;
    }
    Ok(next)
}

/// One expansion/pruning step for the bit at `paths[..].state.next_bit()`.
///
/// `leaf_llrs[j]` is the last-stage LLR of `paths[j]`. Survivors have their
/// prefix, metric and partial sums advanced by one bit.
pub fn expand_and_prune<D: Datapath>(
    paths: Vec<DecodePath<D>>,
    leaf_llrs: &[D::Llr],
    frozen: bool,
    list_size: usize,
    dp: &D,
) -> Result<Vec<DecodePath<D>>> {
    expand_prune_step(
        paths,
        leaf_llrs,
        frozen,
        list_size,
        dp,
        &Selector::new(list_size),
        &mut |_| {},
    )
}

/// Output of an SCL decode.
#[derive(Debug, Clone, PartialEq)]
pub struct SclOutput {
    pub message: Vec<u8>,
    pub u_hat: Vec<u8>,
    pub codeword: Vec<u8>,
    /// Metric of the returned path.
    pub metric: f64,
    /// Smallest metric gap at any decision boundary (pruning or final
    /// choice); `INFINITY` when no decision compared two candidates.
    pub min_gap: f64,
}

/// Reusable SCL decoder for a fixed code, list size and datapath.
#[derive(Debug, Clone)]
pub struct SclDecoder<D> {
    spec: CodeSpec,
    list_size: usize,
    dp: D,
    selector: Selector,
}

impl<D: Datapath> SclDecoder<D> {
    pub fn new(spec: CodeSpec, list_size: usize, dp: D) -> Result<Self> {
        if list_size == 0 {
            return Err(Error::InvalidListSize);
        }
        Ok(Self {
            spec,
            list_size,
            dp,
            selector: Selector::new(list_size),
        })
    }

    pub fn spec(&self) -> &CodeSpec {
        &self.spec
    }

    pub fn list_size(&self) -> usize {
        self.list_size
    }

    pub fn datapath(&self) -> &D {
        &self.dp
    }

    pub fn decode(&self, channel_llrs: &[f64]) -> Result<SclOutput> {
        self.decode_traced(channel_llrs, |_| {})
    }

    /// Decodes while reporting every expansion step to `observer`.
    pub fn decode_traced(
        &self,
        channel_llrs: &[f64],
        mut observer: impl FnMut(&StepTrace<'_, D::Metric>),
    ) -> Result<SclOutput> {
        let n = self.spec.n();
        if channel_llrs.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: channel_llrs.len(),
            });
        }
        let mut paths = vec![DecodePath::root(&self.dp, channel_llrs)?];
        let mut min_gap = f64::INFINITY;
        let mut llrs = Vec::with_capacity(self.list_size);
        for i in 0..n {
            llrs.clear();
            llrs.extend(paths.iter_mut().map(|p| p.state.leaf_llr(&self.dp)));
            paths = expand_prune_step(
                paths,
                &llrs,
                self.spec.is_frozen(i),
                self.list_size,
                &self.dp,
                &self.selector,
                &mut |trace| {
                    if let Some(gap) = trace.boundary_gap {
                        min_gap = min_gap.min(gap);
                    }
                    observer(trace)
                },
            )?;
        }

        let metrics: Vec<D::Metric> = paths.iter().map(|p| p.metric).collect();
        let order = self.selector.rank(&metrics);
        if let [first, second, ..] = order[..] {
            min_gap = min_gap
                .min(self.dp.metric_value(metrics[first]) - self.dp.metric_value(metrics[second]));
        }
        let best = paths.swap_remove(order[0]);
        let codeword = best.state.codeword().expect("all bits absorbed").to_vec();
        Ok(SclOutput {
            message: self.spec.extract_message(&best.prefix),
            metric: self.dp.metric_value(best.metric),
            u_hat: best.prefix,
            codeword,
            min_gap,
        })
    }
}

/// Floating-point SCL decoding with the chosen metric update and `f` kernel.
pub fn scl_decode(
    spec: &CodeSpec,
    channel_llrs: &[f64],
    list_size: usize,
    mode: MetricMode,
    kernel: Kernel,
) -> Result<SclOutput> {
    SclDecoder::new(spec.clone(), list_size, FloatDatapath::new(kernel, mode))?.decode(channel_llrs)
}
