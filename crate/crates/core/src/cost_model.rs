//! Gate-count, memory, latency and efficiency model comparing the LLR-based
//! list decoder with the log-likelihood (LL) baseline.
//!
//! Costs are linear in the message width `q` and kept as exact rationals
//! (`a·q + b`) until a concrete `q` is plugged in. Memory bits count as one
//! gate each. Per-unit figures:
//!
//! | unit               | LLR-SCL | LL-SCL |
//! |--------------------|---------|--------|
//! | PE                 | 17q     | 34q    |
//! | MCU                | 12.5q   | -      |
//! | compare-and-swap   | 4q      | 4q     |
//!
//! The sorter is the Batcher network on `2L` inputs for both designs, and
//! both are charged `Lq` path-metric bits and `Ln` survival-path bits.

use std::fmt;

use num_rational::Rational64;
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::error::{Error, Result};
use crate::sorting_network::{build_batcher, depth_formula};

/// Gates per compare-and-swap unit, in units of `q`.
pub const GATES_PER_CS: i64 = 4;

/// `per_q · q + constant`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LinearCost {
    pub per_q: Rational64,
    pub constant: Rational64,
}

impl LinearCost {
    pub const ZERO: LinearCost = LinearCost {
        per_q: Rational64::new_raw(0, 1),
        constant: Rational64::new_raw(0, 1),
    };

    pub fn q(coeff: Rational64) -> Self {
        Self {
            per_q: coeff,
            constant: Rational64::from_integer(0),
        }
    }

    pub fn constant(c: i64) -> Self {
        Self {
            per_q: Rational64::from_integer(0),
            constant: Rational64::from_integer(c),
        }
    }

    pub fn times(self, count: u64) -> Self {
        let c = Rational64::from_integer(count as i64);
        Self {
            per_q: self.per_q * c,
            constant: self.constant * c,
        }
    }

    pub fn eval(self, q: u32) -> f64 {
        let v = self.per_q * Rational64::from_integer(q as i64) + self.constant;
        *v.numer() as f64 / *v.denom() as f64
    }
}

impl std::ops::Add for LinearCost {
    type Output = LinearCost;

    fn add(self, rhs: LinearCost) -> LinearCost {
        LinearCost {
            per_q: self.per_q + rhs.per_q,
            constant: self.constant + rhs.constant,
        }
    }
}

impl std::iter::Sum for LinearCost {
    fn sum<I: Iterator<Item = LinearCost>>(iter: I) -> LinearCost {
        iter.fold(LinearCost::ZERO, |a, b| a + b)
    }
}

impl fmt::Display for LinearCost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let zero = Rational64::from_integer(0);
        match (self.per_q != zero, self.constant != zero) {
            (true, true) => write!(f, "{}q + {}", self.per_q, self.constant),
            (true, false) => write!(f, "{}q", self.per_q),
            (false, _) => write!(f, "{}", self.constant),
        }
    }
}

fn ratio_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

impl Serialize for LinearCost {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("LinearCost", 3)?;
        s.serialize_field("expr", &self.to_string())?;
        s.serialize_field("per_q", &ratio_f64(self.per_q))?;
        s.serialize_field("constant", &ratio_f64(self.constant))?;
        s.end()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Design {
    LlrScl,
    LlScl,
}

impl fmt::Display for Design {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Design::LlrScl => "LLR-SCL",
            Design::LlScl => "LL-SCL",
        })
    }
}

/// Building blocks of one processing element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct PeComponents {
    pub adders: u32,
    pub c2s_s2c: u32,
    pub compare_select: u32,
    pub muxes: u32,
}

/// Building blocks of one metric computation unit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct McuComponents {
    pub adders: u32,
    pub muxes: u32,
    pub c2s_s2c: u32,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct DesignCost {
    pub design: Design,
    pub pe_count: u64,
    pub pe_components: PeComponents,
    pub pe_gates_each: LinearCost,
    pub pe_gates: LinearCost,
    pub mcu_count: u64,
    pub mcu_components: Option<McuComponents>,
    pub mcu_gates_each: LinearCost,
    pub mcu_gates: LinearCost,
    pub sorter_inputs: usize,
    pub sorter_cs_count: usize,
    pub sorter_depth: usize,
    pub sorter_gates: LinearCost,
    pub llr_memory_bits: LinearCost,
    pub metric_memory_bits: LinearCost,
    pub path_memory_bits: LinearCost,
    pub total_gates: LinearCost,
    pub latency_cycles: u64,
    /// Critical path in compare-and-swap delays.
    pub critical_path_tcs: usize,
    pub normalized_throughput: f64,
    pub normalized_efficiency: f64,
}

impl DesignCost {
    fn parts(&self) -> [LinearCost; 6] {
        [
            self.pe_gates,
            self.mcu_gates,
            self.sorter_gates,
            self.llr_memory_bits,
            self.metric_memory_bits,
            self.path_memory_bits,
        ]
    }
}

/// Both designs at one `(n, L, q)` plus derived ratios.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct CostReport {
    pub n: usize,
    pub list_size: usize,
    pub q: u32,
    pub llr_scl: DesignCost,
    pub ll_scl: DesignCost,
    /// `total(LL) / total(LLR)` at `q`.
    pub efficiency_ratio: f64,
    /// `1 - total(LLR) / total(LL)`.
    pub gate_reduction: f64,
    /// `efficiency_ratio - 1`.
    pub efficiency_gain: f64,
}

fn validate(n: usize, list_size: usize, q: u32) -> Result<()> {
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::InvalidCostParams(format!(
            "n = {n} must be a power of two >= 2"
        )));
    }
    if list_size == 0 || !list_size.is_power_of_two() {
        return Err(Error::InvalidCostParams(format!(
            "L = {list_size} must be a power of two so the 2L-input sorter is a Batcher network"
        )));
    }
    if q < 2 {
        return Err(Error::InvalidCostParams(format!(
            "q = {q} must be at least 2"
        )));
    }
    Ok(())
}

fn design_cost(design: Design, n: usize, list_size: usize) -> Result<DesignCost> {
    let (nn, ll) = (n as i64, list_size as i64);
    let sorter = build_batcher(2 * list_size)?;
    let sorter_depth = depth_formula((2 * list_size).trailing_zeros())?;
    let pe_count = (list_size * n / 2) as u64;
    let (pe_components, pe_each, llr_bits_per_path) = match design {
        Design::LlrScl => (
            PeComponents {
                adders: 2,
                c2s_s2c: 4,
                compare_select: 1,
                muxes: 2,
            },
            Rational64::from_integer(17),
            2 * nn - 1,
        ),
        Design::LlScl => (
            PeComponents {
                adders: 4,
                c2s_s2c: 8,
                compare_select: 2,
                muxes: 4,
            },
            Rational64::from_integer(34),
            4 * nn - 2,
        ),
    };
    let (mcu_count, mcu_components, mcu_each) = match design {
        Design::LlrScl => (
            list_size as u64,
            Some(McuComponents {
                adders: 2,
                muxes: 2,
                c2s_s2c: 1,
            }),
            LinearCost::q(Rational64::new(25, 2)),
        ),
        Design::LlScl => (0, None, LinearCost::ZERO),
    };
    let pe_gates_each = LinearCost::q(pe_each);
    let sorter_cs_count = sorter.comparator_count();
    let mut cost = DesignCost {
        design,
        pe_count,
        pe_components,
        pe_gates_each,
        pe_gates: pe_gates_each.times(pe_count),
        mcu_count,
        mcu_components,
        mcu_gates_each: mcu_each,
        mcu_gates: mcu_each.times(mcu_count),
        sorter_inputs: 2 * list_size,
        sorter_cs_count,
        sorter_depth,
        sorter_gates: LinearCost::q(Rational64::from_integer(GATES_PER_CS))
            .times(sorter_cs_count as u64),
        llr_memory_bits: LinearCost::q(Rational64::from_integer(ll * llr_bits_per_path)),
        metric_memory_bits: LinearCost::q(Rational64::from_integer(ll)),
        path_memory_bits: LinearCost::constant(ll * nn),
        total_gates: LinearCost::ZERO,
        latency_cycles: 3 * n as u64 - 2,
        critical_path_tcs: sorter_depth,
        normalized_throughput: 1.0,
        normalized_efficiency: 1.0,
    };
    cost.total_gates = cost.parts().into_iter().sum();
    Ok(cost)
}

/// Full comparison at `(n, L, q)`.
pub fn compare(n: usize, list_size: usize, q: u32) -> Result<CostReport> {
    validate(n, list_size, q)?;
    let mut llr = design_cost(Design::LlrScl, n, list_size)?;
    let ll = design_cost(Design::LlScl, n, list_size)?;
    let (llr_total, ll_total) = (llr.total_gates.eval(q), ll.total_gates.eval(q));
    // equal throughput, so efficiency is the inverse gate ratio
    let ratio = ll_total / llr_total;
    llr.normalized_efficiency = ratio;
    Ok(CostReport {
        n,
        list_size,
        q,
        llr_scl: llr,
        ll_scl: ll,
        efficiency_ratio: ratio,
        gate_reduction: 1.0 - llr_total / ll_total,
        efficiency_gain: ratio - 1.0,
    })
}

/// LLR-SCL half of the comparison (efficiency normalized to LL-SCL).
pub fn llr_scl_cost(n: usize, list_size: usize, q: u32) -> Result<DesignCost> {
    Ok(compare(n, list_size, q)?.llr_scl)
}

/// LL-SCL half of the comparison.
pub fn ll_scl_cost(n: usize, list_size: usize, q: u32) -> Result<DesignCost> {
    Ok(compare(n, list_size, q)?.ll_scl)
}

impl fmt::Display for CostReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = (&self.llr_scl, &self.ll_scl);
        let q = self.q;
        let rows: Vec<(String, String, String)> = vec![
            (
                "# of PE".into(),
                a.pe_count.to_string(),
                b.pe_count.to_string(),
            ),
            (
                "PE gate count".into(),
                a.pe_gates_each.to_string(),
                b.pe_gates_each.to_string(),
            ),
            (
                "# of MCU".into(),
                a.mcu_count.to_string(),
                b.mcu_count.to_string(),
            ),
            (
                "MCU gate count".into(),
                a.mcu_gates_each.to_string(),
                "N/A".into(),
            ),
            (
                "Sorter inputs".into(),
                a.sorter_inputs.to_string(),
                b.sorter_inputs.to_string(),
            ),
            (
                "Sorter # of C&S".into(),
                a.sorter_cs_count.to_string(),
                b.sorter_cs_count.to_string(),
            ),
            (
                "Sorter gate count".into(),
                a.sorter_gates.to_string(),
                b.sorter_gates.to_string(),
            ),
            (
                "LLR/LL memory bits".into(),
                a.llr_memory_bits.to_string(),
                b.llr_memory_bits.to_string(),
            ),
            (
                "Path metric memory bits".into(),
                a.metric_memory_bits.to_string(),
                b.metric_memory_bits.to_string(),
            ),
            (
                "Survival path memory bits".into(),
                a.path_memory_bits.to_string(),
                b.path_memory_bits.to_string(),
            ),
            (
                "Total gate count".into(),
                a.total_gates.to_string(),
                b.total_gates.to_string(),
            ),
            (
                format!("Total gates at q={q}"),
                format!("{}", a.total_gates.eval(q)),
                format!("{}", b.total_gates.eval(q)),
            ),
            (
                "Critical path (T_C&S)".into(),
                a.critical_path_tcs.to_string(),
                b.critical_path_tcs.to_string(),
            ),
            (
                "Latency (cycles)".into(),
                a.latency_cycles.to_string(),
                b.latency_cycles.to_string(),
            ),
            (
                "Throughput (normalized)".into(),
                format!("{}", a.normalized_throughput),
                format!("{}", b.normalized_throughput),
            ),
            (
                "Efficiency (normalized)".into(),
                format!("{:.3}", a.normalized_efficiency),
                format!("{:.3}", b.normalized_efficiency),
            ),
        ];
        let w0 = rows.iter().map(|r| r.0.len()).max().unwrap_or(0);
        let w1 = rows.iter().map(|r| r.1.len()).max().unwrap_or(0).max(7);
        let w2 = rows.iter().map(|r| r.2.len()).max().unwrap_or(0).max(6);
        writeln!(f, "n = {}, L = {}, q = {}", self.n, self.list_size, q)?;
        writeln!(
            f,
            "{:<w0$}  {:>w1$}  {:>w2$}",
            "",
            Design::LlrScl,
            Design::LlScl
        )?;
        for (name, x, y) in &rows {
            writeln!(f, "{name:<w0$}  {x:>w1$}  {y:>w2$}")?;
        }
        writeln!(f, "gate reduction: {:.1}%", 100.0 * self.gate_reduction)?;
        write!(f, "efficiency gain: {:.1}%", 100.0 * self.efficiency_gain)
    }
}

/// One published reference value and what the model produces for it.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct AnchorCheck {
    pub name: &'static str,
    pub expected: String,
    pub actual: String,
    pub ok: bool,
}

/// Reference operating point for [`anchor_checks`].
pub const ANCHOR_N: usize = 1024;
pub const ANCHOR_LIST: usize = 4;
pub const ANCHOR_Q: u32 = 6;
pub const ANCHOR_EFFICIENCY: f64 = 1.98;
pub const ANCHOR_EFFICIENCY_TOL: f64 = 0.005;

/// Evaluates the model at `n = 1024, L = 4, q = 6` against the published
/// decoder comparison.
pub fn anchor_checks() -> Vec<AnchorCheck> {
    let report = compare(ANCHOR_N, ANCHOR_LIST, ANCHOR_Q).expect("anchor parameters are valid");
    let (a, b) = (&report.llr_scl, &report.ll_scl);
    let lin = |q: i64, c: i64| LinearCost {
        per_q: Rational64::from_integer(q),
        constant: Rational64::from_integer(c),
    };
    let exact = |name, expected: String, actual: String| AnchorCheck {
        name,
        ok: expected == actual,
        expected,
        actual,
    };
    vec![
        exact("PE count", "2048".into(), a.pe_count.to_string()),
        exact(
            "LLR-SCL total gates",
            lin(43134, 4096).to_string(),
            a.total_gates.to_string(),
        ),
        exact(
            "LL-SCL total gates",
            lin(86088, 4096).to_string(),
            b.total_gates.to_string(),
        ),
        exact(
            "LLR memory bits",
            lin(8188, 0).to_string(),
            a.llr_memory_bits.to_string(),
        ),
        exact(
            "latency cycles",
            "3070".into(),
            a.latency_cycles.to_string(),
        ),
        exact(
            "sorter C&S count / depth",
            "19 / 6".into(),
            format!("{} / {}", a.sorter_cs_count, a.critical_path_tcs),
        ),
        AnchorCheck {
            name: "efficiency ratio at q=6",
            expected: format!("{ANCHOR_EFFICIENCY} ± {ANCHOR_EFFICIENCY_TOL}"),
            actual: format!("{:.4}", report.efficiency_ratio),
            ok: (report.efficiency_ratio - ANCHOR_EFFICIENCY).abs() <= ANCHOR_EFFICIENCY_TOL,
        },
    ]
}
