//! Finite sums over (tagged) partitions and the oscillation bounds that
//! relate them.
//!
//! Every sum is reduced left to right with compensated summation.

use serde::{Deserialize, Serialize};

use crate::catalog::{osc_raw, FunctionHandle, Interval};
use crate::error::{Error, Result};
use crate::integrator::IndefiniteIntegral;
use crate::numeric::{CompensatedSum, DEFAULT_SLACK};
use crate::partition::{DoubleTaggedPartition, Partition, TaggedPartition};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SumResult {
    pub value: f64,
    pub partition_mesh: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<f64>,
}

fn same_domain(h: &FunctionHandle, d: Interval) -> Result<()> {
    if h.domain() == d {
        Ok(())
    } else {
        Err(Error::DomainMismatch(h.domain(), d))
    }
}

/// `Σ h(y_k)(x_k − x_{k−1})`, honoring tag-kind hints.
pub fn riemann_sum(h: &FunctionHandle, tp: &TaggedPartition) -> Result<SumResult> {
    same_domain(h, tp.partition().domain())?;
    let value = tp
        .cells()
        .map(|(a, b, t)| t.eval(h) * (b - a))
        .collect::<CompensatedSum>()
        .value();
    Ok(SumResult {
        value,
        partition_mesh: tp.partition().mesh(),
        bound: None,
    })
}

/// Lower and upper Darboux sums of `h` over `p`.
pub fn darboux_sums(h: &FunctionHandle, p: &Partition) -> Result<(f64, f64)> {
    same_domain(h, p.domain())?;
    let mut lower = CompensatedSum::new();
    let mut upper = CompensatedSum::new();
    for (a, b) in p.subintervals() {
        let (inf, sup) = h.range_raw(a, b);
        lower.add(inf * (b - a));
        upper.add(sup * (b - a));
    }
    Ok((lower.value(), upper.value()))
}

/// `Σ f(y_k)[G(x_k) − G(x_{k−1})]`.
///
/// Each increment is a certified enclosure of `∫_{x_{k−1}}^{x_k} g`; the
/// attached bound is `Σ |f(y_k)|·rad(ΔG_k)` plus rounding slack, so the true
/// sum lies within `value ± bound`.
pub fn rs_sum(
    f: &FunctionHandle,
    big_g: &IndefiniteIntegral,
    tp: &TaggedPartition,
) -> Result<SumResult> {
    same_domain(f, big_g.domain())?;
    same_domain(f, tp.partition().domain())?;
    let mut value = CompensatedSum::new();
    let mut bound = CompensatedSum::new();
    let mut scale = 0.0f64;
    for (a, b, t) in tp.cells() {
        let fy = t.eval(f);
        let inc = big_g.increment_raw(a, b);
        let term = fy * inc.mid;
        value.add(term);
        bound.add(fy.abs() * inc.rad);
        scale = scale.max(term.abs());
    }
    let n = tp.partition().len() as f64;
    Ok(SumResult {
        value: value.value(),
        partition_mesh: tp.partition().mesh(),
        bound: Some(bound.value() + DEFAULT_SLACK * n * scale.max(1.0)),
    })
}

/// `Σ f(y_k) g(z_k)(x_k − x_{k−1})`.
pub fn mixed_sum(
    f: &FunctionHandle,
    g: &FunctionHandle,
    dtp: &DoubleTaggedPartition,
) -> Result<SumResult> {
    same_domain(f, dtp.partition().domain())?;
    same_domain(g, dtp.partition().domain())?;
    let value = dtp
        .partition()
        .subintervals()
        .zip(dtp.y().iter().zip(dtp.z()))
        .map(|((a, b), (y, z))| y.eval(f) * z.eval(g) * (b - a))
        .collect::<CompensatedSum>()
        .value();
    Ok(SumResult {
        value,
        partition_mesh: dtp.partition().mesh(),
        bound: None,
    })
}

fn osc_bound(f: &FunctionHandle, g: &FunctionHandle, p: &Partition) -> Result<f64> {
    same_domain(f, p.domain())?;
    same_domain(g, p.domain())?;
    let weighted = p
        .subintervals()
        .map(|(a, b)| osc_raw(g, a, b) * (b - a))
        .collect::<CompensatedSum>()
        .value();
    Ok(f.sup_abs() * weighted)
}

/// `sup|f| · Σ osc(g, I_k)|I_k|`: how far a mixed sum can drift from the
/// Riemann sum of `f·g` taken at the `y` tags.
pub fn mixed_sum_error_bound(f: &FunctionHandle, g: &FunctionHandle, p: &Partition) -> Result<f64> {
    osc_bound(f, g, p)
}

/// Same formula as [`mixed_sum_error_bound`], certifying a different pair:
/// `|riemann_sum(f·g, tp) − rs_sum(f, G, tp)|` for every tagging of `p`,
/// up to the increment radii reported by [`rs_sum`].
pub fn rs_vs_riemann_gap_bound(
    f: &FunctionHandle,
    g: &FunctionHandle,
    p: &Partition,
) -> Result<f64> {
    osc_bound(f, g, p)
}
