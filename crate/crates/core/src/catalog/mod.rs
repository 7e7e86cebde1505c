//! Bounded functions on a closed interval with exact range oracles.
//!
//! Every catalog function is normalized to a piecewise representation: a
//! strictly increasing list of breakpoints, one [`Cell`] per open cell
//! between them, and an explicit value at every breakpoint. Sums and
//! products of catalog functions are formed cell by cell on the merged
//! breakpoints, so polynomial, sinusoid and dense-oscillation pieces keep
//! exact ranges under composition. Combinations without a closed form fall
//! back to interval arithmetic and mark the handle as conservative.

mod cell;
mod poly;
mod spec;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use cell::{Cell, CellRange, Op, Sinusoid, TagKind, Witness};
pub use poly::{Extrema, Poly};
pub use spec::{Convention, DenseParams, FunctionSpec, ShiftParams, SinParams, SpecBody};

use crate::error::{Error, Result};

/// A closed interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    /// A query interval; `lo == hi` is allowed.
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::Interval {
                lo,
                hi,
                reason: "endpoints must be finite",
            });
        }
        if lo > hi {
            return Err(Error::Interval {
                lo,
                hi,
                reason: "lo must not exceed hi",
            });
        }
        Ok(Interval { lo, hi })
    }

    /// An integration domain; requires `lo < hi`.
    pub fn domain(lo: f64, hi: f64) -> Result<Self> {
        let iv = Interval::new(lo, hi)?;
        if iv.is_degenerate() {
            return Err(Error::Interval {
                lo,
                hi,
                reason: "integration domains must be nondegenerate",
            });
        }
        Ok(iv)
    }

    pub fn unit() -> Self {
        Interval { lo: 0.0, hi: 1.0 }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }
}

impl TryFrom<[f64; 2]> for Interval {
    type Error = Error;

    fn try_from(v: [f64; 2]) -> Result<Self> {
        Interval::new(v[0], v[1])
    }
}

impl From<Interval> for [f64; 2] {
    fn from(iv: Interval) -> Self {
        [iv.lo, iv.hi]
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Value at a breakpoint. The two fields differ only where a
/// dense-oscillation piece owns the point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct PointValue {
    on: f64,
    off: f64,
}

impl PointValue {
    fn uniform(v: f64) -> Self {
        PointValue { on: v, off: v }
    }

    fn of_cell(cell: &Cell, x: f64) -> Self {
        PointValue {
            on: cell.eval(x, TagKind::On),
            off: cell.eval(x, TagKind::Off),
        }
    }

    fn get(&self, kind: TagKind) -> f64 {
        match kind {
            TagKind::On => self.on,
            TagKind::Off => self.off,
        }
    }

    fn is_dense(&self) -> bool {
        self.on != self.off
    }

    fn combine(op: Op, a: PointValue, b: PointValue) -> Self {
        PointValue {
            on: op.apply(a.on, b.on),
            off: op.apply(a.off, b.off),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Piecewise {
    breaks: Vec<f64>,
    cells: Vec<Cell>,
    points: Vec<PointValue>,
}

enum Loc {
    Break(usize),
    Cell(usize),
}

impl Piecewise {
    /// Breakpoints must be strictly increasing; every breakpoint value is
    /// supplied explicitly.
    pub(crate) fn new(breaks: Vec<f64>, cells: Vec<Cell>, points: Vec<PointValue>) -> Self {
        debug_assert_eq!(breaks.len(), cells.len() + 1);
        debug_assert_eq!(breaks.len(), points.len());
        debug_assert!(breaks.windows(2).all(|w| w[0] < w[1]));
        Piecewise {
            breaks,
            cells,
            points,
        }
    }

    /// One cell over `[lo, hi]`, endpoint values taken from the cell.
    pub(crate) fn single(lo: f64, hi: f64, cell: Cell) -> Self {
        let points = vec![
            PointValue::of_cell(&cell, lo),
            PointValue::of_cell(&cell, hi),
        ];
        Piecewise::new(vec![lo, hi], vec![cell], points)
    }

    fn lo(&self) -> f64 {
        self.breaks[0]
    }

    fn hi(&self) -> f64 {
        self.breaks[self.breaks.len() - 1]
    }

    fn locate(&self, x: f64) -> Loc {
        match self.breaks.binary_search_by(|b| b.total_cmp(&x)) {
            Ok(i) => Loc::Break(i),
            Err(i) => Loc::Cell(i.clamp(1, self.cells.len()) - 1),
        }
    }

    /// Index of the cell whose closure contains `x`, preferring the cell to
    /// the right at breakpoints.
    fn cell_at(&self, x: f64) -> usize {
        self.breaks
            .partition_point(|&b| b <= x)
            .saturating_sub(1)
            .min(self.cells.len() - 1)
    }

    fn point_value(&self, x: f64) -> PointValue {
        match self.locate(x) {
            Loc::Break(i) => self.points[i],
            Loc::Cell(c) => PointValue::of_cell(&self.cells[c], x),
        }
    }

    fn eval(&self, x: f64, kind: TagKind) -> f64 {
        match self.locate(x) {
            Loc::Break(i) => self.points[i].get(kind),
            Loc::Cell(c) => self.cells[c].eval(x, kind),
        }
    }

    fn range(&self, lo: f64, hi: f64) -> CellRange {
        let mut acc: Option<CellRange> = None;
        let mut push = |r: CellRange| match acc.as_mut() {
            Some(a) => a.merge(&r),
            None => acc = Some(r),
        };

        let first = self.breaks.partition_point(|&b| b < lo);
        let last = self.breaks.partition_point(|&b| b <= hi);
        for i in first..last {
            let x = self.breaks[i];
            let p = self.points[i];
            let (kon, koff) = if p.is_dense() {
                (Some(TagKind::On), Some(TagKind::Off))
            } else {
                (None, None)
            };
            let (min, argmin) = if p.off <= p.on {
                (p.off, Witness { x, kind: koff })
            } else {
                (p.on, Witness { x, kind: kon })
            };
            let (max, argmax) = if p.on >= p.off {
                (p.on, Witness { x, kind: kon })
            } else {
                (p.off, Witness { x, kind: koff })
            };
            push(CellRange {
                inf: min,
                sup: max,
                argmin,
                argmax,
            });
        }

        let start = self.cell_at(lo);
        for c in start..self.cells.len() {
            let (a, b) = (self.breaks[c], self.breaks[c + 1]);
            if a >= hi && !(lo == hi && a == lo) {
                break;
            }
            let l = lo.max(a);
            let u = hi.min(b);
            let inside = l < u || (l == u && a < l && l < b);
            if !inside {
                continue;
            }
            let mut r = self.cells[c].range(l, u);
            // Cell ends are owned by the breakpoints; move witnesses inward.
            for w in [&mut r.argmin, &mut r.argmax] {
                if w.x <= a {
                    w.x = a.next_up().min(u);
                } else if w.x >= b {
                    w.x = b.next_down().max(l);
                }
            }
            push(r);
        }
        acc.expect("range query must meet the domain")
    }

    fn restrict(&self, lo: f64, hi: f64) -> Piecewise {
        let first = self.cell_at(lo);
        let last = self.breaks.partition_point(|&b| b < hi).max(1) - 1;
        let mut breaks = vec![lo];
        breaks.extend(
            self.breaks[first + 1..=last]
                .iter()
                .copied()
                .filter(|&b| b > lo && b < hi),
        );
        breaks.push(hi);
        let cells: Vec<Cell> = breaks
            .windows(2)
            .map(|w| self.cells[self.cell_at(0.5 * (w[0] + w[1]))].clone())
            .collect();
        let points = breaks.iter().map(|&x| self.point_value(x)).collect();
        Piecewise::new(breaks, cells, points)
    }

    fn combine(&self, op: Op, other: &Piecewise) -> Piecewise {
        let mut breaks: Vec<f64> = self
            .breaks
            .iter()
            .chain(other.breaks.iter())
            .copied()
            .collect();
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
        let cells = breaks
            .windows(2)
            .map(|w| {
                let m = 0.5 * (w[0] + w[1]);
                Cell::combine(
                    op,
                    &self.cells[self.cell_at(m)],
                    &other.cells[other.cell_at(m)],
                )
            })
            .collect();
        let points = breaks
            .iter()
            .map(|&x| PointValue::combine(op, self.point_value(x), other.point_value(x)))
            .collect();
        Piecewise::new(breaks, cells, points)
    }

    fn map_cells(&self, f: impl Fn(&Cell) -> Cell, p: impl Fn(PointValue) -> PointValue) -> Self {
        Piecewise::new(
            self.breaks.clone(),
            self.cells.iter().map(f).collect(),
            self.points.iter().copied().map(p).collect(),
        )
    }

    fn total_variation(&self, lo: f64, hi: f64) -> Option<f64> {
        let mut tv = 0.0;
        let start = self.cell_at(lo);
        for c in start..self.cells.len() {
            let (a, b) = (self.breaks[c], self.breaks[c + 1]);
            if a >= hi {
                break;
            }
            let l = lo.max(a);
            let u = hi.min(b);
            if l < u {
                tv += self.cells[c].total_variation(l, u)?;
            }
        }
        // Jumps at breakpoints inside [lo, hi].
        let first = self.breaks.partition_point(|&b| b < lo);
        let last = self.breaks.partition_point(|&b| b <= hi);
        for i in first..last {
            let x = self.breaks[i];
            let p = self.points[i];
            if p.is_dense() {
                return None;
            }
            if x > lo && i > 0 {
                tv += (p.off - self.cells[i - 1].eval(x, TagKind::Off)).abs();
            }
            if x < hi && i < self.cells.len() {
                tv += (self.cells[i].eval(x, TagKind::Off) - p.off).abs();
            }
        }
        Some(tv)
    }
}

/// Certificate that `osc(f, J) >= gamma` on every nondegenerate `J` inside
/// `subdomain`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscCertificate {
    pub subdomain: Interval,
    pub gamma: f64,
}

impl OscCertificate {
    /// Lower bound this certificate puts on `Σ osc(f, I_k)·|I_k|` for every
    /// partition.
    pub fn gap_floor(&self) -> f64 {
        self.gamma * self.subdomain.width()
    }
}

/// An immutable, cheaply clonable bounded function on a closed domain.
#[derive(Debug, Clone)]
pub struct FunctionHandle {
    domain: Interval,
    repr: Arc<Piecewise>,
    exact: bool,
}

impl FunctionHandle {
    pub(crate) fn from_piecewise(repr: Piecewise) -> Self {
        let domain = Interval {
            lo: repr.lo(),
            hi: repr.hi(),
        };
        let exact = repr.cells.iter().all(Cell::is_exact);
        FunctionHandle {
            domain,
            repr: Arc::new(repr),
            exact,
        }
    }

    pub fn constant(domain: Interval, c: f64) -> Self {
        FunctionHandle::from_piecewise(Piecewise::single(domain.lo, domain.hi, Cell::constant(c)))
    }

    pub fn polynomial(domain: Interval, coeffs: Vec<f64>) -> Self {
        FunctionHandle::from_piecewise(Piecewise::single(
            domain.lo,
            domain.hi,
            Cell::Poly(Poly::new(coeffs)),
        ))
    }

    pub fn identity(domain: Interval) -> Self {
        FunctionHandle::polynomial(domain, vec![0.0, 1.0])
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    /// Whether the range oracle is exact (up to float rounding) rather than
    /// an interval-arithmetic over-approximation.
    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// Whether every point of the domain has a definite value without a
    /// tag-kind hint.
    pub fn is_pointwise(&self) -> bool {
        self.repr.cells.iter().all(Cell::is_pointwise)
            && self.repr.points.iter().all(|p| !p.is_dense())
    }

    /// Value at `x`; on dense-oscillation pieces this is the off-value,
    /// which is the value almost everywhere.
    pub fn eval(&self, x: f64) -> f64 {
        self.eval_tagged(x, None)
    }

    pub fn eval_tagged(&self, x: f64, kind: Option<TagKind>) -> f64 {
        self.repr.eval(x, kind.unwrap_or(TagKind::Off))
    }

    /// Both candidate values at `x` when `x` is a dense-oscillation point.
    pub fn dense_values_at(&self, x: f64) -> Option<(f64, f64)> {
        let p = self.repr.point_value(x);
        p.is_dense().then_some((p.on, p.off))
    }

    /// `(inf, sup)` of the function over `iv ∩ domain`.
    pub fn range(&self, iv: &Interval) -> (f64, f64) {
        let r = self.range_witness(iv);
        (r.inf, r.sup)
    }

    /// Range together with points (and tag kinds) attaining the inf and sup,
    /// or approaching them from inside an open cell.
    pub fn range_witness(&self, iv: &Interval) -> CellRange {
        let lo = iv.lo.clamp(self.domain.lo, self.domain.hi);
        let hi = iv.hi.clamp(lo, self.domain.hi);
        self.repr.range(lo, hi)
    }

    pub(crate) fn range_witness_raw(&self, lo: f64, hi: f64) -> CellRange {
        self.repr.range(lo, hi)
    }

    pub(crate) fn range_raw(&self, lo: f64, hi: f64) -> (f64, f64) {
        let r = self.repr.range(lo, hi);
        (r.inf, r.sup)
    }

    /// Exact bound for `sup |f|` over the domain.
    pub fn sup_abs(&self) -> f64 {
        let (inf, sup) = self.range(&self.domain);
        inf.abs().max(sup.abs())
    }

    /// Uniform oscillation lower bounds carried by dense-oscillation pieces.
    /// A piece whose two value sets touch somewhere is split into sixteen
    /// parts, each certified separately.
    pub fn osc_lower_uniform(&self) -> Vec<OscCertificate> {
        const SPLIT: usize = 16;
        let mut out = Vec::new();
        for (c, cell) in self.repr.cells.iter().enumerate() {
            let (a, b) = (self.repr.breaks[c], self.repr.breaks[c + 1]);
            let Some(gamma) = cell.dense_separation(a, b) else {
                continue;
            };
            if gamma > 0.0 {
                out.push(OscCertificate {
                    subdomain: Interval { lo: a, hi: b },
                    gamma,
                });
                continue;
            }
            let h = (b - a) / SPLIT as f64;
            for j in 0..SPLIT {
                let lo = a + h * j as f64;
                let hi = if j + 1 == SPLIT {
                    b
                } else {
                    a + h * (j + 1) as f64
                };
                if let Some(g) = cell.dense_separation(lo, hi).filter(|&g| g > 0.0) {
                    out.push(OscCertificate {
                        subdomain: Interval { lo, hi },
                        gamma: g,
                    });
                }
            }
        }
        out
    }

    /// Total variation over `iv`, if the function is pointwise evaluable there
    /// and built from exact pieces.
    pub fn total_variation(&self, iv: &Interval) -> Option<f64> {
        self.repr.total_variation(iv.lo, iv.hi)
    }

    /// The same function on a subinterval of the domain.
    pub fn restrict(&self, iv: &Interval) -> Result<FunctionHandle> {
        if iv.is_degenerate() {
            return Err(Error::Interval {
                lo: iv.lo,
                hi: iv.hi,
                reason: "cannot restrict to a degenerate interval",
            });
        }
        if !self.domain.contains_interval(iv) {
            return Err(Error::OutOfDomain {
                what: "interval",
                value: iv.to_string(),
                domain: self.domain,
            });
        }
        if *iv == self.domain {
            return Ok(self.clone());
        }
        Ok(FunctionHandle::from_piecewise(
            self.repr.restrict(iv.lo, iv.hi),
        ))
    }

    pub fn scale(&self, s: f64) -> FunctionHandle {
        FunctionHandle::from_piecewise(self.repr.map_cells(
            |c| c.scale(s),
            |p| PointValue::combine(Op::Mul, p, PointValue::uniform(s)),
        ))
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.repr.breaks
    }

    fn combine(&self, op: Op, other: &FunctionHandle) -> Result<FunctionHandle> {
        if self.domain != other.domain {
            return Err(Error::DomainMismatch(self.domain, other.domain));
        }
        Ok(FunctionHandle::from_piecewise(
            self.repr.combine(op, &other.repr),
        ))
    }
}

/// Build a handle for `spec` on `domain`.
pub fn build_handle(spec: &FunctionSpec, domain: Interval) -> Result<FunctionHandle> {
    spec.build(domain)
}

/// Pointwise product. The range stays exact whenever each pair of
/// overlapping pieces multiplies to a polynomial, sinusoid or
/// dense-oscillation piece.
pub fn product_handle(f: &FunctionHandle, g: &FunctionHandle) -> Result<FunctionHandle> {
    f.combine(Op::Mul, g)
}

/// Pointwise product whose range is always the product of the factor
/// ranges (interval arithmetic); the handle is marked conservative.
pub fn conservative_product_handle(
    f: &FunctionHandle,
    g: &FunctionHandle,
) -> Result<FunctionHandle> {
    if f.domain != g.domain {
        return Err(Error::DomainMismatch(f.domain, g.domain));
    }
    let (a, b) = (&f.repr, &g.repr);
    let merged = a.combine(Op::Add, b);
    let cells = merged
        .breaks
        .windows(2)
        .map(|w| {
            let m = 0.5 * (w[0] + w[1]);
            Cell::conservative(Op::Mul, &a.cells[a.cell_at(m)], &b.cells[b.cell_at(m)])
        })
        .collect();
    let points = merged
        .breaks
        .iter()
        .map(|&x| PointValue::combine(Op::Mul, a.point_value(x), b.point_value(x)))
        .collect();
    Ok(FunctionHandle::from_piecewise(Piecewise::new(
        merged.breaks,
        cells,
        points,
    )))
}

pub fn sum_handle(f: &FunctionHandle, g: &FunctionHandle) -> Result<FunctionHandle> {
    f.combine(Op::Add, g)
}

/// `sup h - inf h` over `iv`. Degenerate intervals have oscillation 0.
pub fn oscillation(h: &FunctionHandle, iv: &Interval) -> Result<f64> {
    if !h.domain.contains_interval(iv) {
        return Err(Error::OutOfDomain {
            what: "interval",
            value: iv.to_string(),
            domain: h.domain,
        });
    }
    if iv.is_degenerate() {
        return Ok(0.0);
    }
    Ok(osc_raw(h, iv.lo, iv.hi))
}

pub(crate) fn osc_raw(h: &FunctionHandle, lo: f64, hi: f64) -> f64 {
    let (inf, sup) = h.range_raw(lo, hi);
    (sup - inf).max(0.0)
}
