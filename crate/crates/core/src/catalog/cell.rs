//! The function carried on one open cell of a piecewise representation.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use super::poly::{Extrema, Poly};

/// Which of the two dense value sets of a dense-oscillation cell a tag
/// point is taken from. Ignored by every other cell kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TagKind {
    On,
    Off,
}

/// A point at which a cell attains (or approaches) an extremum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Witness {
    pub x: f64,
    pub kind: Option<TagKind>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellRange {
    pub inf: f64,
    pub sup: f64,
    pub argmin: Witness,
    pub argmax: Witness,
}

impl CellRange {
    fn from_extrema(e: Extrema, kind: Option<TagKind>) -> Self {
        CellRange {
            inf: e.min,
            sup: e.max,
            argmin: Witness { x: e.argmin, kind },
            argmax: Witness { x: e.argmax, kind },
        }
    }

    pub(crate) fn merge(&mut self, other: &CellRange) {
        if other.inf < self.inf {
            self.inf = other.inf;
            self.argmin = other.argmin;
        }
        if other.sup > self.sup {
            self.sup = other.sup;
            self.argmax = other.argmax;
        }
    }
}

/// `amplitude * sin(frequency * x + phase) + offset`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sinusoid {
    pub amplitude: f64,
    pub frequency: f64,
    pub phase: f64,
    pub offset: f64,
}

impl Sinusoid {
    pub fn eval(&self, x: f64) -> f64 {
        self.amplitude * (self.frequency * x + self.phase).sin() + self.offset
    }

    /// Points in `(lo, hi)` where the phase crosses ±π/2 (mod 2π), with the
    /// value of sin there.
    fn crests(&self, lo: f64, hi: f64) -> Vec<(f64, f64)> {
        let w = self.frequency;
        if w == 0.0 || lo >= hi {
            return Vec::new();
        }
        let (t0, t1) = {
            let a = w * lo + self.phase;
            let b = w * hi + self.phase;
            (a.min(b), a.max(b))
        };
        let mut out = Vec::new();
        for (base, s) in [(FRAC_PI_2, 1.0), (-FRAC_PI_2, -1.0)] {
            let mut k = ((t0 - base) / (2.0 * PI)).ceil();
            loop {
                let t = base + 2.0 * PI * k;
                if t > t1 {
                    break;
                }
                let x = ((t - self.phase) / w).clamp(lo, hi);
                out.push((x, s));
                k += 1.0;
                // Past a handful of periods the extrema are already known.
                if out.len() > 4 {
                    break;
                }
            }
        }
        out
    }

    pub fn extrema(&self, lo: f64, hi: f64) -> Extrema {
        let mut e = Extrema::at(lo, self.eval(lo));
        e.include(hi, self.eval(hi));
        for (x, s) in self.crests(lo, hi) {
            e.include(x, self.amplitude * s + self.offset);
        }
        e
    }

    pub fn total_variation(&self, lo: f64, hi: f64) -> f64 {
        let w = self.frequency;
        if lo >= hi || w == 0.0 || self.amplitude == 0.0 {
            return 0.0;
        }
        let a = w * lo + self.phase;
        let b = w * hi + self.phase;
        let (t0, t1) = (a.min(b), a.max(b));
        let k0 = ((t0 - FRAC_PI_2) / PI).ceil();
        let k1 = ((t1 - FRAC_PI_2) / PI).floor();
        if k1 < k0 {
            return (self.eval(hi) - self.eval(lo)).abs();
        }
        // Between consecutive turning points the variation is exactly 2|A|.
        let turn = |k: f64| ((FRAC_PI_2 + PI * k - self.phase) / w).clamp(lo, hi);
        let (first, last) = if w > 0.0 {
            (turn(k0), turn(k1))
        } else {
            (turn(k1), turn(k0))
        };
        (self.eval(first) - self.eval(lo)).abs()
            + 2.0 * self.amplitude.abs() * (k1 - k0)
            + (self.eval(hi) - self.eval(last)).abs()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Add,
    Mul,
}

impl Op {
    pub fn apply(self, a: f64, b: f64) -> f64 {
        match self {
            Op::Add => a + b,
            Op::Mul => a * b,
        }
    }

    fn poly(self, a: &Poly, b: &Poly) -> Poly {
        match self {
            Op::Add => a + b,
            Op::Mul => a * b,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Poly(Poly),
    Sin(Sinusoid),
    /// Takes the values of `on` on one dense subset of the cell and the
    /// values of `off` on its dense complement.
    Dense {
        on: Poly,
        off: Poly,
    },
    /// Combination without a closed-form range; handled by interval
    /// arithmetic, so its range is an over-approximation.
    Composite(Box<(Op, Cell, Cell)>),
}

impl Cell {
    pub fn constant(c: f64) -> Self {
        Cell::Poly(Poly::constant(c))
    }

    pub fn dense(on: Poly, off: Poly) -> Self {
        if on == off {
            Cell::Poly(on)
        } else {
            Cell::Dense { on, off }
        }
    }

    pub fn eval(&self, x: f64, kind: TagKind) -> f64 {
        match self {
            Cell::Poly(p) => p.eval(x),
            Cell::Sin(s) => s.eval(x),
            Cell::Dense { on, off } => match kind {
                TagKind::On => on.eval(x),
                TagKind::Off => off.eval(x),
            },
            Cell::Composite(c) => {
                let (op, a, b) = &**c;
                op.apply(a.eval(x, kind), b.eval(x, kind))
            }
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, Cell::Composite(_))
    }

    /// Whether the value at every point is determined without a tag kind.
    pub fn is_pointwise(&self) -> bool {
        match self {
            Cell::Poly(_) | Cell::Sin(_) => true,
            Cell::Dense { .. } => false,
            Cell::Composite(c) => c.1.is_pointwise() && c.2.is_pointwise(),
        }
    }

    /// Range over the closed interval `[lo, hi]`. For continuous cells the
    /// inf/sup over the open interval coincide with these.
    pub fn range(&self, lo: f64, hi: f64) -> CellRange {
        match self {
            Cell::Poly(p) => CellRange::from_extrema(p.extrema(lo, hi), None),
            Cell::Sin(s) => CellRange::from_extrema(s.extrema(lo, hi), None),
            Cell::Dense { on, off } => {
                let mut r = CellRange::from_extrema(on.extrema(lo, hi), Some(TagKind::On));
                r.merge(&CellRange::from_extrema(
                    off.extrema(lo, hi),
                    Some(TagKind::Off),
                ));
                r
            }
            Cell::Composite(c) => {
                let (op, a, b) = &**c;
                let ra = a.range(lo, hi);
                let rb = b.range(lo, hi);
                let (inf, sup) = match op {
                    Op::Add => (ra.inf + rb.inf, ra.sup + rb.sup),
                    Op::Mul => {
                        let p = [
                            ra.inf * rb.inf,
                            ra.inf * rb.sup,
                            ra.sup * rb.inf,
                            ra.sup * rb.sup,
                        ];
                        (
                            p.iter().copied().fold(f64::INFINITY, f64::min),
                            p.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                        )
                    }
                };
                // Witnesses are best effort: the extremal bound need not be
                // attained.
                let kind = if self.is_pointwise() {
                    None
                } else {
                    Some(TagKind::Off)
                };
                let candidates = [ra.argmin, ra.argmax, rb.argmin, rb.argmax]
                    .map(|w| w.x)
                    .into_iter()
                    .chain([lo, 0.5 * (lo + hi), hi]);
                let mut best_lo = (f64::INFINITY, lo);
                let mut best_hi = (f64::NEG_INFINITY, lo);
                for x in candidates {
                    let v = self.eval(x, kind.unwrap_or(TagKind::Off));
                    if v < best_lo.0 {
                        best_lo = (v, x);
                    }
                    if v > best_hi.0 {
                        best_hi = (v, x);
                    }
                }
                CellRange {
                    inf,
                    sup,
                    argmin: Witness { x: best_lo.1, kind },
                    argmax: Witness { x: best_hi.1, kind },
                }
            }
        }
    }

    /// Total variation over `[lo, hi]` for pointwise cells with exact
    /// structure.
    pub fn total_variation(&self, lo: f64, hi: f64) -> Option<f64> {
        match self {
            Cell::Poly(p) => Some(p.total_variation(lo, hi)),
            Cell::Sin(s) => Some(s.total_variation(lo, hi)),
            _ => None,
        }
    }

    /// Lower bound on `|on - off|` over `[lo, hi]` for dense cells.
    pub fn dense_separation(&self, lo: f64, hi: f64) -> Option<f64> {
        match self {
            Cell::Dense { on, off } => {
                let e = (on - off).extrema(lo, hi);
                Some(if e.min > 0.0 {
                    e.min
                } else if e.max < 0.0 {
                    -e.max
                } else {
                    0.0
                })
            }
            _ => None,
        }
    }

    pub fn scale(&self, s: f64) -> Cell {
        Cell::combine(Op::Mul, self, &Cell::constant(s))
    }

    pub fn combine(op: Op, a: &Cell, b: &Cell) -> Cell {
        use Cell::*;
        if op == Op::Mul {
            let zero = |c: &Cell| matches!(c, Poly(p) if p.is_zero());
            if zero(a) || zero(b) {
                return Cell::constant(0.0);
            }
        }
        match (a, b) {
            (Poly(p), Poly(q)) => Poly(op.poly(p, q)),
            (Poly(p), Dense { on, off }) | (Dense { on, off }, Poly(p)) => {
                Cell::dense(op.poly(on, p), op.poly(off, p))
            }
            (Dense { on: a1, off: a0 }, Dense { on: b1, off: b0 }) => {
                Cell::dense(op.poly(a1, b1), op.poly(a0, b0))
            }
            (Sin(s), Poly(p)) | (Poly(p), Sin(s)) if p.as_constant().is_some() => {
                let c = p.as_constant().unwrap_or(0.0);
                let mut s = *s;
                match op {
                    Op::Add => s.offset += c,
                    Op::Mul => {
                        s.amplitude *= c;
                        s.offset *= c;
                    }
                }
                Sin(s)
            }
            _ => Cell::conservative(op, a, b),
        }
    }

    pub fn conservative(op: Op, a: &Cell, b: &Cell) -> Cell {
        Cell::Composite(Box::new((op, a.clone(), b.clone())))
    }
}
