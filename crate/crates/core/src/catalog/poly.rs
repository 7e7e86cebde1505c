//! Dense univariate polynomials in the monomial basis with exact extrema.
//!
//! Extrema on a closed interval are found among the endpoints and the real
//! roots of the derivative. Roots are isolated recursively: the turning
//! points of `p` split the interval into monotone segments, and each
//! segment with a sign change is bisected down to adjacent floats.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

/// Coefficients in ascending powers of `x`, trailing zeros trimmed.
///
/// The real stationary points are computed once, on first use, over a
/// Cauchy bound containing every root of the derivative; range queries then
/// only look up the stationary points inside the query interval.
#[derive(Clone)]
pub struct Poly {
    coeffs: Vec<f64>,
    stationary: OnceLock<Vec<f64>>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Poly").field(&self.coeffs).finish()
    }
}

/// Extremal values of a function over a closed interval, with a point at
/// which each is attained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extrema {
    pub min: f64,
    pub argmin: f64,
    pub max: f64,
    pub argmax: f64,
}

impl Extrema {
    pub fn at(x: f64, v: f64) -> Self {
        Extrema {
            min: v,
            argmin: x,
            max: v,
            argmax: x,
        }
    }

    pub fn include(&mut self, x: f64, v: f64) {
        if v < self.min {
            self.min = v;
            self.argmin = x;
        }
        if v > self.max {
            self.max = v;
            self.argmax = x;
        }
    }
}

impl Poly {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Poly {
            coeffs,
            stationary: OnceLock::new(),
        }
    }

    pub fn constant(c: f64) -> Self {
        Poly::new(vec![c])
    }

    pub fn zero() -> Self {
        Poly::new(Vec::new())
    }

    pub fn identity() -> Self {
        Poly::new(vec![0.0, 1.0])
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Degree, with the zero polynomial reported as 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// The constant value if the polynomial has degree 0.
    pub fn as_constant(&self) -> Option<f64> {
        match self.coeffs.len() {
            0 => Some(0.0),
            1 => Some(self.coeffs[0]),
            _ => None,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    pub fn scale(&self, s: f64) -> Poly {
        Poly::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// Sorted real roots of the derivative (plus the derivative's own
    /// turning points, which covers roots of even multiplicity).
    pub fn stationary_points(&self) -> &[f64] {
        self.stationary.get_or_init(|| {
            if self.degree() < 2 {
                return Vec::new();
            }
            let d = self.derivative();
            let lead = d.coeffs[d.coeffs.len() - 1].abs();
            let bound = 1.0
                + d.coeffs[..d.coeffs.len() - 1]
                    .iter()
                    .map(|c| c.abs() / lead)
                    .fold(0.0, f64::max);
            let mut pts = roots_and_turning_points(&d, -bound, bound);
            pts.sort_by(f64::total_cmp);
            pts.dedup();
            pts
        })
    }

    fn stationary_in(&self, lo: f64, hi: f64) -> &[f64] {
        let s = self.stationary_points();
        let a = s.partition_point(|&x| x <= lo);
        let b = s.partition_point(|&x| x < hi);
        &s[a..b.max(a)]
    }

    /// Exact extrema on `[lo, hi]` (lo ≤ hi).
    pub fn extrema(&self, lo: f64, hi: f64) -> Extrema {
        let mut ext = Extrema::at(lo, self.eval(lo));
        ext.include(hi, self.eval(hi));
        if lo < hi {
            for &x in self.stationary_in(lo, hi) {
                ext.include(x, self.eval(x));
            }
        }
        ext
    }

    /// Total variation on `[lo, hi]`.
    pub fn total_variation(&self, lo: f64, hi: f64) -> f64 {
        if lo >= hi || self.degree() == 0 {
            return 0.0;
        }
        let mut prev = self.eval(lo);
        let mut tv = 0.0;
        for &x in self.stationary_in(lo, hi).iter().chain([hi].iter()) {
            let v = self.eval(x);
            tv += (v - prev).abs();
            prev = v;
        }
        tv
    }
}

/// Real roots of `p` in the open interval `(lo, hi)`, together with the
/// turning points of `p` there. A root of even multiplicity shows up as a
/// turning point, so the returned set contains every real root.
pub(crate) fn roots_and_turning_points(p: &Poly, lo: f64, hi: f64) -> Vec<f64> {
    let mut out = Vec::new();
    match p.degree() {
        0 => {}
        1 => {
            let c = p.coeffs();
            let r = -c[0] / c[1];
            if r > lo && r < hi {
                out.push(r);
            }
        }
        _ => {
            let mut turning = roots_and_turning_points(&p.derivative(), lo, hi);
            turning.sort_by(f64::total_cmp);
            turning.dedup();
            let mut knots = Vec::with_capacity(turning.len() + 2);
            knots.push(lo);
            knots.extend(turning.iter().copied());
            knots.push(hi);
            for w in knots.windows(2) {
                if let Some(r) = bisect_root(p, w[0], w[1]) {
                    if r > lo && r < hi {
                        out.push(r);
                    }
                }
            }
            out.extend(turning);
        }
    }
    out
}

/// Root of a function monotone on `[a, b]`, if its sign changes there.
fn bisect_root(p: &Poly, mut a: f64, mut b: f64) -> Option<f64> {
    let mut fa = p.eval(a);
    let fb = p.eval(b);
    if fa == 0.0 {
        return Some(a);
    }
    if fb == 0.0 {
        return Some(b);
    }
    if fa.signum() == fb.signum() {
        return None;
    }
    loop {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = p.eval(m);
        if fm == 0.0 {
            return Some(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Some(if p.eval(a).abs() <= p.eval(b).abs() {
        a
    } else {
        b
    })
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new(
            (0..n)
                .map(|k| {
                    self.coeffs.get(k).copied().unwrap_or(0.0)
                        + rhs.coeffs.get(k).copied().unwrap_or(0.0)
                })
                .collect(),
        )
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(-1.0)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![0.0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trims_trailing_zeros() {
        let p = Poly::new(vec![1.0, 2.0, 0.0, 0.0]);
        assert_eq!(p.degree(), 1);
        assert!(Poly::new(vec![0.0]).is_zero());
    }

    #[test]
    fn square_has_interior_minimum() {
        // (x - 0.3)^2 = 0.09 - 0.6x + x^2
        let p = Poly::new(vec![0.09, -0.6, 1.0]);
        let e = p.extrema(0.0, 1.0);
        assert!((e.argmin - 0.3).abs() < 1e-12);
        assert!(e.min.abs() < 1e-15);
        assert_eq!(e.argmax, 1.0);
        assert!((e.max - 0.49).abs() < 1e-15);
    }

    #[test]
    fn cubic_with_double_root_in_derivative() {
        // x^3 has p' = 3x^2 with a double root at 0; monotone on [-1, 1].
        let p = Poly::new(vec![0.0, 0.0, 0.0, 1.0]);
        let e = p.extrema(-1.0, 1.0);
        assert_eq!((e.min, e.max), (-1.0, 1.0));
    }

    #[test]
    fn cubic_local_extrema() {
        // x^3 - x on [-1, 1]: extrema at ±1/sqrt(3), value ∓2/(3 sqrt 3).
        let p = Poly::new(vec![0.0, -1.0, 0.0, 1.0]);
        let e = p.extrema(-1.0, 1.0);
        let v = 2.0 / (3.0 * 3f64.sqrt());
        assert!((e.max - v).abs() < 1e-15);
        assert!((e.min + v).abs() < 1e-15);
    }

    #[test]
    fn arithmetic() {
        let x = Poly::identity();
        let sq = &x * &x;
        assert_eq!(sq.coeffs(), &[0.0, 0.0, 1.0]);
        assert!((&sq - &sq).is_zero());
        assert_eq!(sq.derivative().coeffs(), &[0.0, 2.0]);
    }

    #[test]
    fn total_variation_counts_turns() {
        let p = Poly::new(vec![0.09, -0.6, 1.0]);
        // 0.09 down to 0, then up to 0.49
        assert!((p.total_variation(0.0, 1.0) - 0.58).abs() < 1e-14);
    }
}
