use std::collections::HashMap;
use std::sync::RwLock;

use super::refine::Refiner;
use super::{Controls, Enclosure, Provenance};
use crate::catalog::{FunctionHandle, Interval};
use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;

/// `G(x) = c + ∫_a^x g(y) dy`, evaluated with certified Darboux enclosures.
///
/// Construction refines a working partition of the domain until the Darboux
/// gap of `g` is at most `2·tol` (or the budget runs out), then stores prefix
/// lower and upper sums. Any increment `∫_{x1}^{x2} g` is enclosed by the
/// Darboux sums of the working partition refined by `x1` and `x2`, so the
/// increment radii over any partition sum to at most half the working gap.
pub struct IndefiniteIntegral {
    g: FunctionHandle,
    c: f64,
    breaks: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    gap: f64,
    slack: f64,
    cache: RwLock<HashMap<u64, Enclosure>>,
}

impl std::fmt::Debug for IndefiniteIntegral {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("IndefiniteIntegral")
            .field("domain", &self.g.domain())
            .field("c", &self.c)
            .field("cells", &(self.breaks.len() - 1))
            .field("gap", &self.gap)
            .finish()
    }
}

impl IndefiniteIntegral {
    pub fn new(g: &FunctionHandle, c: f64, controls: &Controls) -> Result<Self> {
        controls.validate()?;
        if !c.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "constant c = {c} is not finite"
            )));
        }
        let floor: f64 = g.osc_lower_uniform().iter().map(|c| c.gap_floor()).sum();
        if floor > 0.0 {
            return Err(Error::NotIntegrable(format!(
                "the density has Darboux gap at least {floor} on every partition"
            )));
        }
        let d = g.domain();
        let mut refiner = Refiner::new(&[d.lo(), d.hi()], |lo, hi| {
            let (inf, sup) = g.range_raw(lo, hi);
            ((inf, sup), (sup - inf) * (hi - lo))
        });
        refiner.run(2.0 * controls.tol, controls.budget);
        let cells = refiner.cells();
        let mut breaks = Vec::with_capacity(cells.len() + 1);
        let mut lower = Vec::with_capacity(cells.len() + 1);
        let mut upper = Vec::with_capacity(cells.len() + 1);
        let (mut lo_acc, mut up_acc, mut gap_acc) = (
            CompensatedSum::new(),
            CompensatedSum::new(),
            CompensatedSum::new(),
        );
        breaks.push(d.lo());
        lower.push(0.0);
        upper.push(0.0);
        for &(a, b, &(inf, sup)) in &cells {
            let w = b - a;
            lo_acc.add(inf * w);
            up_acc.add(sup * w);
            gap_acc.add((sup - inf) * w);
            breaks.push(b);
            lower.push(lo_acc.value());
            upper.push(up_acc.value());
        }
        Ok(IndefiniteIntegral {
            g: g.clone(),
            c,
            breaks,
            lower,
            upper,
            gap: gap_acc.value(),
            slack: controls.slack,
            cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn density(&self) -> &FunctionHandle {
        &self.g
    }

    pub fn constant(&self) -> f64 {
        self.c
    }

    pub fn domain(&self) -> Interval {
        self.g.domain()
    }

    /// Darboux gap of the density over the working partition.
    pub fn gap(&self) -> f64 {
        self.gap
    }

    pub fn working_cells(&self) -> usize {
        self.breaks.len() - 1
    }

    fn check(&self, x: f64) -> Result<()> {
        if self.domain().contains(x) {
            Ok(())
        } else {
            Err(Error::OutOfDomain {
                what: "point",
                value: x.to_string(),
                domain: self.domain(),
            })
        }
    }

    /// Certified enclosure of `∫_{x1}^{x2} g`, `x1 <= x2`.
    pub fn increment(&self, x1: f64, x2: f64) -> Result<Enclosure> {
        self.check(x1)?;
        self.check(x2)?;
        if x1 > x2 {
            return Err(Error::InvalidArgument(format!(
                "increment bounds out of order: {x1} > {x2}"
            )));
        }
        Ok(self.increment_raw(x1, x2))
    }

    pub(crate) fn increment_raw(&self, x1: f64, x2: f64) -> Enclosure {
        if x1 == x2 {
            return Enclosure::new(0.0, 0.0, Provenance::DarbouxGap);
        }
        let j = self.breaks.partition_point(|&b| b < x1);
        let k = self.breaks.partition_point(|&b| b <= x2) - 1;
        let partial = |a: f64, b: f64| {
            let (inf, sup) = self.g.range_raw(a, b);
            (inf * (b - a), sup * (b - a))
        };
        let (lo, up, scale) = if j > k {
            let (l, u) = partial(x1, x2);
            (l, u, l.abs().max(u.abs()))
        } else {
            let mut lo = self.lower[k] - self.lower[j];
            let mut up = self.upper[k] - self.upper[j];
            let scale = [self.lower[k], self.lower[j], self.upper[k], self.upper[j]]
                .iter()
                .fold(0.0f64, |m, v| m.max(v.abs()));
            if x1 < self.breaks[j] {
                let (l, u) = partial(x1, self.breaks[j]);
                lo += l;
                up += u;
            }
            if self.breaks[k] < x2 {
                let (l, u) = partial(self.breaks[k], x2);
                lo += l;
                up += u;
            }
            (lo, up, scale)
        };
        Enclosure::new(
            0.5 * (lo + up),
            0.5 * (up - lo) + self.slack * (1.0 + scale),
            Provenance::DarbouxGap,
        )
    }

    /// Certified enclosure of `G(x)`; `G(a) = (c, 0)` exactly.
    pub fn eval(&self, x: f64) -> Result<Enclosure> {
        self.check(x)?;
        if x == self.domain().lo() {
            return Ok(Enclosure::new(self.c, 0.0, Provenance::DarbouxGap));
        }
        let key = x.to_bits();
        if let Some(e) = self
            .cache
            .read()
            .expect("indefinite-integral cache poisoned")
            .get(&key)
        {
            return Ok(*e);
        }
        let inc = self.increment_raw(self.domain().lo(), x);
        let e = Enclosure::new(
            self.c + inc.mid,
            inc.rad + self.slack * self.c.abs(),
            Provenance::DarbouxGap,
        );
        self.cache
            .write()
            .expect("indefinite-integral cache poisoned")
            .insert(key, e);
        Ok(e)
    }
}

pub fn eval_indefinite(g: &IndefiniteIntegral, x: f64) -> Result<Enclosure> {
    g.eval(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctl(tol: f64) -> Controls {
        Controls {
            tol,
            ..Controls::default()
        }
    }

    #[test]
    fn constant_density() {
        let g = FunctionHandle::constant(Interval::unit(), 1.0);
        let big = IndefiniteIntegral::new(&g, 5.0, &ctl(1e-6)).unwrap();
        let e = big.eval(0.7).unwrap();
        assert!((e.mid - 5.7).abs() <= 1e-12);
        assert!(e.rad <= 1e-6);
        assert_eq!(
            big.eval(0.0).unwrap(),
            Enclosure::new(5.0, 0.0, Provenance::DarbouxGap)
        );
        assert!(big.eval(1.5).is_err());
    }

    #[test]
    fn identity_density() {
        let g = FunctionHandle::identity(Interval::unit());
        let big = IndefiniteIntegral::new(&g, 0.0, &ctl(1e-4)).unwrap();
        let e = big.eval(1.0).unwrap();
        assert!(e.contains(0.5));
        assert!(e.rad <= 1e-4 + 1e-9);
        // cached value is identical
        assert_eq!(big.eval(1.0).unwrap(), e);
    }

    #[test]
    fn increments_are_additive() {
        let g = FunctionHandle::polynomial(Interval::unit(), vec![1.0, -3.0, 2.0]);
        let big = IndefiniteIntegral::new(&g, 2.0, &ctl(1e-4)).unwrap();
        for (x1, x2) in [(0.1, 0.35), (0.0, 0.77), (0.3, 0.30001), (0.5, 1.0)] {
            let a = big.eval(x1).unwrap();
            let b = big.eval(x2).unwrap();
            let inc = big.increment(x1, x2).unwrap();
            assert!((b.mid - a.mid - inc.mid).abs() <= a.rad + b.rad + inc.rad);
            // exact antiderivative x - 1.5x² + (2/3)x³
            let anti = |x: f64| x - 1.5 * x * x + 2.0 / 3.0 * x * x * x;
            assert!(inc.contains(anti(x2) - anti(x1)));
        }
        assert!(big.increment(0.5, 0.4).is_err());
    }

    #[test]
    fn dense_density_is_rejected() {
        let g = crate::catalog::FunctionSpec::dense_indicator(None, 0.0, 1.0)
            .build(Interval::unit())
            .unwrap();
        assert!(matches!(
            IndefiniteIntegral::new(&g, 0.0, &ctl(1e-3)),
            Err(Error::NotIntegrable(_))
        ));
    }
}
