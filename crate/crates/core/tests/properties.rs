use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use stieltjes::catalog::{product_handle, Convention, FunctionSpec};
use stieltjes::harness::random;
use stieltjes::integrator::{
    decide_riemann_integrable, integrate_rs_reduced, Controls, IndefiniteIntegral,
    IntegrabilityVerdict,
};
use stieltjes::numeric::DEFAULT_SLACK;
use stieltjes::partition::Partition;
use stieltjes::sums::{
    darboux_sums, mixed_sum, mixed_sum_error_bound, riemann_sum, rs_sum, rs_vs_riemann_gap_bound,
};
use stieltjes::{FunctionHandle, Interval};

fn unit() -> Interval {
    Interval::new(0.0, 1.0).unwrap()
}

fn slack(n: usize, scale: f64) -> f64 {
    DEFAULT_SLACK * n as f64 * scale.max(1.0)
}

/// Piecewise polynomial on [0, 1] kept as raw data for the oracle.
#[derive(Debug, Clone)]
struct Pieces {
    breaks: Vec<f64>,
    coeffs: Vec<Vec<f64>>,
    right: bool,
}

impl Pieces {
    fn spec(&self) -> FunctionSpec {
        let conv = if self.right {
            Convention::Right
        } else {
            Convention::Left
        };
        FunctionSpec::piecewise(self.breaks.clone(), self.coeffs.clone(), conv)
    }

    fn handle(&self) -> FunctionHandle {
        self.spec().build(unit()).unwrap()
    }

    /// Exact integral over [0, 1] from antiderivatives, optionally of the
    /// product with a global polynomial `q`.
    fn integral_times(&self, q: &[f64]) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let mut prod = vec![0.0; c.len() + q.len() - 1];
                for (j, a) in c.iter().enumerate() {
                    for (k, b) in q.iter().enumerate() {
                        prod[j + k] += a * b;
                    }
                }
                let (a, b) = (self.breaks[i], self.breaks[i + 1]);
                prod.iter()
                    .enumerate()
                    .map(|(k, c)| {
                        c * (b.powi(k as i32 + 1) - a.powi(k as i32 + 1)) / (k + 1) as f64
                    })
                    .sum::<f64>()
            })
            .sum()
    }

    fn value(&self, x: f64) -> f64 {
        let i = self.breaks[1..]
            .iter()
            .position(|&b| x <= b)
            .unwrap_or(self.coeffs.len() - 1);
        let c = &self.coeffs[i];
        c.iter().rev().fold(0.0, |acc, a| acc * x + a)
    }
}

fn pieces() -> impl Strategy<Value = Pieces> {
    (1usize..=5)
        .prop_flat_map(|k| {
            (
                proptest::collection::btree_set(1u32..999, k - 1),
                proptest::collection::vec(proptest::collection::vec(-2.0f64..2.0, 1..=4), k),
                any::<bool>(),
            )
        })
        .prop_map(|(interior, coeffs, right)| {
            let mut breaks = vec![0.0];
            breaks.extend(interior.into_iter().map(|v| v as f64 / 1000.0));
            breaks.push(1.0);
            let coeffs = coeffs.into_iter().take(breaks.len() - 1).collect();
            Pieces {
                breaks,
                coeffs,
                right,
            }
        })
}

fn seeded() -> impl Strategy<Value = ChaCha8Rng> {
    any::<u64>().prop_map(ChaCha8Rng::seed_from_u64)
}

fn sub_interval() -> impl Strategy<Value = (f64, f64)> {
    (0.0f64..1.0, 0.0f64..1.0).prop_map(|(a, b)| (a.min(b), a.max(b)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn range_encloses_samples_and_shrinks_with_the_interval(
        p in pieces(), (lo, hi) in sub_interval(), t in 0.0f64..1.0, u in 0.0f64..1.0,
    ) {
        let h = p.handle();
        let iv = Interval::new(lo, hi).unwrap();
        let (inf, sup) = h.range(&iv);
        for s in [0.0, 0.25, 0.5, 0.75, 1.0, t] {
            let x = lo + s * (hi - lo);
            let v = h.eval(x);
            prop_assert!(inf <= v && v <= sup, "{v} outside [{inf}, {sup}] at {x}");
            prop_assert!((v - p.value(x)).abs() <= 1e-12 * (1.0 + v.abs()) || p.breaks.contains(&x));
        }
        let (a, b) = (lo + t.min(u) * (hi - lo), lo + t.max(u) * (hi - lo));
        let (i2, s2) = h.range(&Interval::new(a, b).unwrap());
        prop_assert!(inf <= i2 && s2 <= sup);
    }

    #[test]
    fn darboux_sums_bracket_riemann_sums_and_tighten_on_refinement(
        spec_rng in seeded(), cells in 1usize..40,
    ) {
        let mut rng = spec_rng;
        let h = random::function(&mut rng, unit()).build(unit()).unwrap();
        let p = random::partition(&mut rng, unit(), cells);
        let (lo, up) = darboux_sums(&h, &p).unwrap();
        let tp = random::tagged(&mut rng, p.clone());
        let s = riemann_sum(&h, &tp).unwrap().value;
        let eps = slack(p.len(), h.sup_abs());
        prop_assert!(lo - eps <= s && s <= up + eps);
        let k = (cells * 7) % p.len();
        let finer = p.bisect(k).unwrap();
        prop_assert!(finer.refines(&p));
        let (lo2, up2) = darboux_sums(&h, &finer).unwrap();
        prop_assert!(lo2 >= lo - eps && up2 <= up + eps);
    }

    #[test]
    fn mixed_sums_stay_within_the_oscillation_bound(mut rng in seeded()) {
        let f = random::function(&mut rng, unit()).build(unit()).unwrap();
        let g = random::function(&mut rng, unit()).build(unit()).unwrap();
        let fg = product_handle(&f, &g).unwrap();
        let p = random::partition(&mut rng, unit(), 24);
        let dtp = random::double_tagged(&mut rng, p);
        let p = dtp.partition();
        let dev = (mixed_sum(&f, &g, &dtp).unwrap().value - riemann_sum(&fg, &dtp.y_tagged()).unwrap().value).abs();
        let bound = mixed_sum_error_bound(&f, &g, p).unwrap();
        prop_assert!(dev <= bound + slack(p.len(), f.sup_abs() * g.sup_abs()));
    }

    #[test]
    fn rs_sums_stay_within_the_gap_bound(mut rng in seeded(), c in -5.0f64..5.0) {
        let f = random::function(&mut rng, unit()).build(unit()).unwrap();
        let g = random::function(&mut rng, unit()).build(unit()).unwrap();
        let fg = product_handle(&f, &g).unwrap();
        let big = IndefiniteIntegral::new(&g, c, &Controls::with_tol(1e-5)).unwrap();
        let p = random::partition(&mut rng, unit(), 24);
        let tp = random::tagged(&mut rng, p);
        let p = tp.partition();
        let plain = riemann_sum(&fg, &tp).unwrap().value;
        let rs = rs_sum(&f, &big, &tp).unwrap();
        let bound = rs_vs_riemann_gap_bound(&f, &g, p).unwrap() + rs.bound.unwrap();
        prop_assert!((plain - rs.value).abs() <= bound + slack(p.len(), f.sup_abs() * g.sup_abs()));
    }

    #[test]
    fn increments_telescope_and_add(p in pieces(), c in -5.0f64..5.0, n in 1usize..50, (x1, x3) in sub_interval(), t in 0.0f64..1.0) {
        let g = p.handle();
        let big = IndefiniteIntegral::new(&g, c, &Controls::with_tol(1e-4)).unwrap();
        let part = Partition::uniform(unit(), n).unwrap();
        let (mut mid, mut rad) = (0.0, 0.0);
        for (a, b) in part.subintervals() {
            let inc = big.increment(a, b).unwrap();
            mid += inc.mid;
            rad += inc.rad;
        }
        let end = big.eval(1.0).unwrap();
        prop_assert!((c + mid - end.mid).abs() <= rad + end.rad + 1e-12);
        prop_assert!((end.mid - c - p.integral_times(&[1.0])).abs() <= end.rad);

        let x2 = x1 + t * (x3 - x1);
        let whole = big.increment(x1, x3).unwrap();
        let left = big.increment(x1, x2).unwrap();
        let right = big.increment(x2, x3).unwrap();
        prop_assert!((whole.mid - left.mid - right.mid).abs() <= whole.rad + left.rad + right.rad);
    }

    #[test]
    fn integrable_verdicts_enclose_the_exact_integral(p in pieces(), q in proptest::collection::vec(-2.0f64..2.0, 1..=3)) {
        let ctl = Controls::with_tol(1e-3);
        let h = p.handle();
        let v = decide_riemann_integrable(&h, &ctl).unwrap();
        prop_assert!(v.is_integrable());
        let e = v.enclosure().unwrap();
        prop_assert!(e.contains(p.integral_times(&[1.0])), "{e:?}");

        let g = FunctionSpec::polynomial(q.clone()).build(unit()).unwrap();
        let red = integrate_rs_reduced(&h, &g, 0.0, &ctl).unwrap();
        let e = red.enclosure().unwrap();
        prop_assert!(e.contains(p.integral_times(&q)), "{e:?}");
    }

    #[test]
    fn doubling_the_budget_never_widens_the_gap(p in pieces(), budget in 2usize..64) {
        let ctl = Controls { budget, ..Controls::with_tol(1e-12) };
        let h = p.handle();
        let gap = |v: IntegrabilityVerdict| match v {
            IntegrabilityVerdict::Undecided(u) => u.best_gap,
            IntegrabilityVerdict::Integrable(e) => 2.0 * e.rad,
            IntegrabilityVerdict::NotIntegrable(_) => f64::INFINITY,
        };
        let small = gap(decide_riemann_integrable(&h, &ctl).unwrap());
        let large = gap(decide_riemann_integrable(&h, &Controls { budget: 2 * budget, ..ctl }).unwrap());
        prop_assert!(large <= small + slack(2 * budget, h.sup_abs()));
    }

    #[test]
    fn dense_indicators_are_never_integrable(lo in 0.0f64..0.9, w in 0.01f64..0.1, off in -1.0f64..0.0, on in 0.1f64..2.0) {
        let sub = Interval::new(lo, lo + w).unwrap();
        let h = FunctionSpec::dense_indicator(Some(sub), off, on).build(unit()).unwrap();
        match decide_riemann_integrable(&h, &Controls::default()).unwrap() {
            IntegrabilityVerdict::NotIntegrable(n) => {
                prop_assert!((n.gap_floor - (on - off) * w).abs() <= 1e-9);
            }
            v => prop_assert!(false, "decided {}", v.name()),
        }
    }
}
