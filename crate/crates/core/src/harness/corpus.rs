use super::{Scenario, StatementId};
use crate::catalog::{Convention, FunctionSpec, Interval, ShiftParams, SpecBody};

fn half(lo: f64, hi: f64) -> Interval {
    Interval::new(lo, hi).expect("valid literal interval")
}

/// Dense indicator on `[0, 0.5]` glued to `x` on `(0.5, 1]`.
pub fn counterexample_f() -> FunctionSpec {
    FunctionSpec::sum(vec![
        FunctionSpec::dense_indicator(Some(half(0.0, 0.5)), 0.0, 1.0),
        FunctionSpec::piecewise(
            vec![0.0, 0.5, 1.0],
            vec![vec![0.0], vec![0.0, 1.0]],
            Convention::Left,
        ),
    ])
}

/// 0 on `[0, 0.5]`, 1 on `(0.5, 1]`.
pub fn counterexample_g() -> FunctionSpec {
    FunctionSpec::step(vec![0.0, 0.5, 1.0], vec![0.0, 1.0], Convention::Left)
}

fn abs_shift(shift: f64) -> FunctionSpec {
    FunctionSpec::new(SpecBody::AbsShift {
        params: ShiftParams { shift },
    })
}

fn sign_shift(shift: f64) -> FunctionSpec {
    FunctionSpec::new(SpecBody::SignShift {
        params: ShiftParams { shift },
    })
}

/// The built-in corpus: every statement at least once on a non-constant
/// pair, plus seeded random batches.
pub fn default_corpus() -> Vec<Scenario> {
    use StatementId::*;
    let x = FunctionSpec::identity;
    let sq = || FunctionSpec::polynomial(vec![0.0, 0.0, 1.0]);
    vec![
        Scenario::new("reduction-identity-pair", Reduction)
            .pair(x(), x())
            .expect(&[1.0 / 3.0]),
        Scenario::new("reduction-sin-against-step", Reduction).pair(
            FunctionSpec::sin(1.0, 6.0, 0.3),
            FunctionSpec::step(vec![0.0, 0.4, 1.0], vec![1.0, -0.5], Convention::Right),
        ),
        Scenario::new("reduction-dense-against-zero", Reduction)
            .pair(
                FunctionSpec::dense_indicator(None, 0.0, 1.0),
                FunctionSpec::constant(0.0),
            )
            .expect(&[0.0]),
        Scenario::new("reduction-random", Reduction)
            .random(8)
            .tol(1e-3),
        Scenario::new("mixed-bound-random", MixedSumBound)
            .random(20)
            .partitions(10),
        Scenario::new("mixed-bound-abs-against-dense", MixedSumBound)
            .pair(
                abs_shift(0.3),
                FunctionSpec::dense_indicator(None, 0.0, 1.0),
            )
            .partitions(50),
        Scenario::new("mixed-bound-constant-g", MixedSumBound)
            .pair(sq(), FunctionSpec::constant(2.0))
            .partitions(20),
        Scenario::new("necessity-gap-random", NecessityGap)
            .random(20)
            .partitions(10),
        Scenario::new("necessity-gap-counterexample", NecessityGap)
            .pair(counterexample_f(), counterexample_g())
            .partitions(50),
        Scenario::new("parts-identity-pair", Parts)
            .pair(x(), x())
            .expect(&[1.0 / 6.0]),
        Scenario::new("parts-sign-against-sin", Parts)
            .pair(sign_shift(0.5), FunctionSpec::sin(2.0, 4.0, 0.0)),
        Scenario::new("parts-random", Parts)
            .random(8)
            .tol(1e-3)
            .constant(-1.5),
        Scenario::new("symmetric-square-against-identity", Symmetric)
            .pair(sq(), x())
            .expect(&[0.25, 0.25]),
        Scenario::new("symmetric-random", Symmetric)
            .random(5)
            .tol(1e-3),
        Scenario::new("mean-value-step", MeanValue)
            .function(FunctionSpec::step(
                vec![0.0, 0.5, 1.0],
                vec![0.0, 1.0],
                Convention::Right,
            ))
            .expect(&[0.5]),
        Scenario::new("mean-value-sin", MeanValue).function(FunctionSpec::sin(2.0, 5.0, 0.0)),
        Scenario::new("mean-value-random", MeanValue).random(20),
        Scenario::new("counterexample-glued", Counterexample)
            .pair(counterexample_f(), counterexample_g())
            .expect(&[0.375, 0.5])
            .partitions(100)
            .tol(1e-5)
            .with_subdomain(half(0.0, 0.5)),
    ]
}
