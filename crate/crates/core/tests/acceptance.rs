//! Acceptance suite. Runs without the libtest harness so that the
//! per-criterion lines are always printed; exits nonzero if any fails.

use std::process::{Command, ExitCode};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stieltjes::catalog::{product_handle, Convention, FunctionSpec, ShiftParams, SpecBody};
use stieltjes::harness::{counterexample_f, counterexample_g, random};
use stieltjes::integrator::{
    decide_riemann_integrable, integrate_g_df_direct, integrate_rs_direct, integrate_rs_reduced,
    mean_value_points, parts_boundary, symmetric_rs_integrate, Controls, Enclosure,
    IndefiniteIntegral, IntegrabilityVerdict, Side,
};
use stieltjes::numeric::DEFAULT_SLACK;
use stieltjes::partition::{tag, Partition, TagStrategy};
use stieltjes::sums::{mixed_sum, mixed_sum_error_bound, riemann_sum, rs_sum};
use stieltjes::{FunctionHandle, Interval};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn unit() -> Interval {
    Interval::new(0.0, 1.0).unwrap()
}

fn rng(k: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5eed_0000 + k)
}

fn poly_pair(r: &mut ChaCha8Rng) -> (FunctionHandle, FunctionHandle) {
    let f = random::piecewise_polynomial(r, unit())
        .build(unit())
        .unwrap();
    let g = random::piecewise_polynomial(r, unit())
        .build(unit())
        .unwrap();
    (f, g)
}

fn pair(r: &mut ChaCha8Rng) -> (FunctionHandle, FunctionHandle) {
    let f = random::function(r, unit()).build(unit()).unwrap();
    let g = random::function(r, unit()).build(unit()).unwrap();
    (f, g)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Display>(x: E) -> String {
    x.to_string()
}

fn agreement_of_routes() -> Outcome {
    let ctl = Controls::with_tol(1e-8);
    let start = Instant::now();
    let mut r = rng(1);
    let (mut worst_rad, mut certified) = (0.0f64, 0usize);
    for k in 0..50 {
        let (f, g) = poly_pair(&mut r);
        let red = integrate_rs_reduced(&f, &g, 0.0, &ctl).map_err(e)?;
        let red_enc = red
            .enclosure()
            .ok_or_else(|| format!("pair {k}: f·g not integrable"))?;
        let big = IndefiniteIntegral::new(&g, 0.0, &ctl.halved()).map_err(e)?;
        let dir = integrate_rs_direct(&f, &big, &ctl).map_err(e)?;
        let d = dir.enclosure();
        ensure((red_enc.mid - d.mid).abs() <= red_enc.rad + d.rad, || {
            format!("pair {k}: reduced {red_enc:?} vs direct {d:?}")
        })?;
        worst_rad = worst_rad.max(red_enc.rad).max(d.rad);
        certified += usize::from(red.is_integrable() && dir.is_certified());
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 10.0, || format!("took {secs:.2}s"))?;
    Ok(format!(
        "50 pairs agree within radii in {secs:.2}s; {certified}/50 certified at tol 1e-8, worst radius {worst_rad:.2e}"
    ))
}

fn mixed_sum_bound() -> Outcome {
    let mut r = rng(2);
    let mut worst = f64::NEG_INFINITY;
    for k in 0..1000 {
        let (f, g) = pair(&mut r);
        let fg = product_handle(&f, &g).map_err(e)?;
        let p = random::partition(&mut r, unit(), 32);
        let dtp = random::double_tagged(&mut r, p);
        let p = dtp.partition();
        let dev = (mixed_sum(&f, &g, &dtp).map_err(e)?.value
            - riemann_sum(&fg, &dtp.y_tagged()).map_err(e)?.value)
            .abs();
        let bound = mixed_sum_error_bound(&f, &g, p).map_err(e)?;
        let scale = f.sup_abs() * g.sup_abs();
        let slack = DEFAULT_SLACK * p.len() as f64 * scale.max(1.0);
        ensure(dev <= bound + slack, || {
            format!("triple {k}: deviation {dev} exceeds {bound}")
        })?;
        worst = worst.max(dev - bound);
    }
    let f = FunctionSpec::identity().build(unit()).map_err(e)?;
    let g = FunctionSpec::identity().build(unit()).map_err(e)?;
    for n in [1usize, 2, 3, 4, 8, 10, 16, 100, 1000] {
        let p = Partition::uniform(unit(), n).map_err(e)?;
        let b = mixed_sum_error_bound(&f, &g, &p).map_err(e)?;
        ensure(
            (b - 1.0 / n as f64).abs() <= DEFAULT_SLACK * n as f64,
            || format!("n = {n}: bound {b} != 1/n"),
        )?;
    }
    Ok(format!(
        "1000 triples within bound (max excess {worst:.2e}); identity bound is 1/n for 9 uniform meshes"
    ))
}

fn glued_counterexample() -> Outcome {
    let half = Interval::new(0.0, 0.5).unwrap();
    let f = counterexample_f().build(unit()).map_err(e)?;
    let g = counterexample_g().build(unit()).map_err(e)?;
    let floor =
        match decide_riemann_integrable(&f.restrict(&half).map_err(e)?, &Controls::default())
            .map_err(e)?
        {
            IntegrabilityVerdict::NotIntegrable(n) => n.gap_floor,
            v => return Err(format!("f on [0, 0.5] decided {}", v.name())),
        };
    ensure((floor - 0.5).abs() <= DEFAULT_SLACK, || {
        format!("gap floor {floor}")
    })?;
    let ctl = Controls {
        budget: 1 << 18,
        ..Controls::with_tol(1e-6)
    };
    let enc = match integrate_rs_reduced(&f, &g, 0.0, &ctl).map_err(e)? {
        IntegrabilityVerdict::Integrable(enc) => enc,
        v => return Err(format!("∫f dG decided {}", v.name())),
    };
    ensure((enc.mid - 0.375).abs() <= 1e-6, || {
        format!("∫f dG = {enc:?}")
    })?;
    Ok(format!(
        "gap floor {floor}; ∫f dG = {:.12} ± {:.1e}",
        enc.mid, enc.rad
    ))
}

fn necessity_direction() -> Outcome {
    let f = FunctionSpec::dense_indicator(None, 0.0, 1.0)
        .build(unit())
        .map_err(e)?;
    let g = FunctionSpec::constant(1.0).build(unit()).map_err(e)?;
    let ctl = Controls::default();
    let v = integrate_rs_reduced(&f, &g, 0.0, &ctl).map_err(e)?;
    ensure(matches!(v, IntegrabilityVerdict::NotIntegrable(_)), || {
        format!("reduced decided {}", v.name())
    })?;
    let big = IndefiniteIntegral::new(&g, 0.0, &ctl).map_err(e)?;
    let mut worst = 0.0f64;
    for n in [1usize, 2, 5, 16, 100, 1000, 4096] {
        let p = Partition::uniform(unit(), n).map_err(e)?;
        let hi = rs_sum(
            &f,
            &big,
            &tag(&p, TagStrategy::SupSeeking, Some(&f)).map_err(e)?,
        )
        .map_err(e)?;
        let lo = rs_sum(
            &f,
            &big,
            &tag(&p, TagStrategy::InfSeeking, Some(&f)).map_err(e)?,
        )
        .map_err(e)?;
        let diff = hi.value - lo.value;
        let tol = hi.bound.unwrap_or(0.0) + lo.bound.unwrap_or(0.0);
        ensure((diff - 1.0).abs() <= tol, || {
            format!("n = {n}: spread {diff}")
        })?;
        worst = worst.max((diff - 1.0).abs());
    }
    Ok(format!(
        "reduced is not-integrable; sup/inf spread is 1 (max deviation {worst:.1e}) on 7 uniform meshes"
    ))
}

fn by_parts() -> Outcome {
    let ctl = Controls::with_tol(1e-8);
    let half = ctl.halved();
    let mut r = rng(5);
    let (mut worst, mut certified) = (0.0f64, 0usize);
    for k in 0..50 {
        let (f, g) = pair(&mut r);
        let c = r.random_range(-2.0..2.0);
        let f_dg = integrate_rs_reduced(&f, &g, c, &half).map_err(e)?;
        let big = IndefiniteIntegral::new(&g, c, &half).map_err(e)?;
        let g_df = integrate_g_df_direct(&f, &big, &ctl).map_err(e)?;
        let bd = parts_boundary(&f, &big, ctl.slack).map_err(e)?;
        let a = f_dg
            .enclosure()
            .ok_or_else(|| format!("pair {k}: f·g not integrable"))?;
        let b = g_df.enclosure();
        let res = (a.mid + b.mid - bd.mid).abs();
        let rad = a.rad + b.rad + bd.rad;
        ensure(res <= rad, || {
            format!("pair {k}: residual {res} exceeds {rad}")
        })?;
        worst = worst.max(rad);
        certified += usize::from(f_dg.is_integrable() && g_df.is_certified());
    }
    Ok(format!(
        "50 pairs satisfy the identity within radii; {certified}/50 certified at tol 1e-8, worst combined radius {worst:.2e}"
    ))
}

fn symmetric() -> Outcome {
    let alpha = FunctionSpec::polynomial(vec![0.0, 0.0, 1.0])
        .build(unit())
        .map_err(e)?;
    let density = FunctionSpec::identity().build(unit()).map_err(e)?;
    let s = symmetric_rs_integrate(&alpha, &density, 0.0, Side::Beta, &Controls::with_tol(1e-5))
        .map_err(e)?;
    let (a, b) = (s.alpha_d_beta.enclosure(), s.beta_d_alpha.enclosure());
    ensure(a.contains(0.25), || format!("∫α dβ = {a:?}"))?;
    ensure(b.contains(0.25), || format!("∫β dα = {b:?}"))?;
    ensure(s.boundary.contains(0.5), || {
        format!("boundary {:?}", s.boundary)
    })?;
    ensure(
        (a.mid + b.mid - 0.5).abs() <= a.rad + b.rad + s.boundary.rad,
        || format!("sum {} vs 1/2", a.mid + b.mid),
    )?;
    ensure(s.identity_holds(), || {
        "identity residual exceeds radii".into()
    })?;
    Ok(format!(
        "∫α dβ = {:.9} ± {:.1e}, ∫β dα = {:.9} ± {:.1e}",
        a.mid, a.rad, b.mid, b.rad
    ))
}

fn random_catalog(r: &mut ChaCha8Rng) -> FunctionSpec {
    match r.random_range(0..4) {
        0 | 1 => random::function(r, unit()),
        2 => FunctionSpec::sin(
            r.random_range(0.1..3.0),
            r.random_range(0.5..20.0),
            r.random_range(0.0..6.3),
        ),
        _ => FunctionSpec::new(SpecBody::AbsShift {
            params: ShiftParams {
                shift: r.random_range(-0.5..1.5),
            },
        }),
    }
}

fn mean_value() -> Outcome {
    let ctl = Controls::with_tol(1e-5);
    let d = unit();
    let mut r = rng(7);
    for k in 0..50 {
        let h = random_catalog(&mut r).build(d).map_err(e)?;
        let m = mean_value_points(&h, &d, &ctl).map_err(e)?;
        ensure(0.0 < m.c1 && m.c1 < 1.0 && 0.0 < m.c2 && m.c2 < 1.0, || {
            format!("function {k}: points {} and {} not interior", m.c1, m.c2)
        })?;
        let (v1, v2) = (h.eval(m.c1), h.eval(m.c2));
        ensure(v1 <= m.integral.hi() && m.integral.lo() <= v2, || {
            format!(
                "function {k}: h(c1) = {v1}, h(c2) = {v2}, integral {:?}",
                m.integral
            )
        })?;
    }
    let step = FunctionSpec::step(vec![0.0, 0.5, 1.0], vec![0.0, 1.0], Convention::Right)
        .build(d)
        .map_err(e)?;
    let m = mean_value_points(&step, &d, &ctl).map_err(e)?;
    let (v1, v2) = (step.eval(m.c1), step.eval(m.c2));
    ensure(v1 < 0.5 && 0.5 < v2, || {
        format!("step: h(c1) = {v1}, h(c2) = {v2}")
    })?;
    Ok(format!(
        "50 functions pass; step gives c1 = {}, c2 = {} with values {v1}, {v2}",
        m.c1, m.c2
    ))
}

fn constant_invariance() -> Outcome {
    let ctl = Controls::with_tol(1e-4);
    let half = ctl.halved();
    let mut r = rng(8);
    let mut count = 0;
    for k in 0..20 {
        let (f, g) = pair(&mut r);
        let mut encs: Vec<(String, Enclosure)> = Vec::new();
        for c in [-3.0, 0.0, 7.0] {
            let red = integrate_rs_reduced(&f, &g, c, &ctl)
                .map_err(e)?
                .enclosure()
                .ok_or_else(|| format!("pair {k}: f·g not integrable"))?;
            let big = IndefiniteIntegral::new(&g, c, &half).map_err(e)?;
            let dir = integrate_rs_direct(&f, &big, &ctl).map_err(e)?.enclosure();
            let g_df = integrate_g_df_direct(&f, &big, &ctl)
                .map_err(e)?
                .enclosure();
            let bd = parts_boundary(&f, &big, ctl.slack).map_err(e)?;
            let parts = Enclosure::new(bd.mid - g_df.mid, bd.rad + g_df.rad, red.provenance);
            encs.push((format!("reduced c={c}"), red));
            encs.push((format!("direct c={c}"), dir));
            encs.push((format!("parts c={c}"), parts));
        }
        for (i, (ni, ei)) in encs.iter().enumerate() {
            for (nj, ej) in &encs[i + 1..] {
                ensure((ei.mid - ej.mid).abs() <= ei.rad + ej.rad, || {
                    format!("pair {k}: {ni} {ei:?} vs {nj} {ej:?}")
                })?;
                count += 1;
            }
        }
    }
    Ok(format!(
        "{count} enclosure comparisons agree across c in {{-3, 0, 7}}"
    ))
}

fn determinism() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_stieltjes"))
            .args(["verify", "default", "--seed", "42", "--format", "json"])
            .env_remove("STIELTJES_FORMAT")
            .env_remove("STIELTJES_SEED")
            .env_remove("STIELTJES_OUT")
            .output()
            .map_err(e)
    };
    let (a, b) = (run()?, run()?);
    ensure(a.status.success() && b.status.success(), || {
        format!("exit {:?} / {:?}", a.status.code(), b.status.code())
    })?;
    ensure(!a.stdout.is_empty() && a.stdout == b.stdout, || {
        "reports differ".into()
    })?;
    let lines = a.stdout.iter().filter(|&&c| c == b'\n').count();
    Ok(format!(
        "{lines} JSON lines, byte-identical across two runs"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("direct and reduced routes agree", agreement_of_routes),
        ("mixed-sum deviation bound", mixed_sum_bound),
        ("glued counterexample", glued_counterexample),
        ("necessity direction", necessity_direction),
        ("integration by parts", by_parts),
        ("symmetric integrals", symmetric),
        ("mean-value points", mean_value),
        ("invariance in the constant", constant_invariance),
        ("deterministic verify reports", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match res {
            Ok(detail) => println!("PASS {} {name} ({secs:.2}s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name} ({secs:.2}s): {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
