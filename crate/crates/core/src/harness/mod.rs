//! Verification scenarios: each checks one identity or inequality over a
//! fixed function pair and a batch of seeded random ones, and reports the
//! worst observed margin.

mod corpus;
pub mod random;

use std::path::Path;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::catalog::{product_handle, FunctionHandle, FunctionSpec, Interval};
use crate::error::{Error, Result};
use crate::integrator::{
    decide_riemann_integrable, integrate_g_df_direct, integrate_rs_direct, integrate_rs_reduced,
    mean_value_points, parts_boundary, symmetric_rs_integrate, Controls, IndefiniteIntegral,
    IntegrabilityVerdict, Side, DEFAULT_BUDGET,
};
use crate::numeric::DEFAULT_SLACK;
use crate::sums::{
    darboux_sums, mixed_sum, mixed_sum_error_bound, riemann_sum, rs_sum, rs_vs_riemann_gap_bound,
};

pub use corpus::{counterexample_f, counterexample_g, default_corpus};

/// The statement a scenario checks. The serialized names are the stable
/// identifiers used in corpus files and reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StatementId {
    /// `∫ f dG` by reduction agrees with direct Riemann–Stieltjes sums.
    #[serde(rename = "eq3")]
    Reduction,
    /// Mixed sums stay within `sup|f|·Σ osc(g)·w` of Riemann sums of `f·g`.
    #[serde(rename = "lemma1")]
    MixedSumBound,
    /// Riemann sums of `f·g` stay within the same bound of RS sums.
    #[serde(rename = "necessity-gap")]
    NecessityGap,
    /// `∫ G df + ∫ f dG = G(b)f(b) − G(a)f(a)`.
    #[serde(rename = "corollary-parts")]
    Parts,
    /// Both orders of integration when one side is an indefinite integral.
    #[serde(rename = "corollary-symmetric")]
    Symmetric,
    /// Interior mean-value points bracket the integral.
    #[serde(rename = "mvt")]
    MeanValue,
    /// `f` not integrable on a subdomain where `g` vanishes, yet `∫ f dG`
    /// exists.
    #[serde(rename = "counterexample-s3")]
    Counterexample,
}

impl StatementId {
    pub const ALL: [StatementId; 7] = [
        StatementId::Reduction,
        StatementId::MixedSumBound,
        StatementId::NecessityGap,
        StatementId::Parts,
        StatementId::Symmetric,
        StatementId::MeanValue,
        StatementId::Counterexample,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            StatementId::Reduction => "eq3",
            StatementId::MixedSumBound => "lemma1",
            StatementId::NecessityGap => "necessity-gap",
            StatementId::Parts => "corollary-parts",
            StatementId::Symmetric => "corollary-symmetric",
            StatementId::MeanValue => "mvt",
            StatementId::Counterexample => "counterexample-s3",
        }
    }
}

impl std::fmt::Display for StatementId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

fn unit_domain() -> Interval {
    Interval::unit()
}

fn default_tol() -> f64 {
    1e-4
}

fn default_budget() -> usize {
    DEFAULT_BUDGET
}

fn default_max_cells() -> usize {
    32
}

fn is_false(b: &bool) -> bool {
    !*b
}

/// One verification scenario.
///
/// `expected` holds known values for the fixed pair, by statement:
/// `eq3` `[∫f dG]`, `corollary-parts` `[∫G df]`, `corollary-symmetric`
/// `[∫α dβ, ∫β dα]`, `mvt` `[v]` with `h(c1) ≤ v ≤ h(c2)`,
/// `counterexample-s3` `[∫f dG, gap floor on subdomain]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub statement_id: StatementId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<FunctionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<FunctionSpec>,
    #[serde(default = "unit_domain")]
    pub domain: Interval,
    #[serde(default)]
    pub c: f64,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_budget")]
    pub budget: usize,
    /// Random pairs checked in addition to the fixed one.
    #[serde(default)]
    pub random_pairs: usize,
    /// Random (tagged) partitions per pair, for the sum statements.
    #[serde(default)]
    pub partitions: usize,
    #[serde(default = "default_max_cells")]
    pub max_cells: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub expected: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subdomain: Option<Interval>,
    /// Check the parts identity with the wrong sign; for negative fixtures.
    #[serde(default, skip_serializing_if = "is_false")]
    pub negate_identity: bool,
}

impl Scenario {
    pub fn new(name: impl Into<String>, statement_id: StatementId) -> Self {
        Scenario {
            name: name.into(),
            statement_id,
            f: None,
            g: None,
            domain: unit_domain(),
            c: 0.0,
            tol: default_tol(),
            budget: default_budget(),
            random_pairs: 0,
            partitions: 0,
            max_cells: default_max_cells(),
            expected: Vec::new(),
            subdomain: None,
            negate_identity: false,
        }
    }

    pub fn pair(mut self, f: FunctionSpec, g: FunctionSpec) -> Self {
        self.f = Some(f);
        self.g = Some(g);
        self
    }

    pub fn function(mut self, f: FunctionSpec) -> Self {
        self.f = Some(f);
        self
    }

    pub fn random(mut self, pairs: usize) -> Self {
        self.random_pairs = pairs;
        self
    }

    pub fn partitions(mut self, n: usize) -> Self {
        self.partitions = n;
        self
    }

    pub fn expect(mut self, values: &[f64]) -> Self {
        self.expected = values.to_vec();
        self
    }

    pub fn tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn constant(mut self, c: f64) -> Self {
        self.c = c;
        self
    }

    pub fn with_subdomain(mut self, sub: Interval) -> Self {
        self.subdomain = Some(sub);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub scenario: String,
    pub statement_id: StatementId,
    pub pass: bool,
    /// Residual of the instance closest to (or furthest past) its bound.
    pub residual: f64,
    pub bound: f64,
    pub instances: usize,
    pub partitions_tested: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mesh_final: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<String>,
    /// Wall-clock time; left out of JSON so reports are reproducible.
    #[serde(skip)]
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub reports: Vec<VerificationReport>,
    pub passed: usize,
    pub failed: usize,
}

impl RunSummary {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Default)]
struct Tally {
    failures: Vec<String>,
    worst: Option<(f64, f64)>,
    instances: usize,
    partitions: usize,
    mesh: Option<f64>,
}

impl Tally {
    fn check(&mut self, residual: f64, bound: f64, what: impl FnOnce() -> String) {
        let ok = residual <= bound;
        if !ok {
            self.failures.push(format!(
                "{}: residual {residual} exceeds bound {bound}",
                what()
            ));
        }
        let margin = residual - bound;
        if self
            .worst
            .is_none_or(|(r, b)| margin.total_cmp(&(r - b)).is_gt())
        {
            self.worst = Some((residual, bound));
        }
    }

    fn require(&mut self, cond: bool, what: impl FnOnce() -> String) {
        if !cond {
            self.failures.push(what());
        }
    }

    fn mesh(&mut self, m: f64) {
        self.mesh = Some(self.mesh.map_or(m, |x| x.min(m)));
    }
}

/// Deterministic per-scenario stream: the run seed mixed with the name.
fn scenario_rng(seed: u64, name: &str) -> ChaCha8Rng {
    let h = name.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0100_0000_01b3)
    });
    ChaCha8Rng::seed_from_u64(seed ^ h)
}

struct Instance {
    label: String,
    f: FunctionHandle,
    g: Option<FunctionHandle>,
    fixed: bool,
}

fn instances(s: &Scenario, rng: &mut ChaCha8Rng) -> Result<Vec<Instance>> {
    let mut out = Vec::new();
    if let Some(fs) = &s.f {
        let f = fs.build(s.domain)?;
        let g = s.g.as_ref().map(|gs| gs.build(s.domain)).transpose()?;
        out.push(Instance {
            label: "fixed".into(),
            f,
            g,
            fixed: true,
        });
    }
    for k in 0..s.random_pairs {
        let f = random::function(rng, s.domain).build(s.domain)?;
        let g = random::function(rng, s.domain).build(s.domain)?;
        out.push(Instance {
            label: format!("random[{k}]"),
            f,
            g: Some(g),
            fixed: false,
        });
    }
    Ok(out)
}

fn need_g(inst: &Instance) -> Result<&FunctionHandle> {
    inst.g.as_ref().ok_or_else(|| {
        Error::InvalidArgument(format!("{}: scenario needs a g function", inst.label))
    })
}

struct Ctx<'a> {
    s: &'a Scenario,
    ctl: Controls,
    slack: f64,
}

impl Ctx<'_> {
    fn expected(&self, inst: &Instance, k: usize) -> Option<f64> {
        if inst.fixed {
            self.s.expected.get(k).copied()
        } else {
            None
        }
    }

    fn rounding(&self, n: usize, scale: f64) -> f64 {
        self.slack * n as f64 * scale.max(1.0)
    }
}

fn check_reduction(cx: &Ctx, inst: &Instance, t: &mut Tally) -> Result<()> {
    let g = need_g(inst)?;
    let red = integrate_rs_reduced(&inst.f, g, cx.s.c, &cx.ctl)?;
    let Some(r) = red.enclosure() else {
        t.require(false, || {
            format!("{}: f·g reported not integrable", inst.label)
        });
        return Ok(());
    };
    let big = IndefiniteIntegral::new(g, cx.s.c, &cx.ctl.halved())?;
    let d = integrate_rs_direct(&inst.f, &big, &cx.ctl)?.enclosure();
    t.check((r.mid - d.mid).abs(), r.rad + d.rad, || {
        format!("{}: reduced vs direct", inst.label)
    });
    if let Some(v) = cx.expected(inst, 0) {
        t.check((r.mid - v).abs(), r.rad, || {
            format!("{}: reduced vs expected", inst.label)
        });
        t.check((d.mid - v).abs(), d.rad, || {
            format!("{}: direct vs expected", inst.label)
        });
    }
    Ok(())
}

fn check_mixed(cx: &Ctx, inst: &Instance, t: &mut Tally, rng: &mut ChaCha8Rng) -> Result<()> {
    let g = need_g(inst)?;
    let fg = product_handle(&inst.f, g)?;
    let scale = inst.f.sup_abs() * g.sup_abs() * cx.s.domain.width();
    for j in 0..cx.s.partitions {
        let p = random::partition(rng, cx.s.domain, cx.s.max_cells);
        let dtp = random::double_tagged(rng, p);
        let p = dtp.partition();
        let mixed = mixed_sum(&inst.f, g, &dtp)?;
        let plain = riemann_sum(&fg, &dtp.y_tagged())?;
        let bound = mixed_sum_error_bound(&inst.f, g, p)?;
        t.check(
            (mixed.value - plain.value).abs(),
            bound + cx.rounding(p.len(), scale),
            || format!("{} partition {j}", inst.label),
        );
        t.mesh(p.mesh());
        t.partitions += 1;
    }
    Ok(())
}

fn check_necessity(cx: &Ctx, inst: &Instance, t: &mut Tally, rng: &mut ChaCha8Rng) -> Result<()> {
    let g = need_g(inst)?;
    let fg = product_handle(&inst.f, g)?;
    let big = IndefiniteIntegral::new(g, cx.s.c, &cx.ctl)?;
    let scale = inst.f.sup_abs() * g.sup_abs() * cx.s.domain.width();
    for j in 0..cx.s.partitions {
        let p = random::partition(rng, cx.s.domain, cx.s.max_cells);
        let tp = random::tagged(rng, p);
        let p = tp.partition();
        let plain = riemann_sum(&fg, &tp)?;
        let rs = rs_sum(&inst.f, &big, &tp)?;
        let bound = rs_vs_riemann_gap_bound(&inst.f, g, p)?;
        t.check(
            (plain.value - rs.value).abs(),
            bound + rs.bound.unwrap_or(0.0) + cx.rounding(p.len(), scale),
            || format!("{} partition {j}", inst.label),
        );
        t.mesh(p.mesh());
        t.partitions += 1;
    }
    Ok(())
}

fn check_parts(cx: &Ctx, inst: &Instance, t: &mut Tally) -> Result<()> {
    let g = need_g(inst)?;
    let half = cx.ctl.halved();
    let Some(f_dg) = integrate_rs_reduced(&inst.f, g, cx.s.c, &half)?.enclosure() else {
        t.require(false, || {
            format!("{}: f·g reported not integrable", inst.label)
        });
        return Ok(());
    };
    let big = IndefiniteIntegral::new(g, cx.s.c, &half)?;
    let g_df = integrate_g_df_direct(&inst.f, &big, &cx.ctl)?.enclosure();
    let bd = parts_boundary(&inst.f, &big, cx.slack)?;
    let sign = if cx.s.negate_identity { -1.0 } else { 1.0 };
    t.check(
        (sign * g_df.mid + f_dg.mid - bd.mid).abs(),
        g_df.rad + f_dg.rad + bd.rad,
        || format!("{}: parts identity", inst.label),
    );
    if let Some(v) = cx.expected(inst, 0) {
        t.check((g_df.mid - v).abs(), g_df.rad, || {
            format!("{}: ∫G df vs expected", inst.label)
        });
    }
    Ok(())
}

fn check_symmetric(cx: &Ctx, inst: &Instance, t: &mut Tally) -> Result<()> {
    let g = need_g(inst)?;
    let sym = symmetric_rs_integrate(&inst.f, g, cx.s.c, Side::Beta, &cx.ctl)?;
    t.check(sym.residual, sym.residual_bound, || {
        format!("{}: symmetric identity", inst.label)
    });
    let big = IndefiniteIntegral::new(g, cx.s.c, &cx.ctl.halved())?;
    let direct = integrate_rs_direct(&inst.f, &big, &cx.ctl)?.enclosure();
    let a = sym.alpha_d_beta.enclosure();
    t.check((a.mid - direct.mid).abs(), a.rad + direct.rad, || {
        format!("{}: ∫α dβ vs direct sums", inst.label)
    });
    for (k, e) in [a, sym.beta_d_alpha.enclosure()].into_iter().enumerate() {
        if let Some(v) = cx.expected(inst, k) {
            t.check((e.mid - v).abs(), e.rad, || {
                format!("{}: integral {k} vs expected", inst.label)
            });
        }
    }
    Ok(())
}

fn check_mean_value(cx: &Ctx, inst: &Instance, t: &mut Tally) -> Result<()> {
    let h = &inst.f;
    let d = cx.s.domain;
    let m = mean_value_points(h, &d, &cx.ctl)?;
    let (v1, v2) = (h.eval(m.c1), h.eval(m.c2));
    t.require(
        d.lo() < m.c1 && m.c1 < d.hi() && d.lo() < m.c2 && m.c2 < d.hi(),
        || {
            format!(
                "{}: points {} and {} are not interior",
                inst.label, m.c1, m.c2
            )
        },
    );
    let violation = (v1 * d.width() - m.integral.hi()).max(m.integral.lo() - v2 * d.width());
    t.check(violation.max(0.0), 0.0, || {
        format!("{}: mean-value inequalities", inst.label)
    });
    if let Some(v) = cx.expected(inst, 0) {
        t.require(v1 <= v && v <= v2, || {
            format!(
                "{}: h(c1) = {v1}, h(c2) = {v2} do not bracket {v}",
                inst.label
            )
        });
    }
    Ok(())
}

fn check_counterexample(
    cx: &Ctx,
    inst: &Instance,
    t: &mut Tally,
    rng: &mut ChaCha8Rng,
) -> Result<()> {
    let g = need_g(inst)?;
    let sub =
        cx.s.subdomain
            .ok_or_else(|| Error::InvalidArgument("scenario needs a subdomain".into()))?;
    let fs = inst.f.restrict(&sub)?;
    match decide_riemann_integrable(&fs, &cx.ctl)? {
        IntegrabilityVerdict::NotIntegrable(n) => {
            if let Some(v) = cx.expected(inst, 1) {
                t.check((n.gap_floor - v).abs(), cx.slack, || {
                    format!("{}: gap floor vs expected", inst.label)
                });
            }
            for j in 0..cx.s.partitions {
                let p = random::partition(rng, sub, cx.s.max_cells);
                let (lo, up) = darboux_sums(&fs, &p)?;
                t.check(
                    (n.gap_floor - (up - lo)).max(0.0),
                    cx.rounding(p.len(), 1.0),
                    || format!("{}: Darboux gap below floor on partition {j}", inst.label),
                );
                t.mesh(p.mesh());
                t.partitions += 1;
            }
        }
        v => t.require(false, || {
            format!(
                "{}: f on {sub} decided {} instead of not-integrable",
                inst.label,
                v.name()
            )
        }),
    }
    match integrate_rs_reduced(&inst.f, g, cx.s.c, &cx.ctl)? {
        IntegrabilityVerdict::Integrable(e) => {
            if let Some(v) = cx.expected(inst, 0) {
                t.check((e.mid - v).abs(), e.rad, || {
                    format!("{}: ∫f dG vs expected", inst.label)
                });
            }
        }
        v => t.require(false, || {
            format!(
                "{}: f·g decided {} instead of integrable",
                inst.label,
                v.name()
            )
        }),
    }
    Ok(())
}

/// Run one scenario. Build and evaluation errors are recorded as failures.
pub fn run_scenario(s: &Scenario, seed: u64, slack: f64) -> VerificationReport {
    let start = Instant::now();
    let mut t = Tally::default();
    let mut rng = scenario_rng(seed, &s.name);
    let cx = Ctx {
        s,
        ctl: Controls {
            tol: s.tol,
            budget: s.budget,
            slack,
        },
        slack,
    };
    let result = cx.ctl.validate().and_then(|_| instances(s, &mut rng));
    match result {
        Err(e) => t.failures.push(e.to_string()),
        Ok(list) => {
            if list.is_empty() {
                t.failures.push("scenario has no instances".into());
            }
            for inst in &list {
                t.instances += 1;
                let r = match s.statement_id {
                    StatementId::Reduction => check_reduction(&cx, inst, &mut t),
                    StatementId::MixedSumBound => check_mixed(&cx, inst, &mut t, &mut rng),
                    StatementId::NecessityGap => check_necessity(&cx, inst, &mut t, &mut rng),
                    StatementId::Parts => check_parts(&cx, inst, &mut t),
                    StatementId::Symmetric => check_symmetric(&cx, inst, &mut t),
                    StatementId::MeanValue => check_mean_value(&cx, inst, &mut t),
                    StatementId::Counterexample => {
                        check_counterexample(&cx, inst, &mut t, &mut rng)
                    }
                };
                if let Err(e) = r {
                    t.failures.push(format!("{}: {e}", inst.label));
                }
            }
        }
    }
    let (residual, bound) = t.worst.unwrap_or((0.0, 0.0));
    VerificationReport {
        scenario: s.name.clone(),
        statement_id: s.statement_id,
        pass: t.failures.is_empty(),
        residual,
        bound,
        instances: t.instances,
        partitions_tested: t.partitions,
        mesh_final: t.mesh,
        failures: t.failures,
        seconds: start.elapsed().as_secs_f64(),
    }
}

pub fn run_all(corpus: &[Scenario], seed: u64, slack: f64) -> RunSummary {
    let reports: Vec<_> = corpus
        .iter()
        .map(|s| run_scenario(s, seed, slack))
        .collect();
    let passed = reports.iter().filter(|r| r.pass).count();
    RunSummary {
        failed: reports.len() - passed,
        passed,
        reports,
    }
}

pub fn run_default(seed: u64) -> RunSummary {
    run_all(&default_corpus(), seed, DEFAULT_SLACK)
}

/// Read a corpus file: a JSON array of scenarios.
pub fn load_corpus(path: &Path) -> Result<Vec<Scenario>> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

/// One JSON object per line, runtime omitted.
pub fn to_jsonl(reports: &[VerificationReport]) -> String {
    let mut out = String::new();
    for r in reports {
        out.push_str(&serde_json::to_string(r).expect("reports always serialize"));
        out.push('\n');
    }
    out
}

pub const CSV_HEADER: [&str; 7] = [
    "scenario",
    "statement_id",
    "pass",
    "residual",
    "bound",
    "mesh_final",
    "seconds",
];

pub fn to_csv(reports: &[VerificationReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(CSV_HEADER).map_err(io)?;
    for r in reports {
        w.write_record([
            r.scenario.clone(),
            r.statement_id.to_string(),
            r.pass.to_string(),
            r.residual.to_string(),
            r.bound.to_string(),
            r.mesh_final.map(|m| m.to_string()).unwrap_or_default(),
            format!("{:.6}", r.seconds),
        ])
        .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
