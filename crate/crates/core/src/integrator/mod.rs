//! Certified integrability decisions and integral enclosures.
//!
//! All procedures refine a working partition worst-first (largest
//! `score`, leftmost on ties) until a tolerance or a cell budget is reached.
//! Results are midpoint–radius enclosures: the true value lies within
//! `mid ± rad`, with a per-reduction rounding slack folded into `rad`.

mod indefinite;
mod refine;

use serde::{Deserialize, Serialize};

use crate::catalog::{product_handle, FunctionHandle, Interval, OscCertificate};
use crate::error::{Error, Result};
use crate::numeric::{CompensatedSum, DEFAULT_SLACK};
use crate::partition::{tag, TagStrategy};
use crate::sums::rs_sum;

pub use indefinite::{eval_indefinite, IndefiniteIntegral};
use refine::Refiner;

pub const DEFAULT_TOL: f64 = 1e-6;
pub const DEFAULT_BUDGET: usize = 1 << 16;

/// Accuracy and effort knobs shared by every procedure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Controls {
    pub tol: f64,
    /// Maximum number of subintervals in a working partition.
    pub budget: usize,
    pub slack: f64,
}

impl Default for Controls {
    fn default() -> Self {
        Controls {
            tol: DEFAULT_TOL,
            budget: DEFAULT_BUDGET,
            slack: DEFAULT_SLACK,
        }
    }
}

impl Controls {
    pub fn with_tol(tol: f64) -> Self {
        Controls {
            tol,
            ..Controls::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "tolerance must be positive and finite, got {}",
                self.tol
            )));
        }
        if self.budget < 2 {
            return Err(Error::InvalidArgument(format!(
                "budget must allow at least 2 subintervals, got {}",
                self.budget
            )));
        }
        if !(self.slack >= 0.0 && self.slack.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "slack must be non-negative and finite, got {}",
                self.slack
            )));
        }
        Ok(())
    }

    /// Half the tolerance, for each of the two pieces of a compound result.
    pub fn halved(&self) -> Controls {
        Controls {
            tol: 0.5 * self.tol,
            ..*self
        }
    }

    fn rounding(&self, n: usize, scale: f64) -> f64 {
        self.slack * n as f64 * scale.max(1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    DarbouxGap,
    Reduction,
    DirectRs,
    Parts,
    Slack,
}

impl std::fmt::Display for Provenance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Provenance::DarbouxGap => "darboux-gap",
            Provenance::Reduction => "reduction",
            Provenance::DirectRs => "direct-rs",
            Provenance::Parts => "parts",
            Provenance::Slack => "slack",
        })
    }
}

/// `|true value − mid| ≤ rad`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Enclosure {
    pub mid: f64,
    pub rad: f64,
    pub provenance: Provenance,
}

impl Enclosure {
    pub fn new(mid: f64, rad: f64, provenance: Provenance) -> Self {
        Enclosure {
            mid,
            rad: rad.max(0.0),
            provenance,
        }
    }

    pub fn lo(&self) -> f64 {
        self.mid - self.rad
    }

    pub fn hi(&self) -> f64 {
        self.mid + self.rad
    }

    pub fn contains(&self, x: f64) -> bool {
        (x - self.mid).abs() <= self.rad
    }

    /// Whether the two enclosures can hold the same value.
    pub fn agrees_with(&self, other: &Enclosure) -> bool {
        (self.mid - other.mid).abs() <= self.rad + other.rad
    }

    pub fn with_provenance(self, provenance: Provenance) -> Self {
        Enclosure { provenance, ..self }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonIntegrability {
    /// Lower bound on the Darboux gap of every partition.
    pub gap_floor: f64,
    pub witness: Vec<OscCertificate>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Undecided {
    pub best_gap: f64,
    pub budget_spent: usize,
    /// Certified enclosure from the final working partition. Its radius is
    /// larger than requested but it is still sound.
    pub best: Enclosure,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum IntegrabilityVerdict {
    Integrable(Enclosure),
    NotIntegrable(NonIntegrability),
    Undecided(Undecided),
}

impl IntegrabilityVerdict {
    /// The certified enclosure, if any was computed.
    pub fn enclosure(&self) -> Option<Enclosure> {
        match self {
            IntegrabilityVerdict::Integrable(e) => Some(*e),
            IntegrabilityVerdict::Undecided(u) => Some(u.best),
            IntegrabilityVerdict::NotIntegrable(_) => None,
        }
    }

    pub fn is_integrable(&self) -> bool {
        matches!(self, IntegrabilityVerdict::Integrable(_))
    }

    pub fn name(&self) -> &'static str {
        match self {
            IntegrabilityVerdict::Integrable(_) => "integrable",
            IntegrabilityVerdict::NotIntegrable(_) => "not-integrable",
            IntegrabilityVerdict::Undecided(_) => "undecided",
        }
    }

    fn with_provenance(self, p: Provenance) -> Self {
        match self {
            IntegrabilityVerdict::Integrable(e) => {
                IntegrabilityVerdict::Integrable(e.with_provenance(p))
            }
            IntegrabilityVerdict::Undecided(u) => IntegrabilityVerdict::Undecided(Undecided {
                best: u.best.with_provenance(p),
                ..u
            }),
            other => other,
        }
    }
}

/// Result of an integration that either met its tolerance or ran out of
/// budget with a wider (still certified) enclosure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Outcome {
    Certified(Enclosure),
    Undecided(Undecided),
}

impl Outcome {
    pub fn enclosure(&self) -> Enclosure {
        match self {
            Outcome::Certified(e) => *e,
            Outcome::Undecided(u) => u.best,
        }
    }

    pub fn is_certified(&self) -> bool {
        matches!(self, Outcome::Certified(_))
    }

    fn from_verdict(v: IntegrabilityVerdict) -> Result<Outcome> {
        match v {
            IntegrabilityVerdict::Integrable(e) => Ok(Outcome::Certified(e)),
            IntegrabilityVerdict::Undecided(u) => Ok(Outcome::Undecided(u)),
            IntegrabilityVerdict::NotIntegrable(n) => Err(not_integrable(&n)),
        }
    }

    fn settle(met: bool, e: Enclosure, budget_spent: usize) -> Outcome {
        if met {
            Outcome::Certified(e)
        } else {
            Outcome::Undecided(Undecided {
                best_gap: 2.0 * e.rad,
                budget_spent,
                best: e,
            })
        }
    }
}

fn not_integrable(n: &NonIntegrability) -> Error {
    Error::NotIntegrable(format!(
        "the product has Darboux gap at least {} on every partition",
        n.gap_floor
    ))
}

fn same_domain(a: &FunctionHandle, b: Interval) -> Result<()> {
    if a.domain() == b {
        Ok(())
    } else {
        Err(Error::DomainMismatch(a.domain(), b))
    }
}

fn certificates(h: &FunctionHandle) -> Option<NonIntegrability> {
    let witness = h.osc_lower_uniform();
    let gap_floor: f64 = witness.iter().map(OscCertificate::gap_floor).sum();
    (gap_floor > 0.0).then_some(NonIntegrability { gap_floor, witness })
}

/// Decide Riemann integrability of `h` and enclose its integral.
///
/// Declared oscillation certificates are checked first and settle the
/// question negatively for every partition. Otherwise the partition is
/// refined with scores `osc·width` until the Darboux gap is at most
/// `2·tol`; a stalled gap is reported as undecided, never as a negative.
pub fn decide_riemann_integrable(
    h: &FunctionHandle,
    controls: &Controls,
) -> Result<IntegrabilityVerdict> {
    controls.validate()?;
    if let Some(n) = certificates(h) {
        return Ok(IntegrabilityVerdict::NotIntegrable(n));
    }
    let d = h.domain();
    let mut r = Refiner::new(&[d.lo(), d.hi()], |lo, hi| {
        let (inf, sup) = h.range_raw(lo, hi);
        ((inf, sup), (sup - inf) * (hi - lo))
    });
    let met = r.run(2.0 * controls.tol, controls.budget);
    let cells = r.cells();
    let mut lower = CompensatedSum::new();
    let mut upper = CompensatedSum::new();
    let mut gap = CompensatedSum::new();
    for &(a, b, &(inf, sup)) in &cells {
        lower.add(inf * (b - a));
        upper.add(sup * (b - a));
        gap.add((sup - inf) * (b - a));
    }
    let (lower, upper, gap) = (lower.value(), upper.value(), gap.value());
    let n = cells.len();
    let e = Enclosure::new(
        0.5 * (lower + upper),
        0.5 * gap + controls.rounding(n, h.sup_abs() * d.width()),
        Provenance::DarbouxGap,
    );
    Ok(if met {
        IntegrabilityVerdict::Integrable(e)
    } else {
        IntegrabilityVerdict::Undecided(Undecided {
            best_gap: gap,
            budget_spent: n,
            best: e,
        })
    })
}

/// `∫ f dG` for `G = c + ∫ g`, through the Riemann integral of `f·g`.
///
/// `c` drops out of the value; it is validated so that every entry point
/// rejects the same inputs.
pub fn integrate_rs_reduced(
    f: &FunctionHandle,
    g: &FunctionHandle,
    c: f64,
    controls: &Controls,
) -> Result<IntegrabilityVerdict> {
    if !c.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "constant c = {c} is not finite"
        )));
    }
    same_domain(f, g.domain())?;
    let fg = product_handle(f, g)?;
    Ok(decide_riemann_integrable(&fg, controls)?.with_provenance(Provenance::Reduction))
}

struct DirectCell {
    e: f64,
    gmax: f64,
}

/// `∫ f dG` straight from Riemann–Stieltjes sums.
///
/// On each cell the sums over every tagging lie within
/// `m_k·ΔG_k ± (e_k·sup|g|·w_k + |m_k|·rad ΔG_k)`, where `m_k` is the mean
/// of the inf- and sup-seeking tag values and `e_k` the larger distance
/// from `m_k` to the range of `f`. Cells are refined worst-first by that
/// radius; the midpoint is the mean of the inf- and sup-seeking sums.
pub fn integrate_rs_direct(
    f: &FunctionHandle,
    big_g: &IndefiniteIntegral,
    controls: &Controls,
) -> Result<Outcome> {
    controls.validate()?;
    let g = big_g.density();
    same_domain(f, g.domain())?;
    if let Some(n) = certificates(&product_handle(f, g)?) {
        return Err(not_integrable(&n));
    }
    let d = f.domain();
    let cell = |lo: f64, hi: f64| {
        let r = f.range_witness_raw(lo, hi);
        let m = 0.5
            * (f.eval_tagged(r.argmin.x, r.argmin.kind) + f.eval_tagged(r.argmax.x, r.argmax.kind));
        let e = (r.sup - m).max(m - r.inf).max(0.0);
        let (ginf, gsup) = g.range_raw(lo, hi);
        let gmax = ginf.abs().max(gsup.abs());
        let inc = big_g.increment_raw(lo, hi);
        let score = e * gmax * (hi - lo) + m.abs() * inc.rad;
        (DirectCell { e, gmax }, score)
    };
    let mut r = Refiner::new(&[d.lo(), d.hi()], cell);
    let met = r.run(controls.tol, controls.budget);
    let p = r.partition();
    let spread = r
        .cells()
        .iter()
        .map(|&(a, b, c)| c.e * c.gmax * (b - a))
        .collect::<CompensatedSum>()
        .value();
    let s_inf = rs_sum(f, big_g, &tag(&p, TagStrategy::InfSeeking, Some(f))?)?;
    let s_sup = rs_sum(f, big_g, &tag(&p, TagStrategy::SupSeeking, Some(f))?)?;
    let mid = 0.5 * (s_inf.value + s_sup.value);
    let rad = spread
        + 0.5 * (s_inf.bound.unwrap_or(0.0) + s_sup.bound.unwrap_or(0.0))
        + controls.rounding(p.len(), mid.abs());
    Ok(Outcome::settle(
        met,
        Enclosure::new(mid, rad, Provenance::DirectRs),
        p.len(),
    ))
}

/// `∫ G df` straight from sums `Σ G(x_{k−1})[f(x_k) − f(x_{k−1})]`.
///
/// Each cell contributes at most `osc(G, I_k)·TV(f, I_k)` of error, with
/// `osc(G, I_k) ≤ sup|g|·w_k`, plus the radius of `G(x_{k−1})` times
/// `|Δf_k|`. Requires `f` of computable bounded variation.
pub fn integrate_g_df_direct(
    f: &FunctionHandle,
    big_g: &IndefiniteIntegral,
    controls: &Controls,
) -> Result<Outcome> {
    controls.validate()?;
    let g = big_g.density();
    same_domain(f, g.domain())?;
    let d = f.domain();
    if f.total_variation(&d).is_none() {
        return Err(Error::NotPointwise(d));
    }
    let cell = |lo: f64, hi: f64| {
        let df = f.eval(hi) - f.eval(lo);
        let tv = Interval::new(lo, hi)
            .ok()
            .and_then(|iv| f.total_variation(&iv))
            .unwrap_or(f64::INFINITY);
        let (ginf, gsup) = g.range_raw(lo, hi);
        let gl = big_g.eval(lo).expect("cell endpoints lie in the domain");
        let rad = ginf.abs().max(gsup.abs()) * (hi - lo) * tv + df.abs() * gl.rad;
        ((gl.mid * df, rad), rad)
    };
    let mut r = Refiner::new(&[d.lo(), d.hi()], cell);
    let met = r.run(controls.tol, controls.budget);
    let cells = r.cells();
    let mid = cells
        .iter()
        .map(|c| c.2 .0)
        .collect::<CompensatedSum>()
        .value();
    let rad = cells
        .iter()
        .map(|c| c.2 .1)
        .collect::<CompensatedSum>()
        .value()
        + controls.rounding(cells.len(), mid.abs());
    Ok(Outcome::settle(
        met,
        Enclosure::new(mid, rad, Provenance::DirectRs),
        cells.len(),
    ))
}

fn endpoint_value(f: &FunctionHandle, x: f64) -> Result<f64> {
    if f.dense_values_at(x).is_some() {
        return Err(Error::NotPointwise(Interval::new(x, x)?));
    }
    Ok(f.eval(x))
}

/// `G(b)f(b) − G(a)f(a)` as an enclosure; `f` must have a definite value
/// at both endpoints.
pub fn parts_boundary(
    f: &FunctionHandle,
    big_g: &IndefiniteIntegral,
    slack: f64,
) -> Result<Enclosure> {
    let d = f.domain();
    let (fa, fb) = (endpoint_value(f, d.lo())?, endpoint_value(f, d.hi())?);
    let (ga, gb) = (big_g.eval(d.lo())?, big_g.eval(d.hi())?);
    let (ta, tb) = (ga.mid * fa, gb.mid * fb);
    Ok(Enclosure::new(
        tb - ta,
        fb.abs() * gb.rad + fa.abs() * ga.rad + slack * (1.0 + ta.abs() + tb.abs()),
        Provenance::Parts,
    ))
}

fn parts_from(
    f: &FunctionHandle,
    big_g: &IndefiniteIntegral,
    reduced: &Outcome,
    slack: f64,
) -> Result<Outcome> {
    let bd = parts_boundary(f, big_g, slack)?;
    let r = reduced.enclosure();
    let e = Enclosure::new(
        bd.mid - r.mid,
        bd.rad + r.rad + slack * (1.0 + bd.mid.abs() + r.mid.abs()),
        Provenance::Parts,
    );
    Ok(match reduced {
        Outcome::Certified(_) => Outcome::Certified(e),
        Outcome::Undecided(u) => Outcome::Undecided(Undecided {
            best_gap: 2.0 * e.rad,
            budget_spent: u.budget_spent,
            best: e,
        }),
    })
}

/// `∫ G df = G(b)f(b) − G(a)f(a) − ∫ g·f`, with `G = c + ∫ g`.
///
/// Half the tolerance goes to `∫ g·f` and half to `G`; `f` must have a
/// definite value at both endpoints.
pub fn integrate_by_parts(
    f: &FunctionHandle,
    g: &FunctionHandle,
    c: f64,
    controls: &Controls,
) -> Result<Outcome> {
    controls.validate()?;
    same_domain(f, g.domain())?;
    let half = controls.halved();
    let big_g = IndefiniteIntegral::new(g, c, &half)?;
    let reduced = Outcome::from_verdict(integrate_rs_reduced(f, g, c, &half)?)?;
    parts_from(f, &big_g, &reduced, controls.slack)
}

/// Which of the two functions is the indefinite integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    Alpha,
    Beta,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetricIntegrals {
    pub alpha_d_beta: Outcome,
    pub beta_d_alpha: Outcome,
    /// `α(b)β(b) − α(a)β(a)`.
    pub boundary: Enclosure,
    /// `|∫α dβ + ∫β dα − boundary|`, compared against the summed radii.
    pub residual: f64,
    pub residual_bound: f64,
}

impl SymmetricIntegrals {
    pub fn identity_holds(&self) -> bool {
        self.residual <= self.residual_bound
    }
}

/// Both `∫α dβ` and `∫β dα` when one of `α, β` is `c + ∫ density` and the
/// other is `plain`.
pub fn symmetric_rs_integrate(
    plain: &FunctionHandle,
    density: &FunctionHandle,
    c: f64,
    indefinite: Side,
    controls: &Controls,
) -> Result<SymmetricIntegrals> {
    controls.validate()?;
    same_domain(plain, density.domain())?;
    let half = controls.halved();
    let big = IndefiniteIntegral::new(density, c, &half)?;
    let against_indefinite =
        Outcome::from_verdict(integrate_rs_reduced(plain, density, c, &half)?)?;
    let against_plain = parts_from(plain, &big, &against_indefinite, controls.slack)?;
    let boundary = parts_boundary(plain, &big, controls.slack)?;
    let (i1, i2) = (against_indefinite.enclosure(), against_plain.enclosure());
    let residual = (i1.mid + i2.mid - boundary.mid).abs();
    let residual_bound = i1.rad + i2.rad + boundary.rad;
    let (alpha_d_beta, beta_d_alpha) = match indefinite {
        Side::Beta => (against_indefinite, against_plain),
        Side::Alpha => (against_plain, against_indefinite),
    };
    Ok(SymmetricIntegrals {
        alpha_d_beta,
        beta_d_alpha,
        boundary,
        residual,
        residual_bound,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanValuePoints {
    pub c1: f64,
    pub c2: f64,
    pub integral: Enclosure,
}

/// Interior points `c1, c2` with `h(c1)·|I| ≤ hi(∫_I h)` and
/// `h(c2)·|I| ≥ lo(∫_I h)`, checked against the certified enclosure.
///
/// A grid of interior samples is scanned first, then the range oracle is
/// queried on `[a+δ, b−δ]` for shrinking `δ`. Points are never endpoints.
pub fn mean_value_points(
    h: &FunctionHandle,
    iv: &Interval,
    controls: &Controls,
) -> Result<MeanValuePoints> {
    controls.validate()?;
    let hr = h.restrict(iv)?;
    if !hr.is_pointwise() {
        return Err(Error::NotPointwise(*iv));
    }
    let integral = match decide_riemann_integrable(&hr, controls)? {
        IntegrabilityVerdict::NotIntegrable(n) => return Err(not_integrable(&n)),
        v => v
            .enclosure()
            .expect("integrable or undecided verdicts carry an enclosure"),
    };
    let (a, b, w) = (iv.lo(), iv.hi(), iv.width());
    let mut c1: Option<(f64, f64)> = None;
    let mut c2: Option<(f64, f64)> = None;
    let consider = |x: f64, c1: &mut Option<(f64, f64)>, c2: &mut Option<(f64, f64)>| {
        if !(a < x && x < b) {
            return;
        }
        let v = hr.eval(x);
        if c1.is_none_or(|(_, best)| v < best) {
            *c1 = Some((x, v));
        }
        if c2.is_none_or(|(_, best)| v > best) {
            *c2 = Some((x, v));
        }
    };
    const GRID: usize = 64;
    for j in 0..GRID {
        consider(a + w * (j as f64 + 0.5) / GRID as f64, &mut c1, &mut c2);
    }
    let found = |c: Option<(f64, f64)>, low: bool| {
        c.is_some_and(|(_, v)| {
            if low {
                v * w <= integral.hi()
            } else {
                v * w >= integral.lo()
            }
        })
    };
    let mut delta = 0.25 * w;
    while !(found(c1, true) && found(c2, false)) && a + delta < b - delta && delta > 0.0 {
        let r = hr.range_witness_raw(a + delta, b - delta);
        consider(r.argmin.x, &mut c1, &mut c2);
        consider(r.argmax.x, &mut c1, &mut c2);
        delta *= 0.25;
    }
    match (c1, c2) {
        (Some((x1, _)), Some((x2, _))) if found(c1, true) && found(c2, false) => {
            Ok(MeanValuePoints {
                c1: x1,
                c2: x2,
                integral,
            })
        }
        _ => Err(Error::MeanValueSearch {
            c1: c1.map_or(f64::NAN, |c| c.0),
            c2: c2.map_or(f64::NAN, |c| c.0),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{Convention, FunctionSpec};

    fn unit() -> Interval {
        Interval::unit()
    }

    fn x() -> FunctionHandle {
        FunctionHandle::identity(unit())
    }

    fn dense() -> FunctionHandle {
        FunctionSpec::dense_indicator(None, 0.0, 1.0)
            .build(unit())
            .unwrap()
    }

    #[test]
    fn controls_are_validated() {
        let h = x();
        for bad in [0.0, -1.0, f64::NAN] {
            assert!(decide_riemann_integrable(&h, &Controls::with_tol(bad)).is_err());
        }
        let c = Controls {
            budget: 1,
            ..Controls::default()
        };
        assert!(decide_riemann_integrable(&h, &c).is_err());
    }

    #[test]
    fn decide_examples() {
        let v = decide_riemann_integrable(&x(), &Controls::with_tol(1e-3)).unwrap();
        let IntegrabilityVerdict::Integrable(e) = v else {
            panic!("{v:?}")
        };
        assert!(e.contains(0.5));
        assert!(e.rad <= 1e-3 + 1e-9);

        let v = decide_riemann_integrable(&dense(), &Controls::default()).unwrap();
        let IntegrabilityVerdict::NotIntegrable(n) = v else {
            panic!("{v:?}")
        };
        assert_eq!(n.gap_floor, 1.0);
    }

    #[test]
    fn counterexample_product_is_integrable() {
        let f = FunctionSpec::sum(vec![
            FunctionSpec::dense_indicator(Some(Interval::new(0.0, 0.5).unwrap()), 0.0, 1.0),
            FunctionSpec::piecewise(
                vec![0.0, 0.5, 1.0],
                vec![vec![0.0], vec![0.0, 1.0]],
                Convention::Left,
            ),
        ])
        .build(unit())
        .unwrap();
        let g = FunctionSpec::step(vec![0.0, 0.5, 1.0], vec![0.0, 1.0], Convention::Left)
            .build(unit())
            .unwrap();
        assert!(matches!(
            decide_riemann_integrable(&f, &Controls::default()).unwrap(),
            IntegrabilityVerdict::NotIntegrable(_)
        ));
        let v = integrate_rs_reduced(&f, &g, 0.0, &Controls::with_tol(1e-5)).unwrap();
        let e = v.enclosure().unwrap();
        assert!(v.is_integrable(), "{v:?}");
        assert!(e.contains(0.375));
        assert_eq!(e.provenance, Provenance::Reduction);
    }

    #[test]
    fn undecided_keeps_a_sound_enclosure() {
        let c = Controls {
            tol: 1e-9,
            budget: 64,
            ..Controls::default()
        };
        let v = decide_riemann_integrable(&x(), &c).unwrap();
        let IntegrabilityVerdict::Undecided(u) = v else {
            panic!("{v:?}")
        };
        assert_eq!(u.budget_spent, 64);
        assert!(u.best.contains(0.5));
        assert!((u.best_gap - 1.0 / 64.0).abs() < 1e-12);
    }

    #[test]
    fn reduced_examples() {
        let c = Controls::with_tol(1e-6);
        let e = integrate_rs_reduced(&x(), &x(), 0.0, &c)
            .unwrap()
            .enclosure()
            .unwrap();
        assert!(e.contains(1.0 / 3.0));
        let zero = FunctionHandle::constant(unit(), 0.0);
        let v = integrate_rs_reduced(&dense(), &zero, 4.0, &c).unwrap();
        assert!(v.is_integrable());
        assert!(v.enclosure().unwrap().contains(0.0));
        let one = FunctionHandle::constant(unit(), 1.0);
        assert!(matches!(
            integrate_rs_reduced(&dense(), &one, 0.0, &c).unwrap(),
            IntegrabilityVerdict::NotIntegrable(_)
        ));
        assert!(integrate_rs_reduced(&x(), &x(), f64::INFINITY, &c).is_err());
    }

    #[test]
    fn direct_matches_reduced() {
        let c = Controls::with_tol(1e-4);
        let big = IndefiniteIntegral::new(&x(), 0.0, &c.halved()).unwrap();
        let direct = integrate_rs_direct(&x(), &big, &c).unwrap();
        assert!(direct.is_certified(), "{direct:?}");
        let d = direct.enclosure();
        assert!(d.contains(1.0 / 3.0));
        let r = integrate_rs_reduced(&x(), &x(), 0.0, &c)
            .unwrap()
            .enclosure()
            .unwrap();
        assert!(d.agrees_with(&r));

        let one = FunctionHandle::constant(unit(), 1.0);
        let big1 = IndefiniteIntegral::new(&one, 2.0, &c.halved()).unwrap();
        let t = integrate_rs_direct(&one, &big1, &c).unwrap().enclosure();
        assert!(t.contains(1.0));
        let h = integrate_rs_direct(&x(), &big1, &c).unwrap().enclosure();
        assert!(h.contains(0.5));
    }

    #[test]
    fn g_df_direct_matches_parts() {
        let c = Controls::with_tol(1e-4);
        let big = IndefiniteIntegral::new(&x(), 0.0, &c.halved()).unwrap();
        let direct = integrate_g_df_direct(&x(), &big, &c).unwrap();
        assert!(direct.enclosure().contains(1.0 / 6.0), "{direct:?}");
        let parts = integrate_by_parts(&x(), &x(), 0.0, &c).unwrap();
        assert!(parts.enclosure().contains(1.0 / 6.0));
        assert!(direct.enclosure().agrees_with(&parts.enclosure()));
    }

    #[test]
    fn parts_examples() {
        let c = Controls::with_tol(1e-6);
        let one = FunctionHandle::constant(unit(), 1.0);
        let e = integrate_by_parts(&one, &x(), 3.0, &c).unwrap().enclosure();
        assert!(e.contains(0.0));
        let c4 = Controls::with_tol(1e-4);
        let out = integrate_by_parts(&x(), &one, 0.0, &c4).unwrap();
        assert!(out.is_certified());
        let e = out.enclosure();
        assert!(e.contains(0.5));
        assert!(e.rad <= 1e-4 + 1e-9);
        assert_eq!(e.provenance, Provenance::Parts);
        let zero = FunctionHandle::constant(unit(), 0.0);
        assert!(matches!(
            integrate_by_parts(&dense(), &zero, 0.0, &c),
            Err(Error::NotPointwise(_))
        ));
        assert!(matches!(
            integrate_by_parts(&dense(), &one, 0.0, &c),
            Err(Error::NotIntegrable(_))
        ));
    }

    #[test]
    fn symmetric_examples() {
        let c = Controls::with_tol(1e-6);
        let one = FunctionHandle::constant(unit(), 1.0);
        let s = symmetric_rs_integrate(&x(), &one, 0.0, Side::Beta, &c).unwrap();
        assert!(s.alpha_d_beta.enclosure().contains(0.5));
        assert!(s.beta_d_alpha.enclosure().contains(0.5));
        assert!(s.boundary.contains(1.0));
        assert!(s.identity_holds());

        let sq = FunctionHandle::polynomial(unit(), vec![0.0, 0.0, 1.0]);
        let s = symmetric_rs_integrate(&sq, &x(), 0.0, Side::Beta, &c).unwrap();
        assert!(s.alpha_d_beta.enclosure().contains(0.25));
        assert!(s.beta_d_alpha.enclosure().contains(0.25));

        let s = symmetric_rs_integrate(&one, &x(), 1.0, Side::Beta, &c).unwrap();
        assert!(s.alpha_d_beta.enclosure().contains(0.5));
        assert!(s.beta_d_alpha.enclosure().contains(0.0));
        let flipped = symmetric_rs_integrate(&one, &x(), 1.0, Side::Alpha, &c).unwrap();
        assert_eq!(flipped.alpha_d_beta, s.beta_d_alpha);
    }

    #[test]
    fn mean_value_examples() {
        let c = Controls::with_tol(1e-6);
        let m = mean_value_points(&x(), &unit(), &c).unwrap();
        assert!(0.0 < m.c1 && m.c1 <= 0.5 && 0.5 <= m.c2 && m.c2 < 1.0);

        let k = FunctionHandle::constant(unit(), 2.5);
        let m = mean_value_points(&k, &unit(), &c).unwrap();
        assert!(0.0 < m.c1 && m.c2 < 1.0);

        let step = FunctionSpec::step(vec![0.0, 0.5, 1.0], vec![0.0, 1.0], Convention::Right)
            .build(unit())
            .unwrap();
        let m = mean_value_points(&step, &unit(), &c).unwrap();
        assert!(0.0 < m.c1 && m.c1 < 0.5, "{m:?}");
        assert!(0.5 < m.c2 && m.c2 < 1.0, "{m:?}");

        assert!(mean_value_points(&dense(), &unit(), &c).is_err());
    }

    #[test]
    fn spike_needs_the_range_oracle() {
        // narrow tall tent on [0.6, 0.6 + 1e-4], zero elsewhere
        let (l, r) = (0.6, 0.6 + 1e-4);
        let h = FunctionSpec::piecewise(
            vec![0.0, l, 0.5 * (l + r), r, 1.0],
            vec![
                vec![0.0],
                vec![-1e4 * l * 2e4, 2e4 * 1e4],
                vec![1e4 * r * 2e4, -2e4 * 1e4],
                vec![0.0],
            ],
            Convention::Left,
        )
        .build(unit())
        .unwrap();
        let m = mean_value_points(&h, &unit(), &Controls::with_tol(1e-3)).unwrap();
        assert!(h.eval(m.c2) >= m.integral.lo());
        assert!(m.c2 > l && m.c2 < r);
    }
}
