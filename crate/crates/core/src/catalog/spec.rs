//! Serializable function descriptions and their construction into handles.
//!
//! ```json
//! {"kind": "piecewise-polynomial", "domain": [0, 1],
//!  "breakpoints": [0, 0.5, 1], "pieces": [[0], [0, 1]], "convention": "left"}
//! ```
//!
//! Coefficient lists are in ascending powers of the global variable `x`.
//! `domain` is optional on every node; a node without one inherits the
//! domain it is built on, and a node with one must cover that domain.

use serde::{Deserialize, Serialize};

use super::cell::{Cell, Sinusoid};
use super::poly::Poly;
use super::{FunctionHandle, Interval, Piecewise, PointValue};
use crate::error::{Error, Result};

/// Which piece owns the value at an interior breakpoint.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convention {
    #[default]
    Left,
    Right,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ShiftParams {
    #[serde(default)]
    pub shift: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SinParams {
    #[serde(default = "one")]
    pub amplitude: f64,
    #[serde(default = "one")]
    pub frequency: f64,
    #[serde(default)]
    pub phase: f64,
}

impl Default for SinParams {
    fn default() -> Self {
        SinParams {
            amplitude: 1.0,
            frequency: 1.0,
            phase: 0.0,
        }
    }
}

/// A function equal to `on` on a dense subset of `subdomain`, `off` on its
/// dense complement, and 0 outside `subdomain`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseParams {
    #[serde(default)]
    pub subdomain: Option<Interval>,
    #[serde(default)]
    pub off: f64,
    #[serde(default = "one")]
    pub on: f64,
}

impl Default for DenseParams {
    fn default() -> Self {
        DenseParams {
            subdomain: None,
            off: 0.0,
            on: 1.0,
        }
    }
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SpecBody {
    PiecewisePolynomial {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        breakpoints: Option<Vec<f64>>,
        pieces: Vec<Vec<f64>>,
        #[serde(default)]
        convention: Convention,
    },
    Step {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        breakpoints: Option<Vec<f64>>,
        values: Vec<f64>,
        #[serde(default)]
        convention: Convention,
    },
    AbsShift {
        #[serde(default)]
        params: ShiftParams,
    },
    SignShift {
        #[serde(default)]
        params: ShiftParams,
    },
    ScaledSin {
        #[serde(default)]
        params: SinParams,
    },
    DenseIndicator {
        #[serde(default)]
        params: DenseParams,
    },
    Product {
        factors: Vec<FunctionSpec>,
    },
    Sum {
        terms: Vec<FunctionSpec>,
    },
    Scale {
        factor: f64,
        of: Box<FunctionSpec>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<Interval>,
    #[serde(flatten)]
    pub body: SpecBody,
}

impl FunctionSpec {
    pub fn new(body: SpecBody) -> Self {
        FunctionSpec { domain: None, body }
    }

    pub fn with_domain(mut self, domain: Interval) -> Self {
        self.domain = Some(domain);
        self
    }

    pub fn polynomial(coeffs: Vec<f64>) -> Self {
        FunctionSpec::new(SpecBody::PiecewisePolynomial {
            breakpoints: None,
            pieces: vec![coeffs],
            convention: Convention::Left,
        })
    }

    pub fn constant(c: f64) -> Self {
        FunctionSpec::polynomial(vec![c])
    }

    pub fn identity() -> Self {
        FunctionSpec::polynomial(vec![0.0, 1.0])
    }

    pub fn piecewise(breakpoints: Vec<f64>, pieces: Vec<Vec<f64>>, convention: Convention) -> Self {
        FunctionSpec::new(SpecBody::PiecewisePolynomial {
            breakpoints: Some(breakpoints),
            pieces,
            convention,
        })
    }

    pub fn step(breakpoints: Vec<f64>, values: Vec<f64>, convention: Convention) -> Self {
        FunctionSpec::new(SpecBody::Step {
            breakpoints: Some(breakpoints),
            values,
            convention,
        })
    }

    pub fn sin(amplitude: f64, frequency: f64, phase: f64) -> Self {
        FunctionSpec::new(SpecBody::ScaledSin {
            params: SinParams {
                amplitude,
                frequency,
                phase,
            },
        })
    }

    pub fn dense_indicator(subdomain: Option<Interval>, off: f64, on: f64) -> Self {
        FunctionSpec::new(SpecBody::DenseIndicator {
            params: DenseParams { subdomain, off, on },
        })
    }

    pub fn sum(terms: Vec<FunctionSpec>) -> Self {
        FunctionSpec::new(SpecBody::Sum { terms })
    }

    pub fn product(factors: Vec<FunctionSpec>) -> Self {
        FunctionSpec::new(SpecBody::Product { factors })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("function specs always serialize")
    }

    /// The declared domain, if any.
    pub fn declared_domain(&self) -> Option<Interval> {
        self.domain
    }

    pub fn build(&self, domain: Interval) -> Result<FunctionHandle> {
        if domain.is_degenerate() {
            return Err(Error::spec("$", "build domain must be nondegenerate"));
        }
        Ok(FunctionHandle::from_piecewise(self.build_at(domain, "$")?))
    }

    fn build_at(&self, domain: Interval, path: &str) -> Result<Piecewise> {
        let own = match self.domain {
            Some(d) => {
                if d.is_degenerate() {
                    return Err(Error::spec(
                        format!("{path}.domain"),
                        "domain must be nondegenerate",
                    ));
                }
                if !d.contains_interval(&domain) {
                    return Err(Error::spec(
                        format!("{path}.domain"),
                        format!("declared domain {d} does not cover {domain}"),
                    ));
                }
                d
            }
            None => domain,
        };
        let repr = self.body.build(own, path)?;
        Ok(if own == domain {
            repr
        } else {
            repr.restrict(domain.lo(), domain.hi())
        })
    }
}

fn check_breakpoints(
    bps: Option<&Vec<f64>>,
    pieces: usize,
    domain: Interval,
    path: &str,
) -> Result<Vec<f64>> {
    let bps = match bps {
        Some(b) => b.clone(),
        None if pieces == 1 => vec![domain.lo(), domain.hi()],
        None => {
            return Err(Error::spec(
                format!("{path}.breakpoints"),
                "breakpoints are required when there is more than one piece",
            ))
        }
    };
    if pieces == 0 {
        return Err(Error::spec(path, "at least one piece is required"));
    }
    if bps.len() != pieces + 1 {
        return Err(Error::spec(
            format!("{path}.breakpoints"),
            format!(
                "expected {} breakpoints for {pieces} pieces, found {}",
                pieces + 1,
                bps.len()
            ),
        ));
    }
    for (i, &b) in bps.iter().enumerate() {
        if !b.is_finite() {
            return Err(Error::spec(
                format!("{path}.breakpoints[{i}]"),
                "not finite",
            ));
        }
        if i > 0 && b <= bps[i - 1] {
            return Err(Error::spec(
                format!("{path}.breakpoints[{i}]"),
                format!(
                    "breakpoints must be strictly increasing ({} then {b})",
                    bps[i - 1]
                ),
            ));
        }
    }
    if bps[0] != domain.lo() || bps[pieces] != domain.hi() {
        return Err(Error::spec(
            format!("{path}.breakpoints"),
            format!(
                "breakpoints must start at {} and end at {}",
                domain.lo(),
                domain.hi()
            ),
        ));
    }
    Ok(bps)
}

fn pieces_with_convention(breaks: Vec<f64>, cells: Vec<Cell>, convention: Convention) -> Piecewise {
    let n = cells.len();
    let points = (0..=n)
        .map(|i| {
            let c = match (i, convention) {
                (0, _) => 0,
                (i, _) if i == n => n - 1,
                (i, Convention::Left) => i - 1,
                (i, Convention::Right) => i,
            };
            PointValue::of_cell(&cells[c], breaks[i])
        })
        .collect();
    Piecewise::new(breaks, cells, points)
}

impl SpecBody {
    fn build(&self, domain: Interval, path: &str) -> Result<Piecewise> {
        let (lo, hi) = (domain.lo(), domain.hi());
        match self {
            SpecBody::PiecewisePolynomial {
                breakpoints,
                pieces,
                convention,
            } => {
                let breaks = check_breakpoints(breakpoints.as_ref(), pieces.len(), domain, path)?;
                let mut cells = Vec::with_capacity(pieces.len());
                for (i, coeffs) in pieces.iter().enumerate() {
                    if coeffs.is_empty() {
                        return Err(Error::spec(
                            format!("{path}.pieces[{i}]"),
                            "empty coefficient list",
                        ));
                    }
                    if let Some(j) = coeffs.iter().position(|c| !c.is_finite()) {
                        return Err(Error::spec(
                            format!("{path}.pieces[{i}][{j}]"),
                            "not finite",
                        ));
                    }
                    cells.push(Cell::Poly(Poly::new(coeffs.clone())));
                }
                Ok(pieces_with_convention(breaks, cells, *convention))
            }
            SpecBody::Step {
                breakpoints,
                values,
                convention,
            } => {
                let breaks = check_breakpoints(breakpoints.as_ref(), values.len(), domain, path)?;
                if let Some(j) = values.iter().position(|c| !c.is_finite()) {
                    return Err(Error::spec(format!("{path}.values[{j}]"), "not finite"));
                }
                let cells = values.iter().map(|&v| Cell::constant(v)).collect();
                Ok(pieces_with_convention(breaks, cells, *convention))
            }
            SpecBody::AbsShift { params } => {
                let s = finite(params.shift, format!("{path}.params.shift"))?;
                let left = Cell::Poly(Poly::new(vec![s, -1.0]));
                let right = Cell::Poly(Poly::new(vec![-s, 1.0]));
                Ok(split_at(lo, hi, s, left, right, |x| (x - s).abs()))
            }
            SpecBody::SignShift { params } => {
                let s = finite(params.shift, format!("{path}.params.shift"))?;
                let sign = |x: f64| {
                    if x > s {
                        1.0
                    } else if x < s {
                        -1.0
                    } else {
                        0.0
                    }
                };
                Ok(split_at(
                    lo,
                    hi,
                    s,
                    Cell::constant(-1.0),
                    Cell::constant(1.0),
                    sign,
                ))
            }
            SpecBody::ScaledSin { params } => {
                for (name, v) in [
                    ("amplitude", params.amplitude),
                    ("frequency", params.frequency),
                    ("phase", params.phase),
                ] {
                    finite(v, format!("{path}.params.{name}"))?;
                }
                Ok(Piecewise::single(
                    lo,
                    hi,
                    Cell::Sin(Sinusoid {
                        amplitude: params.amplitude,
                        frequency: params.frequency,
                        phase: params.phase,
                        offset: 0.0,
                    }),
                ))
            }
            SpecBody::DenseIndicator { params } => {
                finite(params.on, format!("{path}.params.on"))?;
                finite(params.off, format!("{path}.params.off"))?;
                let sub = params.subdomain.unwrap_or(domain);
                if sub.is_degenerate() || !domain.contains_interval(&sub) {
                    return Err(Error::spec(
                        format!("{path}.params.subdomain"),
                        format!("subdomain {sub} must be nondegenerate and inside {domain}"),
                    ));
                }
                let dense = Cell::dense(Poly::constant(params.on), Poly::constant(params.off));
                let dense_pt = PointValue {
                    on: params.on,
                    off: params.off,
                };
                let mut breaks = Vec::new();
                let mut cells = Vec::new();
                let mut points = Vec::new();
                if sub.lo() > lo {
                    breaks.push(lo);
                    points.push(PointValue::uniform(0.0));
                    cells.push(Cell::constant(0.0));
                }
                breaks.push(sub.lo());
                points.push(dense_pt);
                cells.push(dense);
                breaks.push(sub.hi());
                points.push(dense_pt);
                if sub.hi() < hi {
                    cells.push(Cell::constant(0.0));
                    breaks.push(hi);
                    points.push(PointValue::uniform(0.0));
                }
                Ok(Piecewise::new(breaks, cells, points))
            }
            SpecBody::Product { factors } => fold(factors, domain, path, "factors", super::Op::Mul),
            SpecBody::Sum { terms } => fold(terms, domain, path, "terms", super::Op::Add),
            SpecBody::Scale { factor, of } => {
                let s = finite(*factor, format!("{path}.factor"))?;
                let inner = of.build_at(domain, &format!("{path}.of"))?;
                Ok(inner.map_cells(
                    |c| c.scale(s),
                    |p| PointValue::combine(super::Op::Mul, p, PointValue::uniform(s)),
                ))
            }
        }
    }
}

fn finite(v: f64, location: String) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::spec(location, "not finite"))
    }
}

/// Two cells meeting at `s` (when `s` is interior), with point values from
/// the defining formula.
fn split_at(
    lo: f64,
    hi: f64,
    s: f64,
    left: Cell,
    right: Cell,
    value: impl Fn(f64) -> f64,
) -> Piecewise {
    let (breaks, cells) = if s > lo && s < hi {
        (vec![lo, s, hi], vec![left, right])
    } else if s >= hi {
        (vec![lo, hi], vec![left])
    } else {
        (vec![lo, hi], vec![right])
    };
    let points = breaks
        .iter()
        .map(|&x| PointValue::uniform(value(x)))
        .collect();
    Piecewise::new(breaks, cells, points)
}

fn fold(
    specs: &[FunctionSpec],
    domain: Interval,
    path: &str,
    field: &str,
    op: super::Op,
) -> Result<Piecewise> {
    let mut acc: Option<Piecewise> = None;
    for (i, s) in specs.iter().enumerate() {
        let p = s.build_at(domain, &format!("{path}.{field}[{i}]"))?;
        acc = Some(match acc {
            None => p,
            Some(a) => a.combine(op, &p),
        });
    }
    acc.ok_or_else(|| Error::spec(format!("{path}.{field}"), "must not be empty"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::TagKind;

    fn unit() -> Interval {
        Interval::unit()
    }

    #[test]
    fn parses_documented_example() {
        let text = r#"{"kind": "piecewise-polynomial", "domain": [0, 1],
            "breakpoints": [0, 0.5, 1], "pieces": [[0], [0, 1]], "convention": "left"}"#;
        let spec = FunctionSpec::from_json(text).unwrap();
        let h = spec.build(unit()).unwrap();
        assert_eq!(h.eval(0.5), 0.0);
        assert_eq!(h.eval(0.75), 0.75);
        let back = FunctionSpec::from_json(&spec.to_json()).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn identity_range() {
        let h = FunctionSpec::identity().build(unit()).unwrap();
        assert_eq!(h.range(&Interval::new(0.25, 0.5).unwrap()), (0.25, 0.5));
    }

    #[test]
    fn sine_range_over_half_period() {
        let d = Interval::domain(0.0, std::f64::consts::PI).unwrap();
        let h = FunctionSpec::sin(1.0, 1.0, 0.0).build(d).unwrap();
        assert_eq!(h.range(&d), (0.0, 1.0));
    }

    #[test]
    fn dense_indicator_on_subdomain() {
        let spec = FunctionSpec::dense_indicator(Some(Interval::new(0.0, 0.5).unwrap()), 0.0, 1.0);
        let h = spec.build(unit()).unwrap();
        assert_eq!(h.range(&Interval::new(0.1, 0.2).unwrap()), (0.0, 1.0));
        assert_eq!(h.range(&Interval::new(0.6, 0.9).unwrap()), (0.0, 0.0));
        assert_eq!(h.eval_tagged(0.7, Some(TagKind::On)), 0.0);
        assert_eq!(h.eval_tagged(0.2, Some(TagKind::On)), 1.0);
    }

    #[test]
    fn step_conventions() {
        let left = FunctionSpec::step(vec![0.0, 0.5, 1.0], vec![0.0, 1.0], Convention::Left)
            .build(unit())
            .unwrap();
        let right = FunctionSpec::step(vec![0.0, 0.5, 1.0], vec![0.0, 1.0], Convention::Right)
            .build(unit())
            .unwrap();
        assert_eq!(left.eval(0.5), 0.0);
        assert_eq!(right.eval(0.5), 1.0);
        // (0.5, 0.7] only sees the right piece for the left convention.
        let iv = Interval::new(0.5, 0.7).unwrap();
        assert_eq!(left.range(&iv), (0.0, 1.0));
        assert_eq!(right.range(&iv), (1.0, 1.0));
    }

    #[test]
    fn shifts() {
        let s = FunctionSpec::new(SpecBody::AbsShift {
            params: ShiftParams { shift: 0.3 },
        })
        .build(unit())
        .unwrap();
        assert_eq!(s.range(&unit()), (0.0, 0.7));
        let g = FunctionSpec::new(SpecBody::SignShift {
            params: ShiftParams { shift: 0.3 },
        })
        .build(unit())
        .unwrap();
        assert_eq!(g.eval(0.3), 0.0);
        assert_eq!(g.range(&Interval::new(0.3, 0.5).unwrap()), (0.0, 1.0));
        assert_eq!(g.range(&Interval::new(0.0, 0.29).unwrap()), (-1.0, -1.0));
    }

    #[test]
    fn malformed_specs_report_location() {
        let bad = FunctionSpec::piecewise(
            vec![0.0, 0.6, 0.5, 1.0],
            vec![vec![1.0]; 3],
            Convention::Left,
        );
        match bad.build(unit()) {
            Err(Error::Spec { location, .. }) => assert_eq!(location, "$.breakpoints[2]"),
            other => panic!("unexpected {other:?}"),
        }
        let empty = FunctionSpec::piecewise(
            vec![0.0, 0.5, 1.0],
            vec![vec![1.0], vec![]],
            Convention::Left,
        );
        match empty.build(unit()) {
            Err(Error::Spec { location, .. }) => assert_eq!(location, "$.pieces[1]"),
            other => panic!("unexpected {other:?}"),
        }
        let nested = FunctionSpec::product(vec![FunctionSpec::identity(), empty]);
        match nested.build(unit()) {
            Err(Error::Spec { location, .. }) => assert_eq!(location, "$.factors[1].pieces[1]"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(FunctionSpec::from_json("{\"kind\": \"nope\"}").is_err());
    }

    #[test]
    fn declared_domain_must_cover() {
        let spec = FunctionSpec::identity().with_domain(Interval::new(0.0, 0.5).unwrap());
        assert!(spec.build(unit()).is_err());
        let spec = FunctionSpec::identity().with_domain(Interval::new(0.0, 2.0).unwrap());
        let h = spec.build(unit()).unwrap();
        assert_eq!(h.domain(), unit());
    }

    #[test]
    fn glued_dense_indicator() {
        // dense on [0, 0.5], x on (0.5, 1]
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
        assert_eq!(f.range(&Interval::new(0.6, 0.8).unwrap()), (0.6, 0.8));
        assert_eq!(f.range(&Interval::new(0.0, 0.25).unwrap()), (0.0, 1.0));
        assert_eq!(f.dense_values_at(0.5), Some((1.0, 0.0)));
        assert_eq!(f.eval(0.75), 0.75);
        let certs = f.osc_lower_uniform();
        assert_eq!(certs.len(), 1);
        assert_eq!(certs[0].gap_floor(), 0.5);
    }
}
