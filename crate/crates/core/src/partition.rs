//! Partitions of a closed interval, tagging strategies and refinement.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::catalog::{FunctionHandle, Interval, TagKind};
use crate::error::{Error, Result};

/// Strictly increasing breakpoints `x_0 < x_1 < … < x_n`, `n >= 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Partition {
    points: Vec<f64>,
}

impl TryFrom<Vec<f64>> for Partition {
    type Error = Error;

    fn try_from(points: Vec<f64>) -> Result<Self> {
        Partition::new(points)
    }
}

impl From<Partition> for Vec<f64> {
    fn from(p: Partition) -> Self {
        p.points
    }
}

impl Partition {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::Partition(format!(
                "need at least two points, got {}",
                points.len()
            )));
        }
        if let Some(i) = points.iter().position(|x| !x.is_finite()) {
            return Err(Error::Partition(format!("point {i} is not finite")));
        }
        if let Some(i) = points.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::Partition(format!(
                "points must be strictly increasing (x[{i}] = {}, x[{}] = {})",
                points[i],
                i + 1,
                points[i + 1]
            )));
        }
        Ok(Partition { points })
    }

    /// The one-cell partition `{a, b}`.
    pub fn trivial(domain: Interval) -> Self {
        Partition {
            points: vec![domain.lo(), domain.hi()],
        }
    }

    pub fn uniform(domain: Interval, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "a uniform partition needs at least one subinterval".into(),
            ));
        }
        let (a, b) = (domain.lo(), domain.hi());
        let h = b - a;
        let mut points: Vec<f64> = (0..n).map(|k| a + h * (k as f64 / n as f64)).collect();
        points.push(b);
        Partition::new(points)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    /// Number of subintervals.
    pub fn len(&self) -> usize {
        self.points.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn domain(&self) -> Interval {
        Interval::new(self.points[0], self.points[self.points.len() - 1])
            .expect("partition endpoints are ordered")
    }

    pub fn subinterval(&self, k: usize) -> Interval {
        Interval::new(self.points[k], self.points[k + 1]).expect("partition points are ordered")
    }

    pub fn subintervals(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.points.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn widths(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.windows(2).map(|w| w[1] - w[0])
    }

    pub fn mesh(&self) -> f64 {
        self.widths().fold(0.0, f64::max)
    }

    /// Whether every point of `coarser` is a point of `self`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        let mut it = self.points.iter();
        coarser.points.iter().all(|x| it.by_ref().any(|y| y == x))
    }

    /// Insert the midpoint of subinterval `k`.
    pub fn bisect(&self, k: usize) -> Result<Partition> {
        let (a, b) = (self.points[k], self.points[k + 1]);
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            return Err(Error::Partition(format!(
                "subinterval [{a}, {b}] is too narrow to bisect"
            )));
        }
        let mut points = Vec::with_capacity(self.points.len() + 1);
        points.extend_from_slice(&self.points[..=k]);
        points.push(m);
        points.extend_from_slice(&self.points[k + 1..]);
        Ok(Partition { points })
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.points)
    }
}

pub fn uniform(domain: Interval, n: usize) -> Result<Partition> {
    Partition::uniform(domain, n)
}

pub fn mesh(p: &Partition) -> f64 {
    p.mesh()
}

/// Bisect the subinterval with the largest score, ties going to the lowest
/// index. When every score is zero the widest subinterval is bisected.
pub fn refine_worst(p: &Partition, scores: &[f64]) -> Result<Partition> {
    if scores.len() != p.len() {
        return Err(Error::InvalidArgument(format!(
            "expected {} scores, got {}",
            p.len(),
            scores.len()
        )));
    }
    if let Some(i) = scores.iter().position(|s| !s.is_finite() || *s < 0.0) {
        return Err(Error::InvalidArgument(format!(
            "score {i} must be finite and nonnegative, got {}",
            scores[i]
        )));
    }
    let pick = |vals: &mut dyn Iterator<Item = f64>| {
        let mut best = (0usize, f64::NEG_INFINITY);
        for (i, v) in vals.enumerate() {
            if v > best.1 {
                best = (i, v);
            }
        }
        best
    };
    let (k, top) = pick(&mut scores.iter().copied());
    let k = if top > 0.0 {
        k
    } else {
        pick(&mut p.widths()).0
    };
    p.bisect(k)
}

/// A tag point with an optional dense-oscillation hint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tag {
    pub x: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<TagKind>,
}

impl Tag {
    pub fn at(x: f64) -> Self {
        Tag { x, kind: None }
    }

    pub fn eval(&self, h: &FunctionHandle) -> f64 {
        h.eval_tagged(self.x, self.kind)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TagStrategy {
    Left,
    Right,
    Midpoint,
    InfSeeking,
    SupSeeking,
}

impl FromStr for TagStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "left" => TagStrategy::Left,
            "right" => TagStrategy::Right,
            "midpoint" => TagStrategy::Midpoint,
            "inf-seeking" => TagStrategy::InfSeeking,
            "sup-seeking" => TagStrategy::SupSeeking,
            other => {
                return Err(Error::InvalidArgument(format!(
                    "unknown tag strategy {other:?}"
                )))
            }
        })
    }
}

fn check_tags(p: &Partition, tags: &[Tag], name: &str) -> Result<()> {
    if tags.len() != p.len() {
        return Err(Error::Partition(format!(
            "{name}: expected {} tags, got {}",
            p.len(),
            tags.len()
        )));
    }
    for (k, (t, (a, b))) in tags.iter().zip(p.subintervals()).enumerate() {
        if !(a <= t.x && t.x <= b) {
            return Err(Error::Partition(format!(
                "{name}[{k}] = {} is outside [{a}, {b}]",
                t.x
            )));
        }
    }
    Ok(())
}

/// A partition with one tag `y_k ∈ [x_{k-1}, x_k]` per subinterval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaggedPartition {
    partition: Partition,
    tags: Vec<Tag>,
}

impl TaggedPartition {
    pub fn new(partition: Partition, tags: Vec<Tag>) -> Result<Self> {
        check_tags(&partition, &tags, "tags")?;
        Ok(TaggedPartition { partition, tags })
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn tags(&self) -> &[Tag] {
        &self.tags
    }

    /// `(x_{k-1}, x_k, y_k)` triples.
    pub fn cells(&self) -> impl Iterator<Item = (f64, f64, Tag)> + '_ {
        self.partition
            .subintervals()
            .zip(self.tags.iter().copied())
            .map(|((a, b), t)| (a, b, t))
    }
}

/// A partition with two independent tags `y_k, z_k` per subinterval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DoubleTaggedPartition {
    partition: Partition,
    y: Vec<Tag>,
    z: Vec<Tag>,
}

impl DoubleTaggedPartition {
    pub fn new(partition: Partition, y: Vec<Tag>, z: Vec<Tag>) -> Result<Self> {
        check_tags(&partition, &y, "y")?;
        check_tags(&partition, &z, "z")?;
        Ok(DoubleTaggedPartition { partition, y, z })
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn y(&self) -> &[Tag] {
        &self.y
    }

    pub fn z(&self) -> &[Tag] {
        &self.z
    }

    pub fn y_tagged(&self) -> TaggedPartition {
        TaggedPartition {
            partition: self.partition.clone(),
            tags: self.y.clone(),
        }
    }

    pub fn z_tagged(&self) -> TaggedPartition {
        TaggedPartition {
            partition: self.partition.clone(),
            tags: self.z.clone(),
        }
    }
}

/// Tag every subinterval of `p`. The inf- and sup-seeking strategies consult
/// the range oracle of `h`: tags attain the subinterval inf/sup exactly, or
/// to within one ulp of position where the extremum is only approached.
pub fn tag(
    p: &Partition,
    strategy: TagStrategy,
    h: Option<&FunctionHandle>,
) -> Result<TaggedPartition> {
    let tags = match strategy {
        TagStrategy::Left => p.subintervals().map(|(a, _)| Tag::at(a)).collect(),
        TagStrategy::Right => p.subintervals().map(|(_, b)| Tag::at(b)).collect(),
        TagStrategy::Midpoint => p
            .subintervals()
            .map(|(a, b)| Tag::at(0.5 * (a + b)))
            .collect(),
        TagStrategy::InfSeeking | TagStrategy::SupSeeking => {
            let h = h.ok_or_else(|| {
                Error::InvalidArgument("inf/sup-seeking tags need a function".into())
            })?;
            if !h.domain().contains_interval(&p.domain()) {
                return Err(Error::DomainMismatch(h.domain(), p.domain()));
            }
            p.subintervals()
                .map(|(a, b)| {
                    let r = h.range_witness(&Interval::new(a, b).expect("ordered"));
                    let w = if strategy == TagStrategy::InfSeeking {
                        r.argmin
                    } else {
                        r.argmax
                    };
                    Tag {
                        x: w.x,
                        kind: w.kind,
                    }
                })
                .collect()
        }
    };
    TaggedPartition::new(p.clone(), tags)
}
