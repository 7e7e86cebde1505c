//! Seeded generators for catalog functions, partitions and taggings.

use rand::Rng;

use crate::catalog::{Convention, FunctionSpec, Interval, TagKind};
use crate::partition::{DoubleTaggedPartition, Partition, Tag, TaggedPartition};

pub const MAX_PIECES: usize = 8;
pub const MAX_DEGREE: usize = 3;
pub const COEFF_BOUND: f64 = 2.0;

fn breakpoints<R: Rng>(rng: &mut R, domain: Interval, pieces: usize) -> Vec<f64> {
    let mut interior: Vec<f64> = (1..pieces)
        .map(|_| domain.lo() + domain.width() * rng.random_range(0.02..0.98))
        .collect();
    interior.sort_by(f64::total_cmp);
    interior.dedup();
    let mut pts = Vec::with_capacity(interior.len() + 2);
    pts.push(domain.lo());
    pts.extend(interior);
    pts.push(domain.hi());
    pts
}

fn convention<R: Rng>(rng: &mut R) -> Convention {
    if rng.random_bool(0.5) {
        Convention::Left
    } else {
        Convention::Right
    }
}

fn coeff<R: Rng>(rng: &mut R) -> f64 {
    rng.random_range(-COEFF_BOUND..=COEFF_BOUND)
}

/// Piecewise polynomial with at most 8 pieces of degree at most 3.
pub fn piecewise_polynomial<R: Rng>(rng: &mut R, domain: Interval) -> FunctionSpec {
    let k = rng.random_range(1..=MAX_PIECES);
    let breaks = breakpoints(rng, domain, k);
    let pieces = (1..breaks.len())
        .map(|_| {
            let deg = rng.random_range(0..=MAX_DEGREE);
            (0..=deg).map(|_| coeff(rng)).collect()
        })
        .collect();
    FunctionSpec::piecewise(breaks, pieces, convention(rng))
}

pub fn step<R: Rng>(rng: &mut R, domain: Interval) -> FunctionSpec {
    let k = rng.random_range(1..=MAX_PIECES);
    let breaks = breakpoints(rng, domain, k);
    let values = (1..breaks.len()).map(|_| coeff(rng)).collect();
    FunctionSpec::step(breaks, values, convention(rng))
}

/// A piecewise polynomial three times in four, otherwise a step function.
pub fn function<R: Rng>(rng: &mut R, domain: Interval) -> FunctionSpec {
    if rng.random_bool(0.75) {
        piecewise_polynomial(rng, domain)
    } else {
        step(rng, domain)
    }
}

/// Partition with 1 to `max_cells` subintervals at random points.
pub fn partition<R: Rng>(rng: &mut R, domain: Interval, max_cells: usize) -> Partition {
    let n = rng.random_range(1..=max_cells.max(1));
    let mut pts: Vec<f64> = (1..n)
        .map(|_| domain.lo() + domain.width() * rng.random::<f64>())
        .filter(|&x| domain.lo() < x && x < domain.hi())
        .collect();
    pts.push(domain.lo());
    pts.push(domain.hi());
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    Partition::new(pts).expect("sorted distinct points")
}

fn tag<R: Rng>(rng: &mut R, a: f64, b: f64) -> Tag {
    let x = match rng.random_range(0..4) {
        0 => a,
        1 => b,
        _ => (a + (b - a) * rng.random::<f64>()).clamp(a, b),
    };
    let kind = if rng.random_bool(0.5) {
        TagKind::On
    } else {
        TagKind::Off
    };
    Tag {
        x,
        kind: Some(kind),
    }
}

/// Tags anywhere in each closed subinterval, endpoints included, with a
/// random tag-kind hint.
pub fn tags<R: Rng>(rng: &mut R, p: &Partition) -> Vec<Tag> {
    p.subintervals().map(|(a, b)| tag(rng, a, b)).collect()
}

pub fn tagged<R: Rng>(rng: &mut R, p: Partition) -> TaggedPartition {
    let t = tags(rng, &p);
    TaggedPartition::new(p, t).expect("tags lie in their subintervals")
}

pub fn double_tagged<R: Rng>(rng: &mut R, p: Partition) -> DoubleTaggedPartition {
    let y = tags(rng, &p);
    let z = tags(rng, &p);
    DoubleTaggedPartition::new(p, y, z).expect("tags lie in their subintervals")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_functions_build_and_respect_limits() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let spec = function(&mut rng, Interval::unit());
            let h = spec.build(Interval::unit()).unwrap();
            assert!(h.is_exact() && h.is_pointwise());
            assert!(h.breakpoints().len() <= MAX_PIECES + 1);
        }
    }

    #[test]
    fn generation_is_seeded() {
        let a = piecewise_polynomial(&mut ChaCha8Rng::seed_from_u64(3), Interval::unit());
        let b = piecewise_polynomial(&mut ChaCha8Rng::seed_from_u64(3), Interval::unit());
        assert_eq!(a, b);
    }

    #[test]
    fn partitions_cover_the_domain() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let p = partition(&mut rng, Interval::new(-1.0, 2.0).unwrap(), 20);
            assert_eq!(p.domain(), Interval::new(-1.0, 2.0).unwrap());
            assert!(p.len() <= 20);
            let dtp = double_tagged(&mut rng, p);
            assert_eq!(dtp.y().len(), dtp.partition().len());
        }
    }
}
