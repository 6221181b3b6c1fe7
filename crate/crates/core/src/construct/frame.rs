use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::arith::Rational;
use crate::lattice::DIM;

use super::{ConstructError, WeightedPointSet};

/// Integer image of a point set: every coordinate multiplied by one common denominator
/// `D`, so that the inner product of the unscaled frame is `(integer dot) / (8 D²)`.
#[derive(Clone, Debug)]
pub struct PointFrame {
    pub dimension: usize,
    pub denominator: i64,
    pub layers: Vec<Vec<[i64; DIM]>>,
    pub weights: Vec<Rational>,
    /// Integer dot of each layer's points with themselves.
    pub layer_norms: Vec<i64>,
}

impl PointFrame {
    pub fn new(set: &WeightedPointSet) -> Result<Self, ConstructError> {
        let mut d = num_bigint::BigInt::from(1);
        for (_, p) in set.points() {
            for c in &p.coords {
                d = d.lcm(c.denom());
            }
        }
        let denominator = d.to_i64().ok_or_else(|| ConstructError::Invalid("coordinate denominators too large".into()))?;
        let den = Rational::from(denominator);
        let mut layers = Vec::new();
        for layer in &set.layers {
            let mut pts = Vec::with_capacity(layer.points.len());
            for p in &layer.points {
                let mut out = [0i64; DIM];
                for (o, c) in out.iter_mut().zip(&p.coords) {
                    *o = (c * &den)
                        .numer()
                        .to_i64()
                        .filter(|v| v.unsigned_abs() < 1 << 28)
                        .ok_or_else(|| ConstructError::Invalid("coordinate too large for the integer frame".into()))?;
                }
                pts.push(out);
            }
            layers.push(pts);
        }
        let scale = 8 * denominator * denominator;
        let layer_norms = set
            .layers
            .iter()
            .map(|l| {
                (&l.radius_squared * Rational::from(scale))
                    .numer()
                    .to_i64()
                    .ok_or_else(|| ConstructError::Invalid("radius too large".into()))
            })
            .collect::<Result<_, _>>()?;
        Ok(PointFrame { dimension: set.dimension, denominator, layers, weights: set.layers.iter().map(|l| l.weight.clone()).collect(), layer_norms })
    }

    /// `8 D²`: divide an integer dot by this to get the exact inner product.
    pub fn scale(&self) -> i64 {
        8 * self.denominator * self.denominator
    }

    pub fn dot(a: &[i64; DIM], b: &[i64; DIM]) -> i64 {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    pub fn inner(&self, integer_dot: i64) -> Rational {
        Rational::frac(integer_dot, self.scale())
    }

    pub fn pair_histogram(&self) -> PairHistogram {
        let mut counts = BTreeMap::new();
        for (i, li) in self.layers.iter().enumerate() {
            for (j, lj) in self.layers.iter().enumerate() {
                let h = li
                    .par_iter()
                    .fold(BTreeMap::<i64, u64>::new, |mut acc, x| {
                        for y in lj {
                            *acc.entry(Self::dot(x, y)).or_default() += 1;
                        }
                        acc
                    })
                    .reduce(BTreeMap::new, |mut a, b| {
                        for (k, v) in b {
                            *a.entry(k).or_default() += v;
                        }
                        a
                    });
                for (dot, c) in h {
                    counts.insert((i, j, dot), c);
                }
            }
        }
        PairHistogram { dimension: self.dimension, frame_scale: self.scale(), layer_norms: self.layer_norms.clone(), weights: self.weights.clone(), counts }
    }
}

/// Counts of ordered pairs `(x, y)` (diagonal included) keyed by `(layer of x, layer of y,
/// integer dot)`. Every pairwise sum over a design that depends only on the layers and the
/// inner product can be evaluated exactly from this.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairHistogram {
    pub dimension: usize,
    pub frame_scale: i64,
    pub layer_norms: Vec<i64>,
    pub weights: Vec<Rational>,
    pub counts: BTreeMap<(usize, usize, i64), u64>,
}

impl PairHistogram {
    pub fn layers(&self) -> usize {
        self.layer_norms.len()
    }

    pub fn total_pairs(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Squared radius of layer `i` in the unscaled frame.
    pub fn radius_squared(&self, i: usize) -> Rational {
        Rational::frac(self.layer_norms[i], self.frame_scale)
    }

    /// `(layer_i, layer_j, x·y, count)` with exact inner products.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, Rational, u64)> + '_ {
        self.counts.iter().map(|(&(i, j, d), &c)| (i, j, Rational::frac(d, self.frame_scale), c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{Layer, ProjectedPoint};

    #[test]
    fn histogram_of_a_cross_polytope() {
        let mut pts = Vec::new();
        for i in 0..3 {
            for s in [1, -1] {
                let mut p = ProjectedPoint::zero();
                p.coords[i] = Rational::frac(s, 3);
                pts.push(p);
            }
        }
        let set = WeightedPointSet::new(
            3,
            vec![Layer { points: pts, weight: Rational::one(), radius_squared: Rational::frac(1, 72) }],
        )
        .unwrap();
        let frame = set.frame().unwrap();
        assert_eq!(frame.denominator, 3);
        let h = frame.pair_histogram();
        assert_eq!(h.total_pairs(), 36);
        let by_inner: Vec<(Rational, u64)> = h.entries().map(|(_, _, r, c)| (r, c)).collect();
        assert_eq!(
            by_inner,
            vec![(Rational::frac(-1, 72), 6), (Rational::zero(), 24), (Rational::frac(1, 72), 6)]
        );
    }
}
