use std::collections::BTreeMap;

use crate::arith::Rational;

use super::{ConstructError, PairHistogram, PointFrame, WeightedPointSet};

/// Which copy of which layer a point of Z comes from: `Plus(i)` is `(aᵢx, bᵢ)` for `x` in
/// layer `i`, `Minus(i)` its negation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ScaleLabel {
    Plus(usize),
    Minus(usize),
}

impl ScaleLabel {
    pub fn layer(self) -> usize {
        match self {
            ScaleLabel::Plus(i) | ScaleLabel::Minus(i) => i,
        }
    }

    pub fn sign(self) -> i64 {
        match self {
            ScaleLabel::Plus(_) => 1,
            ScaleLabel::Minus(_) => -1,
        }
    }
}

impl std::fmt::Display for ScaleLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ScaleLabel::Plus(i) => write!(f, "+{}", i + 1),
            ScaleLabel::Minus(i) => write!(f, "-{}", i + 1),
        }
    }
}

/// A point of Z ⊂ S²² ⊂ R²² ⊕ R, kept as a reference into the design.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SymbolicSpherePoint {
    pub label: ScaleLabel,
    pub index: usize,
}

/// The lifted set Z. With the design rescaled so that r₁ = 1 and r₂ = √11, the point
/// `(aᵢx, bᵢ)` has `aᵢ = αᵢ/√5`, `bᵢ = βᵢ/√5` with α = (2, 2/3), β = (1, 1/3); all pairwise
/// inner products are then rational.
#[derive(Clone, Debug)]
pub struct SphereSet {
    pub points: Vec<SymbolicSpherePoint>,
    alpha: [Rational; 2],
    beta: [Rational; 2],
    /// r₁² of the design the points refer to, used to rescale its inner products.
    unit: Rational,
}

pub fn build_z(design: &WeightedPointSet) -> Result<SphereSet, ConstructError> {
    if design.layers.len() != 2 {
        return Err(ConstructError::Invalid(format!("Z needs two layers, found {}", design.layers.len())));
    }
    let r1 = &design.layers[0].radius_squared;
    let ratio = &design.layers[1].radius_squared / r1;
    if ratio != Rational::from(11) {
        return Err(ConstructError::Invalid(format!("Z needs r2²/r1² = 11, found {ratio}")));
    }
    let mut points = Vec::with_capacity(2 * design.len());
    for label in [ScaleLabel::Plus(0), ScaleLabel::Plus(1), ScaleLabel::Minus(0), ScaleLabel::Minus(1)] {
        points.extend((0..design.layers[label.layer()].points.len()).map(|index| SymbolicSpherePoint { label, index }));
    }
    Ok(SphereSet {
        points,
        alpha: [Rational::from(2), Rational::frac(2, 3)],
        beta: [Rational::one(), Rational::frac(1, 3)],
        unit: r1.clone(),
    })
}

impl SphereSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `aᵢaⱼ` and `bᵢbⱼ` for the two source layers.
    pub fn lift_products(&self, i: usize, j: usize) -> (Rational, Rational) {
        let five = Rational::from(5);
        (&self.alpha[i] * &self.alpha[j] / &five, &self.beta[i] * &self.beta[j] / &five)
    }

    /// Inner product of two lifted points, given the inner product `x·y` of their sources
    /// in the design's own scale.
    pub fn lifted_inner(&self, p: ScaleLabel, q: ScaleLabel, source_inner: &Rational) -> Rational {
        let (aa, bb) = self.lift_products(p.layer(), q.layer());
        let v = aa * source_inner / &self.unit + bb;
        if p.sign() * q.sign() < 0 {
            -v
        } else {
            v
        }
    }

    pub fn inner(&self, design: &WeightedPointSet, p: &SymbolicSpherePoint, q: &SymbolicSpherePoint) -> Rational {
        let x = &design.layers[p.label.layer()].points[p.index];
        let y = &design.layers[q.label.layer()].points[q.index];
        self.lifted_inner(p.label, q.label, &x.inner(y))
    }

    /// Ordered-pair counts of inner products over Z × Z, derived from the design's pair
    /// histogram (each source pair contributes its four sign combinations).
    pub fn inner_histogram(&self, design: &PairHistogram) -> BTreeMap<Rational, u64> {
        let mut out = BTreeMap::new();
        for (i, j, ip, count) in design.entries() {
            let v = self.lifted_inner(ScaleLabel::Plus(i), ScaleLabel::Plus(j), &ip);
            *out.entry(-&v).or_default() += 2 * count;
            *out.entry(v).or_default() += 2 * count;
        }
        out
    }

    /// The same histogram by direct pairing of all points of Z through an integer frame.
    pub fn inner_histogram_direct(&self, frame: &PointFrame) -> BTreeMap<Rational, u64> {
        let mut raw: BTreeMap<(ScaleLabel, ScaleLabel, i64), u64> = BTreeMap::new();
        for p in &self.points {
            let x = &frame.layers[p.label.layer()][p.index];
            for q in &self.points {
                let y = &frame.layers[q.label.layer()][q.index];
                *raw.entry((p.label, q.label, PointFrame::dot(x, y))).or_default() += 1;
            }
        }
        let mut out = BTreeMap::new();
        for ((p, q, d), c) in raw {
            *out.entry(self.lifted_inner(p, q, &frame.inner(d))).or_default() += c;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dummy() -> SphereSet {
        SphereSet {
            points: Vec::new(),
            alpha: [Rational::from(2), Rational::frac(2, 3)],
            beta: [Rational::one(), Rational::frac(1, 3)],
            unit: Rational::frac(12, 5),
        }
    }

    #[test]
    fn lifted_points_are_unit() {
        let z = dummy();
        let r1 = Rational::frac(12, 5);
        assert_eq!(z.lifted_inner(ScaleLabel::Plus(0), ScaleLabel::Plus(0), &r1), Rational::one());
        let r2 = Rational::frac(132, 5);
        assert_eq!(z.lifted_inner(ScaleLabel::Minus(1), ScaleLabel::Minus(1), &r2), Rational::one());
        assert_eq!(z.lifted_inner(ScaleLabel::Plus(1), ScaleLabel::Minus(1), &r2), -Rational::one());
    }

    #[test]
    fn cross_layer_inner_product() {
        // x·y = r₁r₂/√11 = r₁² in the design scale: (4/15)·1 + 1/15
        let z = dummy();
        let v = z.lifted_inner(ScaleLabel::Plus(0), ScaleLabel::Plus(1), &Rational::frac(12, 5));
        assert_eq!(v, Rational::frac(1, 3));
    }
}
