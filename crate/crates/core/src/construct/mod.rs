//! Orthogonal projection of Leech coset shells onto the complement of the anchors, the
//! weighted two-layer design built from them, and the auxiliary sets used to cross-check it.

mod frame;
mod io;
mod sphere;

pub use frame::{PairHistogram, PointFrame};
pub use io::{read_design, write_design};
pub use sphere::{build_z, ScaleLabel, SphereSet, SymbolicSpherePoint};

use std::collections::BTreeSet;

use thiserror::Error;

use crate::arith::{inverse, ArithError, Rational, RationalMatrix};
use crate::lattice::{
    validate_anchors, CosetConstraint, LatticeError, LatticeVector, ShellEnumerator, DIM,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("{what}: expected {expected} points, found {found}")]
    Cardinality { what: String, expected: usize, found: usize },
    #[error("invalid point set: {0}")]
    Invalid(String),
}

/// A point of R^24 (√8-scaled frame, exact rational coordinates) lying in the subspace
/// orthogonal to the anchors it was projected against.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjectedPoint {
    pub coords: Vec<Rational>,
}

impl ProjectedPoint {
    pub fn new(coords: Vec<Rational>) -> Result<Self, ConstructError> {
        if coords.len() != DIM {
            return Err(ConstructError::Invalid(format!("point has {} coordinates", coords.len())));
        }
        Ok(ProjectedPoint { coords })
    }

    pub fn from_lattice(v: &LatticeVector) -> Self {
        ProjectedPoint { coords: v.0.iter().map(|&c| Rational::from(i64::from(c))).collect() }
    }

    pub fn zero() -> Self {
        ProjectedPoint { coords: vec![Rational::zero(); DIM] }
    }

    /// Inner product of the unscaled frame (coordinate dot product divided by 8).
    pub fn inner(&self, other: &ProjectedPoint) -> Rational {
        let s: Rational = self.coords.iter().zip(&other.coords).map(|(a, b)| a * b).sum();
        s / Rational::from(8)
    }

    pub fn inner_lattice(&self, v: &LatticeVector) -> Rational {
        let s: Rational = self.coords.iter().zip(&v.0).map(|(a, &b)| a * Rational::from(i64::from(b))).sum();
        s / Rational::from(8)
    }

    pub fn norm(&self) -> Rational {
        self.inner(self)
    }

    pub fn scale(&self, k: &Rational) -> Self {
        ProjectedPoint { coords: self.coords.iter().map(|c| c * k).collect() }
    }

    pub fn neg(&self) -> Self {
        ProjectedPoint { coords: self.coords.iter().map(|c| -c).collect() }
    }

    pub fn sub(&self, other: &ProjectedPoint) -> Self {
        ProjectedPoint { coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Rational::is_zero)
    }

    /// Reflection in the hyperplane orthogonal to `mirror`; preserves norms and any
    /// subspace containing `mirror`.
    pub fn reflect(&self, mirror: &ProjectedPoint) -> Result<Self, ConstructError> {
        let f = Rational::from(2) * self.inner(mirror).checked_div(&mirror.norm())?;
        Ok(self.sub(&mirror.scale(&f)))
    }
}

impl std::fmt::Debug for ProjectedPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

/// Orthogonal projection of R^24 onto the complement of the span of some anchors.
#[derive(Clone, Debug)]
pub struct Projector {
    anchors: Vec<LatticeVector>,
    gram_inv: RationalMatrix,
}

impl Projector {
    pub fn new(anchors: &[LatticeVector]) -> Result<Self, ConstructError> {
        let gram: RationalMatrix = anchors
            .iter()
            .map(|u| anchors.iter().map(|v| Rational::frac(u.dot(v), 8)).collect())
            .collect();
        Ok(Projector { anchors: anchors.to_vec(), gram_inv: inverse(&gram)? })
    }

    /// Coefficients `c` of the anchor-space component of `x` (solution of the Gram system).
    pub fn coefficients(&self, x: &ProjectedPoint) -> Vec<Rational> {
        let rhs: Vec<Rational> = self.anchors.iter().map(|a| x.inner_lattice(a)).collect();
        crate::arith::mat_vec(&self.gram_inv, &rhs)
    }

    pub fn project_point(&self, x: &ProjectedPoint) -> ProjectedPoint {
        let c = self.coefficients(x);
        let mut coords = x.coords.clone();
        for (ci, a) in c.iter().zip(&self.anchors) {
            if ci.is_zero() {
                continue;
            }
            for (x, &av) in coords.iter_mut().zip(&a.0) {
                *x -= &(ci * Rational::from(i64::from(av)));
            }
        }
        ProjectedPoint { coords }
    }

    pub fn project(&self, x: &LatticeVector) -> ProjectedPoint {
        self.project_point(&ProjectedPoint::from_lattice(x))
    }

    pub fn anchors(&self) -> &[LatticeVector] {
        &self.anchors
    }
}

/// Projection onto the orthogonal complement of span(A, B).
pub fn project_ab(x: &LatticeVector, a: &LatticeVector, b: &LatticeVector) -> Result<ProjectedPoint, ConstructError> {
    Ok(Projector::new(&[*a, *b])?.project(x))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layer {
    pub points: Vec<ProjectedPoint>,
    pub weight: Rational,
    pub radius_squared: Rational,
}

/// Points on concentric spheres, one constant positive weight per sphere. `dimension` is
/// the dimension of the subspace the points live in (they are stored in R^24 coordinates).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedPointSet {
    pub dimension: usize,
    pub layers: Vec<Layer>,
}

impl WeightedPointSet {
    pub fn new(dimension: usize, layers: Vec<Layer>) -> Result<Self, ConstructError> {
        for (i, layer) in layers.iter().enumerate() {
            if !layer.weight.is_positive() {
                return Err(ConstructError::Invalid(format!("layer {i} has non-positive weight {}", layer.weight)));
            }
            if !layer.radius_squared.is_positive() {
                return Err(ConstructError::Invalid(format!("layer {i} has non-positive radius")));
            }
            if let Some(p) = layer.points.iter().find(|p| p.norm() != layer.radius_squared) {
                return Err(ConstructError::Invalid(format!(
                    "layer {i} point of squared norm {} off the sphere r2={}",
                    p.norm(),
                    layer.radius_squared
                )));
            }
        }
        Ok(WeightedPointSet { dimension, layers })
    }

    pub fn len(&self) -> usize {
        self.layers.iter().map(|l| l.points.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn points(&self) -> impl Iterator<Item = (usize, &ProjectedPoint)> {
        self.layers.iter().enumerate().flat_map(|(i, l)| l.points.iter().map(move |p| (i, p)))
    }

    pub fn total_weight(&self) -> Rational {
        self.layers.iter().map(|l| &l.weight * Rational::from(l.points.len() as i64)).sum()
    }

    pub fn frame(&self) -> Result<PointFrame, ConstructError> {
        PointFrame::new(self)
    }

    /// Copy with every point multiplied by `k > 0`.
    pub fn scaled(&self, k: &Rational) -> Self {
        let k2 = k * k;
        WeightedPointSet {
            dimension: self.dimension,
            layers: self
                .layers
                .iter()
                .map(|l| Layer {
                    points: l.points.iter().map(|p| p.scale(k)).collect(),
                    weight: l.weight.clone(),
                    radius_squared: &l.radius_squared * &k2,
                })
                .collect(),
        }
    }

    /// Copy with every weight multiplied by `k > 0`.
    pub fn reweighted(&self, k: &Rational) -> Self {
        let mut out = self.clone();
        for l in &mut out.layers {
            l.weight = &l.weight * k;
        }
        out
    }

    /// Copy with one point replaced by its reflection in the hyperplane orthogonal to
    /// `mirror` (stays on its sphere).
    pub fn with_point_reflected(&self, layer: usize, index: usize, mirror: &ProjectedPoint) -> Result<Self, ConstructError> {
        let mut out = self.clone();
        let p = out
            .layers
            .get_mut(layer)
            .and_then(|l| l.points.get_mut(index))
            .ok_or_else(|| ConstructError::Invalid(format!("no point {index} in layer {layer}")))?;
        *p = p.reflect(mirror)?;
        Ok(out)
    }

    /// Copy with one point removed.
    pub fn without_point(&self, layer: usize, index: usize) -> Self {
        let mut out = self.clone();
        if let Some(l) = out.layers.get_mut(layer) {
            if index < l.points.len() {
                l.points.remove(index);
            }
        }
        out
    }
}

/// Enumerates a coset shell and checks its size.
fn shell(
    enumerator: &dyn ShellEnumerator,
    what: &str,
    constraints: &[CosetConstraint],
    norm: i64,
    expected: usize,
) -> Result<Vec<LatticeVector>, ConstructError> {
    let set = enumerator.enumerate(constraints, &Rational::from(norm))?;
    if set.len() != expected {
        return Err(ConstructError::Cardinality { what: what.to_string(), expected, found: set.len() });
    }
    Ok(set)
}

/// The two Leech coset shells the design is projected from.
pub struct DesignSources {
    pub inner: Vec<LatticeVector>,
    pub outer: Vec<LatticeVector>,
}

pub fn design_sources(
    enumerator: &dyn ShellEnumerator,
    a: &LatticeVector,
    b: &LatticeVector,
) -> Result<DesignSources, ConstructError> {
    validate_anchors(a, b)?;
    let inner = shell(enumerator, "inner shell {(x,x)=6, (x,A)=3, (x,B)=-3}", &[CosetConstraint::new(*a, 3), CosetConstraint::new(*b, -3)], 6, 275)?;
    let outer = shell(enumerator, "outer shell {(x,x)=4, (x,A)=2, (x,B)=0}", &[CosetConstraint::new(*a, 2), CosetConstraint::new(*b, 0)], 4, 2025)?;
    Ok(DesignSources { inner, outer })
}

pub const INNER_WEIGHT: (i64, i64) = (1, 1);
pub const OUTER_WEIGHT: (i64, i64) = (1, 729);

/// Assembles the two-layer design from projected shells: the inner layer unscaled with
/// weight 1, the outer layer scaled by 3 with weight 1/729.
pub fn assemble_design(
    projector: &Projector,
    inner: &[LatticeVector],
    outer: &[LatticeVector],
    outer_scale: &Rational,
) -> Result<WeightedPointSet, ConstructError> {
    let mut x1: Vec<ProjectedPoint> = inner.iter().map(|v| projector.project(v)).collect();
    let mut x2: Vec<ProjectedPoint> = outer.iter().map(|v| projector.project(v).scale(outer_scale)).collect();
    x1.sort();
    x2.sort();
    let r1 = x1.first().map(ProjectedPoint::norm).unwrap_or_default();
    let r2 = x2.first().map(ProjectedPoint::norm).unwrap_or_default();
    WeightedPointSet::new(
        DIM - projector.anchors().len(),
        vec![
            Layer { points: x1, weight: Rational::frac(INNER_WEIGHT.0, INNER_WEIGHT.1), radius_squared: r1 },
            Layer { points: x2, weight: Rational::frac(OUTER_WEIGHT.0, OUTER_WEIGHT.1), radius_squared: r2 },
        ],
    )
}

pub fn build_design_with(
    enumerator: &dyn ShellEnumerator,
    a: &LatticeVector,
    b: &LatticeVector,
) -> Result<WeightedPointSet, ConstructError> {
    let src = design_sources(enumerator, a, b)?;
    let projector = Projector::new(&[*a, *b])?;
    assemble_design(&projector, &src.inner, &src.outer, &Rational::from(3))
}

/// X = X₁ ∪ X₂ with X₁ = P(inner shell), X₂ = 3·P(outer shell).
pub fn build_design(a: &LatticeVector, b: &LatticeVector) -> Result<WeightedPointSet, ConstructError> {
    build_design_with(&crate::lattice::FinckePohstEnumerator, a, b)
}

/// The four norm-4 shells with (x, A) = 2 and (x, B) ∈ {1, 0, −1, −2}, projected onto the
/// complement of A alone.
#[derive(Clone, Debug)]
pub struct YSets {
    pub plus1: Vec<ProjectedPoint>,
    pub plus2: Vec<ProjectedPoint>,
    pub minus2: Vec<ProjectedPoint>,
    pub minus1: Vec<ProjectedPoint>,
    /// The unprojected shell behind `plus1`.
    pub plus1_source: Vec<LatticeVector>,
}

impl YSets {
    pub fn total(&self) -> usize {
        self.plus1.len() + self.plus2.len() + self.minus1.len() + self.minus2.len()
    }

    fn negated_set(points: &[ProjectedPoint]) -> BTreeSet<ProjectedPoint> {
        points.iter().map(ProjectedPoint::neg).collect()
    }

    /// Y₊ᵢ = −Y₋ᵢ for i = 1, 2, as sets.
    pub fn antipodal(&self) -> bool {
        let set = |p: &[ProjectedPoint]| p.iter().cloned().collect::<BTreeSet<_>>();
        set(&self.plus1) == Self::negated_set(&self.minus1) && set(&self.plus2) == Self::negated_set(&self.minus2)
    }

    /// Number of unordered pairs {y, −y} inside the union.
    pub fn antipodal_pairs(&self) -> usize {
        let all: BTreeSet<ProjectedPoint> =
            [&self.plus1, &self.plus2, &self.minus1, &self.minus2].into_iter().flatten().cloned().collect();
        all.iter().filter(|p| all.contains(&p.neg())).count() / 2
    }
}

pub fn build_y(a: &LatticeVector, b: &LatticeVector) -> Result<YSets, ConstructError> {
    validate_anchors(a, b)?;
    let fp = crate::lattice::FinckePohstEnumerator;
    let p0 = Projector::new(&[*a])?;
    let mut out = Vec::new();
    for (b_val, expected) in [(1, 275), (0, 2025), (-1, 2025), (-2, 275)] {
        let what = format!("shell {{(x,x)=4, (x,A)=2, (x,B)={b_val}}}");
        out.push(shell(&fp, &what, &[CosetConstraint::new(*a, 2), CosetConstraint::new(*b, b_val)], 4, expected)?);
    }
    let project = |s: &[LatticeVector]| {
        let mut v: Vec<ProjectedPoint> = s.iter().map(|x| p0.project(x)).collect();
        v.sort();
        v
    };
    Ok(YSets {
        plus1: project(&out[0]),
        plus2: project(&out[1]),
        minus2: project(&out[2]),
        minus1: project(&out[3]),
        plus1_source: out.swap_remove(0),
    })
}

/// Whether P(Y₊₁⁰), with P the projection away from both anchors, equals the inner layer
/// P(X₁⁰) as a set of exact vectors.
pub fn check_x1_equals_py(a: &LatticeVector, b: &LatticeVector) -> Result<bool, ConstructError> {
    let y = build_y(a, b)?;
    let src = design_sources(&crate::lattice::FinckePohstEnumerator, a, b)?;
    let p = Projector::new(&[*a, *b])?;
    let from_y: BTreeSet<ProjectedPoint> = y.plus1_source.iter().map(|v| p.project(v)).collect();
    let x1: BTreeSet<ProjectedPoint> = src.inner.iter().map(|v| p.project(v)).collect();
    Ok(from_y.len() == 275 && from_y == x1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{canonical_anchors, enumerate_coset_shell};

    #[test]
    fn projection_annihilates_anchor() {
        let (a, b) = canonical_anchors();
        assert!(project_ab(&a, &a, &b).unwrap().is_zero());
        assert!(project_ab(&b, &a, &b).unwrap().is_zero());
    }

    #[test]
    fn projected_norms_follow_gram_solve() {
        let (a, b) = canonical_anchors();
        let p = Projector::new(&[a, b]).unwrap();
        // any vector with (x,A)=3, (x,B)=-3, norm 6 projects to norm 6 − 18/5
        let inner = enumerate_coset_shell(&[CosetConstraint::new(a, 3), CosetConstraint::new(b, -3)], &Rational::from(6)).unwrap();
        let x = p.project(&inner[0]);
        assert_eq!(x.norm(), Rational::frac(12, 5));
        assert!(x.inner_lattice(&a).is_zero() && x.inner_lattice(&b).is_zero());
        let outer = enumerate_coset_shell(&[CosetConstraint::new(a, 2), CosetConstraint::new(b, 0)], &Rational::from(4)).unwrap();
        assert_eq!(p.project(&outer[0]).norm(), Rational::frac(44, 15));
    }

    #[test]
    fn point_set_rejects_off_sphere_points_and_bad_weights() {
        let mut p = ProjectedPoint::zero();
        p.coords[0] = Rational::from(4);
        let layer = |w: i64, r2: i64| Layer { points: vec![p.clone()], weight: Rational::from(w), radius_squared: Rational::from(r2) };
        assert!(WeightedPointSet::new(24, vec![layer(1, 2)]).is_ok());
        assert!(WeightedPointSet::new(24, vec![layer(1, 3)]).is_err());
        assert!(WeightedPointSet::new(24, vec![layer(0, 2)]).is_err());
    }

    #[test]
    fn reflection_preserves_norm() {
        let mut p = ProjectedPoint::zero();
        p.coords[0] = Rational::from(3);
        p.coords[1] = Rational::from(1);
        let mut m = ProjectedPoint::zero();
        m.coords[1] = Rational::from(1);
        m.coords[2] = Rational::from(2);
        let r = p.reflect(&m).unwrap();
        assert_eq!(r.norm(), p.norm());
        assert_ne!(r, p);
    }
}
