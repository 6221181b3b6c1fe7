//! Exhaustive search for every possible outer layer over the fixed inner layer X₁.
//!
//! Scaling X₁ by √5 makes its Gram matrix integral (12 on the diagonal, 2 or −3 off it). A
//! point `v` that can join X₁ in a design with the same inner-product structure must have
//! `v·e ∈ {4, −1, −6}` for every scaled `e ∈ √5·X₁` and `|v|² = 44/3`. Over the dual basis
//! `e′` of 22 independent `eⱼ` this means `v = Σ yⱼ eⱼ′` with `yⱼ = 5cⱼ − 1`, `cⱼ ∈ {−1,0,1}`,
//! so the candidates are lattice points of the coset `−Σeⱼ′ + ⟨5e₁′, …, 5e₂₂′⟩` and a
//! Fincke–Pohst search over `c` finds all of them.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{determinant, inverse, ArithError, Rational, RationalMatrix};
use crate::construct::{ConstructError, Layer, ProjectedPoint, Projector, WeightedPointSet};
use crate::lattice::fincke_pohst::{FinckePohst, NoHook, SearchHook, SearchStats};
use crate::lattice::{enumerate_coset_shell, CosetConstraint, LatticeError, LatticeVector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UniqueError {
    #[error(transparent)]
    Construct(#[from] ConstructError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("{0}")]
    Precondition(String),
    #[error("candidate split failed: {0}")]
    Split(String),
}

/// Squared norm of the integralized layer vectors and their admissible mutual inner products.
pub const LAYER_NORM: i64 = 12;
pub const LAYER_INNER: [i64; 2] = [2, -3];
/// Admissible inner products of a candidate with the integralized layer.
pub const CANDIDATE_INNER: [i64; 3] = [4, -1, -6];
pub const CANDIDATE_NORM: (i64, i64) = (44, 3);

/// `√5·X₁`, kept as the rational points of X₁ together with the integer Gram matrix of the
/// scaled vectors.
#[derive(Clone, Debug)]
pub struct IntegralizedLayer {
    pub points: Vec<ProjectedPoint>,
    pub scale_squared: Rational,
    pub gram: Vec<Vec<i64>>,
}

pub fn integralize_x1(design: &WeightedPointSet) -> Result<IntegralizedLayer, UniqueError> {
    let layer = design.layers.first().ok_or_else(|| UniqueError::Precondition("design has no layers".into()))?;
    let scale_squared = Rational::from(LAYER_NORM) / &layer.radius_squared;
    let frame = WeightedPointSet::new(design.dimension, vec![layer.clone()])?.frame()?;
    let factor = &scale_squared / Rational::from(frame.scale());
    let pts = &frame.layers[0];
    let mut gram = vec![vec![0i64; pts.len()]; pts.len()];
    for (i, p) in pts.iter().enumerate() {
        for (j, q) in pts.iter().enumerate() {
            let v = &factor * Rational::from(crate::construct::PointFrame::dot(p, q));
            if !v.is_integer() {
                return Err(UniqueError::Precondition(format!("scaled inner product {v} is not integral")));
            }
            gram[i][j] = v.numer().to_i64().ok_or_else(|| UniqueError::Precondition("inner product overflow".into()))?;
        }
    }
    Ok(IntegralizedLayer { points: layer.points.clone(), scale_squared, gram })
}

/// 22 independent layer vectors `e` and the inverse of their Gram matrix (whose rows are the
/// coordinates of the dual basis `e′` over `e`).
#[derive(Clone, Debug)]
pub struct DualFrame {
    pub basis: Vec<usize>,
    pub gram: RationalMatrix,
    pub gram_inverse: RationalMatrix,
}

impl DualFrame {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `eᵢ·eⱼ′`, which should be the identity.
    pub fn pairing(&self) -> RationalMatrix {
        let n = self.dim();
        (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|k| &self.gram[i][k] * &self.gram_inverse[j][k]).sum()).collect())
            .collect()
    }
}

/// Picks basis vectors greedily in the given order, keeping each one that raises the rank.
pub fn build_dual_frame_ordered(layer: &IntegralizedLayer, order: &[usize], dim: usize) -> Result<DualFrame, UniqueError> {
    let mut basis = Vec::new();
    // incremental echelon on the rational coordinates
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for &i in order {
        if basis.len() == dim {
            break;
        }
        let mut v = layer.points[i].coords.clone();
        for (r, &p) in rows.iter().zip(&pivots) {
            if !v[p].is_zero() {
                let f = &v[p] / &r[p];
                for (x, y) in v.iter_mut().zip(r) {
                    *x -= &(&f * y);
                }
            }
        }
        if let Some(p) = v.iter().position(|x| !x.is_zero()) {
            rows.push(v);
            pivots.push(p);
            basis.push(i);
        }
    }
    if basis.len() != dim {
        return Err(UniqueError::Precondition(format!("layer spans only {} dimensions", basis.len())));
    }
    let gram: RationalMatrix =
        basis.iter().map(|&i| basis.iter().map(|&j| Rational::from(layer.gram[i][j])).collect()).collect();
    let gram_inverse = inverse(&gram)?;
    Ok(DualFrame { basis, gram, gram_inverse })
}

pub fn build_dual_frame(layer: &IntegralizedLayer, dim: usize) -> Result<DualFrame, UniqueError> {
    let order: Vec<usize> = (0..layer.points.len()).collect();
    build_dual_frame_ordered(layer, &order, dim)
}

/// Exact data for one admissibility constraint `g·v ∈ {4, −1, −6}`: `g·v = Σⱼ aⱼ yⱼ / D`.
#[derive(Clone, Debug)]
struct Filter {
    coeffs: Vec<i128>,
    /// `lo[i]`, `hi[i]`: extreme values of `Σ_{j<i} aⱼ(5cⱼ − 1)` over `cⱼ ∈ {−1,0,1}`.
    lo: Vec<i128>,
    hi: Vec<i128>,
}

#[derive(Clone, Debug)]
struct FilterSet {
    denom: i128,
    filters: Vec<Filter>,
    targets: [i128; 3],
}

impl FilterSet {
    fn new(layer: &IntegralizedLayer, frame: &DualFrame, which: &[usize]) -> Result<Self, UniqueError> {
        let n = frame.dim();
        // a = G⁻¹ h with hᵢ = g·eᵢ
        let rats: Vec<Vec<Rational>> = which
            .iter()
            .map(|&g| {
                let h: Vec<Rational> = frame.basis.iter().map(|&e| Rational::from(layer.gram[g][e])).collect();
                crate::arith::mat_vec(&frame.gram_inverse, &h)
            })
            .collect();
        let mut denom = num_bigint::BigInt::from(1);
        for r in rats.iter().flatten() {
            denom = denom.lcm(r.denom());
        }
        let d = Rational::from(denom.clone());
        let big = || UniqueError::Precondition("dual coefficients too large".into());
        let denom = denom.to_i128().ok_or_else(big)?;
        let mut filters = Vec::new();
        for r in rats {
            let coeffs = r.iter().map(|x| (x * &d).numer().to_i128().ok_or_else(big)).collect::<Result<Vec<_>, _>>()?;
            let mut lo = vec![0i128; n + 1];
            let mut hi = vec![0i128; n + 1];
            for j in 0..n {
                let a = coeffs[j];
                lo[j + 1] = lo[j] - 5 * a.abs() - a;
                hi[j + 1] = hi[j] + 5 * a.abs() - a;
            }
            filters.push(Filter { coeffs, lo, hi });
        }
        let targets = CANDIDATE_INNER.map(|t| i128::from(t) * denom);
        Ok(FilterSet { denom, filters, targets })
    }

    fn inner(&self, f: usize, c: &[i64]) -> i128 {
        self.filters[f].coeffs.iter().zip(c).map(|(a, &k)| a * i128::from(5 * k - 1)).sum()
    }

    fn admissible(&self, c: &[i64]) -> bool {
        (0..self.filters.len()).all(|f| self.targets.contains(&self.inner(f, c)))
    }
}

/// Prunes a partial assignment once some constraint can no longer reach an admissible value.
#[derive(Clone)]
struct FilterHook<'a> {
    set: &'a FilterSet,
    partial: Vec<i128>,
}

impl SearchHook for FilterHook<'_> {
    fn push(&mut self, index: usize, value: i64) -> bool {
        let y = i128::from(5 * value - 1);
        for (s, f) in self.partial.iter_mut().zip(&self.set.filters) {
            *s += f.coeffs[index] * y;
        }
        let ok = self.partial.iter().zip(&self.set.filters).all(|(s, f)| {
            let (lo, hi) = (s + f.lo[index], s + f.hi[index]);
            self.set.targets.iter().any(|t| (lo..=hi).contains(t))
        });
        if !ok {
            self.pop(index, value);
        }
        ok
    }

    fn pop(&mut self, index: usize, value: i64) {
        let y = i128::from(5 * value - 1);
        for (s, f) in self.partial.iter_mut().zip(&self.set.filters) {
            *s -= f.coeffs[index] * y;
        }
    }
}

/// Candidates as coefficient vectors `c ∈ {−1,0,1}^22`, plus search statistics.
#[derive(Clone, Debug, Serialize)]
pub struct CandidateSet {
    pub coefficients: Vec<Vec<i64>>,
    /// Points at the outer-layer scale: `3·Σₖ (G⁻¹y)ₖ xₖ` for the chosen X₁ points `xₖ`.
    #[serde(skip)]
    pub points: Vec<ProjectedPoint>,
    pub nodes: u64,
    pub leaves: u64,
    /// Norm-44/3 vectors whose inner products with the 22 basis vectors are admissible but
    /// which fail against some other layer vector. Only counted without incremental pruning.
    pub basis_only_survivors: Option<usize>,
}

impl CandidateSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn candidate_norm(frame: &DualFrame, c: &[i64]) -> Rational {
    let y: Vec<Rational> = c.iter().map(|&k| Rational::from(5 * k - 1)).collect();
    let gy = crate::arith::mat_vec(&frame.gram_inverse, &y);
    y.iter().zip(&gy).map(|(a, b)| a * b).sum()
}

/// The outer-layer point of a coefficient vector.
pub fn candidate_point(layer: &IntegralizedLayer, frame: &DualFrame, c: &[i64]) -> ProjectedPoint {
    let y: Vec<Rational> = c.iter().map(|&k| Rational::from(5 * k - 1)).collect();
    let coeff = crate::arith::mat_vec(&frame.gram_inverse, &y);
    // v = s·u with u = Σ coeffₖ xₖ, s² the integralizing scale; |u|² = (11/9)·r₁², so the
    // outer layer (radius² 11·r₁²) is 3u
    let mut out = ProjectedPoint::zero();
    for (a, &k) in coeff.iter().zip(&frame.basis) {
        let x = &layer.points[k];
        for (o, xc) in out.coords.iter_mut().zip(&x.coords) {
            *o += &(a * xc);
        }
    }
    out.scale(&Rational::from(3))
}

fn search(frame: &DualFrame) -> Result<FinckePohst, UniqueError> {
    let n = frame.dim();
    let form: Vec<Vec<f64>> = frame.gram_inverse.iter().map(|r| r.iter().map(|x| 25.0 * x.to_f64()).collect()).collect();
    let bound = CANDIDATE_NORM.0 as f64 / CANDIDATE_NORM.1 as f64;
    Ok(FinckePohst::new(&form, vec![0.2; n], bound)?.with_boxes(vec![(-1, 1); n]))
}

/// Every admissible candidate. With `prune` the full 275-vector filter is applied during the
/// search; without it only the norm bound prunes and the full filter runs at the leaves,
/// which also counts the vectors that only the basis constraints admit.
pub fn enumerate_candidates(layer: &IntegralizedLayer, frame: &DualFrame, prune: bool) -> Result<CandidateSet, UniqueError> {
    let all: Vec<usize> = (0..layer.points.len()).collect();
    let filters = FilterSet::new(layer, frame, &all)?;
    debug_assert!(filters.denom > 0);
    let fp = search(frame)?;
    let target = Rational::frac(CANDIDATE_NORM.0, CANDIDATE_NORM.1);
    let leaf = |c: &[i64]| -> Option<(bool, Vec<i64>)> {
        if candidate_norm(frame, c) != target {
            return None;
        }
        Some((filters.admissible(c), c.to_vec()))
    };
    let (found, stats): (Vec<(bool, Vec<i64>)>, SearchStats) = if prune {
        let hook = FilterHook { set: &filters, partial: vec![0; filters.filters.len()] };
        fp.search_parallel(&hook, leaf)
    } else {
        fp.search_parallel(&NoHook, leaf)
    };
    let survivors = found.iter().filter(|f| !f.0).count();
    let mut coefficients: Vec<Vec<i64>> = found.into_iter().filter(|f| f.0).map(|f| f.1).collect();
    coefficients.sort();
    coefficients.dedup();
    let points = coefficients.iter().map(|c| candidate_point(layer, frame, c)).collect();
    Ok(CandidateSet {
        coefficients,
        points,
        nodes: stats.nodes,
        leaves: stats.leaves,
        basis_only_survivors: (!prune).then_some(survivors),
    })
}

/// Normalized inner products allowed between two points of one outer layer.
pub fn beta_set() -> [Rational; 3] {
    [Rational::frac(7, 22), Rational::frac(-1, 44), Rational::frac(-4, 11)]
}

/// The two parts of the candidate set and the cross-part cosines observed.
#[derive(Clone, Debug)]
pub struct CandidateSplit {
    pub parts: [Vec<ProjectedPoint>; 2],
    pub cross_cosines: BTreeSet<Rational>,
}

/// Splits the candidates by the relation "normalized inner product lies in the β-set (or the
/// points coincide)", verifying that it is an equivalence relation with exactly two classes.
pub fn split_candidates(candidates: &CandidateSet) -> Result<CandidateSplit, UniqueError> {
    let pts = &candidates.points;
    let r2 = pts.first().map(ProjectedPoint::norm).ok_or_else(|| UniqueError::Split("no candidates".into()))?;
    let set = WeightedPointSet::new(22, vec![Layer { points: pts.clone(), weight: Rational::one(), radius_squared: r2 }])?;
    let frame = set.frame()?;
    let v = &frame.layers[0];
    let norm = frame.layer_norms[0];
    let beta: Vec<i64> = beta_set()
        .iter()
        .map(|b| {
            let d = b * Rational::from(norm);
            d.numer().to_i64().filter(|_| d.is_integer()).ok_or_else(|| UniqueError::Split("β values not in frame".into()))
        })
        .collect::<Result<_, _>>()?;
    let related = |i: usize, j: usize| {
        let d = crate::construct::PointFrame::dot(&v[i], &v[j]);
        i == j || beta.contains(&d)
    };
    let class: Vec<bool> = (0..v.len()).map(|j| related(0, j)).collect();
    let mut cross = BTreeSet::new();
    for i in 0..v.len() {
        for j in 0..v.len() {
            let same = class[i] == class[j];
            if related(i, j) != same {
                return Err(UniqueError::Split(format!("relation not transitive at candidates {i}, {j}")));
            }
            if !same {
                cross.insert(Rational::frac(crate::construct::PointFrame::dot(&v[i], &v[j]), norm));
            }
        }
    }
    let part = |want: bool| -> Vec<ProjectedPoint> {
        let mut p: Vec<ProjectedPoint> = pts.iter().zip(&class).filter(|(_, &c)| c == want).map(|(p, _)| p.clone()).collect();
        p.sort();
        p
    };
    let (a, b) = (part(true), part(false));
    if b.is_empty() {
        return Err(UniqueError::Split("a single class".into()));
    }
    let mut parts = [a, b];
    parts.sort();
    Ok(CandidateSplit { parts, cross_cosines: cross })
}

/// The second outer layer `3·P(shell {(x,x)=4, (x,A)=0, (x,B)=−2})`, sorted.
pub fn twin_outer_layer(a: &LatticeVector, b: &LatticeVector) -> Result<Vec<ProjectedPoint>, UniqueError> {
    let constraints = [CosetConstraint::new(*a, 0), CosetConstraint::new(*b, -2)];
    let shell = enumerate_coset_shell(&constraints, &Rational::from(4))?;
    let p = Projector::new(&[*a, *b])?;
    let mut pts: Vec<ProjectedPoint> = shell.iter().map(|v| p.project(v).scale(&Rational::from(3))).collect();
    pts.sort();
    Ok(pts)
}

/// Candidate file: the module-lattice layout with rational coordinates.
pub fn write_candidates(points: &[ProjectedPoint]) -> String {
    let mut out = format!("# candidates norm={}/{} count={}\n", CANDIDATE_NORM.0, CANDIDATE_NORM.1, points.len());
    for p in points {
        let parts: Vec<String> = p.coords.iter().map(|c| c.to_string()).collect();
        out.push_str(&parts.join(" "));
        out.push('\n');
    }
    out
}

/// `det(G)` of the chosen basis.
pub fn frame_determinant(frame: &DualFrame) -> Result<Rational, UniqueError> {
    Ok(determinant(&frame.gram)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Three unit-ish vectors in the plane with an integral Gram matrix.
    fn toy() -> IntegralizedLayer {
        let mk = |a: i64, b: i64| {
            let mut p = ProjectedPoint::zero();
            p.coords[0] = Rational::from(a);
            p.coords[1] = Rational::from(b);
            p
        };
        let points = vec![mk(2, 0), mk(0, 2), mk(2, 2)];
        let gram = points
            .iter()
            .map(|p| points.iter().map(|q| (p.inner(q) * Rational::from(2)).numer().to_i64().unwrap()).collect())
            .collect();
        IntegralizedLayer { points, scale_squared: Rational::from(2), gram }
    }

    #[test]
    fn dual_frame_is_biorthogonal() {
        let layer = toy();
        let f = build_dual_frame(&layer, 2).unwrap();
        assert_eq!(f.basis, vec![0, 1]);
        let id = f.pairing();
        for (i, row) in id.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                assert_eq!(*v, Rational::from(i64::from(i == j)));
            }
        }
        let g = build_dual_frame_ordered(&layer, &[2, 1, 0], 2).unwrap();
        assert_eq!(g.basis, vec![2, 1]);
    }

    #[test]
    fn rank_deficiency_is_fatal() {
        assert!(build_dual_frame(&toy(), 3).is_err());
    }
}
