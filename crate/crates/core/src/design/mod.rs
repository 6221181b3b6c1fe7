//! Exact design-strength criteria, tightness bounds and independent strength oracles.
//!
//! The Euclidean criterion used here: a weighted set on `p` concentric spheres is a
//! t-design iff for every `1 ≤ l ≤ t` and `0 ≤ j ≤ ⌊(t−l)/2⌋`
//!
//! ```text
//! T(l, j) = Σ_{x,y} w(x) w(y) (|x||y|)^{l+2j} Q_l(x̂·ŷ) = 0.
//! ```
//!
//! Each `T(l, j)` is a positive multiple of `Σ_φ (Σ_x w(x)|x|^{2j} φ(x))²` over an
//! orthonormal basis of harmonics of degree `l`, so it is non-negative and vanishes exactly
//! when the corresponding moment does. On `p` radii the powers `|x|^{2j}` with `j ≥ p` are
//! combinations of lower ones, so only `j < p` gives independent conditions.

mod bounds;
mod gegenbauer;
mod oracles;

pub use bounds::{binomial, euclidean_bound, harmonic_dimension, spherical_bound, tightness_check};
pub use gegenbauer::{gegenbauer_eval, GegenbauerEvaluator, MAX_DEGREE};
pub use oracles::{
    float_polynomial_check, moment_spot_check, sphere_monomial_average, strength_oracles, FloatPolynomialOracle,
    GegenbauerOracle, OracleVerdict, ProbeMomentOracle, StrengthOracle, FLOAT_TOLERANCE,
};

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::arith::{ExactScalar, Rational};
use crate::construct::{ConstructError, PairHistogram, SphereSet, WeightedPointSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DesignError {
    #[error("precondition: {0}")]
    Precondition(String),
    #[error(transparent)]
    Construct(#[from] ConstructError),
}

/// One condition of a strength criterion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StrengthEntry {
    pub label: String,
    #[serde(serialize_with = "crate::report::as_display")]
    pub value: ExactScalar,
    pub pass: bool,
}

impl StrengthEntry {
    fn new(label: String, value: Rational) -> Self {
        let pass = value.is_zero();
        StrengthEntry { label, value: ExactScalar::rational(value), pass }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct StrengthReport {
    pub entries: Vec<StrengthEntry>,
    pub notes: Vec<String>,
}

impl StrengthReport {
    pub fn passes(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn entry(&self, label: &str) -> Option<&StrengthEntry> {
        self.entries.iter().find(|e| e.label == label)
    }

    pub fn first_failure(&self) -> Option<&StrengthEntry> {
        self.entries.iter().find(|e| !e.pass)
    }
}

/// The `(l, j)` pairs checked at strength `t` on `layers` radii.
pub fn euclidean_conditions(t: usize, layers: usize) -> Vec<(usize, usize)> {
    (1..=t).flat_map(|l| (0..=((t - l) / 2).min(layers.saturating_sub(1))).map(move |j| (l, j))).collect()
}

pub fn condition_label(l: usize, j: usize) -> String {
    format!("l={l},j={j}")
}

/// `T(l, j)` for the given pairs, from an ordered-pair histogram.
pub fn harmonic_moments(hist: &PairHistogram, pairs: &[(usize, usize)]) -> Result<Vec<(usize, usize, Rational)>, DesignError> {
    let max_l = pairs.iter().map(|p| p.0).max().unwrap_or(0);
    let g = GegenbauerEvaluator::new(hist.dimension, max_l.max(1))?;
    let radii: Vec<Rational> = (0..hist.layers()).map(|i| hist.radius_squared(i)).collect();
    let entries: Vec<_> = hist.entries().collect();
    Ok(pairs
        .iter()
        .map(|&(l, j)| {
            let v: Rational = entries
                .iter()
                .map(|(a, b, s, c)| {
                    let p = &radii[*a] * &radii[*b];
                    let w = &hist.weights[*a] * &hist.weights[*b] * Rational::from(*c as i64);
                    w * p.pow(j as u32) * g.eval_homogeneous(l, s, &p)
                })
                .sum();
            (l, j, v)
        })
        .collect())
}

/// Exact Euclidean t-design test. The `l = 0` conditions hold for any union of layers and
/// are not listed.
pub fn euclidean_strength_from(hist: &PairHistogram, t: usize) -> Result<StrengthReport, DesignError> {
    if t > MAX_DEGREE {
        return Err(DesignError::Precondition(format!("strength {t} exceeds the cap {MAX_DEGREE}")));
    }
    let pairs = euclidean_conditions(t, hist.layers());
    let entries = harmonic_moments(hist, &pairs)?
        .into_iter()
        .map(|(l, j, v)| StrengthEntry::new(condition_label(l, j), v))
        .collect();
    Ok(StrengthReport {
        entries,
        notes: vec![
            "l=0 conditions hold identically for a union of concentric layers".into(),
            format!("j limited to j < {} (number of radii); higher j are dependent", hist.layers()),
        ],
    })
}

pub fn euclidean_strength(design: &WeightedPointSet, t: usize) -> Result<StrengthReport, DesignError> {
    euclidean_strength_from(&design.frame()?.pair_histogram(), t)
}

/// `Σ_{x,y} Qₖ(x̂·ŷ)` for k = 1..t given the multiset of cosines over ordered pairs.
pub fn zonal_sums(cosines: &BTreeMap<Rational, u64>, n: usize, t: usize) -> Result<StrengthReport, DesignError> {
    let g = GegenbauerEvaluator::new(n, t.max(1))?;
    let entries = (1..=t)
        .map(|k| {
            let v: Rational = cosines.iter().map(|(u, c)| g.eval_rational(k, u) * Rational::from(*c as i64)).sum();
            StrengthEntry::new(format!("k={k}"), v)
        })
        .collect();
    Ok(StrengthReport { entries, notes: Vec::new() })
}

fn layer_cosines(hist: &PairHistogram, layer: usize) -> BTreeMap<Rational, u64> {
    let r2 = hist.radius_squared(layer);
    hist.entries().filter(|e| e.0 == layer && e.1 == layer).map(|(_, _, s, c)| (s / &r2, c)).collect()
}

/// Unweighted spherical t-design test of one layer of a design.
pub fn spherical_strength_of_layer(hist: &PairHistogram, layer: usize, t: usize) -> Result<StrengthReport, DesignError> {
    if layer >= hist.layers() {
        return Err(DesignError::Precondition(format!("no layer {layer}")));
    }
    zonal_sums(&layer_cosines(hist, layer), hist.dimension, t)
}

/// Unweighted spherical t-design test of all points of `set`, which must share one radius.
pub fn spherical_strength(set: &WeightedPointSet, t: usize) -> Result<StrengthReport, DesignError> {
    let r2 = set.layers.first().map(|l| &l.radius_squared).ok_or_else(|| DesignError::Precondition("empty set".into()))?;
    if set.layers.iter().any(|l| &l.radius_squared != r2) {
        return Err(DesignError::Precondition("points lie on spheres of different radii".into()));
    }
    let mut merged = set.clone();
    let mut points = Vec::new();
    for l in &mut merged.layers {
        points.append(&mut l.points);
    }
    merged.layers = vec![crate::construct::Layer { points, weight: Rational::one(), radius_squared: r2.clone() }];
    spherical_strength_of_layer(&merged.frame()?.pair_histogram(), 0, t)
}

/// Spherical strength of the lifted set Z ⊂ S^{n}, `n` being the design's dimension.
pub fn spherical_strength_z(z: &SphereSet, hist: &PairHistogram, t: usize) -> Result<StrengthReport, DesignError> {
    zonal_sums(&z.inner_histogram(hist), hist.dimension + 1, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{Layer, ProjectedPoint};

    fn point(coords: &[(usize, i64)]) -> ProjectedPoint {
        let mut p = ProjectedPoint::zero();
        for &(i, c) in coords {
            p.coords[i] = Rational::from(c);
        }
        p
    }

    /// The 2n vertices ±√8eᵢ of a cross-polytope in the first n coordinates (unit frame norm).
    fn cross_polytope(n: usize) -> WeightedPointSet {
        let mut pts = Vec::new();
        for i in 0..n {
            pts.push(point(&[(i, 1)]));
            pts.push(point(&[(i, -1)]));
        }
        WeightedPointSet::new(n, vec![Layer { points: pts, weight: Rational::one(), radius_squared: Rational::frac(1, 8) }])
            .unwrap()
    }

    #[test]
    fn condition_count() {
        assert_eq!(euclidean_conditions(6, 2).len(), 10);
        assert_eq!(euclidean_conditions(6, 3).len(), 12);
        assert_eq!(euclidean_conditions(7, 2).iter().filter(|(l, j)| l + 2 * j == 7).count(), 2);
    }

    #[test]
    fn single_point_is_not_a_1_design() {
        let set = WeightedPointSet::new(
            3,
            vec![Layer { points: vec![point(&[(0, 1)])], weight: Rational::one(), radius_squared: Rational::frac(1, 8) }],
        )
        .unwrap();
        let r = euclidean_strength(&set, 1).unwrap();
        assert_eq!(r.entries.len(), 1);
        // (|x||x|)·Q₁(1) with |x|² = 1/8
        assert_eq!(r.entries[0].value, ExactScalar::rational(Rational::frac(1, 8)));
        assert!(!r.passes());
    }

    #[test]
    fn cross_polytope_is_a_spherical_3_design_not_4() {
        let set = cross_polytope(4);
        let r = spherical_strength(&set, 4).unwrap();
        assert!(r.entries[..3].iter().all(|e| e.pass));
        assert!(!r.entries[3].pass);
    }

    #[test]
    fn mixed_radii_are_rejected() {
        let mut set = cross_polytope(3);
        set.layers.push(Layer { points: vec![point(&[(0, 2)])], weight: Rational::one(), radius_squared: Rational::frac(1, 2) });
        assert!(spherical_strength(&set, 2).is_err());
    }
}
