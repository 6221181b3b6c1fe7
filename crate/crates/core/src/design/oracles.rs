//! Independent ways of deciding whether a weighted set is a Euclidean t-design.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::Rational;
use crate::construct::{PointFrame, ProjectedPoint, WeightedPointSet};
use crate::registry::Registry;

use super::{euclidean_strength_from, DesignError, StrengthEntry, StrengthReport};

/// Relative tolerance of the floating-point oracle.
pub const FLOAT_TOLERANCE: f64 = 1e-9;

fn double_factorial(k: i64) -> i64 {
    (1..=k).rev().step_by(2).product()
}

/// Average of `x^alpha` over the unit sphere S^{n−1}.
pub fn sphere_monomial_average(alpha: &[u32], n: usize) -> Rational {
    if alpha.iter().any(|a| a % 2 == 1) {
        return Rational::zero();
    }
    let num: Rational = alpha.iter().map(|&a| Rational::from(double_factorial(i64::from(a) - 1))).fold(Rational::one(), |a, b| a * b);
    let half = alpha.iter().sum::<u32>() / 2;
    let den = (0..half).fold(Rational::one(), |acc, j| acc * Rational::from(n as i64 + 2 * i64::from(j)));
    num / den
}

/// Integer coordinates of `p` over the least common denominator of its entries, and that
/// denominator.
fn integer_probe(p: &ProjectedPoint) -> Result<([i64; 24], i64), DesignError> {
    let mut d = num_bigint::BigInt::from(1);
    for c in &p.coords {
        d = d.lcm(c.denom());
    }
    let den = Rational::from(d.clone());
    let mut out = [0i64; 24];
    for (o, c) in out.iter_mut().zip(&p.coords) {
        *o = (c * &den).numer().to_i64().ok_or_else(|| DesignError::Precondition("probe coordinate too large".into()))?;
    }
    Ok((out, d.to_i64().ok_or_else(|| DesignError::Precondition("probe denominator too large".into()))?))
}

/// Necessary-condition check: for each probe `y` and `k ≤ t`,
/// `Σ_x w(x)(x·y)^k = [k even]·(k−1)!!/Π_{j<k/2}(n+2j)·|y|^k·Σᵢ w(Xᵢ)|Xᵢ|rᵢ^k`.
/// Entries carry the difference of the two sides.
pub fn moment_spot_check(design: &WeightedPointSet, t: usize, probes: &[ProjectedPoint]) -> Result<StrengthReport, DesignError> {
    let frame = design.frame()?;
    let n = design.dimension as i64;
    let layer_mass: Vec<Rational> =
        design.layers.iter().map(|l| &l.weight * Rational::from(l.points.len() as i64)).collect();
    let ints = probes.iter().map(integer_probe).collect::<Result<Vec<_>, _>>()?;
    if probes.iter().any(ProjectedPoint::is_zero) {
        return Err(DesignError::Precondition("zero probe".into()));
    }
    let blocks: Vec<Vec<StrengthEntry>> = probes
        .par_iter()
        .zip(&ints)
        .enumerate()
        .map(|(pi, (y, (yi, dy)))| {
            let mut counts: BTreeMap<(usize, i64), i64> = BTreeMap::new();
            for (li, layer) in frame.layers.iter().enumerate() {
                for x in layer {
                    *counts.entry((li, PointFrame::dot(x, yi))).or_default() += 1;
                }
            }
            let scale = Rational::from(8 * frame.denominator * dy);
            let y2 = y.norm();
            (0..=t)
                .map(|k| {
                    let lhs: Rational = counts
                        .iter()
                        .map(|(&(li, d), &c)| &design.layers[li].weight * Rational::from(c) * (Rational::from(d) / &scale).pow(k as u32))
                        .sum();
                    let rhs = if k % 2 == 1 {
                        Rational::zero()
                    } else {
                        let half = (k / 2) as u32;
                        let c = Rational::from(double_factorial(k as i64 - 1))
                            / (0..half).fold(Rational::one(), |a, j| a * Rational::from(n + 2 * i64::from(j)));
                        let radial: Rational = design
                            .layers
                            .iter()
                            .zip(&layer_mass)
                            .map(|(l, m)| m * l.radius_squared.pow(half))
                            .sum();
                        c * y2.pow(half) * radial
                    };
                    StrengthEntry::new(format!("probe={pi},k={k}"), lhs - rhs)
                })
                .collect()
        })
        .collect();
    Ok(StrengthReport { entries: blocks.into_iter().flatten().collect(), notes: Vec::new() })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FloatCheck {
    pub polynomials: usize,
    pub max_relative_error: f64,
    pub pass: bool,
}

/// Orthonormal basis (rows) of the span of the points, by modified Gram–Schmidt in f64.
fn orthonormal_frame(points: &[Vec<f64>], dim: usize) -> Result<Vec<Vec<f64>>, DesignError> {
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(dim);
    for p in points {
        if basis.len() == dim {
            break;
        }
        let mut v = p.clone();
        for _ in 0..2 {
            for b in &basis {
                let c: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= c * y;
                }
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let scale = p.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-6 * scale.max(1e-300) {
            basis.push(v.into_iter().map(|x| x / norm).collect());
        }
    }
    if basis.len() != dim {
        return Err(DesignError::Precondition(format!("points span {} < {dim} dimensions", basis.len())));
    }
    Ok(basis)
}

/// Seeded randomized oracle: compares the weighted average of random polynomials of degree
/// `1..=t` (in an orthonormal frame of the design's subspace) with the exact layered sphere
/// averages, to relative tolerance [`FLOAT_TOLERANCE`].
pub fn float_polynomial_check(design: &WeightedPointSet, t: usize, seed: u64, polynomials: usize) -> Result<FloatCheck, DesignError> {
    let dim = design.dimension;
    let r1 = design.layers.first().ok_or_else(|| DesignError::Precondition("empty design".into()))?.radius_squared.to_f64().sqrt();
    // unscaled-frame coordinates, divided by the first radius
    let norm = 8f64.sqrt() * r1;
    let raw: Vec<Vec<Vec<f64>>> = design
        .layers
        .iter()
        .map(|l| l.points.iter().map(|p| p.coords.iter().map(|c| c.to_f64() / norm).collect()).collect())
        .collect();
    let frame = orthonormal_frame(&raw.iter().flatten().cloned().collect::<Vec<_>>(), dim)?;
    let local: Vec<Vec<Vec<f64>>> = raw
        .iter()
        .map(|l| l.iter().map(|p| frame.iter().map(|b| b.iter().zip(p).map(|(x, y)| x * y).sum()).collect()).collect())
        .collect();
    let weights: Vec<f64> = design.layers.iter().map(|l| l.weight.to_f64()).collect();
    let radii: Vec<f64> = design.layers.iter().map(|l| l.radius_squared.to_f64().sqrt() / r1).collect();
    let total: f64 = design.layers.iter().zip(&weights).map(|(l, w)| w * l.points.len() as f64).sum();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0f64;
    for _ in 0..polynomials {
        let terms: Vec<(f64, Vec<u32>)> = (0..12)
            .map(|_| {
                let degree = rng.gen_range(1..=t);
                let mut alpha = vec![0u32; dim];
                for _ in 0..degree {
                    alpha[rng.gen_range(0..dim)] += 1;
                }
                (rng.gen_range(-1.0..1.0), alpha)
            })
            .collect();
        let f = |u: &[f64]| -> f64 {
            terms.iter().map(|(c, a)| c * a.iter().zip(u).map(|(&e, x)| x.powi(e as i32)).product::<f64>()).sum()
        };
        let mut sum = 0.0;
        let mut magnitude = 0.0;
        for (li, layer) in local.iter().enumerate() {
            for u in layer {
                let v = f(u);
                sum += weights[li] * v;
                magnitude += weights[li] * v.abs();
            }
        }
        let expected: f64 = design
            .layers
            .iter()
            .enumerate()
            .map(|(li, l)| {
                let share = weights[li] * l.points.len() as f64;
                share
                    * terms
                        .iter()
                        .map(|(c, a)| {
                            c * radii[li].powi(a.iter().sum::<u32>() as i32) * sphere_monomial_average(a, dim).to_f64()
                        })
                        .sum::<f64>()
            })
            .sum();
        let err = (sum - expected).abs() / total / (magnitude / total).max(1.0);
        worst = worst.max(err);
    }
    Ok(FloatCheck { polynomials, max_relative_error: worst, pass: worst <= FLOAT_TOLERANCE })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleVerdict {
    pub oracle: String,
    pub pass: bool,
    pub detail: String,
}

pub trait StrengthOracle: Send + Sync {
    fn name(&self) -> &'static str;
    fn check(&self, design: &WeightedPointSet, t: usize, seed: u64) -> Result<OracleVerdict, DesignError>;
}

fn verdict(name: &str, pass: bool, detail: String) -> OracleVerdict {
    OracleVerdict { oracle: name.to_string(), pass, detail }
}

/// Vanishing of the harmonic moments `T(l, j)`.
pub struct GegenbauerOracle;

impl StrengthOracle for GegenbauerOracle {
    fn name(&self) -> &'static str {
        "gegenbauer"
    }

    fn check(&self, design: &WeightedPointSet, t: usize, _seed: u64) -> Result<OracleVerdict, DesignError> {
        let r = euclidean_strength_from(&design.frame()?.pair_histogram(), t)?;
        let detail = match r.first_failure() {
            None => format!("{} conditions vanish", r.entries.len()),
            Some(e) => format!("{} = {}", e.label, e.value),
        };
        Ok(verdict(self.name(), r.passes(), detail))
    }
}

/// Exact moments `Σ w(x)(x·y)^k` against their closed form, every design point as probe.
pub struct ProbeMomentOracle;

impl StrengthOracle for ProbeMomentOracle {
    fn name(&self) -> &'static str {
        "probe-moments"
    }

    fn check(&self, design: &WeightedPointSet, t: usize, _seed: u64) -> Result<OracleVerdict, DesignError> {
        let probes: Vec<ProjectedPoint> = design.points().map(|(_, p)| p.clone()).collect();
        let r = moment_spot_check(design, t, &probes)?;
        let failures = r.entries.iter().filter(|e| !e.pass).count();
        let detail = format!("{} probes, {failures} of {} moments off", probes.len(), r.entries.len());
        Ok(verdict(self.name(), failures == 0, detail))
    }
}

/// Seeded random polynomials in floating point.
pub struct FloatPolynomialOracle;

pub const FLOAT_POLYNOMIALS: usize = 16;

impl StrengthOracle for FloatPolynomialOracle {
    fn name(&self) -> &'static str {
        "float-polynomial"
    }

    fn check(&self, design: &WeightedPointSet, t: usize, seed: u64) -> Result<OracleVerdict, DesignError> {
        let r = float_polynomial_check(design, t, seed, FLOAT_POLYNOMIALS)?;
        let detail = format!("max relative error {:.3e} over {} polynomials (seed {seed})", r.max_relative_error, r.polynomials);
        Ok(verdict(self.name(), r.pass, detail))
    }
}

pub fn strength_oracles() -> Registry<dyn StrengthOracle> {
    let mut reg: Registry<dyn StrengthOracle> = Registry::new("strength oracle");
    reg.register("gegenbauer", || Box::new(GegenbauerOracle));
    reg.register("probe-moments", || Box::new(ProbeMomentOracle));
    reg.register("float-polynomial", || Box::new(FloatPolynomialOracle));
    reg
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_averages() {
        assert_eq!(sphere_monomial_average(&[0; 22], 22), Rational::one());
        let mut a = vec![0u32; 22];
        a[0] = 1;
        assert_eq!(sphere_monomial_average(&a, 22), Rational::zero());
        a[0] = 2;
        assert_eq!(sphere_monomial_average(&a, 22), Rational::frac(1, 22));
        a[0] = 4;
        assert_eq!(sphere_monomial_average(&a, 3), Rational::frac(1, 5));
        a[0] = 2;
        a[1] = 2;
        assert_eq!(sphere_monomial_average(&a, 3), Rational::frac(1, 15));
    }

    #[test]
    fn registry_lists_three_oracles() {
        assert_eq!(strength_oracles().names(), vec!["gegenbauer", "probe-moments", "float-polynomial"]);
    }
}
