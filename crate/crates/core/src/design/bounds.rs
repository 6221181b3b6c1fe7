use crate::construct::WeightedPointSet;

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    (0..k.min(n - k)).fold(1u128, |acc, i| acc * u128::from(n - i) / u128::from(i + 1))
}

/// Dimension of the space of harmonic polynomials of degree `k` on R^n.
pub fn harmonic_dimension(n: u64, k: u64) -> u128 {
    let all = binomial(n + k - 1, n - 1);
    if k < 2 {
        all
    } else {
        all - binomial(n + k - 3, n - 1)
    }
}

/// `dim P_e(S)` for `S` a union of `layers` concentric spheres around the origin in R^n:
/// `Σ_k h_k · min(⌊(e−k)/2⌋ + 1, layers)`. Equals `C(n+e, e)` once `layers > e/2`.
pub fn euclidean_bound(n: u64, e: u64, layers: u64) -> u128 {
    (0..=e).map(|k| harmonic_dimension(n, k) * u128::from(((e - k) / 2 + 1).min(layers))).sum()
}

/// Lower bound on the size of a spherical t-design on S^{n−1}:
/// `C(n+e−1, n−1) + C(n+e−2, n−1)` for `t = 2e`, `2·C(n+e−1, n−1)` for `t = 2e+1`.
pub fn spherical_bound(n: u64, t: u64) -> u128 {
    let e = t / 2;
    if t.is_multiple_of(2) {
        binomial(n + e - 1, n - 1) + if e == 0 { 0 } else { binomial(n + e - 2, n - 1) }
    } else {
        2 * binomial(n + e - 1, n - 1)
    }
}

/// Whether a 2e-design meets the Euclidean lower bound with equality.
pub fn tightness_check(design: &WeightedPointSet, e: u64) -> bool {
    let bound = euclidean_bound(design.dimension as u64, e, design.layers.len() as u64);
    design.len() as u128 == bound
}
