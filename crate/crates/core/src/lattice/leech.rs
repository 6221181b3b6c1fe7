use std::fmt;
use std::sync::OnceLock;

use crate::arith::Rational;

use super::golay::{build_golay, GolayCode};
use super::intmat::{lattice_basis, IntRow};
use super::LatticeError;

pub const DIM: usize = 24;

/// A vector of R^24 in the √8-scaled frame: a lattice vector of norm `m` has integer
/// coordinates with squared length `8m`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticeVector(pub [i32; DIM]);

impl LatticeVector {
    pub fn zero() -> Self {
        LatticeVector([0; DIM])
    }

    pub fn coords(&self) -> &[i32; DIM] {
        &self.0
    }

    pub fn dot(&self, other: &Self) -> i64 {
        self.0.iter().zip(&other.0).map(|(a, b)| i64::from(*a) * i64::from(*b)).sum()
    }

    /// Squared length in the scaled frame (eight times the lattice norm).
    pub fn scaled_norm(&self) -> i64 {
        self.dot(self)
    }

    pub fn norm(&self) -> Rational {
        leech_inner(self, self)
    }

    pub fn neg(&self) -> Self {
        LatticeVector(self.0.map(|c| -c))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.0;
        for (o, b) in out.iter_mut().zip(&other.0) {
            *o += b;
        }
        LatticeVector(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn from_slice(v: &[i64]) -> Result<Self, LatticeError> {
        if v.len() != DIM {
            return Err(LatticeError::Format(format!("expected {DIM} coordinates, got {}", v.len())));
        }
        let mut out = [0i32; DIM];
        for (o, x) in out.iter_mut().zip(v) {
            *o = i32::try_from(*x).map_err(|_| LatticeError::Overflow)?;
        }
        Ok(LatticeVector(out))
    }
}

impl fmt::Debug for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

/// Inner product of the unscaled lattice: `(Σ uᵢvᵢ) / 8`.
pub fn leech_inner(u: &LatticeVector, v: &LatticeVector) -> Rational {
    Rational::frac(u.dot(v), 8)
}

/// The Leech lattice in the √8-scaled integer frame together with its Golay code and a
/// Hermite-normal-form basis.
#[derive(Debug, Clone)]
pub struct LeechLattice {
    golay: GolayCode,
    basis: Vec<IntRow>,
}

impl LeechLattice {
    pub fn new() -> Result<Self, LatticeError> {
        let golay = build_golay()?;
        let mut gens: Vec<IntRow> = Vec::new();
        // twice each generator codeword (all codeword weights are ≡ 0 mod 4)
        for g in golay.generator() {
            gens.push((0..DIM).map(|i| 2 * i128::from(g >> i & 1)).collect());
        }
        for j in 1..DIM {
            for s in [4i128, -4] {
                let mut v = vec![0i128; DIM];
                v[0] = 4;
                v[j] = s;
                gens.push(v);
            }
        }
        let mut odd = vec![1i128; DIM];
        odd[0] = -3;
        gens.push(odd);

        let basis = lattice_basis(&gens)?;
        let lattice = LeechLattice { golay, basis };
        lattice.self_check()?;
        Ok(lattice)
    }

    /// Shared instance; construction is deterministic.
    pub fn standard() -> &'static LeechLattice {
        static LEECH: OnceLock<LeechLattice> = OnceLock::new();
        LEECH.get_or_init(|| LeechLattice::new().expect("Leech lattice construction"))
    }

    fn self_check(&self) -> Result<(), LatticeError> {
        if self.basis.len() != DIM {
            return Err(LatticeError::BadCode(format!("basis has rank {}", self.basis.len())));
        }
        // Hermite form is upper triangular: det is the product of pivots; unimodularity of
        // the unscaled lattice means det = 8^12 here
        let det: i128 = (0..DIM).map(|i| self.basis[i][i]).product();
        if det != 8i128.pow(12) {
            return Err(LatticeError::BadCode(format!("basis determinant {det}")));
        }
        for row in &self.basis {
            let v: Vec<i64> = row.iter().map(|&x| x as i64).collect();
            if !self.is_member(&v) {
                return Err(LatticeError::BadCode("basis vector outside the lattice".into()));
            }
        }
        Ok(())
    }

    pub fn golay(&self) -> &GolayCode {
        &self.golay
    }

    pub fn basis(&self) -> &[IntRow] {
        &self.basis
    }

    /// Membership test: coordinates share a parity `m`, the word `((cᵢ − m)/2 mod 2)` is a
    /// Golay codeword, and `Σcᵢ ≡ 4m (mod 8)`.
    pub fn is_member(&self, v: &[i64]) -> bool {
        if v.len() != DIM {
            return false;
        }
        let m = v[0].rem_euclid(2);
        if v.iter().any(|c| c.rem_euclid(2) != m) {
            return false;
        }
        let word = v
            .iter()
            .enumerate()
            .fold(0u32, |w, (i, c)| w | ((((c - m) / 2).rem_euclid(2) as u32) << i));
        if !self.golay.contains(word) {
            return false;
        }
        v.iter().sum::<i64>().rem_euclid(8) == 4 * m
    }

    pub fn contains(&self, v: &LatticeVector) -> bool {
        let c: Vec<i64> = v.0.iter().map(|&x| i64::from(x)).collect();
        self.is_member(&c)
    }
}

pub fn is_leech_member(v: &[i64]) -> bool {
    LeechLattice::standard().is_member(v)
}

/// Canonical anchors A = (4, 4, 0²²) and B = (−3, 1²³), with (A, A) = (B, B) = 4 and
/// (A, B) = −1.
pub fn canonical_anchors() -> (LatticeVector, LatticeVector) {
    let mut a = [0i32; DIM];
    a[0] = 4;
    a[1] = 4;
    let mut b = [1i32; DIM];
    b[0] = -3;
    (LatticeVector(a), LatticeVector(b))
}

/// A second valid anchor pair: A′ = twice the first octad through coordinate 0, and
/// B′ = (3, −1²³) = −B. Not related to the canonical pair by a coordinate permutation.
pub fn alternate_anchors() -> (LatticeVector, LatticeVector) {
    let leech = LeechLattice::standard();
    let octad = leech
        .golay()
        .octads()
        .filter(|w| w & 1 == 1)
        .min()
        .expect("octads through every point");
    let mut a = [0i32; DIM];
    for (i, c) in a.iter_mut().enumerate() {
        *c = 2 * (octad >> i & 1) as i32;
    }
    let mut b = [-1i32; DIM];
    b[0] = 3;
    (LatticeVector(a), LatticeVector(b))
}

/// Checks the anchor requirements: both Leech vectors of norm 4 with inner product −1.
pub fn validate_anchors(a: &LatticeVector, b: &LatticeVector) -> Result<(), LatticeError> {
    let leech = LeechLattice::standard();
    for (name, v) in [("A", a), ("B", b)] {
        if !leech.contains(v) {
            return Err(LatticeError::Anchor(format!("{name} is not a Leech vector")));
        }
        if v.scaled_norm() != 32 {
            return Err(LatticeError::Anchor(format!("{name} has norm {}, expected 4", v.norm())));
        }
    }
    if a.dot(b) != -8 {
        return Err(LatticeError::Anchor(format!("(A, B) = {}, expected -1", leech_inner(a, b))));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(prefix: &[i64], fill: i64) -> Vec<i64> {
        let mut out = vec![fill; DIM];
        out[..prefix.len()].copy_from_slice(prefix);
        out
    }

    /// Independent three-condition check written against the codeword list.
    fn oracle_member(c: &[i64]) -> bool {
        let code = build_golay().unwrap();
        let m = c[0].rem_euclid(2);
        let same_parity = c.iter().all(|x| x.rem_euclid(2) == m);
        let word: Vec<i64> = c.iter().map(|x| ((x - m) / 2).rem_euclid(2)).collect();
        let in_code = code
            .codewords()
            .iter()
            .any(|w| (0..DIM).all(|i| i64::from(w >> i & 1) == word[i]));
        same_parity && in_code && c.iter().sum::<i64>().rem_euclid(8) == 4 * m
    }

    #[test]
    fn membership_examples() {
        let a = v(&[4, 4], 0);
        let b = v(&[-3], 1);
        let bad = v(&[1], 0);
        for (x, expected) in [(&a, true), (&b, true), (&bad, false)] {
            assert_eq!(is_leech_member(x), expected);
            assert_eq!(oracle_member(x), expected);
        }
    }

    #[test]
    fn anchor_inner_products() {
        let (a, b) = canonical_anchors();
        assert_eq!(leech_inner(&a, &a), Rational::from(4));
        assert_eq!(leech_inner(&a, &b), Rational::from(-1));
        assert_eq!(leech_inner(&LatticeVector::zero(), &LatticeVector::zero()), Rational::zero());
        validate_anchors(&a, &b).unwrap();
        let (a2, b2) = alternate_anchors();
        validate_anchors(&a2, &b2).unwrap();
    }

    #[test]
    fn basis_rows_are_members() {
        let leech = LeechLattice::standard();
        assert_eq!(leech.basis().len(), DIM);
    }

    #[test]
    fn sum_congruence_matters() {
        // right parity and codeword, wrong coordinate sum
        let c = v(&[4], 0);
        assert!(!is_leech_member(&c));
        assert!(!oracle_member(&c));
    }
}
