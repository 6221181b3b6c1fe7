use crate::arith::{ExactScalar, Rational};

use super::DesignError;

/// Highest degree the evaluator will build.
pub const MAX_DEGREE: usize = 8;

/// Gegenbauer polynomials on S^{n−1}, normalized by Qₖ(1) = 1 and built from
/// `Qₖ(u) = ((2k+n−4)·u·Qₖ₋₁(u) − (k−1)·Qₖ₋₂(u)) / (k+n−3)`.
#[derive(Clone, Debug)]
pub struct GegenbauerEvaluator {
    n: usize,
    /// `coeffs[k][m]` is the coefficient of `u^m` in `Qₖ`.
    coeffs: Vec<Vec<Rational>>,
}

impl GegenbauerEvaluator {
    pub fn new(n: usize, max_degree: usize) -> Result<Self, DesignError> {
        if n < 2 {
            return Err(DesignError::Precondition(format!("dimension {n} < 2")));
        }
        if max_degree > MAX_DEGREE {
            return Err(DesignError::Precondition(format!("degree {max_degree} exceeds the cap {MAX_DEGREE}")));
        }
        let mut coeffs: Vec<Vec<Rational>> = vec![vec![Rational::one()]];
        if max_degree >= 1 {
            coeffs.push(vec![Rational::zero(), Rational::one()]);
        }
        let n = n as i64;
        for k in 2..=max_degree {
            let ki = k as i64;
            let a = Rational::from(2 * ki + n - 4);
            let b = Rational::from(ki - 1);
            let d = Rational::from(ki + n - 3);
            let mut next = vec![Rational::zero(); k + 1];
            for (m, c) in coeffs[k - 1].iter().enumerate() {
                next[m + 1] += &(&a * c);
            }
            for (m, c) in coeffs[k - 2].iter().enumerate() {
                next[m] -= &(&b * c);
            }
            coeffs.push(next.into_iter().map(|c| c / &d).collect());
        }
        Ok(GegenbauerEvaluator { n: n as usize, coeffs })
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn max_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coefficients(&self, k: usize) -> &[Rational] {
        &self.coeffs[k]
    }

    pub fn eval(&self, k: usize, u: &ExactScalar) -> ExactScalar {
        self.coeffs[k].iter().rev().fold(ExactScalar::zero(), |acc, c| &(&acc * u) + &ExactScalar::rational(c.clone()))
    }

    pub fn eval_rational(&self, k: usize, u: &Rational) -> Rational {
        self.coeffs[k].iter().rev().fold(Rational::zero(), |acc, c| acc * u + c)
    }

    /// Homogenized form `(|x||y|)^k Qₖ(x·y / (|x||y|))` as a polynomial in `s = x·y` and
    /// `p = |x|²|y|²`; rational because Qₖ has the parity of k.
    pub fn eval_homogeneous(&self, k: usize, s: &Rational, p: &Rational) -> Rational {
        self.coeffs[k]
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| c * s.pow(m as u32) * p.pow(((k - m) / 2) as u32))
            .sum()
    }
}

/// `Qₖ(u)` in dimension `n`.
pub fn gegenbauer_eval(n: usize, k: usize, u: &ExactScalar) -> Result<ExactScalar, DesignError> {
    Ok(GegenbauerEvaluator::new(n, k.max(1))?.eval(k, u))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization() {
        for n in [22, 23] {
            let g = GegenbauerEvaluator::new(n, 7).unwrap();
            for k in 0..=7 {
                assert_eq!(g.eval_rational(k, &Rational::one()), Rational::one(), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn second_degree_in_22_dimensions() {
        let g = GegenbauerEvaluator::new(22, 2).unwrap();
        assert_eq!(g.coefficients(2), &[Rational::frac(-1, 21), Rational::zero(), Rational::frac(22, 21)]);
        let u = ExactScalar::sqrt11().scale(&Rational::frac(1, 11));
        // (22/11 − 1)/21
        assert_eq!(g.eval(2, &u), ExactScalar::rational(Rational::frac(1, 21)));
    }

    #[test]
    fn degree_cap() {
        assert!(GegenbauerEvaluator::new(22, 9).is_err());
        assert!(GegenbauerEvaluator::new(1, 2).is_err());
        assert_eq!(gegenbauer_eval(22, 0, &ExactScalar::sqrt5()).unwrap(), ExactScalar::one());
    }

    #[test]
    fn homogeneous_form_matches_direct_evaluation() {
        let g = GegenbauerEvaluator::new(22, 6).unwrap();
        let (s, p) = (Rational::frac(3, 7), Rational::from(4));
        for k in 0..=6 {
            // p = 4 means |x||y| = 2
            let direct = g.eval_rational(k, &(&s / Rational::from(2))) * Rational::from(2).pow(k as u32);
            assert_eq!(g.eval_homogeneous(k, &s, &p), direct);
        }
    }
}
