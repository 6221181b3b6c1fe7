use super::{ArithError, Rational};

pub type RationalMatrix = Vec<Vec<Rational>>;

fn check_square(m: &RationalMatrix) -> Result<usize, ArithError> {
    let n = m.len();
    if m.iter().any(|row| row.len() != n) {
        return Err(ArithError::Dimension(format!("matrix is not {n}x{n}")));
    }
    Ok(n)
}

/// Gauss-Jordan elimination on `[m | rhs]`, returning the reduced right-hand side.
fn eliminate(m: &RationalMatrix, mut rhs: RationalMatrix) -> Result<RationalMatrix, ArithError> {
    let n = check_square(m)?;
    if rhs.len() != n {
        return Err(ArithError::Dimension(format!("rhs has {} rows, expected {n}", rhs.len())));
    }
    let mut a = m.clone();
    let mut rank = 0;
    for col in 0..n {
        let Some(pivot) = (rank..n).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, pivot);
        rhs.swap(rank, pivot);
        let inv = a[rank][col].recip()?;
        for v in a[rank].iter_mut() {
            *v *= &inv;
        }
        for v in rhs[rank].iter_mut() {
            *v *= &inv;
        }
        for r in 0..n {
            if r == rank || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for c in 0..n {
                let t = &f * &a[rank][c];
                a[r][c] -= &t;
            }
            for c in 0..rhs[r].len() {
                let t = &f * &rhs[rank][c];
                rhs[r][c] -= &t;
            }
        }
        rank += 1;
    }
    if rank < n {
        return Err(ArithError::Singular { rank, size: n });
    }
    Ok(rhs)
}

/// Solves `m · x = rhs` exactly.
pub fn rational_linear_solve(m: &RationalMatrix, rhs: &[Rational]) -> Result<Vec<Rational>, ArithError> {
    let cols = rhs.iter().map(|v| vec![v.clone()]).collect();
    Ok(eliminate(m, cols)?.into_iter().map(|mut r| r.remove(0)).collect())
}

pub fn inverse(m: &RationalMatrix) -> Result<RationalMatrix, ArithError> {
    let n = check_square(m)?;
    let id = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
        .collect();
    eliminate(m, id)
}

pub fn determinant(m: &RationalMatrix) -> Result<Rational, ArithError> {
    let n = check_square(m)?;
    let mut a = m.clone();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Ok(Rational::zero());
        };
        if pivot != col {
            a.swap(col, pivot);
            det = -det;
        }
        det *= &a[col][col];
        let inv = a[col][col].recip()?;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] * &inv;
            for c in col..n {
                let t = &f * &a[col][c];
                a[r][c] -= &t;
            }
        }
    }
    Ok(det)
}

pub fn mat_vec(m: &RationalMatrix, v: &[Rational]) -> Vec<Rational> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from(n)
    }

    fn gram() -> RationalMatrix {
        vec![vec![q(4), q(-1)], vec![q(-1), q(4)]]
    }

    #[test]
    fn anchor_gram_solves() {
        let x = rational_linear_solve(&gram(), &[q(3), q(-3)]).unwrap();
        assert_eq!(x, vec![Rational::frac(3, 5), Rational::frac(-3, 5)]);
        assert_eq!(mat_vec(&gram(), &x), vec![q(3), q(-3)]);

        let x = rational_linear_solve(&gram(), &[q(2), q(0)]).unwrap();
        assert_eq!(x, vec![Rational::frac(8, 15), Rational::frac(2, 15)]);
    }

    #[test]
    fn identity_returns_rhs() {
        let id = vec![vec![q(1), q(0), q(0)], vec![q(0), q(1), q(0)], vec![q(0), q(0), q(1)]];
        let rhs = vec![Rational::frac(1, 3), q(-7), q(0)];
        assert_eq!(rational_linear_solve(&id, &rhs).unwrap(), rhs);
    }

    #[test]
    fn singular_reports_rank() {
        let m = vec![vec![q(1), q(2)], vec![q(2), q(4)]];
        assert_eq!(
            rational_linear_solve(&m, &[q(1), q(1)]),
            Err(ArithError::Singular { rank: 1, size: 2 })
        );
        assert_eq!(determinant(&m).unwrap(), q(0));
    }

    #[test]
    fn inverse_and_determinant_agree() {
        assert_eq!(determinant(&gram()).unwrap(), q(15));
        let inv = inverse(&gram()).unwrap();
        assert_eq!(inv[0][0], Rational::frac(4, 15));
        assert_eq!(inv[0][1], Rational::frac(1, 15));
    }
}
