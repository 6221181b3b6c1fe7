//! Small integer-matrix toolkit: row echelon (Hermite-style) reduction, integer kernels and
//! LLL basis reduction. Dimensions here never exceed a few dozen.

use super::LatticeError;

pub type IntRow = Vec<i128>;

fn overflow() -> LatticeError {
    LatticeError::Overflow
}

fn axpy(target: &mut IntRow, src: &IntRow, q: i128) -> Result<(), LatticeError> {
    for (t, s) in target.iter_mut().zip(src) {
        *t = t.checked_sub(q.checked_mul(*s).ok_or_else(overflow)?).ok_or_else(overflow)?;
    }
    Ok(())
}

/// Brings the leading `ncols` columns of `rows` into row echelon form using unimodular row
/// operations (applied to whole rows). Returns the pivot columns; rows past the pivot count
/// are zero on the leading columns. Pivots are made positive and entries above a pivot are
/// reduced into `[0, pivot)`.
pub fn echelon(rows: &mut [IntRow], ncols: usize) -> Result<Vec<usize>, LatticeError> {
    let mut pivots = Vec::new();
    let mut top = 0;
    for col in 0..ncols {
        if top == rows.len() {
            break;
        }
        loop {
            let best = (top..rows.len())
                .filter(|&r| rows[r][col] != 0)
                .min_by_key(|&r| rows[r][col].unsigned_abs());
            let Some(best) = best else { break };
            rows.swap(top, best);
            let pivot_row = rows[top].clone();
            let p = pivot_row[col];
            let mut done = true;
            for r in top + 1..rows.len() {
                if rows[r][col] != 0 {
                    let q = rows[r][col].div_euclid(p);
                    axpy(&mut rows[r], &pivot_row, q)?;
                    if rows[r][col] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if rows[top][col] == 0 {
            continue;
        }
        if rows[top][col] < 0 {
            for v in rows[top].iter_mut() {
                *v = -*v;
            }
        }
        let pivot_row = rows[top].clone();
        for r in 0..top {
            let q = rows[r][col].div_euclid(pivot_row[col]);
            if q != 0 {
                axpy(&mut rows[r], &pivot_row, q)?;
            }
        }
        pivots.push(col);
        top += 1;
    }
    Ok(pivots)
}

/// Basis (as rows) of the lattice generated by `generators`, in Hermite normal form.
pub fn lattice_basis(generators: &[IntRow]) -> Result<Vec<IntRow>, LatticeError> {
    let ncols = generators.first().map_or(0, |r| r.len());
    let mut rows = generators.to_vec();
    let pivots = echelon(&mut rows, ncols)?;
    rows.truncate(pivots.len());
    Ok(rows)
}

/// Result of solving `z · C = target` over the integers.
pub struct IntegerSolution {
    /// One particular solution `z`.
    pub particular: IntRow,
    /// Basis of the integer kernel `{z : z · C = 0}`.
    pub kernel: Vec<IntRow>,
}

/// Solves `z · C = target` for integer row vectors `z`, where `C` has one row per unknown.
/// Returns `Ok(None)` when the system has no integer solution.
pub fn solve_integer_system(c: &[IntRow], target: &[i128]) -> Result<Option<IntegerSolution>, LatticeError> {
    let n = c.len();
    let t = target.len();
    let mut rows: Vec<IntRow> = c
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| i128::from(i == j)));
            r
        })
        .collect();
    let pivots = echelon(&mut rows, t)?;
    let rank = pivots.len();

    // back-substitute y · H = target over the echelon rows
    let mut y = vec![0i128; rank];
    let mut residual = target.to_vec();
    for (k, &col) in pivots.iter().enumerate() {
        let p = rows[k][col];
        if residual[col] % p != 0 {
            return Ok(None);
        }
        y[k] = residual[col] / p;
        for j in 0..t {
            residual[j] = residual[j].checked_sub(y[k].checked_mul(rows[k][j]).ok_or_else(overflow)?).ok_or_else(overflow)?;
        }
    }
    if residual.iter().any(|&v| v != 0) {
        return Ok(None);
    }
    let mut particular = vec![0i128; n];
    for (k, yk) in y.iter().enumerate() {
        for j in 0..n {
            particular[j] += yk * rows[k][t + j];
        }
    }
    let kernel = rows[rank..].iter().map(|r| r[t..].to_vec()).collect();
    Ok(Some(IntegerSolution { particular, kernel }))
}

pub fn row_times_matrix(z: &[i128], m: &[IntRow]) -> Result<IntRow, LatticeError> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut out = vec![0i128; cols];
    for (zi, row) in z.iter().zip(m) {
        if *zi == 0 {
            continue;
        }
        for (o, v) in out.iter_mut().zip(row) {
            *o = o.checked_add(zi.checked_mul(*v).ok_or_else(overflow)?).ok_or_else(overflow)?;
        }
    }
    Ok(out)
}

pub fn dot(a: &[i128], b: &[i128]) -> i128 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// LLL reduction (δ = 0.99) of linearly independent integer rows under the standard dot
/// product. Gram–Schmidt data is kept in `f64`; the basis itself is only ever changed by
/// unimodular integer operations, so the output spans exactly the input lattice.
pub fn lll_reduce(basis: &mut [IntRow]) -> Result<(), LatticeError> {
    let n = basis.len();
    if n < 2 {
        return Ok(());
    }
    let delta = 0.99;
    let (mut mu, mut norms) = gram_schmidt(basis);
    let mut k = 1;
    let mut swaps = 0usize;
    while k < n {
        for j in (0..k).rev() {
            let q = mu[k][j].round();
            if q != 0.0 {
                let src = basis[j].clone();
                axpy(&mut basis[k], &src, q as i128)?;
                for l in 0..j {
                    mu[k][l] -= q * mu[j][l];
                }
                mu[k][j] -= q;
            }
        }
        if norms[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * norms[k - 1] {
            k += 1;
        } else {
            basis.swap(k, k - 1);
            swaps += 1;
            if swaps > 1_000_000 {
                return Err(LatticeError::Reduction("LLL did not terminate".into()));
            }
            (mu, norms) = gram_schmidt(basis);
            k = (k - 1).max(1);
        }
    }
    Ok(())
}

fn gram_schmidt(basis: &[IntRow]) -> (Vec<Vec<f64>>, Vec<f64>) {
    let n = basis.len();
    let rows: Vec<Vec<f64>> = basis.iter().map(|r| r.iter().map(|&v| v as f64).collect()).collect();
    let mut star: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut mu = vec![vec![0.0; n]; n];
    let mut norms = vec![0.0; n];
    for i in 0..n {
        let mut v = rows[i].clone();
        for j in 0..i {
            let m = fdot(&rows[i], &star[j]) / norms[j];
            mu[i][j] = m;
            for (a, b) in v.iter_mut().zip(&star[j]) {
                *a -= m * b;
            }
        }
        norms[i] = fdot(&v, &v);
        star.push(v);
    }
    (mu, norms)
}

fn fdot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
