//! Enumeration of Leech vectors of a fixed norm inside an affine coset cut out by integral
//! inner-product constraints.
//!
//! Two interchangeable strategies are registered:
//! - `fincke-pohst`: integer kernel of the constraints, particular solution, LLL-reduced
//!   coset basis, then ellipsoid enumeration. This is the primary path.
//! - `shape-filter`: walks every Leech vector of the requested norm via its Golay residue
//!   pattern and keeps those meeting the constraints. Slow for large norms; an independent
//!   cross-check.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::arith::{rational_linear_solve, Rational};
use crate::registry::Registry;

use super::fincke_pohst::{FinckePohst, NoHook};
use super::intmat::{dot, lll_reduce, row_times_matrix, solve_integer_system, IntRow};
use super::leech::{LatticeVector, LeechLattice, DIM};
use super::LatticeError;

/// The condition `(x, anchor) = value`, i.e. `x · anchor = 8 · value` in scaled coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CosetConstraint {
    pub anchor: LatticeVector,
    pub value: i64,
}

impl CosetConstraint {
    pub fn new(anchor: LatticeVector, value: i64) -> Self {
        CosetConstraint { anchor, value }
    }

    pub fn holds(&self, x: &LatticeVector) -> bool {
        x.dot(&self.anchor) == 8 * self.value
    }
}

pub trait ShellEnumerator: Send + Sync {
    fn name(&self) -> &'static str;

    /// Every Leech vector of the given norm satisfying all constraints, sorted ascending.
    fn enumerate(&self, constraints: &[CosetConstraint], norm: &Rational) -> Result<Vec<LatticeVector>, LatticeError>;
}

pub fn shell_enumerators() -> Registry<dyn ShellEnumerator> {
    let mut reg: Registry<dyn ShellEnumerator> = Registry::new("shell enumerator");
    reg.register("fincke-pohst", || Box::new(FinckePohstEnumerator));
    reg.register("shape-filter", || Box::new(ShapeFilterEnumerator));
    reg
}

/// Primary entry point: the Fincke–Pohst strategy.
pub fn enumerate_coset_shell(constraints: &[CosetConstraint], norm: &Rational) -> Result<Vec<LatticeVector>, LatticeError> {
    FinckePohstEnumerator.enumerate(constraints, norm)
}

/// Scaled squared length `8·norm`, or `None` if no integer vector can have that norm.
fn scaled_target(norm: &Rational) -> Result<Option<i64>, LatticeError> {
    if !norm.is_positive() {
        return Err(LatticeError::Precondition(format!("norm must be positive, got {norm}")));
    }
    let t = norm * Rational::from(8);
    if !t.is_integer() {
        return Ok(None);
    }
    Ok(Some(t.numer().to_i64().ok_or(LatticeError::Overflow)?))
}

fn accepts(x: &LatticeVector, constraints: &[CosetConstraint], target: i64) -> bool {
    x.scaled_norm() == target && constraints.iter().all(|c| c.holds(x))
}

pub struct FinckePohstEnumerator;

/// The affine lattice `{x ∈ Λ : constraints}` as `particular + span_Z(basis)`.
pub struct CosetLattice {
    pub particular: IntRow,
    pub basis: Vec<IntRow>,
}

pub fn coset_lattice(constraints: &[CosetConstraint]) -> Result<CosetLattice, LatticeError> {
    let leech = LeechLattice::standard();
    let m = leech.basis();
    if constraints.is_empty() {
        let mut basis = m.to_vec();
        lll_reduce(&mut basis)?;
        return Ok(CosetLattice { particular: vec![0; DIM], basis });
    }
    let anchors: Vec<IntRow> = constraints
        .iter()
        .map(|c| c.anchor.0.iter().map(|&v| i128::from(v)).collect())
        .collect();
    let c: Vec<IntRow> = m.iter().map(|row| anchors.iter().map(|a| dot(row, a)).collect()).collect();
    let target: Vec<i128> = constraints.iter().map(|c| 8 * i128::from(c.value)).collect();
    let sol = solve_integer_system(&c, &target)?.ok_or(LatticeError::Infeasible)?;
    if sol.kernel.len() != DIM - constraints.len() {
        return Err(LatticeError::Precondition("constraint anchors are linearly dependent".into()));
    }
    let particular = row_times_matrix(&sol.particular, m)?;
    let mut basis = sol.kernel.iter().map(|z| row_times_matrix(z, m)).collect::<Result<Vec<_>, _>>()?;
    lll_reduce(&mut basis)?;
    Ok(CosetLattice { particular, basis })
}

impl ShellEnumerator for FinckePohstEnumerator {
    fn name(&self) -> &'static str {
        "fincke-pohst"
    }

    fn enumerate(&self, constraints: &[CosetConstraint], norm: &Rational) -> Result<Vec<LatticeVector>, LatticeError> {
        let Some(target) = scaled_target(norm)? else {
            return Ok(Vec::new());
        };
        let coset = coset_lattice(constraints)?;
        let n = coset.basis.len();
        let p = &coset.particular;

        // exact split of p into its component in span(basis) and the orthogonal remainder
        let gram: Vec<Vec<Rational>> = coset
            .basis
            .iter()
            .map(|u| coset.basis.iter().map(|v| Rational::from(BigInt::from(dot(u, v)))).collect())
            .collect();
        let h: Vec<Rational> = coset.basis.iter().map(|u| Rational::from(BigInt::from(dot(u, p)))).collect();
        let s = rational_linear_solve(&gram, &h)?;
        let along: Rational = s.iter().zip(&h).map(|(a, b)| a * b).sum();
        let perp = Rational::from(BigInt::from(dot(p, p))) - along;
        let budget = Rational::from(target) - perp;
        if budget.is_negative() {
            return Ok(Vec::new());
        }

        let gram_f: Vec<Vec<f64>> = gram.iter().map(|r| r.iter().map(Rational::to_f64).collect()).collect();
        let center: Vec<f64> = s.iter().map(|v| -v.to_f64()).collect();
        let fp = FinckePohst::new(&gram_f, center, budget.to_f64())?;
        let (found, _) = fp.search_parallel(&NoHook, |k| {
            let mut x = p.clone();
            for (ki, row) in k.iter().zip(&coset.basis) {
                for (xi, r) in x.iter_mut().zip(row) {
                    *xi += i128::from(*ki) * r;
                }
            }
            let coords: Vec<i64> = x.iter().map(|&v| v as i64).collect();
            let v = LatticeVector::from_slice(&coords).ok()?;
            accepts(&v, constraints, target).then_some(v)
        });
        debug_assert_eq!(n, fp.dim());
        let mut out = found;
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }
}

pub struct ShapeFilterEnumerator;

/// Allowed coordinate values `≡ residue (mod 4)` with `c² ≤ max_sq`, smallest magnitude first.
fn residue_values(residue: i64, max_sq: i64) -> Vec<i64> {
    let r = (max_sq as f64).sqrt() as i64 + 1;
    let mut vals: Vec<i64> = (-r..=r).filter(|c| c.rem_euclid(4) == residue && c * c <= max_sq).collect();
    vals.sort_by_key(|c| (c.abs(), *c));
    vals
}

struct ShapeWalk<'a> {
    target: i64,
    parity: i64,
    classes: [Vec<i64>; DIM],
    min_tail: [i64; DIM + 1],
    visit: &'a mut dyn FnMut(&[i32; DIM]),
}

impl ShapeWalk<'_> {
    fn walk(&mut self, i: usize, sq: i64, sum: i64, cur: &mut [i32; DIM]) {
        if i == DIM {
            if sq == self.target && sum.rem_euclid(8) == 4 * self.parity {
                (self.visit)(cur);
            }
            return;
        }
        for idx in 0..self.classes[i].len() {
            let c = self.classes[i][idx];
            let nsq = sq + c * c;
            if nsq + self.min_tail[i + 1] > self.target {
                // values are sorted by magnitude, so later ones only get bigger
                break;
            }
            cur[i] = c as i32;
            self.walk(i + 1, nsq, sum + c, cur);
        }
    }
}

/// Visits every Leech vector whose coordinates follow the residue pattern of `(parity,
/// codeword)` and whose scaled squared length equals `target`.
fn walk_codeword(word: u32, parity: i64, target: i64, visit: &mut dyn FnMut(&[i32; DIM])) {
    let classes: [Vec<i64>; DIM] =
        std::array::from_fn(|i| residue_values((parity + 2 * i64::from(word >> i & 1)).rem_euclid(4), target));
    let mut min_tail = [0i64; DIM + 1];
    for i in (0..DIM).rev() {
        let m = classes[i].first().map_or(i64::MAX / 4, |c| c * c);
        min_tail[i] = min_tail[i + 1] + m;
    }
    if min_tail[0] > target {
        return;
    }
    let mut walk = ShapeWalk { target, parity, classes, min_tail, visit };
    walk.walk(0, 0, 0, &mut [0; DIM]);
}

impl ShapeFilterEnumerator {
    /// Streams every vector of the full shell through `keep`, collecting the accepted ones.
    pub fn scan<F>(norm: &Rational, keep: F) -> Result<Vec<LatticeVector>, LatticeError>
    where
        F: Fn(&LatticeVector) -> bool + Sync,
    {
        let Some(target) = scaled_target(norm)? else {
            return Ok(Vec::new());
        };
        let words = LeechLattice::standard().golay().codewords();
        let mut out: Vec<LatticeVector> = [0i64, 1]
            .par_iter()
            .flat_map_iter(|&parity| words.iter().map(move |&w| (parity, w)))
            .flat_map_iter(|(parity, w)| {
                let mut local = Vec::new();
                walk_codeword(w, parity, target, &mut |c| {
                    let v = LatticeVector(*c);
                    if keep(&v) {
                        local.push(v);
                    }
                });
                local
            })
            .collect();
        out.sort_unstable();
        Ok(out)
    }
}

impl ShellEnumerator for ShapeFilterEnumerator {
    fn name(&self) -> &'static str {
        "shape-filter"
    }

    fn enumerate(&self, constraints: &[CosetConstraint], norm: &Rational) -> Result<Vec<LatticeVector>, LatticeError> {
        Self::scan(norm, |v| constraints.iter().all(|c| c.holds(v)))
    }
}

/// Exact number of Leech vectors of the given norm, counted by dynamic programming over the
/// Golay residue patterns (no vectors are materialized).
pub fn shell_size(norm: &Rational) -> Result<u128, LatticeError> {
    let Some(target) = scaled_target(norm)? else {
        return Ok(0);
    };
    let golay = LeechLattice::standard().golay();
    let mut by_weight: BTreeMap<u32, u128> = BTreeMap::new();
    for w in golay.codewords() {
        *by_weight.entry(w.count_ones()).or_default() += 1;
    }
    let t = target as usize;
    let mut total = 0u128;
    for parity in [0i64, 1] {
        for (&weight, &words) in &by_weight {
            // dp[sq][sum mod 8] = number of partial vectors
            let mut dp = vec![[0u128; 8]; t + 1];
            dp[0][0] = 1;
            for i in 0..DIM {
                let residue = (parity + if (i as u32) < weight { 2 } else { 0 }).rem_euclid(4);
                let vals = residue_values(residue, target);
                let mut next = vec![[0u128; 8]; t + 1];
                for sq in 0..=t {
                    for r in 0..8 {
                        let cnt = dp[sq][r];
                        if cnt == 0 {
                            continue;
                        }
                        for &c in &vals {
                            let nsq = sq + (c * c) as usize;
                            if nsq > t {
                                continue;
                            }
                            let nr = (r as i64 + c).rem_euclid(8) as usize;
                            next[nsq][nr] += cnt;
                        }
                    }
                }
                dp = next;
            }
            total += words * dp[t][(4 * parity) as usize];
        }
    }
    Ok(total)
}
