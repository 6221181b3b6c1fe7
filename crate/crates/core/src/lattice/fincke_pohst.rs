//! Fincke–Pohst enumeration of integer points in an ellipsoid.
//!
//! Finds every integer vector `k` with `(k − center)ᵀ G (k − center) ≤ bound`. Pruning uses
//! `f64` with a relative slack of [`SLACK`]; the slack only ever admits extra nodes, so the
//! search is exhaustive as long as rounding error stays below it (for the well-conditioned,
//! reduced forms used here it is smaller by many orders of magnitude). Leaves are
//! over-approximate; callers must re-check every returned point in exact arithmetic.

use rayon::prelude::*;

use super::LatticeError;

pub const SLACK: f64 = 1e-6;

/// Incremental pruning hook, called as coordinates are fixed from the last index down.
pub trait SearchHook: Clone + Send {
    /// Coordinate `index` is set to `value`. Returning `false` prunes the subtree, and no
    /// matching [`SearchHook::pop`] follows.
    fn push(&mut self, index: usize, value: i64) -> bool;
    fn pop(&mut self, index: usize, value: i64);
}

#[derive(Clone, Copy, Debug, Default)]
pub struct NoHook;

impl SearchHook for NoHook {
    fn push(&mut self, _: usize, _: i64) -> bool {
        true
    }
    fn pop(&mut self, _: usize, _: i64) {}
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub leaves: u64,
}

impl std::ops::Add for SearchStats {
    type Output = SearchStats;
    fn add(self, o: SearchStats) -> SearchStats {
        SearchStats { nodes: self.nodes + o.nodes, leaves: self.leaves + o.leaves }
    }
}

#[derive(Clone, Debug)]
pub struct FinckePohst {
    diag: Vec<f64>,
    upper: Vec<Vec<f64>>,
    center: Vec<f64>,
    bound: f64,
    boxes: Option<Vec<(i64, i64)>>,
}

impl FinckePohst {
    /// `gram` must be symmetric positive definite.
    pub fn new(gram: &[Vec<f64>], center: Vec<f64>, bound: f64) -> Result<Self, LatticeError> {
        let n = gram.len();
        if center.len() != n || gram.iter().any(|r| r.len() != n) {
            return Err(LatticeError::Reduction("quadratic form dimension mismatch".into()));
        }
        // G = Uᵀ D U with U unit upper triangular
        let mut diag = vec![0.0; n];
        let mut upper = vec![vec![0.0; n]; n];
        for i in 0..n {
            let mut d = gram[i][i];
            for k in 0..i {
                d -= upper[k][i] * upper[k][i] * diag[k];
            }
            if d <= 0.0 {
                return Err(LatticeError::Reduction("quadratic form is not positive definite".into()));
            }
            diag[i] = d;
            upper[i][i] = 1.0;
            for j in i + 1..n {
                let mut v = gram[i][j];
                for k in 0..i {
                    v -= upper[k][i] * upper[k][j] * diag[k];
                }
                upper[i][j] = v / d;
            }
        }
        Ok(FinckePohst { diag, upper, center, bound, boxes: None })
    }

    /// Restricts coordinate `i` to `boxes[i].0 ..= boxes[i].1`.
    pub fn with_boxes(mut self, boxes: Vec<(i64, i64)>) -> Self {
        self.boxes = Some(boxes);
        self
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    fn limit(&self) -> f64 {
        self.bound + SLACK * self.bound.abs().max(1.0)
    }

    fn range(&self, i: usize, coords: &[i64], partial: f64) -> (i64, i64, f64) {
        let n = self.dim();
        let mut s = 0.0;
        for j in i + 1..n {
            s += self.upper[i][j] * (coords[j] as f64 - self.center[j]);
        }
        let mid = self.center[i] - s;
        let rem = (self.limit() - partial).max(0.0);
        let r = (rem / self.diag[i]).sqrt() + SLACK;
        let mut lo = (mid - r).ceil() as i64;
        let mut hi = (mid + r).floor() as i64;
        if let Some(b) = &self.boxes {
            lo = lo.max(b[i].0);
            hi = hi.min(b[i].1);
        }
        (lo, hi, mid)
    }

    /// Sequential depth-first search. `visit` receives each surviving leaf.
    pub fn search<H: SearchHook>(&self, hook: &mut H, visit: &mut impl FnMut(&[i64])) -> SearchStats {
        let n = self.dim();
        let mut coords = vec![0i64; n];
        let mut stats = SearchStats::default();
        if n == 0 {
            visit(&coords);
            stats.leaves = 1;
            return stats;
        }
        self.descend(n - 1, 0.0, &mut coords, hook, visit, &mut stats);
        stats
    }

    fn descend<H: SearchHook>(
        &self,
        i: usize,
        partial: f64,
        coords: &mut [i64],
        hook: &mut H,
        visit: &mut impl FnMut(&[i64]),
        stats: &mut SearchStats,
    ) {
        stats.nodes += 1;
        let (lo, hi, mid) = self.range(i, coords, partial);
        let limit = self.limit();
        for v in lo..=hi {
            let d = v as f64 - mid;
            let p = partial + self.diag[i] * d * d;
            if p > limit {
                continue;
            }
            if !hook.push(i, v) {
                continue;
            }
            coords[i] = v;
            if i == 0 {
                stats.leaves += 1;
                visit(coords);
            } else {
                self.descend(i - 1, p, coords, hook, visit, stats);
            }
            hook.pop(i, v);
        }
        coords[i] = 0;
    }

    /// Splits the search on the last coordinate and runs the subtrees on the rayon pool.
    /// Results come back in subtree order, so the output is schedule independent.
    pub fn search_parallel<H, T, F>(&self, hook: &H, leaf: F) -> (Vec<T>, SearchStats)
    where
        H: SearchHook + Sync,
        T: Send,
        F: Fn(&[i64]) -> Option<T> + Sync,
    {
        let n = self.dim();
        if n == 0 {
            let mut out = Vec::new();
            let mut h = hook.clone();
            let stats = self.search(&mut h, &mut |c| out.extend(leaf(c)));
            return (out, stats);
        }
        let top = n - 1;
        let zeros = vec![0i64; n];
        let (lo, hi, _) = self.range(top, &zeros, 0.0);
        let parts: Vec<(Vec<T>, SearchStats)> = (lo..=hi)
            .into_par_iter()
            .map(|v| {
                let mut h = hook.clone();
                let mut out = Vec::new();
                let mut stats = SearchStats::default();
                let mut coords = vec![0i64; n];
                let mid = self.center[top];
                let d = v as f64 - mid;
                let p = self.diag[top] * d * d;
                if p > self.limit() || !h.push(top, v) {
                    return (out, stats);
                }
                coords[top] = v;
                if top == 0 {
                    stats.leaves += 1;
                    out.extend(leaf(&coords));
                } else {
                    self.descend(top - 1, p, &mut coords, &mut h, &mut |c| out.extend(leaf(c)), &mut stats);
                }
                h.pop(top, v);
                (out, stats)
            })
            .collect();
        let mut stats = SearchStats { nodes: 1, leaves: 0 };
        let mut out = Vec::new();
        for (o, s) in parts {
            out.extend(o);
            stats = stats + s;
        }
        (out, stats)
    }
}
