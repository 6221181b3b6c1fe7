//! The 13-relation coherent configuration on X₁ ∪ X₂: classification of ordered pairs by
//! normalized inner product, exhaustive intersection numbers, and comparison against the
//! tabulated values.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{ExactScalar, Rational};
use crate::construct::{ConstructError, PointFrame, WeightedPointSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoherentError {
    #[error(transparent)]
    Construct(#[from] ConstructError),
    #[error("expected a two-layer design, found {0} layers")]
    Layers(usize),
    #[error("pair in layers ({0}, {1}) has normalized inner product {2}, outside the nine admissible values")]
    UnknownInnerProduct(usize, usize, String),
    #[error("p({a},{b};{c}) is not constant: {first:?} gives {first_value}, {second:?} gives {second_value}")]
    NotWellDefined {
        a: RelationLabel,
        b: RelationLabel,
        c: RelationLabel,
        first: (usize, usize),
        first_value: u32,
        second: (usize, usize),
        second_value: u32,
    },
    #[error("fixture line {0}: {1}")]
    Fixture(usize, String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum RelationLabel {
    Alpha0,
    Alpha1,
    Alpha2,
    Beta0,
    Beta1,
    Beta2,
    Beta3,
    GammaPlus1,
    GammaPlus2,
    GammaPlus3,
    GammaMinus1,
    GammaMinus2,
    GammaMinus3,
}

use RelationLabel::*;

pub const LABELS: [RelationLabel; 13] = [
    Alpha0, Alpha1, Alpha2, Beta0, Beta1, Beta2, Beta3, GammaPlus1, GammaPlus2, GammaPlus3, GammaMinus1, GammaMinus2,
    GammaMinus3,
];

impl RelationLabel {
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        ["alpha0", "alpha1", "alpha2", "beta0", "beta1", "beta2", "beta3", "gamma1+", "gamma2+", "gamma3+", "gamma1-", "gamma2-", "gamma3-"]
            [self.index()]
    }

    pub fn from_name(s: &str) -> Option<Self> {
        LABELS.iter().copied().find(|l| l.name() == s)
    }

    pub fn transpose(self) -> Self {
        match self {
            GammaPlus1 => GammaMinus1,
            GammaPlus2 => GammaMinus2,
            GammaPlus3 => GammaMinus3,
            GammaMinus1 => GammaPlus1,
            GammaMinus2 => GammaPlus2,
            GammaMinus3 => GammaPlus3,
            other => other,
        }
    }

    /// `(fiber of x, fiber of y)` for pairs `(x, y)` in the relation; fiber 0 is X₁.
    pub fn fibers(self) -> (usize, usize) {
        match self {
            Alpha0 | Alpha1 | Alpha2 => (0, 0),
            Beta0 | Beta1 | Beta2 | Beta3 => (1, 1),
            GammaPlus1 | GammaPlus2 | GammaPlus3 => (0, 1),
            _ => (1, 0),
        }
    }

    pub fn is_identity(self) -> bool {
        matches!(self, Alpha0 | Beta0)
    }

    pub fn identity_of(fiber: usize) -> Self {
        if fiber == 0 {
            Alpha0
        } else {
            Beta0
        }
    }

    /// Normalized inner product `x·y/(|x||y|)` of the relation.
    pub fn cosine(self) -> ExactScalar {
        let q = |n, d| ExactScalar::rational(Rational::frac(n, d));
        let g = |n, d| ExactScalar::sqrt11().scale(&Rational::frac(n, d));
        match self {
            Alpha0 | Beta0 => q(1, 1),
            Alpha1 => q(1, 6),
            Alpha2 => q(-1, 4),
            Beta1 => q(7, 22),
            Beta2 => q(-1, 44),
            Beta3 => q(-4, 11),
            GammaPlus1 | GammaMinus1 => g(1, 11),
            GammaPlus2 | GammaMinus2 => g(-1, 44),
            GammaPlus3 | GammaMinus3 => g(-3, 22),
        }
    }
}

impl fmt::Display for RelationLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The label of every ordered pair of X = X₁ ∪ X₂ (X₁ first), row-major.
#[derive(Clone, Debug)]
pub struct RelationPartition {
    pub sizes: [usize; 2],
    labels: Vec<u8>,
    /// Observed normalized inner products per fiber pair, rendered exactly.
    pub observed: BTreeMap<(usize, usize), BTreeSet<String>>,
}

impl RelationPartition {
    /// A partition given explicitly, row-major over X₁ followed by X₂.
    pub fn from_labels(sizes: [usize; 2], labels: &[RelationLabel]) -> Result<Self, CoherentError> {
        let n = sizes[0] + sizes[1];
        if labels.len() != n * n {
            return Err(CoherentError::Layers(labels.len()));
        }
        let fiber = |x: usize| usize::from(x >= sizes[0]);
        for (k, l) in labels.iter().enumerate() {
            let (x, y) = (k / n, k % n);
            if l.fibers() != (fiber(x), fiber(y)) || (x == y) != l.is_identity() {
                return Err(CoherentError::UnknownInnerProduct(fiber(x), fiber(y), format!("label {l} at ({x}, {y})")));
            }
        }
        Ok(RelationPartition { sizes, labels: labels.iter().map(|&l| l as u8).collect(), observed: BTreeMap::new() })
    }

    pub fn len(&self) -> usize {
        self.sizes[0] + self.sizes[1]
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn fiber(&self, x: usize) -> usize {
        usize::from(x >= self.sizes[0])
    }

    fn local(&self, x: usize) -> usize {
        if x >= self.sizes[0] {
            x - self.sizes[0]
        } else {
            x
        }
    }

    pub fn label(&self, x: usize, y: usize) -> RelationLabel {
        LABELS[self.labels[x * self.len() + y] as usize]
    }

    /// Number of ordered pairs in each relation.
    pub fn relation_sizes(&self) -> BTreeMap<RelationLabel, u64> {
        let mut out = BTreeMap::new();
        for &l in &self.labels {
            *out.entry(LABELS[l as usize]).or_default() += 1;
        }
        out
    }
}

fn label_for(i: usize, j: usize, cosine: &ExactScalar) -> Option<RelationLabel> {
    LABELS.iter().copied().find(|l| !l.is_identity() && l.fibers() == (i, j) && &l.cosine() == cosine)
}

pub fn classify_pairs(design: &WeightedPointSet) -> Result<RelationPartition, CoherentError> {
    if design.layers.len() != 2 {
        return Err(CoherentError::Layers(design.layers.len()));
    }
    let frame = design.frame()?;
    let hist = frame.pair_histogram();
    let sizes = [frame.layers[0].len(), frame.layers[1].len()];
    let mut table: HashMap<(usize, usize, i64), u8> = HashMap::new();
    let mut observed: BTreeMap<(usize, usize), BTreeSet<String>> = BTreeMap::new();
    for &(i, j, d) in hist.counts.keys() {
        let nn = Rational::from(frame.layer_norms[i]) * Rational::from(frame.layer_norms[j]);
        let root = ExactScalar::sqrt_of_rational(&nn)
            .ok_or_else(|| CoherentError::UnknownInnerProduct(i, j, format!("{d}/sqrt({nn})")))?;
        let cosine = ExactScalar::rational(Rational::from(d)).div(&root).expect("nonzero radii");
        observed.entry((i, j)).or_default().insert(cosine.to_string());
        if cosine == ExactScalar::one() && i == j {
            continue;
        }
        let label = label_for(i, j, &cosine).ok_or_else(|| CoherentError::UnknownInnerProduct(i, j, cosine.to_string()))?;
        table.insert((i, j, d), label as u8);
    }
    let n = sizes[0] + sizes[1];
    let points: Vec<(usize, &[i64; 24])> =
        frame.layers.iter().enumerate().flat_map(|(i, l)| l.iter().map(move |p| (i, p))).collect();
    let rows: Vec<Vec<u8>> = points
        .par_iter()
        .enumerate()
        .map(|(x, (i, px))| {
            points
                .iter()
                .enumerate()
                .map(|(y, (j, py))| {
                    if x == y {
                        return Ok(RelationLabel::identity_of(*i) as u8);
                    }
                    let d = PointFrame::dot(px, py);
                    table.get(&(*i, *j, d)).copied().ok_or_else(|| {
                        CoherentError::UnknownInnerProduct(*i, *j, format!("1 at distinct points {x}, {y}"))
                    })
                })
                .collect::<Result<Vec<u8>, _>>()
        })
        .collect::<Result<_, _>>()?;
    let mut labels = Vec::with_capacity(n * n);
    for r in rows {
        labels.extend(r);
    }
    Ok(RelationPartition { sizes, labels, observed })
}

const L: usize = 13;

fn slot(a: RelationLabel, b: RelationLabel, c: RelationLabel) -> usize {
    (a.index() * L + b.index()) * L + c.index()
}

/// `p(a, b; c)` for all 13³ label triples; triples that are impossible by fibers are 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionTensor {
    values: Vec<u32>,
}

impl IntersectionTensor {
    pub fn get(&self, a: RelationLabel, b: RelationLabel, c: RelationLabel) -> u32 {
        self.values[slot(a, b, c)]
    }

    pub fn from_fn(f: impl Fn(RelationLabel, RelationLabel, RelationLabel) -> u32) -> Self {
        let mut values = vec![0; L * L * L];
        for a in LABELS {
            for b in LABELS {
                for c in LABELS {
                    values[slot(a, b, c)] = f(a, b, c);
                }
            }
        }
        IntersectionTensor { values }
    }

    pub fn set(&mut self, a: RelationLabel, b: RelationLabel, c: RelationLabel, v: u32) {
        self.values[slot(a, b, c)] = v;
    }

    /// Number of `z` with `(x, z) ∈ R_a` for any `x` in the source fiber of `a`.
    pub fn valency(&self, a: RelationLabel) -> u32 {
        self.get(a, a.transpose(), RelationLabel::identity_of(a.fibers().0))
    }

    /// `p(a,b;c) = p(bᵀ,aᵀ;cᵀ)` for all triples.
    pub fn transpose_symmetric(&self) -> bool {
        LABELS.iter().all(|&a| {
            LABELS.iter().all(|&b| LABELS.iter().all(|&c| self.get(a, b, c) == self.get(b.transpose(), a.transpose(), c.transpose())))
        })
    }

    /// `Σ_b p(a,b;c)` equals the valency of `a` for every admissible `(a, c)`.
    pub fn fiber_counts_consistent(&self) -> bool {
        LABELS.iter().all(|&a| {
            LABELS.iter().filter(|c| c.fibers().0 == a.fibers().0).all(|&c| {
                let s: u32 = LABELS
                    .iter()
                    .filter(|b| b.fibers() == (a.fibers().1, c.fibers().1))
                    .map(|&b| self.get(a, b, c))
                    .sum();
                s == self.valency(a)
            })
        })
    }

    /// The β relations on X₂ alone form a commutative association scheme: identity β₀,
    /// every relation symmetric, closed under composition, and `p(a,b;c) = p(b,a;c)`.
    pub fn x2_is_association_scheme(&self) -> bool {
        let beta = [Beta0, Beta1, Beta2, Beta3];
        let identity = beta.iter().all(|&a| beta.iter().all(|&c| self.get(Beta0, a, c) == u32::from(a == c)));
        let symmetric = beta.iter().all(|&a| a.transpose() == a);
        let commutative =
            beta.iter().all(|&a| beta.iter().all(|&b| beta.iter().all(|&c| self.get(a, b, c) == self.get(b, a, c))));
        let counts = beta.iter().all(|&a| beta.iter().all(|&c| beta.iter().map(|&b| self.get(a, b, c)).sum::<u32>() == self.valency(a)));
        identity && symmetric && commutative && counts
    }

    /// Text form "a b c value" of every nonzero entry.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for a in LABELS {
            for b in LABELS {
                for c in LABELS {
                    let v = self.get(a, b, c);
                    if v != 0 {
                        out.push_str(&format!("{a} {b} {c} {v}\n"));
                    }
                }
            }
        }
        out
    }
}

struct Partial {
    seen: Vec<Option<(u32, (usize, usize))>>,
    conflict: Option<CoherentError>,
}

impl Partial {
    fn new() -> Self {
        Partial { seen: vec![None; L * L * L], conflict: None }
    }

    fn record(&mut self, a: RelationLabel, b: RelationLabel, c: RelationLabel, v: u32, pair: (usize, usize)) {
        let s = slot(a, b, c);
        match self.seen[s] {
            None => self.seen[s] = Some((v, pair)),
            Some((w, first)) if w != v && self.conflict.is_none() => {
                self.conflict = Some(CoherentError::NotWellDefined {
                    a,
                    b,
                    c,
                    first,
                    first_value: w,
                    second: pair,
                    second_value: v,
                });
            }
            _ => {}
        }
    }

    fn merge(mut self, other: Partial) -> Partial {
        if self.conflict.is_some() {
            return self;
        }
        if other.conflict.is_some() {
            return other;
        }
        for a in LABELS {
            for b in LABELS {
                for c in LABELS {
                    if let Some((v, pair)) = other.seen[slot(a, b, c)] {
                        self.record(a, b, c, v, pair);
                    }
                }
            }
        }
        self
    }
}

/// Bit rows: `rows[a][x]` is the set of `z` in the target fiber of `a` with `(x, z) ∈ R_a`,
/// for `x` in the source fiber of `a` (local indices).
struct BitRows {
    words: [usize; 2],
    rows: Vec<Vec<u64>>,
}

impl BitRows {
    fn new(p: &RelationPartition) -> Self {
        let words = [p.sizes[0].div_ceil(64), p.sizes[1].div_ceil(64)];
        let offset = [0, p.sizes[0]];
        let rows = LABELS
            .iter()
            .map(|&a| {
                let (src, dst) = a.fibers();
                let mut bits = vec![0u64; p.sizes[src] * words[dst]];
                for xl in 0..p.sizes[src] {
                    for zl in 0..p.sizes[dst] {
                        if p.label(offset[src] + xl, offset[dst] + zl) == a {
                            bits[xl * words[dst] + zl / 64] |= 1 << (zl % 64);
                        }
                    }
                }
                bits
            })
            .collect();
        BitRows { words, rows }
    }

    fn row(&self, a: RelationLabel, local: usize) -> &[u64] {
        let w = self.words[a.fibers().1];
        &self.rows[a.index()][local * w..(local + 1) * w]
    }
}

/// Every `p(a,b;c)`, checked for constancy over all pairs of every class.
pub fn intersection_numbers(partition: &RelationPartition) -> Result<IntersectionTensor, CoherentError> {
    let bits = BitRows::new(partition);
    let n = partition.len();
    let chunk = 64;
    let partials: Vec<Partial> = (0..n.div_ceil(chunk))
        .into_par_iter()
        .map(|ci| {
            let mut part = Partial::new();
            for x in ci * chunk..((ci + 1) * chunk).min(n) {
                let (i, xl) = (partition.fiber(x), partition.local(x));
                for y in 0..n {
                    let (j, yl) = (partition.fiber(y), partition.local(y));
                    let c = partition.label(x, y);
                    for a in LABELS.iter().filter(|a| a.fibers().0 == i) {
                        let k = a.fibers().1;
                        let ra = bits.row(*a, xl);
                        for b in LABELS.iter().filter(|b| b.fibers() == (k, j)) {
                            let rb = bits.row(b.transpose(), yl);
                            let v: u32 = ra.iter().zip(rb).map(|(p, q)| (p & q).count_ones()).sum();
                            part.record(*a, *b, c, v, (x, y));
                        }
                    }
                }
            }
            part
        })
        .collect();
    let merged = partials.into_iter().fold(Partial::new(), Partial::merge);
    if let Some(e) = merged.conflict {
        return Err(e);
    }
    Ok(IntersectionTensor { values: merged.seen.iter().map(|s| s.map_or(0, |(v, _)| v)).collect() })
}

pub const FIXTURE: &str = include_str!("fixture.txt");

/// Tabulated entries as a tensor; unlisted triples are zero.
pub fn fixture_tensor() -> Result<IntersectionTensor, CoherentError> {
    parse_fixture(FIXTURE)
}

pub fn parse_fixture(text: &str) -> Result<IntersectionTensor, CoherentError> {
    let mut t = IntersectionTensor::from_fn(|_, _, _| 0);
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        let err = |m: &str| CoherentError::Fixture(no + 1, m.to_string());
        if parts.len() != 4 {
            return Err(err("expected `a b c value`"));
        }
        let lab = |s: &str| RelationLabel::from_name(s).ok_or_else(|| err(&format!("unknown label {s}")));
        let (a, b, c) = (lab(parts[0])?, lab(parts[1])?, lab(parts[2])?);
        if a.fibers().1 != b.fibers().0 || (a.fibers().0, b.fibers().1) != c.fibers() {
            return Err(err("entry is structurally impossible"));
        }
        let v: u32 = parts[3].parse().map_err(|_| err("bad value"))?;
        t.set(a, b, c, v);
    }
    Ok(t)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub a: RelationLabel,
    pub b: RelationLabel,
    pub c: RelationLabel,
    pub expected: u32,
    pub computed: u32,
}

/// Entrywise differences between two tensors over all 13³ triples.
pub fn tensor_mismatches(expected: &IntersectionTensor, computed: &IntersectionTensor) -> Vec<Mismatch> {
    let mut out = Vec::new();
    for a in LABELS {
        for b in LABELS {
            for c in LABELS {
                let (e, v) = (expected.get(a, b, c), computed.get(a, b, c));
                if e != v {
                    out.push(Mismatch { a, b, c, expected: e, computed: v });
                }
            }
        }
    }
    out
}

pub fn compare_with_fixture(tensor: &IntersectionTensor) -> Result<Vec<Mismatch>, CoherentError> {
    Ok(tensor_mismatches(&fixture_tensor()?, tensor))
}

/// Expected normalized inner products per fiber pair, rendered as in
/// [`RelationPartition::observed`].
pub fn expected_cosines() -> BTreeMap<(usize, usize), BTreeSet<String>> {
    let mut out: BTreeMap<(usize, usize), BTreeSet<String>> = BTreeMap::new();
    for l in LABELS {
        out.entry(l.fibers()).or_default().insert(l.cosine().to_string());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_parses_and_has_expected_valencies() {
        let t = fixture_tensor().unwrap();
        let v: Vec<u32> = LABELS.iter().map(|&a| t.valency(a)).collect();
        assert_eq!(v, vec![1, 162, 112, 1, 462, 1232, 330, 567, 1296, 162, 77, 176, 22]);
        assert_eq!(1 + 162 + 112, 275);
        assert_eq!(1 + 462 + 1232 + 330, 2025);
        assert_eq!(t.get(Alpha1, Alpha1, Alpha1), 105);
        assert_eq!(t.get(Beta3, Beta3, Beta3), 7);
    }

    #[test]
    fn fixture_is_internally_consistent() {
        let t = fixture_tensor().unwrap();
        assert!(t.transpose_symmetric());
        assert!(t.fiber_counts_consistent());
        assert!(t.x2_is_association_scheme());
    }

    #[test]
    fn beta1_row_sum_at_identity() {
        let t = fixture_tensor().unwrap();
        let s: u32 = [Beta0, Beta1, Beta2, Beta3].iter().map(|&b| t.get(Beta1, b, Beta0)).sum();
        assert_eq!(s, 462);
    }

    #[test]
    fn corrupted_entry_is_the_only_mismatch() {
        let t = fixture_tensor().unwrap();
        let mut bad = t.clone();
        bad.set(Beta2, Beta2, Beta2, t.get(Beta2, Beta2, Beta2) + 1);
        let m = tensor_mismatches(&t, &bad);
        assert_eq!(m, vec![Mismatch { a: Beta2, b: Beta2, c: Beta2, expected: 730, computed: 731 }]);
    }

    #[test]
    fn labels_roundtrip_and_transpose() {
        for l in LABELS {
            assert_eq!(RelationLabel::from_name(l.name()), Some(l));
            assert_eq!(l.transpose().transpose(), l);
            let (s, d) = l.fibers();
            assert_eq!(l.transpose().fibers(), (d, s));
        }
    }

    #[test]
    fn impossible_fixture_entries_are_rejected() {
        assert!(parse_fixture("alpha1 beta1 beta1 3\n").is_err());
        assert!(parse_fixture("alpha1 alpha1 alpha9 3\n").is_err());
    }

    #[test]
    fn non_constant_counts_are_reported_with_witnesses() {
        // X₁ = {0, 1, 2} with 0 ~ 1 only; X₂ = {3}
        let n = 4;
        let mut labels = Vec::new();
        for x in 0..n {
            for y in 0..n {
                labels.push(match (x, y) {
                    _ if x == y && x < 3 => Alpha0,
                    (3, 3) => Beta0,
                    (0, 1) | (1, 0) => Alpha1,
                    (_, 3) => GammaPlus1,
                    (3, _) => GammaMinus1,
                    _ => Alpha2,
                });
            }
        }
        let p = RelationPartition::from_labels([3, 1], &labels).unwrap();
        match intersection_numbers(&p) {
            Err(CoherentError::NotWellDefined { first, second, first_value, second_value, .. }) => {
                assert_ne!(first, second);
                assert_ne!(first_value, second_value);
            }
            other => panic!("expected a witness pair, got {other:?}"),
        }
        labels[0] = Alpha1;
        assert!(RelationPartition::from_labels([3, 1], &labels).is_err());
    }

    #[test]
    fn gamma_cosine_times_radii() {
        // γ₂·r₁r₂ = −(1/(4√11))·(12/5)√11 = −3/5
        let r1r2 = ExactScalar::sqrt11().scale(&Rational::frac(12, 5));
        assert_eq!(&GammaPlus2.cosine() * &r1r2, ExactScalar::rational(Rational::frac(-3, 5)));
    }
}
