//! The verification stages, each producing a [`VerificationReport`] with descriptive claim ids.
//! Failures of intermediate computations are recorded as failed claims rather than returned,
//! so a report always names the first claim that did not hold.

use std::collections::BTreeSet;
use std::fmt::Display;

use crate::arith::Rational;
use crate::coherent::{
    classify_pairs, compare_with_fixture, expected_cosines, intersection_numbers, IntersectionTensor, RelationLabel::*,
};
use crate::construct::{build_y, build_z, check_x1_equals_py, design_sources, Layer, PairHistogram, WeightedPointSet};
use crate::design::{
    binomial, euclidean_bound, euclidean_strength_from, spherical_bound, spherical_strength_of_layer,
    spherical_strength_z, strength_oracles, StrengthReport,
};
use crate::lattice::{LatticeVector, ShellEnumerator};
use crate::report::VerificationReport;
use crate::unique::{build_dual_frame, enumerate_candidates, integralize_x1, split_candidates, twin_outer_layer, CandidateSet};

pub const DIMENSION: usize = 22;
pub const INNER_SIZE: usize = 275;
pub const OUTER_SIZE: usize = 2025;
pub const DESIGN_SIZE: usize = 2300;
pub const STRENGTH: usize = 6;
pub const CANDIDATES: usize = 4050;
pub const SPHERE_SIZE: usize = 4600;

/// Options shared by the stages.
#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Also run the floating-point polynomial oracle.
    pub float_oracle: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { seed: 1, float_oracle: true }
    }
}

fn or_error<T: Display, E: Display>(r: Result<T, E>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => format!("error: {e}"),
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Number of leading conditions that vanish, i.e. the strength a report certifies.
fn leading_passes(r: &StrengthReport) -> usize {
    r.entries.iter().take_while(|e| e.pass).count()
}

/// Shell sizes and the size of the assembled design.
pub fn verify_construction(
    enumerator: &dyn ShellEnumerator,
    a: &LatticeVector,
    b: &LatticeVector,
    design: &WeightedPointSet,
) -> VerificationReport {
    let mut r = VerificationReport::new("construction");
    match design_sources(enumerator, a, b) {
        Ok(src) => {
            r.check("construction/inner-shell-size", INNER_SIZE, src.inner.len());
            r.check("construction/outer-shell-size", OUTER_SIZE, src.outer.len());
        }
        Err(e) => {
            r.check("construction/shells", "enumerated", format!("error: {e}"));
        }
    }
    r.check("construction/cardinality", DESIGN_SIZE, design.len());
    r.check("construction/binomial-25-3", binomial(25, 3), design.len());
    r
}

fn layer_sizes(design: &WeightedPointSet) -> String {
    design.layers.iter().map(|l| l.points.len().to_string()).collect::<Vec<_>>().join("+")
}

/// Cardinality, parameters, Euclidean and spherical strength, tightness and the oracles.
pub fn verify_design(design: &WeightedPointSet, hist: &PairHistogram, opts: &VerifyOptions) -> VerificationReport {
    let mut r = VerificationReport::new("design");
    r.check("design/cardinality", DESIGN_SIZE, design.len());
    r.check("design/layer-sizes", format!("{INNER_SIZE}+{OUTER_SIZE}"), layer_sizes(design));
    r.check("design/dimension", DIMENSION, design.dimension);
    let two = design.layers.len() == 2;
    if two {
        let (l1, l2) = (&design.layers[0], &design.layers[1]);
        r.check("parameters/radius-ratio", 11, &l2.radius_squared / &l1.radius_squared);
        r.check("parameters/weight-ratio", Rational::frac(1, 729), &l2.weight / &l1.weight);
    }
    parameter_claims(&mut r, "parameters", design);

    match euclidean_strength_from(hist, STRENGTH) {
        Ok(s) => {
            r.check("strength/condition-count", 10, s.entries.len());
            for e in &s.entries {
                r.check(&format!("strength/t6/{}", e.label), 0, &e.value);
            }
            r.detail("strength-t6", &s);
        }
        Err(e) => {
            r.check("strength/t6", "computed", format!("error: {e}"));
        }
    }
    match euclidean_strength_from(hist, STRENGTH + 1) {
        Ok(s) => {
            let seven: Vec<_> = s.entries.iter().filter(|e| e.label.starts_with("l=7,") || e.label == "l=5,j=1").collect();
            r.check("strength/not-a-7-design", "yes", yes(seven.iter().any(|e| !e.pass)));
            r.detail("strength-t7-top", seven);
        }
        Err(e) => {
            r.check("strength/not-a-7-design", "yes", format!("error: {e}"));
        }
    }
    let bound = euclidean_bound(DIMENSION as u64, (STRENGTH / 2) as u64, design.layers.len() as u64);
    r.check("strength/euclidean-bound", DESIGN_SIZE, bound);
    r.check("strength/tight", bound, design.len());
    if two {
        r.check("spherical/inner-layer-strength", 4, or_error(spherical_strength_of_layer(hist, 0, 5).map(|s| leading_passes(&s))));
        r.check("spherical/inner-layer-bound", INNER_SIZE, spherical_bound(DIMENSION as u64, 4));
        r.check("spherical/outer-layer-4-design", "yes", or_error(spherical_strength_of_layer(hist, 1, 4).map(|s| yes(s.passes()))));
    }
    for name in strength_oracles().names() {
        if name == "float-polynomial" && !opts.float_oracle {
            continue;
        }
        let verdict = strength_oracles().create(name).map_err(|e| e.to_string()).and_then(|o| {
            o.check(design, STRENGTH, opts.seed).map_err(|e| e.to_string())
        });
        match verdict {
            Ok(v) => {
                r.check(&format!("oracle/{name}"), "pass", if v.pass { "pass" } else { "fail" });
                r.detail(&format!("oracle-{name}"), v.detail);
            }
            Err(e) => {
                r.check(&format!("oracle/{name}"), "pass", format!("error: {e}"));
            }
        }
    }
    r
}

/// Observed normalized inner products per layer pair against the nine expected values.
fn parameter_claims(r: &mut VerificationReport, prefix: &str, design: &WeightedPointSet) {
    let render = |s: &BTreeSet<String>| s.iter().cloned().collect::<Vec<_>>().join(" ");
    let expected = expected_cosines();
    match classify_pairs(design) {
        Ok(p) => {
            for (key, name) in [((0, 0), "inner-inner"), ((1, 1), "outer-outer"), ((0, 1), "inner-outer")] {
                let computed = p.observed.get(&key).map(render).unwrap_or_default();
                r.check(&format!("{prefix}/inner-products-{name}"), render(&expected[&key]), computed);
            }
        }
        Err(e) => {
            r.check(&format!("{prefix}/inner-products"), "nine values", format!("error: {e}"));
        }
    }
}

pub fn compute_tensor(design: &WeightedPointSet) -> Result<IntersectionTensor, String> {
    let p = classify_pairs(design).map_err(|e| e.to_string())?;
    intersection_numbers(&p).map_err(|e| e.to_string())
}

fn tensor_claims(r: &mut VerificationReport, prefix: &str, tensor: &Result<IntersectionTensor, String>) {
    let t = match tensor {
        Ok(t) => t,
        Err(e) => {
            r.check(&format!("{prefix}/well-defined"), "yes", format!("error: {e}"));
            return;
        }
    };
    r.check(&format!("{prefix}/well-defined"), "yes", "yes");
    match compare_with_fixture(t) {
        Ok(m) => {
            r.check(&format!("{prefix}/fixture-mismatches"), 0, m.len());
            if !m.is_empty() {
                r.detail(&format!("{prefix}-mismatches"), format!("{m:?}"));
            }
        }
        Err(e) => {
            r.check(&format!("{prefix}/fixture-mismatches"), 0, format!("error: {e}"));
        }
    }
    for (a, b, c, v) in [(Alpha1, Alpha1, Alpha1, 105), (Beta1, Beta1, Beta0, 462), (Beta2, Beta2, Beta0, 1232), (Beta3, Beta3, Beta0, 330)] {
        r.check(&format!("{prefix}/p({},{};{})", a.name(), b.name(), c.name()), v, t.get(a, b, c));
    }
    r.check(&format!("{prefix}/transpose-symmetric"), "yes", yes(t.transpose_symmetric()));
    r.check(&format!("{prefix}/fiber-counts"), "yes", yes(t.fiber_counts_consistent()));
    r.check(&format!("{prefix}/outer-association-scheme"), "yes", yes(t.x2_is_association_scheme()));
}

/// The intersection tensor of the 13 relations against the fixture.
pub fn verify_coherent(design: &WeightedPointSet) -> (VerificationReport, Result<IntersectionTensor, String>) {
    let mut r = VerificationReport::new("coherent");
    r.check("coherent/cardinality", DESIGN_SIZE, design.len());
    let t = compute_tensor(design);
    tensor_claims(&mut r, "coherent", &t);
    (r, t)
}

/// Exhaustive candidate search for the outer layer given the inner one, and the twin design.
pub fn verify_unique(
    design: &WeightedPointSet,
    a: &LatticeVector,
    b: &LatticeVector,
) -> (VerificationReport, Option<CandidateSet>) {
    let mut r = VerificationReport::new("unique");
    let candidates = integralize_x1(design)
        .and_then(|layer| build_dual_frame(&layer, DIMENSION).map(|f| (layer, f)))
        .and_then(|(layer, frame)| enumerate_candidates(&layer, &frame, true));
    let c = match candidates {
        Ok(c) => c,
        Err(e) => {
            r.check("unique/candidates", CANDIDATES, format!("error: {e}"));
            return (r, None);
        }
    };
    r.check("unique/candidates", CANDIDATES, c.len());
    let norms: BTreeSet<String> = c.points.iter().map(|p| p.norm().to_string()).collect();
    r.check("unique/candidate-norms", Rational::frac(132, 5), norms.into_iter().collect::<Vec<_>>().join(" "));
    r.detail("search-nodes", c.nodes);
    let split = match split_candidates(&c) {
        Ok(s) => s,
        Err(e) => {
            r.check("unique/split", format!("{OUTER_SIZE}+{OUTER_SIZE}"), format!("error: {e}"));
            return (r, Some(c));
        }
    };
    let [p, q] = &split.parts;
    r.check("unique/split", format!("{OUTER_SIZE}+{OUTER_SIZE}"), format!("{}+{}", p.len(), q.len()));
    r.detail("cross-cosines", split.cross_cosines.iter().map(|x| x.to_string()).collect::<Vec<_>>());
    let outer = design.layers.get(1).map(|l| l.points.clone()).unwrap_or_default();
    let twin = match twin_outer_layer(a, b) {
        Ok(t) => t,
        Err(e) => {
            r.check("unique/twin-layer", OUTER_SIZE, format!("error: {e}"));
            return (r, Some(c));
        }
    };
    let (mine, other) = if p == &outer { (p, q) } else { (q, p) };
    r.check("unique/part-equals-outer-layer", "yes", yes(mine == &outer));
    r.check("unique/part-equals-twin-layer", "yes", yes(other == &twin));

    let x1 = design.layers[0].clone();
    let (w, r2) = design.layers.get(1).map(|l| (l.weight.clone(), l.radius_squared.clone())).unwrap_or_default();
    match WeightedPointSet::new(DIMENSION, vec![x1, Layer { points: twin, weight: w, radius_squared: r2 }]) {
        Ok(twin_design) => {
            parameter_claims(&mut r, "twin", &twin_design);
            let hist = match twin_design.frame() {
                Ok(f) => f.pair_histogram(),
                Err(e) => {
                    r.check("twin/frame", "built", format!("error: {e}"));
                    return (r, Some(c));
                }
            };
            let zeros = euclidean_strength_from(&hist, STRENGTH).map(|s| s.entries.iter().filter(|e| e.pass).count());
            r.check("twin/t6-vanishing-conditions", 10, or_error(zeros));
            let bound = euclidean_bound(DIMENSION as u64, (STRENGTH / 2) as u64, 2);
            r.check("twin/tight", bound, twin_design.len());
            tensor_claims(&mut r, "twin", &compute_tensor(&twin_design));
        }
        Err(e) => {
            r.check("twin/design", "built", format!("error: {e}"));
        }
    }
    (r, Some(c))
}

/// The antipodal norm-4 shells Y and the lifted spherical set Z.
pub fn verify_sphere(design: &WeightedPointSet, hist: &PairHistogram, a: &LatticeVector, b: &LatticeVector) -> VerificationReport {
    let mut r = VerificationReport::new("sphere");
    match build_y(a, b) {
        Ok(y) => {
            r.check("y/cardinality", SPHERE_SIZE, y.total());
            r.check("y/antipodal", "yes", yes(y.antipodal()));
            r.check("y/antipodal-pairs", SPHERE_SIZE / 2, y.antipodal_pairs());
        }
        Err(e) => {
            r.check("y/cardinality", SPHERE_SIZE, format!("error: {e}"));
        }
    }
    r.check("y/projection-equals-inner-layer", "yes", or_error(check_x1_equals_py(a, b).map(yes)));
    let z = match build_z(design) {
        Ok(z) => z,
        Err(e) => {
            r.check("z/cardinality", SPHERE_SIZE, format!("error: {e}"));
            return r;
        }
    };
    r.check("z/cardinality", SPHERE_SIZE, z.len());
    let ips: Vec<String> = z.inner_histogram(hist).keys().map(|x| x.to_string()).collect();
    r.check("z/inner-products", "-1 -1/3 0 1/3 1", ips.join(" "));
    r.check("z/strength", 7, or_error(spherical_strength_z(&z, hist, 8).map(|s| leading_passes(&s))));
    r.check("z/tight", spherical_bound(DIMENSION as u64 + 1, 7), z.len());
    r
}

/// A second anchor pair must give the same pair histogram and the same tensor.
pub fn verify_anchor_independence(
    first: (&PairHistogram, &Result<IntersectionTensor, String>),
    second: (&PairHistogram, &Result<IntersectionTensor, String>),
) -> VerificationReport {
    let mut r = VerificationReport::new("anchors");
    let entries = |h: &PairHistogram| h.entries().map(|(i, j, v, c)| (i, j, v.to_string(), c)).collect::<Vec<_>>();
    r.check("anchors/gram-histogram-identical", "yes", yes(entries(first.0) == entries(second.0)));
    let same = matches!((first.1, second.1), (Ok(s), Ok(t)) if s == t);
    r.check("anchors/tensor-identical", "yes", yes(same));
    r
}
