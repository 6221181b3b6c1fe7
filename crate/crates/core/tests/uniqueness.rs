use std::collections::BTreeSet;
use std::sync::OnceLock;

use tight_design::arith::Rational;
use tight_design::coherent::{classify_pairs, compare_with_fixture, expected_cosines, intersection_numbers};
use tight_design::construct::{build_design, Layer, ProjectedPoint, WeightedPointSet};
use tight_design::design::{euclidean_strength, tightness_check};
use tight_design::lattice::canonical_anchors;
use tight_design::unique::{
    build_dual_frame, build_dual_frame_ordered, enumerate_candidates, frame_determinant, integralize_x1,
    split_candidates, twin_outer_layer, CandidateSet, CandidateSplit, DualFrame, IntegralizedLayer,
};

struct Run {
    design: WeightedPointSet,
    layer: IntegralizedLayer,
    frame: DualFrame,
    candidates: CandidateSet,
    split: CandidateSplit,
}

fn run() -> &'static Run {
    static R: OnceLock<Run> = OnceLock::new();
    R.get_or_init(|| {
        let (a, b) = canonical_anchors();
        let design = build_design(&a, &b).unwrap();
        let layer = integralize_x1(&design).unwrap();
        let frame = build_dual_frame(&layer, 22).unwrap();
        let candidates = enumerate_candidates(&layer, &frame, true).unwrap();
        let split = split_candidates(&candidates).unwrap();
        Run { design, layer, frame, candidates, split }
    })
}

fn twin_layer() -> Vec<ProjectedPoint> {
    let (a, b) = canonical_anchors();
    twin_outer_layer(&a, &b).unwrap()
}

#[test]
fn integralized_gram() {
    let r = run();
    let values: BTreeSet<i64> = r.layer.gram.iter().flatten().copied().collect();
    assert_eq!(values, BTreeSet::from([-3, 2, 12]));
    assert_eq!(r.layer.scale_squared, Rational::from(5));
    assert!((0..275).all(|i| r.layer.gram[i][i] == 12));
}

#[test]
fn dual_frame_pairs_to_identity() {
    let f = &run().frame;
    for (i, row) in f.pairing().iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            assert_eq!(*v, Rational::from(i64::from(i == j)));
        }
    }
}

#[test]
fn determinant_changes_by_a_square_between_bases() {
    let r = run();
    let order: Vec<usize> = (0..275).rev().collect();
    let g = build_dual_frame_ordered(&r.layer, &order, 22).unwrap();
    assert_ne!(g.basis, r.frame.basis);
    let ratio = frame_determinant(&g).unwrap() / frame_determinant(&r.frame).unwrap();
    let (n, d) = (ratio.numer().clone(), ratio.denom().clone());
    assert_eq!(n.sqrt() * n.sqrt(), n);
    assert_eq!(d.sqrt() * d.sqrt(), d);
}

#[test]
fn there_are_4050_candidates_of_norm_132_over_5() {
    let c = &run().candidates;
    assert_eq!(c.len(), 4050);
    assert!(c.points.iter().all(|p| p.norm() == Rational::frac(132, 5)));
    assert!(c.coefficients.iter().flatten().all(|k| (-1..=1).contains(k)));
}

#[test]
fn candidates_split_into_the_outer_layer_and_its_twin() {
    let r = run();
    let [p, q] = &r.split.parts;
    assert_eq!((p.len(), q.len()), (2025, 2025));
    let x2 = &r.design.layers[1].points;
    let twin = twin_layer();
    assert_eq!(twin.len(), 2025);
    assert!((p == x2 && q == &twin) || (p == &twin && q == x2));
    let union: BTreeSet<_> = p.iter().chain(q).collect();
    assert_eq!(union.len(), 4050);
    let all: BTreeSet<_> = r.candidates.points.iter().collect();
    assert_eq!(union, all);
}

#[test]
fn candidate_set_does_not_depend_on_the_basis() {
    let r = run();
    let order: Vec<usize> = (0..275).rev().collect();
    let g = build_dual_frame_ordered(&r.layer, &order, 22).unwrap();
    let other = enumerate_candidates(&r.layer, &g, true).unwrap();
    let a: BTreeSet<_> = r.candidates.points.iter().collect();
    let b: BTreeSet<_> = other.points.iter().collect();
    assert_eq!(a, b);
}

#[test]
fn twin_design_is_a_tight_design_with_the_same_tensor() {
    let r = run();
    let x1 = r.design.layers[0].clone();
    let outer = &r.design.layers[1];
    let twin = WeightedPointSet::new(
        22,
        vec![x1, Layer { points: twin_layer(), weight: outer.weight.clone(), radius_squared: outer.radius_squared.clone() }],
    )
    .unwrap();
    assert!(euclidean_strength(&twin, 6).unwrap().passes());
    assert!(tightness_check(&twin, 3));
    let p = classify_pairs(&twin).unwrap();
    assert_eq!(p.observed, expected_cosines());
    let t = intersection_numbers(&p).unwrap();
    assert_eq!(compare_with_fixture(&t).unwrap(), vec![]);
}
