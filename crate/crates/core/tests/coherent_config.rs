use std::sync::OnceLock;

use tight_design::coherent::{
    classify_pairs, compare_with_fixture, expected_cosines, intersection_numbers, IntersectionTensor, RelationLabel::*,
    RelationPartition,
};
use tight_design::construct::{build_design, WeightedPointSet};
use tight_design::lattice::{alternate_anchors, canonical_anchors};

fn computed() -> &'static (WeightedPointSet, RelationPartition, IntersectionTensor) {
    static C: OnceLock<(WeightedPointSet, RelationPartition, IntersectionTensor)> = OnceLock::new();
    C.get_or_init(|| {
        let (a, b) = canonical_anchors();
        let x = build_design(&a, &b).unwrap();
        let p = classify_pairs(&x).unwrap();
        let t = intersection_numbers(&p).unwrap();
        (x, p, t)
    })
}

#[test]
fn observed_inner_products_are_the_nine_values() {
    let (_, p, _) = computed();
    assert_eq!(p.observed, expected_cosines());
    assert_eq!(p.observed[&(0, 0)].len() - 1, 2);
    assert_eq!(p.observed[&(1, 1)].len() - 1, 3);
    assert_eq!(p.observed[&(0, 1)].len(), 3);
}

#[test]
fn valencies() {
    let (_, p, t) = computed();
    assert_eq!(t.valency(Alpha1), 162);
    assert_eq!(t.valency(Alpha2), 112);
    assert_eq!(p.relation_sizes()[&Alpha1], 275 * 162);
    assert_eq!(p.relation_sizes().values().sum::<u64>(), 2300 * 2300);
}

#[test]
fn tensor_matches_the_table() {
    let (_, _, t) = computed();
    assert_eq!(compare_with_fixture(t).unwrap(), vec![]);
    assert_eq!(t.get(Alpha1, Alpha1, Alpha1), 105);
    assert_eq!(t.get(Beta1, Beta1, Beta0), 462);
    assert_eq!(t.get(Beta2, Beta2, Beta0), 1232);
    assert_eq!(t.get(Beta3, Beta3, Beta0), 330);
    assert_eq!(t.get(Beta3, Beta3, Beta3), 7);
}

#[test]
fn structural_properties() {
    let (_, _, t) = computed();
    assert!(t.transpose_symmetric());
    assert!(t.fiber_counts_consistent());
    assert!(t.x2_is_association_scheme());
}

#[test]
fn alternate_anchors_give_the_same_tensor() {
    let (a, b) = alternate_anchors();
    let x = build_design(&a, &b).unwrap();
    let t = intersection_numbers(&classify_pairs(&x).unwrap()).unwrap();
    assert_eq!(&t, &computed().2);
}

#[test]
fn mutated_design_is_not_classifiable() {
    let (x, _, _) = computed();
    let l = &x.layers[0].points;
    let mirror = l[1].sub(&l[2]).sub(&l[3].scale(&tight_design::arith::Rational::frac(1, 3)));
    let bad = x.with_point_reflected(0, 0, &mirror).unwrap();
    assert!(classify_pairs(&bad).is_err());
}
