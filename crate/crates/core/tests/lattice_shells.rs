use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tight_design::arith::Rational;
use tight_design::lattice::{
    canonical_anchors, enumerate_coset_shell, shell_enumerators, shell_size, CosetConstraint, LatticeVector,
    LeechLattice, ShapeFilterEnumerator, ShellEnumerator,
};

fn constraints(a_val: i64, b_val: i64) -> Vec<CosetConstraint> {
    let (a, b) = canonical_anchors();
    vec![CosetConstraint::new(a, a_val), CosetConstraint::new(b, b_val)]
}

fn check_members(set: &[LatticeVector], cons: &[CosetConstraint], norm: i64) {
    let leech = LeechLattice::standard();
    for v in set {
        assert!(leech.contains(v));
        assert_eq!(v.norm(), Rational::from(norm));
        assert!(cons.iter().all(|c| c.holds(v)));
    }
    assert!(set.windows(2).all(|w| w[0] < w[1]), "canonical order, no duplicates");
}

#[test]
fn inner_layer_coset_has_275_vectors() {
    let cons = constraints(3, -3);
    let t = Instant::now();
    let set = enumerate_coset_shell(&cons, &Rational::from(6)).unwrap();
    eprintln!("norm-6 coset: {} vectors in {:?}", set.len(), t.elapsed());
    assert_eq!(set.len(), 275);
    check_members(&set, &cons, 6);
}

#[test]
fn outer_layer_cosets_have_2025_vectors() {
    for (a, b) in [(2, 0), (0, -2)] {
        let cons = constraints(a, b);
        let t = Instant::now();
        let set = enumerate_coset_shell(&cons, &Rational::from(4)).unwrap();
        eprintln!("norm-4 coset ({a},{b}): {} vectors in {:?}", set.len(), t.elapsed());
        assert_eq!(set.len(), 2025);
        check_members(&set, &cons, 4);
    }
}

#[test]
fn shape_filter_agrees_on_the_2025_sets() {
    let reg = shell_enumerators();
    let fp = reg.create("fincke-pohst").unwrap();
    let shapes = reg.create("shape-filter").unwrap();
    for (a, b) in [(2, 0), (0, -2), (2, 1)] {
        let cons = constraints(a, b);
        let x = fp.enumerate(&cons, &Rational::from(4)).unwrap();
        let y = shapes.enumerate(&cons, &Rational::from(4)).unwrap();
        assert_eq!(x, y, "constraints ({a},{b})");
    }
}

#[test]
fn full_norm4_shell_matches_count_and_is_closed_under_sums() {
    let t = Instant::now();
    let fp = enumerate_coset_shell(&[], &Rational::from(4)).unwrap();
    eprintln!("full norm-4 shell by Fincke-Pohst: {} in {:?}", fp.len(), t.elapsed());
    assert_eq!(fp.len() as u128, shell_size(&Rational::from(4)).unwrap());
    let shapes = ShapeFilterEnumerator.enumerate(&[], &Rational::from(4)).unwrap();
    assert_eq!(fp, shapes);

    let leech = LeechLattice::standard();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1000 {
        let u = fp[rng.gen_range(0..fp.len())];
        let v = fp[rng.gen_range(0..fp.len())];
        assert!(leech.contains(&u.add(&v)));
    }
}

#[test]
fn enumeration_is_deterministic() {
    let cons = constraints(2, 1);
    let a = enumerate_coset_shell(&cons, &Rational::from(4)).unwrap();
    let b = enumerate_coset_shell(&cons, &Rational::from(4)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn empty_shell_below_minimum_norm() {
    assert!(enumerate_coset_shell(&[], &Rational::from(2)).unwrap().is_empty());
}
