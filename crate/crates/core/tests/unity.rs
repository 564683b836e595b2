use extremal::lattice::RootSystem;
use extremal::torep::{Relation, RelationRanges};
use extremal::unity::{cyclic_generation_check, direct_sum, specialize_section5, specialize_thin, thin_period};
use extremal::Error;

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, j| acc * (n - j) / (j + 1))
}

#[test]
fn thin_dimensions_follow_the_formula() {
    let ranges = RelationRanges::default();
    for (n, ell, l) in [(3usize, 1usize, 1u64), (3, 1, 2), (3, 2, 2), (3, 3, 1), (5, 3, 2)] {
        let rs = RootSystem::new(n).unwrap();
        let m = specialize_thin(&rs, ell, l, &ranges).unwrap();
        assert_eq!(m.dim(), l as usize * binom(n + 1, ell), "n={n} ell={ell} L={l}");
        assert_eq!(m.order, thin_period(&rs, ell).unwrap() * l);
        assert!(m.qcharacter().values().all(|&c| c == 1));
    }
}

#[test]
fn excluded_parameters_are_rejected() {
    let ranges = RelationRanges::default();
    let rs = RootSystem::new(3).unwrap();
    assert!(matches!(specialize_thin(&rs, 2, 1, &ranges), Err(Error::Argument(_))));
    assert!(specialize_thin(&rs, 1, 0, &ranges).is_err());
    let rs5 = RootSystem::new(5).unwrap();
    assert!(matches!(specialize_thin(&rs5, 2, 1, &ranges), Err(Error::Refused(_))));
    assert!(specialize_section5(0, &ranges).is_err());
}

#[test]
fn thin_specializations_satisfy_relations_and_are_cyclic() {
    let ranges = RelationRanges::default();
    let rs = RootSystem::new(3).unwrap();
    for (ell, l) in [(1, 1), (1, 2), (2, 2)] {
        let m = specialize_thin(&rs, ell, l, &ranges).unwrap();
        let rep = m.relation_check(&ranges, &Relation::ALL);
        assert!(rep.all_zero(), "ell={ell} L={l}: {:?}", rep.counts);
        assert!(cyclic_generation_check(&m.tables).generates, "ell={ell} L={l}");
    }
}

#[test]
fn direct_sums_are_not_cyclic() {
    let ranges = RelationRanges::default();
    let rs = RootSystem::new(3).unwrap();
    let a = specialize_thin(&rs, 1, 1, &ranges).unwrap();
    let b = specialize_thin(&rs, 3, 1, &ranges).unwrap();
    let sum = direct_sum(&a, &b).unwrap();
    assert_eq!(sum.dim(), 8);
    assert!(sum.relation_check(&ranges, &[Relation::Xx, Relation::Kx]).all_zero());
    let rep = cyclic_generation_check(&sum.tables);
    assert!(!rep.generates);
    assert!(rep.failing_vector.is_some());
    let c = specialize_thin(&rs, 1, 2, &ranges).unwrap();
    assert!(direct_sum(&a, &c).is_err());
}

#[test]
fn section5_quotient_dimension_and_relations() {
    let ranges = RelationRanges::default();
    let m = specialize_section5(1, &ranges).unwrap();
    assert_eq!(m.dim(), 16);
    let rep = m.relation_check(&ranges, &Relation::ALL);
    assert!(rep.all_zero(), "{:?}", rep.counts);
}

// The links of the length-2 strings carry [2] = 0 at a primitive fourth root
// of unity, so some vectors generate proper submodules.
#[test]
fn section5_quotient_is_not_cyclic_at_fourth_roots() {
    let ranges = RelationRanges::default();
    let m = specialize_section5(1, &ranges).unwrap();
    let rep = cyclic_generation_check(&m.tables);
    assert!(!rep.generates);
    assert!(rep.failing_vector.is_some());
}
