//! Classification checks on small triple systems: the two isomorphism
//! classes on 13 points, and the unique (up to isomorphism) system on 9.

mod common;

use common::fixture_group;
use steiner_core::design::Design;
use steiner_core::group::PermGroup;
use steiner_core::invariants::{are_isomorphic, automorphism_count, fingerprint, DEFAULT_POINT_BOUND};
use steiner_core::search::{search, SearchConfig, SearchLimits};

fn solutions_under(group: PermGroup, v: usize, k: usize) -> Vec<Design> {
    let config = SearchConfig::new(group, v, k, None, SearchLimits::default()).unwrap();
    let outcome = search(&config).unwrap();
    assert!(outcome.exhaustive);
    outcome.solutions.into_iter().map(|s| s.design).collect()
}

fn iso_classes(designs: Vec<Design>) -> Vec<Design> {
    let mut reps: Vec<Design> = Vec::new();
    for d in designs {
        if !reps.iter().any(|r| are_isomorphic(r, &d, DEFAULT_POINT_BOUND).unwrap().is_some()) {
            reps.push(d);
        }
    }
    reps
}

/// Both isomorphism classes of triple systems on 13 points admit an order-3
/// automorphism with a single fixed point, so an exhaustive search under
/// that C3 action followed by isomorphism reduction classifies them. The
/// other order-3 cycle type (7 fixed points) yields nothing: the fixed set
/// of an automorphism is a subsystem, and a 7-point subsystem needs v >= 15.
#[test]
fn exactly_two_triple_systems_on_13_points() {
    let all = solutions_under(fixture_group("c3_13a.gens"), 13, 3);
    assert!(!all.is_empty());
    assert!(solutions_under(fixture_group("c3_13b.gens"), 13, 3).is_empty());

    let classes = iso_classes(all);
    assert_eq!(classes.len(), 2);

    let fp_a = fingerprint(&classes[0]).unwrap();
    let fp_b = fingerprint(&classes[1]).unwrap();
    assert_ne!(fp_a, fp_b);
    assert!(!are_isomorphic(&classes[0], &classes[1], DEFAULT_POINT_BOUND).unwrap().is_some());

    // the cyclic system has automorphism group of order 39, the other 6
    let mut auts = vec![
        automorphism_count(&classes[0], DEFAULT_POINT_BOUND).unwrap(),
        automorphism_count(&classes[1], DEFAULT_POINT_BOUND).unwrap(),
    ];
    auts.sort_unstable();
    assert_eq!(auts, vec![6, 39]);
}

#[test]
fn unique_triple_system_on_9_points_with_840_labelings() {
    let designs = solutions_under(PermGroup::trivial(9), 9, 3);
    assert_eq!(designs.len(), 840);
    let first = designs[0].clone();
    assert_eq!(automorphism_count(&first, DEFAULT_POINT_BOUND).unwrap(), 432);
    let classes = iso_classes(designs);
    assert_eq!(classes.len(), 1);
}
