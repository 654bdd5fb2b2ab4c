//! Property tests over randomly generated groups, labelings, and designs.

mod common;

use common::fixture_group;
use proptest::prelude::*;
use rand::seq::SliceRandom as _;
use rand::Rng as _;
use rand::SeedableRng as _;
use rand::rngs::StdRng;
use steiner_core::design::{self, fano_blocks, verify_design, Design};
use steiner_core::group::{PermGroup, DEFAULT_ORDER_CAP};
use steiner_core::invariants::fingerprint;
use steiner_core::perm::Permutation;

fn random_relabeling(degree: usize, rng: &mut StdRng) -> Vec<usize> {
    let mut images: Vec<usize> = (0..degree).collect();
    images.shuffle(rng);
    images
}

fn random_group(degree: usize, n_gens: usize, seed: u64) -> PermGroup {
    let mut rng = StdRng::seed_from_u64(seed);
    let gens: Vec<Permutation> = (0..n_gens)
        .map(|_| {
            // products of a few transpositions keep orders manageable
            let mut images: Vec<u32> = (0..degree as u32).collect();
            for _ in 0..3 {
                let a = rng.gen_range(0..degree);
                let b = rng.gen_range(0..degree);
                images.swap(a, b);
            }
            Permutation::from_images(images).unwrap()
        })
        .collect();
    PermGroup::generate(degree, gens, DEFAULT_ORDER_CAP).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn closure_is_a_group(degree in 4usize..9, n_gens in 1usize..3, seed in any::<u64>()) {
        let g = random_group(degree, n_gens, seed);
        let set: std::collections::BTreeSet<&Permutation> = g.elements().iter().collect();
        prop_assert!(set.contains(&Permutation::identity(degree)));
        for a in g.elements() {
            prop_assert!(set.contains(&a.inverse()));
        }
        // full pairwise closure is quadratic in |G|; sample products instead
        let mut rng = StdRng::seed_from_u64(seed ^ 0x5eed);
        for _ in 0..200 {
            let a = &g.elements()[rng.gen_range(0..g.order())];
            let b = &g.elements()[rng.gen_range(0..g.order())];
            prop_assert!(set.contains(&a.compose(b).unwrap()));
        }
    }

    #[test]
    fn orbit_stabilizer_identity(degree in 4usize..9, seed in any::<u64>()) {
        let g = random_group(degree, 2, seed);
        for orbit in g.point_orbits().orbits() {
            let p = orbit[0];
            let stab = g.elements().iter().filter(|e| e.apply(p) == p).count();
            prop_assert_eq!(orbit.len() * stab, g.order());
        }
    }

    #[test]
    fn pair_orbits_are_invariant(degree in 4usize..9, seed in any::<u64>()) {
        let g = random_group(degree, 2, seed);
        let pairs = g.pair_orbits();
        for e in g.elements() {
            for a in 0..degree {
                for b in (a + 1)..degree {
                    let (x, y) = (e.apply(a), e.apply(b));
                    let (x, y) = if x < y { (x, y) } else { (y, x) };
                    prop_assert_eq!(pairs.orbit_of(a, b), pairs.orbit_of(x, y));
                }
            }
        }
    }

    #[test]
    fn serialize_parse_roundtrip(seed in any::<u64>()) {
        // start from a verified design and relabel it randomly
        let mut rng = StdRng::seed_from_u64(seed);
        let base = Design::new(9, 3, sts9_blocks());
        let d = base.relabel(&random_relabeling(9, &mut rng));
        let fp = fingerprint(&d).unwrap();
        let text = design::serialize(&d, &fp);
        let (parsed_fp, parsed) = design::parse(&text, Some(3)).unwrap();
        prop_assert_eq!(parsed_fp, fp.clone());
        prop_assert_eq!(&parsed, &d);
        prop_assert_eq!(design::serialize(&parsed, &fp), text);
    }

    #[test]
    fn fingerprint_is_relabeling_invariant(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let base = Design::new(9, 3, sts9_blocks());
        let fp = fingerprint(&base).unwrap();
        let relabeled = base.relabel(&random_relabeling(9, &mut rng));
        prop_assert_eq!(fingerprint(&relabeled).unwrap(), fp);
    }
}

fn sts9_blocks() -> Vec<Vec<usize>> {
    vec![
        vec![0, 1, 2],
        vec![3, 4, 5],
        vec![6, 7, 8],
        vec![0, 3, 6],
        vec![1, 4, 7],
        vec![2, 5, 8],
        vec![0, 4, 8],
        vec![1, 5, 6],
        vec![2, 3, 7],
        vec![0, 5, 7],
        vec![1, 3, 8],
        vec![2, 4, 6],
    ]
}

#[test]
fn duplicate_block_fails_verification() {
    let mut blocks = sts9_blocks();
    blocks[11] = blocks[0].clone();
    let report = verify_design(&blocks, 9, 3);
    assert!(!report.pass);
    assert!(!(report.block_defects.is_empty() && report.pair_defects.is_empty()));
}

#[test]
fn fingerprint_invariant_under_fixture_automorphisms() {
    let g = fixture_group("psl32_7.gens");
    let fano = Design::new(7, 3, fano_blocks());
    let fp = fingerprint(&fano).unwrap();
    for e in g.elements() {
        let images: Vec<usize> = (0..7).map(|p| e.apply(p)).collect();
        assert_eq!(fingerprint(&fano.relabel(&images)).unwrap(), fp);
    }
}
