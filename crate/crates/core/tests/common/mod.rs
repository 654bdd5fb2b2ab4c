#![allow(dead_code)] // not every test binary uses every helper

use std::path::PathBuf;

use steiner_core::group::{parse_generator_file, PermGroup, DEFAULT_ORDER_CAP};
use steiner_core::perm::Permutation;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

pub fn fixture_group(name: &str) -> PermGroup {
    let text = std::fs::read_to_string(fixture_path(name)).expect("fixture readable");
    let (degree, gens) = parse_generator_file(&text).expect("fixture parses");
    PermGroup::generate(degree, gens, DEFAULT_ORDER_CAP).expect("fixture group closes")
}

pub fn cyclic(v: usize) -> PermGroup {
    let cycle = format!(
        "({})",
        (0..v).map(|i| i.to_string()).collect::<Vec<_>>().join(" ")
    );
    let rot = Permutation::parse_cycles(&cycle, v).unwrap();
    PermGroup::generate(v, vec![rot], DEFAULT_ORDER_CAP).unwrap()
}

/// All k-subsets of {0,…,v-1} in lexicographic order.
pub fn k_subsets(v: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(v: usize, k: usize, from: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for p in from..v {
            current.push(p);
            rec(v, k, p + 1, current, out);
            current.pop();
        }
    }
    rec(v, k, 0, &mut current, &mut out);
    out
}
