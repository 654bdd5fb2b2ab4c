//! Isomorphism-invariant fingerprints and exact isomorphism testing for
//! verified designs.
//!
//! The fingerprint digests three relabeling-invariant views of a design:
//! the histogram of block-pair intersection sizes, the sorted list of
//! per-point intersection profiles, and the per-block counts of
//! quadrilaterals (4-sets of pairwise-intersecting blocks on six distinct
//! points — Pasch configurations when k = 3). The first two are constant
//! across all Steiner systems with equal parameters, so the quadrilateral
//! component does the discriminating work. Different fingerprints certify
//! non-isomorphism; equal fingerprints decide nothing.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use crate::design::Design;
use crate::error::IsoError;
use crate::group::pair_index;

pub const DEFAULT_POINT_BOUND: usize = 400;

/// Deterministic, relabeling-invariant token for a verified design.
pub fn fingerprint(design: &Design) -> Result<String, IsoError> {
    let report = design.verify();
    if !report.pass {
        return Err(IsoError::Design(crate::error::DesignError::Unverified(
            report.summary(),
        )));
    }
    Ok(fingerprint_unchecked(design))
}

fn fingerprint_unchecked(design: &Design) -> String {
    let blocks = design.blocks();
    let b = blocks.len();
    let v = design.v();

    // (a) histogram of |Bi ∩ Bj| over all block pairs
    let mut global: BTreeMap<usize, u64> = BTreeMap::new();
    let masks: Vec<Vec<u64>> = blocks
        .iter()
        .map(|blk| {
            let mut m = vec![0u64; v.div_ceil(64)];
            for &p in blk {
                m[p / 64] |= 1 << (p % 64);
            }
            m
        })
        .collect();
    let isize_of = |i: usize, j: usize| -> usize {
        masks[i]
            .iter()
            .zip(&masks[j])
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    };
    for i in 0..b {
        for j in (i + 1)..b {
            *global.entry(isize_of(i, j)).or_insert(0) += 1;
        }
    }

    // (b) per-point profiles: histogram of |Bi ∩ Bj| over block pairs
    // through the point, collected and sorted
    let mut through: Vec<Vec<usize>> = vec![Vec::new(); v];
    for (i, blk) in blocks.iter().enumerate() {
        for &p in blk {
            through[p].push(i);
        }
    }
    let mut profiles: Vec<Vec<(usize, u64)>> = through
        .iter()
        .map(|bs| {
            let mut h: BTreeMap<usize, u64> = BTreeMap::new();
            for x in 0..bs.len() {
                for y in (x + 1)..bs.len() {
                    *h.entry(isize_of(bs[x], bs[y])).or_insert(0) += 1;
                }
            }
            h.into_iter().collect()
        })
        .collect();
    profiles.sort();

    // (c) quadrilateral counts: 4-sets of pairwise-intersecting blocks whose
    // six intersection points are all distinct (Pasch configurations when
    // k = 3); per-block membership counts, aggregated as a histogram
    let nbrs: Vec<Vec<u64>> = (0..b)
        .map(|i| {
            let mut m = vec![0u64; b.div_ceil(64)];
            for j in 0..b {
                if j != i && isize_of(i, j) >= 1 {
                    m[j / 64] |= 1 << (j % 64);
                }
            }
            m
        })
        .collect();
    let mut per_block = vec![0u64; b];
    let mut common = Vec::new();
    for i in 0..b {
        for j in (i + 1)..b {
            if nbrs[i][j / 64] & (1 << (j % 64)) == 0 {
                continue;
            }
            common.clear();
            for (w, (&x, &y)) in nbrs[i].iter().zip(&nbrs[j]).enumerate() {
                let mut bits = x & y;
                while bits != 0 {
                    let l = w * 64 + bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    if l > j {
                        common.push(l);
                    }
                }
            }
            for (x, &l) in common.iter().enumerate() {
                for &m in &common[x + 1..] {
                    if nbrs[l][m / 64] & (1 << (m % 64)) == 0 {
                        continue;
                    }
                    let quad = [i, j, l, m];
                    let mut meets = Vec::with_capacity(6);
                    for a in 0..4 {
                        for c in (a + 1)..4 {
                            let (s, t) = (quad[a], quad[c]);
                            meets.push(
                                masks[s]
                                    .iter()
                                    .zip(&masks[t])
                                    .enumerate()
                                    .find_map(|(w, (&x, &y))| {
                                        let and = x & y;
                                        (and != 0)
                                            .then(|| w * 64 + and.trailing_zeros() as usize)
                                    })
                                    .unwrap(),
                            );
                        }
                    }
                    meets.sort_unstable();
                    meets.dedup();
                    if meets.len() == 6 {
                        for q in quad {
                            per_block[q] += 1;
                        }
                    }
                }
            }
        }
    }
    let mut quads: BTreeMap<u64, u64> = BTreeMap::new();
    for c in per_block {
        *quads.entry(c).or_insert(0) += 1;
    }

    let mut canonical = String::new();
    let _ = write!(canonical, "v={};k={};g={:?};pp={:?};qd={:?}", v, design.k(), global, profiles, quads);
    let digest = Sha256::digest(canonical.as_bytes());
    let mut token = String::with_capacity(16);
    for byte in &digest[..8] {
        let _ = write!(token, "{byte:02x}");
    }
    token
}

#[inline]
fn pidx(a: usize, b: usize) -> usize {
    if a < b {
        pair_index(a, b)
    } else {
        pair_index(b, a)
    }
}

/// `line[pair_index(a,b)]` = index of the unique block through `{a,b}`.
fn line_table(design: &Design) -> Vec<usize> {
    let v = design.v();
    let mut line = vec![usize::MAX; v * (v - 1) / 2];
    for (i, blk) in design.blocks().iter().enumerate() {
        for x in 0..blk.len() {
            for y in (x + 1)..blk.len() {
                line[pidx(blk[x], blk[y])] = i;
            }
        }
    }
    line
}

struct IsoSearch<'a> {
    d1: &'a Design,
    d2: &'a Design,
    line1: Vec<usize>,
    line2: Vec<usize>,
    /// point order for d1, rare profiles first
    order: Vec<usize>,
    /// candidate images for each d1 point, by profile class
    allowed: Vec<Vec<usize>>,
    sigma: Vec<usize>,
    used: Vec<bool>,
    block_map: Vec<usize>,
    /// how many assigned pairs currently support each block mapping
    count_all: bool,
    found: u64,
    witness: Option<Vec<usize>>,
}

const UNSET: usize = usize::MAX;

impl IsoSearch<'_> {
    fn run(&mut self) {
        self.assign(0);
    }

    fn assign(&mut self, depth: usize) {
        if depth == self.order.len() {
            // full map; replay check of the block action
            let image: Design = self.d1.relabel(&self.sigma);
            if image.blocks() == self.d2.blocks() {
                self.found += 1;
                if self.witness.is_none() {
                    self.witness = Some(self.sigma.clone());
                }
            }
            return;
        }
        let p = self.order[depth];
        let candidates = self.allowed[p].clone();
        for q in candidates {
            if self.used[q] {
                continue;
            }
            if let Some(trail) = self.try_assign(p, q) {
                self.assign(depth + 1);
                for b1 in trail {
                    self.block_map[b1] = UNSET;
                }
                self.sigma[p] = UNSET;
                self.used[q] = false;
            }
            if !self.count_all && self.witness.is_some() {
                return;
            }
        }
    }

    /// Tentatively maps p -> q, propagating line constraints. Returns the
    /// list of block-map entries set by this assignment, or None on clash.
    fn try_assign(&mut self, p: usize, q: usize) -> Option<Vec<usize>> {
        let mut trail = Vec::new();
        self.sigma[p] = q;
        self.used[q] = true;
        for p2 in 0..self.sigma.len() {
            if p2 == p || self.sigma[p2] == UNSET {
                continue;
            }
            let b1 = self.line1[pidx(p, p2)];
            let b2 = self.line2[pidx(q, self.sigma[p2])];
            if self.block_map[b1] == UNSET {
                self.block_map[b1] = b2;
                trail.push(b1);
            } else if self.block_map[b1] != b2 {
                for b in trail {
                    self.block_map[b] = UNSET;
                }
                self.sigma[p] = UNSET;
                self.used[q] = false;
                return None;
            }
        }
        Some(trail)
    }
}

fn point_profiles(design: &Design) -> Vec<Vec<(usize, u64)>> {
    let blocks = design.blocks();
    let v = design.v();
    let masks: Vec<Vec<u64>> = blocks
        .iter()
        .map(|blk| {
            let mut m = vec![0u64; v.div_ceil(64)];
            for &p in blk {
                m[p / 64] |= 1 << (p % 64);
            }
            m
        })
        .collect();
    let mut through: Vec<Vec<usize>> = vec![Vec::new(); v];
    for (i, blk) in blocks.iter().enumerate() {
        for &p in blk {
            through[p].push(i);
        }
    }
    through
        .iter()
        .map(|bs| {
            let mut h: BTreeMap<usize, u64> = BTreeMap::new();
            for x in 0..bs.len() {
                for y in (x + 1)..bs.len() {
                    let s: usize = masks[bs[x]]
                        .iter()
                        .zip(&masks[bs[y]])
                        .map(|(a, b)| (a & b).count_ones() as usize)
                        .sum();
                    *h.entry(s).or_insert(0) += 1;
                }
            }
            h.into_iter().collect()
        })
        .collect()
}

fn iso_search(
    d1: &Design,
    d2: &Design,
    count_all: bool,
    bound: usize,
) -> Result<(u64, Option<Vec<usize>>), IsoError> {
    if d1.v() != d2.v() || d1.k() != d2.k() {
        return Err(IsoError::ParamMismatch {
            v1: d1.v(),
            k1: d1.k(),
            v2: d2.v(),
            k2: d2.k(),
        });
    }
    if d1.v() > bound {
        return Err(IsoError::BoundExceeded { v: d1.v(), bound });
    }
    for d in [d1, d2] {
        let report = d.verify();
        if !report.pass {
            return Err(IsoError::Design(crate::error::DesignError::Unverified(
                report.summary(),
            )));
        }
    }
    let v = d1.v();
    let prof1 = point_profiles(d1);
    let prof2 = point_profiles(d2);
    // rarity of each d1 point's profile class among d2 points
    let allowed: Vec<Vec<usize>> = (0..v)
        .map(|p| (0..v).filter(|&q| prof2[q] == prof1[p]).collect::<Vec<_>>())
        .collect();
    if allowed.iter().any(|a| a.is_empty()) {
        return Ok((0, None));
    }
    let mut order: Vec<usize> = (0..v).collect();
    order.sort_by_key(|&p| (allowed[p].len(), p));
    let mut searcher = IsoSearch {
        d1,
        d2,
        line1: line_table(d1),
        line2: line_table(d2),
        order,
        allowed,
        sigma: vec![UNSET; v],
        used: vec![false; v],
        block_map: vec![UNSET; d1.blocks().len()],
        count_all,
        found: 0,
        witness: None,
    };
    searcher.run();
    Ok((searcher.found, searcher.witness))
}

/// Finds a point bijection mapping the blocks of `d1` onto the blocks of
/// `d2`, or proves there is none. Exact at `v <= bound`.
pub fn are_isomorphic(d1: &Design, d2: &Design, bound: usize) -> Result<Option<Vec<usize>>, IsoError> {
    Ok(iso_search(d1, d2, false, bound)?.1)
}

/// Number of isomorphisms from `d1` onto `d2` (automorphisms when equal),
/// by exhaustive backtracking.
pub fn isomorphism_count(d1: &Design, d2: &Design, bound: usize) -> Result<u64, IsoError> {
    Ok(iso_search(d1, d2, true, bound)?.0)
}

/// `|Aut(D)|` by exhaustive enumeration.
pub fn automorphism_count(design: &Design, bound: usize) -> Result<u64, IsoError> {
    isomorphism_count(design, design, bound)
}
