//! Base-block candidates: k-subsets B with `|gB ∩ B| >= 2  =>  gB = B` for
//! every g in the group, represented by the lexicographic minimum of their
//! block orbit.

use std::collections::BTreeMap;

use crate::error::SearchError;
use crate::group::{PairOrbitIndex, PermGroup};

/// A base-block candidate: the search atom of the exact cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockCandidate {
    /// Lexicographically least block in the orbit, sorted.
    pub representative: Vec<usize>,
    /// Pair-orbit ids covered (exactly once each) by the block orbit.
    pub coverage: Vec<usize>,
    /// Number of distinct blocks in the orbit.
    pub orbit_length: usize,
}

/// Point-set bitmask over at most `4096` points, enough for every search
/// this engine runs.
#[derive(Clone, PartialEq, Eq)]
struct Mask {
    words: Vec<u64>,
}

impl Mask {
    fn new(v: usize) -> Self {
        Mask {
            words: vec![0; v.div_ceil(64)],
        }
    }

    #[inline]
    fn set(&mut self, p: usize) {
        self.words[p / 64] |= 1 << (p % 64);
    }

    #[inline]
    fn clear(&mut self, p: usize) {
        self.words[p / 64] &= !(1 << (p % 64));
    }

    #[inline]
    fn contains(&self, p: usize) -> bool {
        self.words[p / 64] >> (p % 64) & 1 == 1
    }

    fn intersection_size(&self, other: &Mask) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }
}

/// The literal quantifier: for every group element g,
/// `|gB ∩ B| >= 2` implies `gB = B`.
pub fn is_base_block_literal(group: &PermGroup, block: &[usize]) -> bool {
    let mut sorted = block.to_vec();
    sorted.sort_unstable();
    for g in group.elements() {
        if g.is_identity() {
            continue;
        }
        let image = g.apply_set(&sorted);
        let mut overlap = 0;
        let (mut i, mut j) = (0, 0);
        while i < sorted.len() && j < image.len() {
            match sorted[i].cmp(&image[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    overlap += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        if overlap >= 2 && image != sorted {
            return false;
        }
    }
    true
}

/// Coverage multiplicity per pair orbit for the whole block orbit: total
/// pair hits on each orbit divided by the orbit size. The division is exact
/// by orbit counting, which is asserted.
pub fn covered_orbit_multiplicity(
    block: &[usize],
    pairs: &PairOrbitIndex,
    group: &PermGroup,
) -> BTreeMap<usize, usize> {
    let orbit = group.block_orbit(block);
    let mut hits: BTreeMap<usize, usize> = BTreeMap::new();
    for image in &orbit {
        for i in 0..image.len() {
            for j in (i + 1)..image.len() {
                *hits.entry(pairs.orbit_of(image[i], image[j])).or_insert(0) += 1;
            }
        }
    }
    hits.into_iter()
        .map(|(orbit_id, h)| {
            let size = pairs.sizes()[orbit_id];
            assert_eq!(h % size, 0, "pair hits must be a multiple of the orbit size");
            (orbit_id, h / size)
        })
        .collect()
}

/// The multiplicity-oracle formulation of the base-block condition.
pub fn is_base_block_multiplicity(
    group: &PermGroup,
    pairs: &PairOrbitIndex,
    block: &[usize],
) -> bool {
    covered_orbit_multiplicity(block, pairs, group)
        .values()
        .all(|&m| m <= 1)
}

struct Generator<'a> {
    group: &'a PermGroup,
    k: usize,
    v: usize,
    node_cap: Option<u64>,
    deadline: Option<std::time::Instant>,
    nodes: u64,
    current: Vec<usize>,
    mask: Mask,
    out: Vec<Vec<usize>>,
    truncated: bool,
}

impl Generator<'_> {
    /// Partial-block prune. If some g overlaps the partial block in >= 2
    /// points, any completion B must satisfy gB = B, hence must contain the
    /// whole <g>-closure of the partial block. The closure must fit in k
    /// points and must not require a point below max(P) that we already
    /// skipped on this path.
    fn viable(&self, newest: usize) -> bool {
        let p = &self.current;
        for g in self.group.elements() {
            if g.is_identity() {
                continue;
            }
            let mut overlap = 0;
            for &x in p {
                if self.mask.contains(g.apply(x)) {
                    overlap += 1;
                    if overlap == 2 {
                        break;
                    }
                }
            }
            if overlap < 2 {
                continue;
            }
            // closure of P under <g>
            let mut closure = p.clone();
            let mut seen = Mask::new(self.v);
            for &x in p {
                seen.set(x);
            }
            let mut head = 0;
            while head < closure.len() {
                let y = g.apply(closure[head]);
                if !seen.contains(y) {
                    if y < newest || closure.len() >= self.k {
                        return false;
                    }
                    seen.set(y);
                    closure.push(y);
                }
                head += 1;
            }
            if closure.len() > self.k {
                return false;
            }
        }
        true
    }

    fn is_base_block(&self) -> bool {
        // leaf test over bitmasks: every g either fixes B setwise or meets
        // it in at most one point
        for g in self.group.elements() {
            if g.is_identity() {
                continue;
            }
            let mut image = Mask::new(self.v);
            for &x in &self.current {
                image.set(g.apply(x));
            }
            let overlap = image.intersection_size(&self.mask);
            if overlap >= 2 && image != self.mask {
                return false;
            }
        }
        true
    }

    fn extend(&mut self, from: usize) {
        if self.truncated {
            return;
        }
        self.nodes += 1;
        if let Some(cap) = self.node_cap {
            if self.nodes > cap {
                self.truncated = true;
                return;
            }
        }
        if let Some(deadline) = self.deadline {
            if self.nodes.is_multiple_of(1024) && std::time::Instant::now() >= deadline {
                self.truncated = true;
                return;
            }
        }
        if self.current.len() == self.k {
            if self.is_base_block() {
                self.out.push(self.current.clone());
            }
            return;
        }
        let slots_needed = self.k - self.current.len();
        for p in from..=(self.v - slots_needed) {
            self.current.push(p);
            self.mask.set(p);
            if self.current.len() < 2 || self.viable(p) {
                self.extend(p + 1);
            }
            self.mask.clear(p);
            self.current.pop();
            if self.truncated {
                return;
            }
        }
    }
}

/// Candidate enumeration result; `truncated` means a cap or deadline cut
/// the sweep short and the list is a prefix of the full one.
pub struct CandidateOutcome {
    pub candidates: Vec<BlockCandidate>,
    pub truncated: bool,
    pub nodes: u64,
}

/// Enumerates all base-block candidates, one representative per block orbit
/// (the lexicographic minimum), in lexicographic order.
pub fn candidate_blocks(
    group: &PermGroup,
    pairs: &PairOrbitIndex,
    k: usize,
    node_cap: Option<u64>,
) -> Result<Vec<BlockCandidate>, SearchError> {
    let outcome = candidate_blocks_bounded(group, pairs, k, node_cap, None);
    if outcome.truncated {
        return Err(SearchError::NodeCapExceeded {
            cap: node_cap.unwrap_or(0),
            found: outcome.candidates.len(),
        });
    }
    Ok(outcome.candidates)
}

/// Like [`candidate_blocks`] but reports truncation as a flag with the
/// partial list, for searches that downgrade to "at least" counts.
pub fn candidate_blocks_bounded(
    group: &PermGroup,
    pairs: &PairOrbitIndex,
    k: usize,
    node_cap: Option<u64>,
    deadline: Option<std::time::Instant>,
) -> CandidateOutcome {
    let v = group.degree();
    let mut gen = Generator {
        group,
        k,
        v,
        node_cap,
        deadline,
        nodes: 0,
        current: Vec::with_capacity(k),
        mask: Mask::new(v),
        out: Vec::new(),
        truncated: false,
    };
    gen.extend(0);
    let mut truncated = gen.truncated;
    let mut candidates = Vec::new();
    for (i, block) in gen.out.into_iter().enumerate() {
        if let Some(deadline) = deadline {
            if i % 64 == 0 && std::time::Instant::now() >= deadline {
                truncated = true;
                break;
            }
        }
        let orbit = group.block_orbit(&block);
        if orbit[0] != block {
            continue; // not the orbit representative
        }
        let mut coverage: Vec<usize> = Vec::new();
        for image in &orbit {
            for i in 0..k {
                for j in (i + 1)..k {
                    coverage.push(pairs.orbit_of(image[i], image[j]));
                }
            }
        }
        coverage.sort_unstable();
        coverage.dedup();
        // accounting identity: orbit_length * C(k,2) pair slots must tile
        // the covered orbits exactly
        let covered: usize = coverage.iter().map(|&o| pairs.sizes()[o]).sum();
        debug_assert_eq!(orbit.len() * k * (k - 1) / 2, covered);
        candidates.push(BlockCandidate {
            representative: block,
            coverage,
            orbit_length: orbit.len(),
        });
    }
    CandidateOutcome {
        candidates,
        truncated,
        nodes: gen.nodes,
    }
}
