//! Steiner system parameters, pair-coverage verification and the one-line
//! block-list text format.

use std::fmt;

use crate::error::DesignError;
use crate::group::pair_index;

/// Parameters of an `S(2,k,v)`: replication number `r = (v-1)/(k-1)` and
/// block count `b = v(v-1)/(k(k-1))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DesignParams {
    pub v: usize,
    pub k: usize,
    pub r: usize,
    pub b: usize,
}

/// Outcome of the admissibility divisibility test.
#[derive(Clone, Debug)]
pub struct AdmissibilityReport {
    pub v: usize,
    pub k: usize,
    pub admissible: bool,
    pub params: Option<DesignParams>,
    pub reason: Option<String>,
}

/// Necessary divisibility conditions for `S(2,k,v)`:
/// `(k-1) | (v-1)` and `k(k-1) | v(v-1)`.
pub fn admissible(k: usize, v: usize) -> AdmissibilityReport {
    assert!(k >= 2 && v >= k, "require k >= 2 and v >= k");
    if !(v - 1).is_multiple_of(k - 1) {
        return AdmissibilityReport {
            v,
            k,
            admissible: false,
            params: None,
            reason: Some(format!("{} is not divisible by {}", v - 1, k - 1)),
        };
    }
    if !(v * (v - 1)).is_multiple_of(k * (k - 1)) {
        return AdmissibilityReport {
            v,
            k,
            admissible: false,
            params: None,
            reason: Some(format!("{} is not divisible by {}", v * (v - 1), k * (k - 1))),
        };
    }
    AdmissibilityReport {
        v,
        k,
        admissible: true,
        params: Some(DesignParams {
            v,
            k,
            r: (v - 1) / (k - 1),
            b: v * (v - 1) / (k * (k - 1)),
        }),
        reason: None,
    }
}

/// A block collection with Steiner parameters. Blocks are kept sorted
/// internally and the block list is kept in lexicographic order, so equal
/// designs compare equal structurally.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Design {
    v: usize,
    k: usize,
    blocks: Vec<Vec<usize>>,
}

impl Design {
    /// Canonicalizes blocks (sorts points within blocks, blocks between
    /// themselves) without verifying pair coverage.
    pub fn new(v: usize, k: usize, blocks: Vec<Vec<usize>>) -> Self {
        let mut blocks: Vec<Vec<usize>> = blocks
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        blocks.sort();
        Design { v, k, blocks }
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Applies a point relabeling given as an image table.
    pub fn relabel(&self, images: &[usize]) -> Design {
        let blocks = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|&p| images[p]).collect())
            .collect();
        Design::new(self.v, self.k, blocks)
    }

    pub fn verify(&self) -> VerificationReport {
        verify_design(&self.blocks, self.v, self.k)
    }

    /// Verifies and returns self, for pipelines that must not proceed with
    /// a broken design.
    pub fn verified(self) -> Result<Self, DesignError> {
        let report = self.verify();
        if report.pass {
            Ok(self)
        } else {
            Err(DesignError::Unverified(report.summary()))
        }
    }
}

impl fmt::Debug for Design {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Design(v={}, k={}, b={})", self.v, self.k, self.blocks.len())
    }
}

/// A pair with the wrong coverage multiplicity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairDefect {
    pub pair: (usize, usize),
    pub multiplicity: usize,
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub pass: bool,
    pub v: usize,
    pub k: usize,
    pub block_count: usize,
    /// First bad blocks, as (index, description).
    pub block_defects: Vec<(usize, String)>,
    /// First pairs covered zero or more than one time (at most 10 listed).
    pub pair_defects: Vec<PairDefect>,
}

impl VerificationReport {
    pub fn summary(&self) -> String {
        if self.pass {
            format!("PASS: S(2,{},{}) with {} blocks", self.k, self.v, self.block_count)
        } else {
            let mut parts = Vec::new();
            for (i, desc) in &self.block_defects {
                parts.push(format!("block {i}: {desc}"));
            }
            for d in &self.pair_defects {
                parts.push(format!(
                    "pair {{{},{}}} covered {} times",
                    d.pair.0, d.pair.1, d.multiplicity
                ));
            }
            format!("FAIL: {}", parts.join("; "))
        }
    }
}

const MAX_REPORTED_DEFECTS: usize = 10;

/// Checks that every block is a k-subset in range and every unordered pair
/// of points is covered exactly once.
pub fn verify_design(blocks: &[Vec<usize>], v: usize, k: usize) -> VerificationReport {
    let mut block_defects = Vec::new();
    let mut counts = vec![0u32; v * (v - 1) / 2];
    for (i, block) in blocks.iter().enumerate() {
        let mut sorted = block.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != k || block.len() != k {
            if block_defects.len() < MAX_REPORTED_DEFECTS {
                block_defects.push((i, format!("block of size {} (k={k})", sorted.len())));
            }
            continue;
        }
        if let Some(&p) = sorted.iter().find(|&&p| p >= v) {
            if block_defects.len() < MAX_REPORTED_DEFECTS {
                block_defects.push((i, format!("point {p} out of range (v={v})")));
            }
            continue;
        }
        for a in 0..k {
            for b in (a + 1)..k {
                counts[pair_index(sorted[a], sorted[b])] += 1;
            }
        }
    }
    let mut pair_defects = Vec::new();
    if block_defects.is_empty() {
        'outer: for b in 1..v {
            for a in 0..b {
                let c = counts[pair_index(a, b)] as usize;
                if c != 1 {
                    pair_defects.push(PairDefect {
                        pair: (a, b),
                        multiplicity: c,
                    });
                    if pair_defects.len() >= MAX_REPORTED_DEFECTS {
                        break 'outer;
                    }
                }
            }
        }
    }
    VerificationReport {
        pass: block_defects.is_empty() && pair_defects.is_empty(),
        v,
        k,
        block_count: blocks.len(),
        block_defects,
        pair_defects,
    }
}

/// Renders a design as one line: fingerprint token, colon, then the blocks
/// in lexicographic order as comma-separated point lists joined by `; `.
pub fn serialize(design: &Design, fingerprint: &str) -> String {
    let blocks: Vec<String> = design
        .blocks()
        .iter()
        .map(|b| {
            b.iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect();
    format!("{fingerprint}: {}", blocks.join("; "))
}

/// Parses one design line: `<fingerprint>: p,p,p; p,p,p; …` with arbitrary
/// interior whitespace tolerated. `expected_k`, when given, rejects blocks of
/// any other size.
pub fn parse(line: &str, expected_k: Option<usize>) -> Result<(String, Design), DesignError> {
    let colon = line.find(':').ok_or(DesignError::Parse {
        column: line.len(),
        reason: "missing `:` after fingerprint".into(),
    })?;
    let fingerprint = line[..colon].trim().to_string();
    if fingerprint.is_empty() {
        return Err(DesignError::Parse {
            column: 0,
            reason: "empty fingerprint".into(),
        });
    }
    let body = &line[colon + 1..];
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut max_point = 0usize;
    let mut offset = colon + 1;
    for chunk in body.split(';') {
        let base = offset;
        offset += chunk.len() + 1;
        if chunk.trim().is_empty() {
            continue;
        }
        let mut block = Vec::new();
        let mut col = base;
        for tok in chunk.split(',') {
            let tok_start = col;
            col += tok.len() + 1;
            let tok = tok.trim();
            if tok.is_empty() {
                return Err(DesignError::Parse {
                    column: tok_start,
                    reason: "empty point".into(),
                });
            }
            let p: usize = tok.parse().map_err(|_| DesignError::Parse {
                column: tok_start,
                reason: format!("bad point `{tok}`"),
            })?;
            max_point = max_point.max(p);
            block.push(p);
        }
        if let Some(k) = expected_k {
            if block.len() != k {
                return Err(DesignError::Parse {
                    column: base,
                    reason: format!("block of size {}", block.len()),
                });
            }
        }
        blocks.push(block);
    }
    if blocks.is_empty() {
        return Err(DesignError::Parse {
            column: colon + 1,
            reason: "no blocks".into(),
        });
    }
    let k = expected_k.unwrap_or_else(|| blocks[0].len());
    Ok((fingerprint, Design::new(max_point + 1, k, blocks)))
}

/// Parses a design file: one design per line, `#` comment lines skipped.
pub fn parse_file(text: &str, expected_k: Option<usize>) -> Result<Vec<(String, Design)>, DesignError> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| parse(l, expected_k))
        .collect()
}

pub fn fano_blocks() -> Vec<Vec<usize>> {
    vec![
        vec![0, 1, 3],
        vec![1, 2, 4],
        vec![2, 3, 5],
        vec![3, 4, 6],
        vec![4, 5, 0],
        vec![5, 6, 1],
        vec![6, 0, 2],
    ]
}
