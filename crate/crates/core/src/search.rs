//! Exact-cover search for Steiner systems with a prescribed group action:
//! pair orbits are the columns, base-block candidates the rows.

use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use serde::Deserialize;

use crate::candidates::{candidate_blocks_bounded, BlockCandidate};
use crate::design::{admissible, Design};
use crate::dlx::{Dlx, Limits};
use crate::error::SearchError;
use crate::group::{parse_generator_file, OrbitStructure, PermGroup, DEFAULT_ORDER_CAP};

#[derive(Clone, Debug, Default)]
pub struct SearchLimits {
    pub max_solutions: Option<u64>,
    pub node_cap: Option<u64>,
    pub time_budget: Option<Duration>,
    pub threads: usize,
}

/// A fully resolved search instance.
#[derive(Debug)]
pub struct SearchConfig {
    pub group: PermGroup,
    pub v: usize,
    pub k: usize,
    pub declared_orbits: Option<OrbitStructure>,
    pub limits: SearchLimits,
}

impl SearchConfig {
    pub fn new(
        group: PermGroup,
        v: usize,
        k: usize,
        declared_orbits: Option<OrbitStructure>,
        limits: SearchLimits,
    ) -> Result<Self, SearchError> {
        if group.degree() != v {
            return Err(SearchError::Config(format!(
                "group degree {} does not match v={v}",
                group.degree()
            )));
        }
        let report = admissible(k, v);
        if !report.admissible {
            return Err(SearchError::Config(format!(
                "(k={k}, v={v}) inadmissible: {}",
                report.reason.unwrap_or_default()
            )));
        }
        let config = SearchConfig {
            group,
            v,
            k,
            declared_orbits,
            limits,
        };
        if let Some(declared) = &config.declared_orbits {
            let actual = config.group.point_orbits().structure();
            if *declared != actual {
                return Err(SearchError::OrbitMismatch {
                    declared: declared.to_string(),
                    actual: actual.to_string(),
                });
            }
        }
        Ok(config)
    }
}

/// On-disk search configuration (TOML). Paths are relative to the file.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    generators: String,
    k: usize,
    v: usize,
    orbits: Option<String>,
    order_cap: Option<usize>,
    max_solutions: Option<u64>,
    node_cap: Option<u64>,
    time_budget_secs: Option<u64>,
}

/// Loads a search config file, reading and closing the referenced
/// generator file.
pub fn load_config(path: &Path) -> Result<SearchConfig, SearchError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| SearchError::Config(format!("{}: {e}", path.display())))?;
    let raw: RawConfig =
        toml::from_str(&text).map_err(|e| SearchError::Config(e.to_string()))?;
    let gen_path: PathBuf = match path.parent() {
        Some(dir) => dir.join(&raw.generators),
        None => PathBuf::from(&raw.generators),
    };
    let gen_text = std::fs::read_to_string(&gen_path)
        .map_err(|e| SearchError::Config(format!("{}: {e}", gen_path.display())))?;
    let (degree, gens) = parse_generator_file(&gen_text)?;
    let group = PermGroup::generate(degree, gens, raw.order_cap.unwrap_or(DEFAULT_ORDER_CAP))?;
    let declared = raw
        .orbits
        .as_deref()
        .map(OrbitStructure::parse)
        .transpose()?;
    SearchConfig::new(
        group,
        raw.v,
        raw.k,
        declared,
        SearchLimits {
            max_solutions: raw.max_solutions,
            node_cap: raw.node_cap,
            time_budget: raw.time_budget_secs.map(Duration::from_secs),
            threads: 1,
        },
    )
}

/// One assembled Steiner system together with the base blocks it came from.
#[derive(Clone, Debug)]
pub struct SearchSolution {
    pub base_blocks: Vec<BlockCandidate>,
    pub design: Design,
}

#[derive(Debug)]
pub struct SearchOutcome {
    pub solutions: Vec<SearchSolution>,
    pub exhaustive: bool,
    pub nodes: u64,
    pub candidate_count: usize,
}

/// Runs the full pipeline: candidate generation, exact cover over pair
/// orbits, design assembly and re-verification of every solution.
pub fn search(config: &SearchConfig) -> Result<SearchOutcome, SearchError> {
    let deadline = config.limits.time_budget.map(|d| Instant::now() + d);
    let pairs = config.group.pair_orbits();
    let generated = candidate_blocks_bounded(
        &config.group,
        &pairs,
        config.k,
        config.limits.node_cap,
        deadline,
    );
    let candidates = generated.candidates;
    let n_cols = pairs.orbit_count();
    let rows: Vec<Vec<usize>> = candidates.iter().map(|c| c.coverage.clone()).collect();

    let limits = Limits::new(config.limits.max_solutions, config.limits.node_cap, deadline);
    if generated.truncated {
        limits.mark_truncated();
    }

    let raw_solutions: Vec<Vec<usize>> = if config.limits.threads > 1 && !rows.is_empty() {
        solve_parallel(n_cols, &rows, &limits, config.limits.threads)
    } else {
        let mut dlx = Dlx::new(n_cols, &rows);
        let mut sols = Vec::new();
        let exhaustive = dlx.solve(&limits, &mut |sel| sols.push(sel.to_vec()));
        if !exhaustive {
            limits.mark_truncated();
        }
        sols
    };

    let mut solutions = Vec::new();
    for selection in raw_solutions {
        let mut base_blocks: Vec<BlockCandidate> =
            selection.iter().map(|&r| candidates[r].clone()).collect();
        base_blocks.sort_by(|a, b| a.representative.cmp(&b.representative));
        let mut blocks = Vec::new();
        for cand in &base_blocks {
            blocks.extend(config.group.block_orbit(&cand.representative));
        }
        let design = Design::new(config.v, config.k, blocks);
        // the cover bookkeeping is not trusted; every design is re-verified
        let report = design.verify();
        if !report.pass {
            return Err(SearchError::Config(format!(
                "internal error: cover produced an invalid design: {}",
                report.summary()
            )));
        }
        solutions.push(SearchSolution {
            base_blocks,
            design,
        });
    }
    // canonical order restores determinism regardless of thread count
    solutions.sort_by(|a, b| {
        let ka: Vec<&Vec<usize>> = a.base_blocks.iter().map(|c| &c.representative).collect();
        let kb: Vec<&Vec<usize>> = b.base_blocks.iter().map(|c| &c.representative).collect();
        ka.cmp(&kb)
    });
    solutions.dedup_by(|a, b| a.design == b.design);

    Ok(SearchOutcome {
        solutions,
        exhaustive: !limits.truncated(),
        nodes: limits.nodes(),
        candidate_count: candidates.len(),
    })
}

/// Splits the branch on the most-constrained column across worker threads.
/// Each worker forces its branch row on a private copy of the matrix.
fn solve_parallel(
    n_cols: usize,
    rows: &[Vec<usize>],
    limits: &Limits,
    threads: usize,
) -> Vec<Vec<usize>> {
    // most-constrained column = the one appearing in the fewest rows
    let mut col_rows: Vec<Vec<usize>> = vec![Vec::new(); n_cols];
    for (r, cols) in rows.iter().enumerate() {
        for &c in cols {
            col_rows[c].push(r);
        }
    }
    let branch_col = match (0..n_cols).min_by_key(|&c| col_rows[c].len()) {
        Some(c) => c,
        None => return Vec::new(),
    };
    let branches = &col_rows[branch_col];

    let sink: Mutex<Vec<Vec<usize>>> = Mutex::new(Vec::new());
    let next = std::sync::atomic::AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..threads.min(branches.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                let Some(&forced) = branches.get(i) else {
                    break;
                };
                let mut dlx = Dlx::new(n_cols, rows);
                if dlx.force_row(forced).is_none() {
                    continue;
                }
                let mut local = Vec::new();
                let exhaustive = dlx.solve(limits, &mut |sel| {
                    let mut s = vec![forced];
                    s.extend_from_slice(sel);
                    local.push(s);
                });
                sink.lock().unwrap().extend(local);
                if !exhaustive {
                    limits.mark_truncated();
                    break;
                }
            });
        }
    });
    sink.into_inner().unwrap()
}
