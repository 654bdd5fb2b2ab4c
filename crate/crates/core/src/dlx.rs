//! Dancing-links solver for exact cover, with cooperative limits.
//!
//! Columns are `0..n_cols`; rows are given as sorted column-id lists. The
//! solver picks the column with the fewest remaining rows at each level.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Arc;
use std::time::Instant;

/// Shared counters and caps, checked once per search node.
#[derive(Debug)]
pub struct Limits {
    pub max_solutions: Option<u64>,
    pub node_cap: Option<u64>,
    pub deadline: Option<Instant>,
    nodes: AtomicU64,
    solutions: AtomicU64,
    truncated: AtomicBool,
}

impl Limits {
    pub fn new(
        max_solutions: Option<u64>,
        node_cap: Option<u64>,
        deadline: Option<Instant>,
    ) -> Arc<Self> {
        Arc::new(Limits {
            max_solutions,
            node_cap,
            deadline,
            nodes: AtomicU64::new(0),
            solutions: AtomicU64::new(0),
            truncated: AtomicBool::new(false),
        })
    }

    pub fn unlimited() -> Arc<Self> {
        Self::new(None, None, None)
    }

    pub fn nodes(&self) -> u64 {
        self.nodes.load(Ordering::Relaxed)
    }

    pub fn solutions(&self) -> u64 {
        self.solutions.load(Ordering::Relaxed)
    }

    pub fn truncated(&self) -> bool {
        self.truncated.load(Ordering::Relaxed)
    }

    pub fn mark_truncated(&self) {
        self.truncated.store(true, Ordering::Relaxed);
    }

    /// Counts one search node; returns false when the search must stop.
    fn tick(&self) -> bool {
        let n = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if let Some(cap) = self.node_cap {
            if n > cap {
                self.mark_truncated();
                return false;
            }
        }
        if let Some(deadline) = self.deadline {
            // Instant::now() is cheap, but a modulus keeps it off the hot path.
            if n.is_multiple_of(1024) && Instant::now() >= deadline {
                self.mark_truncated();
                return false;
            }
        }
        if let Some(max) = self.max_solutions {
            if self.solutions.load(Ordering::Relaxed) >= max {
                return false;
            }
        }
        true
    }

    fn record_solution(&self) -> bool {
        let s = self.solutions.fetch_add(1, Ordering::Relaxed) + 1;
        match self.max_solutions {
            Some(max) if s >= max => {
                self.mark_truncated();
                false
            }
            _ => true,
        }
    }
}

const NIL: usize = usize::MAX;

/// The classic toroidal doubly-linked node soup, indices instead of pointers.
pub struct Dlx {
    left: Vec<usize>,
    right: Vec<usize>,
    up: Vec<usize>,
    down: Vec<usize>,
    /// Column header index for each node; for headers, the column id.
    col: Vec<usize>,
    /// Row id for each interior node; NIL for headers.
    row: Vec<usize>,
    /// Remaining rows per column, indexed by header node.
    size: Vec<usize>,
    root: usize,
}

impl Dlx {
    /// Builds the matrix. Each row is a sorted list of column ids `< n_cols`.
    pub fn new(n_cols: usize, rows: &[Vec<usize>]) -> Self {
        let root = n_cols;
        let n_nodes = n_cols + 1 + rows.iter().map(|r| r.len()).sum::<usize>();
        let mut dlx = Dlx {
            left: vec![NIL; n_nodes],
            right: vec![NIL; n_nodes],
            up: vec![NIL; n_nodes],
            down: vec![NIL; n_nodes],
            col: vec![NIL; n_nodes],
            row: vec![NIL; n_nodes],
            size: vec![0; n_cols],
            root,
        };
        // header ring
        let mut prev = root;
        for c in 0..n_cols {
            dlx.left[c] = prev;
            dlx.right[prev] = c;
            dlx.up[c] = c;
            dlx.down[c] = c;
            dlx.col[c] = c;
            prev = c;
        }
        dlx.left[root] = prev;
        dlx.right[prev] = root;

        let mut next = n_cols + 1;
        for (r, cols) in rows.iter().enumerate() {
            let mut first = NIL;
            for &c in cols {
                debug_assert!(c < n_cols);
                let node = next;
                next += 1;
                dlx.col[node] = c;
                dlx.row[node] = r;
                // vertical insert above the header (end of column)
                let tail = dlx.up[c];
                dlx.up[node] = tail;
                dlx.down[node] = c;
                dlx.down[tail] = node;
                dlx.up[c] = node;
                dlx.size[c] += 1;
                // horizontal ring within the row
                if first == NIL {
                    first = node;
                    dlx.left[node] = node;
                    dlx.right[node] = node;
                } else {
                    let last = dlx.left[first];
                    dlx.left[node] = last;
                    dlx.right[node] = first;
                    dlx.right[last] = node;
                    dlx.left[first] = node;
                }
            }
        }
        dlx
    }

    fn cover(&mut self, c: usize) {
        self.right[self.left[c]] = self.right[c];
        self.left[self.right[c]] = self.left[c];
        let mut i = self.down[c];
        while i != c {
            let mut j = self.right[i];
            while j != i {
                self.down[self.up[j]] = self.down[j];
                self.up[self.down[j]] = self.up[j];
                self.size[self.col[j]] -= 1;
                j = self.right[j];
            }
            i = self.down[i];
        }
    }

    fn uncover(&mut self, c: usize) {
        let mut i = self.up[c];
        while i != c {
            let mut j = self.left[i];
            while j != i {
                self.size[self.col[j]] += 1;
                self.down[self.up[j]] = j;
                self.up[self.down[j]] = j;
                j = self.left[j];
            }
            i = self.up[i];
        }
        self.right[self.left[c]] = c;
        self.left[self.right[c]] = c;
    }

    fn min_column(&self) -> Option<usize> {
        let mut best = NIL;
        let mut best_size = usize::MAX;
        let mut c = self.right[self.root];
        while c != self.root {
            if self.size[c] < best_size {
                best_size = self.size[c];
                best = c;
            }
            c = self.right[c];
        }
        (best != NIL).then_some(best)
    }

    /// Covers all columns of `row_node`'s row except its own column (which
    /// must already be covered). Used to force a row before searching.
    fn cover_row_siblings(&mut self, row_node: usize) {
        let mut j = self.right[row_node];
        while j != row_node {
            self.cover(self.col[j]);
            j = self.right[j];
        }
    }

    fn uncover_row_siblings(&mut self, row_node: usize) {
        let mut j = self.left[row_node];
        while j != row_node {
            self.uncover(self.col[j]);
            j = self.left[j];
        }
    }

    /// Forces the row containing every column in `cols` of the given row id.
    /// Returns the node handle used to undo, or None if the row is gone.
    pub fn force_row(&mut self, row_id: usize) -> Option<usize> {
        // find a live node of this row by scanning live columns
        let mut c = self.right[self.root];
        while c != self.root {
            let mut i = self.down[c];
            while i != c {
                if self.row[i] == row_id {
                    self.cover(self.col[i]);
                    self.cover_row_siblings(i);
                    return Some(i);
                }
                i = self.down[i];
            }
            c = self.right[c];
        }
        None
    }

    /// Exhaustively enumerates exact covers, invoking `on_solution` with the
    /// selected row ids. Respects `limits`; returns true when the sweep was
    /// exhaustive.
    pub fn solve(&mut self, limits: &Limits, on_solution: &mut dyn FnMut(&[usize])) -> bool {
        let mut stack = Vec::new();
        self.recurse(limits, &mut stack, on_solution)
    }

    fn recurse(
        &mut self,
        limits: &Limits,
        chosen: &mut Vec<usize>,
        on_solution: &mut dyn FnMut(&[usize]),
    ) -> bool {
        if self.right[self.root] == self.root {
            on_solution(chosen);
            return limits.record_solution();
        }
        if !limits.tick() {
            return false;
        }
        let Some(c) = self.min_column() else {
            return true;
        };
        if self.size[c] == 0 {
            return true;
        }
        self.cover(c);
        let mut exhaustive = true;
        let mut i = self.down[c];
        while i != c {
            chosen.push(self.row[i]);
            self.cover_row_siblings(i);
            exhaustive = self.recurse(limits, chosen, on_solution);
            self.uncover_row_siblings(i);
            chosen.pop();
            if !exhaustive {
                break;
            }
            i = self.down[i];
        }
        self.uncover(c);
        exhaustive
    }
}
