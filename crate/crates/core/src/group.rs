//! Permutation groups by explicit element enumeration, with orbit machinery
//! on points and on unordered point pairs.

use std::collections::HashMap;
use std::fmt;

use crate::error::GroupError;
use crate::perm::Permutation;

pub const DEFAULT_ORDER_CAP: usize = 1_000_000;

/// A permutation group given by generators, with all elements enumerated.
#[derive(Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
}

impl PermGroup {
    /// Breadth-first closure of the generators under composition.
    ///
    /// Generators are sorted first so the discovery order (and hence every
    /// downstream orbit numbering) is deterministic. Fails once the closure
    /// grows past `order_cap`.
    pub fn generate(
        degree: usize,
        generators: Vec<Permutation>,
        order_cap: usize,
    ) -> Result<Self, GroupError> {
        for g in &generators {
            if g.degree() != degree {
                return Err(GroupError::DegreeMismatch {
                    left: degree,
                    right: g.degree(),
                });
            }
        }
        let mut generators = generators;
        generators.sort();
        generators.dedup();
        generators.retain(|g| !g.is_identity());

        let identity = Permutation::identity(degree);
        let mut elements = vec![identity.clone()];
        let mut index: HashMap<Permutation, usize> = HashMap::new();
        index.insert(identity, 0);
        let mut head = 0;
        while head < elements.len() {
            for g in &generators {
                let product = g.compose(&elements[head]).expect("same degree");
                if !index.contains_key(&product) {
                    if elements.len() >= order_cap {
                        return Err(GroupError::OrderCapExceeded { cap: order_cap });
                    }
                    index.insert(product.clone(), elements.len());
                    elements.push(product);
                }
            }
            head += 1;
        }
        Ok(PermGroup {
            degree,
            generators,
            elements,
        })
    }

    pub fn trivial(degree: usize) -> Self {
        PermGroup {
            degree,
            generators: Vec::new(),
            elements: vec![Permutation::identity(degree)],
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    /// Orbits of the group on points.
    pub fn point_orbits(&self) -> OrbitPartition {
        let v = self.degree;
        let mut orbit_of = vec![usize::MAX; v];
        let mut orbits: Vec<Vec<usize>> = Vec::new();
        for start in 0..v {
            if orbit_of[start] != usize::MAX {
                continue;
            }
            let id = orbits.len();
            let mut orbit = vec![start];
            orbit_of[start] = id;
            let mut head = 0;
            while head < orbit.len() {
                let p = orbit[head];
                for g in &self.generators {
                    let q = g.apply(p);
                    if orbit_of[q] == usize::MAX {
                        orbit_of[q] = id;
                        orbit.push(q);
                    }
                }
                head += 1;
            }
            orbit.sort_unstable();
            orbits.push(orbit);
        }
        orbits.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
        let mut orbit_of = vec![0usize; v];
        for (id, orbit) in orbits.iter().enumerate() {
            for &p in orbit {
                orbit_of[p] = id;
            }
        }
        OrbitPartition { orbit_of, orbits }
    }

    /// Orbits of the group on unordered point pairs. Orbit ids are assigned
    /// in lexicographic order of the least pair in each orbit.
    pub fn pair_orbits(&self) -> PairOrbitIndex {
        let v = self.degree;
        let n_pairs = v * (v - 1) / 2;
        let mut orbit_of = vec![usize::MAX; n_pairs];
        let mut sizes = Vec::new();
        let mut reps = Vec::new();
        for a in 0..v {
            for b in (a + 1)..v {
                let start = pair_index(a, b);
                if orbit_of[start] != usize::MAX {
                    continue;
                }
                let id = reps.len();
                reps.push((a, b));
                orbit_of[start] = id;
                let mut queue = vec![(a, b)];
                let mut head = 0;
                while head < queue.len() {
                    let (x, y) = queue[head];
                    for g in &self.generators {
                        let (gx, gy) = (g.apply(x), g.apply(y));
                        let pair = if gx < gy { (gx, gy) } else { (gy, gx) };
                        let idx = pair_index(pair.0, pair.1);
                        if orbit_of[idx] == usize::MAX {
                            orbit_of[idx] = id;
                            queue.push(pair);
                        }
                    }
                    head += 1;
                }
                sizes.push(queue.len());
            }
        }
        PairOrbitIndex {
            degree: v,
            orbit_of,
            sizes,
            representatives: reps,
        }
    }

    /// The subgroup `{g : gB = B}` fixing `block` setwise.
    pub fn setwise_stabilizer(&self, block: &[usize]) -> PermGroup {
        let mut sorted = block.to_vec();
        sorted.sort_unstable();
        let elements: Vec<Permutation> = self
            .elements
            .iter()
            .filter(|g| g.apply_set(&sorted) == sorted)
            .cloned()
            .collect();
        let generators = elements.iter().filter(|g| !g.is_identity()).cloned().collect();
        PermGroup {
            degree: self.degree,
            generators,
            elements,
        }
    }

    /// Distinct images `{gB : g in G}`, sorted lexicographically.
    pub fn block_orbit(&self, block: &[usize]) -> Vec<Vec<usize>> {
        let mut images: Vec<Vec<usize>> = self.elements.iter().map(|g| g.apply_set(block)).collect();
        images.sort();
        images.dedup();
        images
    }
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "PermGroup(degree={}, order={}, generators={})",
            self.degree,
            self.order(),
            self.generators.len()
        )
    }
}

/// Triangular index of the unordered pair `{a, b}` with `a < b`.
#[inline]
pub fn pair_index(a: usize, b: usize) -> usize {
    debug_assert!(a < b);
    b * (b - 1) / 2 + a
}

/// Orbits of a group on its point set.
#[derive(Clone, Debug)]
pub struct OrbitPartition {
    orbit_of: Vec<usize>,
    /// Sorted by size descending, then by minimum element.
    orbits: Vec<Vec<usize>>,
}

impl OrbitPartition {
    pub fn orbit_of(&self, point: usize) -> usize {
        self.orbit_of[point]
    }

    pub fn orbits(&self) -> &[Vec<usize>] {
        &self.orbits
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.orbits.iter().map(|o| o.len()).collect()
    }

    pub fn structure(&self) -> OrbitStructure {
        OrbitStructure::from_sizes(self.sizes())
    }
}

/// Index of the orbits of a group on unordered point pairs.
#[derive(Clone, Debug)]
pub struct PairOrbitIndex {
    degree: usize,
    orbit_of: Vec<usize>,
    sizes: Vec<usize>,
    representatives: Vec<(usize, usize)>,
}

impl PairOrbitIndex {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn orbit_count(&self) -> usize {
        self.sizes.len()
    }

    pub fn orbit_of(&self, a: usize, b: usize) -> usize {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        self.orbit_of[pair_index(a, b)]
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn representatives(&self) -> &[(usize, usize)] {
        &self.representatives
    }
}

/// A declared orbit-size structure such as `168+1x7` (one orbit of size 168
/// and seven orbits of size 1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitStructure {
    /// Sorted descending.
    sizes: Vec<usize>,
}

impl OrbitStructure {
    pub fn from_sizes(mut sizes: Vec<usize>) -> Self {
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        OrbitStructure { sizes }
    }

    /// Parses notation like `168+1x7`, `75x2+25` or `259`.
    pub fn parse(text: &str) -> Result<Self, GroupError> {
        let mut sizes = Vec::new();
        for term in text.split('+') {
            let term = term.trim();
            let (size, count) = match term.split_once(['x', 'X', '*']) {
                Some((s, c)) => (s.trim(), c.trim()),
                None => (term, "1"),
            };
            let size: usize = size.parse().map_err(|_| GroupError::GeneratorFile(format!(
                "bad orbit structure term `{term}` in `{text}`"
            )))?;
            let count: usize = count.parse().map_err(|_| GroupError::GeneratorFile(format!(
                "bad orbit multiplicity in `{term}`"
            )))?;
            if size == 0 || count == 0 {
                return Err(GroupError::GeneratorFile(format!(
                    "zero orbit size or count in `{term}`"
                )));
            }
            sizes.extend(std::iter::repeat_n(size, count));
        }
        if sizes.is_empty() {
            return Err(GroupError::GeneratorFile(format!(
                "empty orbit structure `{text}`"
            )));
        }
        Ok(Self::from_sizes(sizes))
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn total(&self) -> usize {
        self.sizes.iter().sum()
    }
}

impl fmt::Display for OrbitStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut runs: Vec<(usize, usize)> = Vec::new();
        for &s in &self.sizes {
            match runs.last_mut() {
                Some((size, count)) if *size == s => *count += 1,
                _ => runs.push((s, 1)),
            }
        }
        let parts: Vec<String> = runs
            .iter()
            .map(|&(size, count)| {
                if count == 1 {
                    size.to_string()
                } else {
                    format!("{size}x{count}")
                }
            })
            .collect();
        write!(f, "{}", parts.join("+"))
    }
}

/// Parses a generator file: first non-comment line `degree v`, then one
/// permutation per line in disjoint-cycle notation. `#` starts a comment.
pub fn parse_generator_file(text: &str) -> Result<(usize, Vec<Permutation>), GroupError> {
    let mut degree: Option<usize> = None;
    let mut gens = Vec::new();
    for raw in text.lines() {
        let line = match raw.split_once('#') {
            Some((before, _)) => before.trim(),
            None => raw.trim(),
        };
        if line.is_empty() {
            continue;
        }
        match degree {
            None => {
                let Some(rest) = line.strip_prefix("degree") else {
                    return Err(GroupError::GeneratorFile(format!(
                        "expected `degree v` as the first line, got `{line}`"
                    )));
                };
                let v: usize = rest.trim().parse().map_err(|_| {
                    GroupError::GeneratorFile(format!("bad degree `{}`", rest.trim()))
                })?;
                if v == 0 {
                    return Err(GroupError::GeneratorFile("degree must be positive".into()));
                }
                degree = Some(v);
            }
            Some(v) => gens.push(Permutation::parse_cycles(line, v)?),
        }
    }
    let degree = degree.ok_or_else(|| GroupError::GeneratorFile("missing `degree` line".into()))?;
    Ok((degree, gens))
}
