//! The recursive lift: finite fields, mutually orthogonal Latin squares,
//! transversal designs, and the S(2,k,v) + TD(k,v) -> S(2,k,kv) product.

use crate::design::Design;
use crate::error::FieldError;

pub const MAX_FIELD_ORDER: usize = 1024;

/// Pinned modulus polynomials for the small prime-power orders, as
/// coefficients low-to-high without the leading 1. Kept constant so
/// field arithmetic
/// and everything built on it is reproducible run to run.
const PINNED_MODULI: &[(usize, &[u64])] = &[
    (4, &[1, 1]),      // x^2 + x + 1
    (8, &[1, 1, 0]),   // x^3 + x + 1
    (9, &[1, 0]),      // x^2 + 1
    (16, &[1, 1, 0, 0]), // x^4 + x + 1
    (25, &[2, 0]),     // x^2 + 2
    (27, &[1, 2, 0]),  // x^3 + 2x + 1
    (32, &[1, 0, 1, 0, 0]), // x^5 + x^2 + 1
    (49, &[1, 0]),     // x^2 + 1
    (64, &[1, 1, 0, 0, 0, 0]), // x^6 + x + 1
    (81, &[2, 1, 0, 0]), // x^4 + x + 2
];

/// GF(p^n) with elements encoded as integers `0..q` (base-p digit vectors of
/// the polynomial coefficients, low digit = constant term).
#[derive(Clone, Debug)]
pub struct FiniteField {
    pub p: usize,
    pub n: usize,
    pub q: usize,
    /// Modulus coefficients low-to-high (degree n, leading 1 implicit).
    pub modulus: Vec<u64>,
}

fn prime_power(q: usize) -> Option<(usize, usize)> {
    if q < 2 {
        return None;
    }
    let mut m = q;
    let mut p = 0;
    for d in 2.. {
        if d * d > m {
            if p == 0 {
                p = m;
            } else if m != 1 {
                return None;
            }
            break;
        }
        if m.is_multiple_of(d) {
            p = d;
            while m.is_multiple_of(d) {
                m /= d;
            }
            if m != 1 {
                return None;
            }
            break;
        }
    }
    let mut n = 0;
    let mut t = q;
    while t > 1 {
        t /= p;
        n += 1;
    }
    Some((p, n))
}

impl FiniteField {
    pub fn new(q: usize) -> Result<Self, FieldError> {
        if q > MAX_FIELD_ORDER {
            return Err(FieldError::OrderTooLarge {
                q,
                bound: MAX_FIELD_ORDER,
            });
        }
        let (p, n) = prime_power(q).ok_or(FieldError::NotAPrimePower { q })?;
        let modulus = if n == 1 {
            Vec::new()
        } else if let Some((_, m)) = PINNED_MODULI.iter().find(|(order, _)| *order == q) {
            m.to_vec()
        } else {
            // deterministic fallback: lexicographically least monic
            // irreducible of degree n over GF(p)
            smallest_irreducible(p, n)
        };
        let field = FiniteField { p, n, q, modulus };
        debug_assert!(field.n == 1 || field.modulus_is_irreducible());
        Ok(field)
    }

    fn digits(&self, mut x: usize) -> Vec<u64> {
        let mut out = vec![0u64; self.n];
        for d in out.iter_mut() {
            *d = (x % self.p) as u64;
            x /= self.p;
        }
        out
    }

    fn undigits(&self, ds: &[u64]) -> usize {
        ds.iter()
            .rev()
            .fold(0usize, |acc, &d| acc * self.p + d as usize)
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let (da, db) = (self.digits(a), self.digits(b));
        let sum: Vec<u64> = da
            .iter()
            .zip(&db)
            .map(|(x, y)| (x + y) % self.p as u64)
            .collect();
        self.undigits(&sum)
    }

    pub fn neg(&self, a: usize) -> usize {
        let da = self.digits(a);
        let out: Vec<u64> = da
            .iter()
            .map(|&x| (self.p as u64 - x) % self.p as u64)
            .collect();
        self.undigits(&out)
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        let p = self.p as u64;
        let (da, db) = (self.digits(a), self.digits(b));
        // schoolbook product, then reduce by the modulus
        let mut prod = vec![0u64; 2 * self.n];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        for i in (self.n..prod.len()).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            prod[i] = 0;
            // x^i = x^(i-n) * (-modulus)
            for (j, &m) in self.modulus.iter().enumerate() {
                let idx = i - self.n + j;
                prod[idx] = (prod[idx] + c * ((p - m % p) % p)) % p;
            }
        }
        self.undigits(&prod[..self.n.max(1)])
    }

    pub fn pow(&self, mut a: usize, mut e: u64) -> usize {
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: usize) -> usize {
        assert!(a != 0, "zero has no inverse");
        self.pow(a, (self.q - 2) as u64)
    }

    /// True when the nonzero elements form a cyclic group of order q-1
    /// witnessed by some generator; brute-force check used by tests.
    pub fn multiplicative_group_is_cyclic(&self) -> bool {
        (1..self.q).any(|g| {
            let mut seen = vec![false; self.q];
            let mut x = 1;
            for _ in 0..(self.q - 1) {
                if seen[x] {
                    return false;
                }
                seen[x] = true;
                x = self.mul(x, g);
            }
            (1..self.q).all(|y| seen[y])
        })
    }

    fn modulus_is_irreducible(&self) -> bool {
        poly_is_irreducible(self.p, &self.modulus)
    }
}

/// Irreducibility over GF(p) by trial division by every monic polynomial of
/// degree up to n/2. Plenty fast for the orders this engine supports.
fn poly_is_irreducible(p: usize, modulus: &[u64]) -> bool {
    let n = modulus.len();
    // full coefficient vector, monic
    let mut f: Vec<u64> = modulus.to_vec();
    f.push(1);
    for d in 1..=(n / 2) {
        // all monic divisor candidates of degree d
        let count = p.pow(d as u32);
        for code in 0..count {
            let mut g: Vec<u64> = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                g.push((c % p) as u64);
                c /= p;
            }
            g.push(1);
            if poly_rem_is_zero(p as u64, &f, &g) {
                return false;
            }
        }
    }
    true
}

fn poly_rem_is_zero(p: u64, f: &[u64], g: &[u64]) -> bool {
    let mut r: Vec<u64> = f.to_vec();
    let dg = g.len() - 1;
    while r.len() > dg {
        let lead = *r.last().unwrap() % p;
        let shift = r.len() - 1 - dg;
        if lead != 0 {
            for (j, &gj) in g.iter().enumerate() {
                r[shift + j] = (r[shift + j] + (p - gj % p) * lead) % p;
            }
        }
        r.pop();
    }
    r.iter().all(|&c| c % p == 0)
}

fn smallest_irreducible(p: usize, n: usize) -> Vec<u64> {
    let count = p.pow(n as u32);
    for code in 0..count {
        let mut coeffs: Vec<u64> = Vec::with_capacity(n);
        let mut c = code;
        for _ in 0..n {
            coeffs.push((c % p) as u64);
            c /= p;
        }
        if poly_is_irreducible(p, &coeffs) {
            return coeffs;
        }
    }
    unreachable!("an irreducible polynomial of each degree exists over GF(p)")
}

/// An order-n Latin square over symbols `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatinSquare {
    pub n: usize,
    pub grid: Vec<Vec<usize>>,
}

impl LatinSquare {
    pub fn new(grid: Vec<Vec<usize>>) -> Result<Self, FieldError> {
        let n = grid.len();
        let check = |cells: &mut dyn Iterator<Item = usize>, what: &str, i: usize| {
            let mut seen = vec![false; n];
            for s in cells {
                if s >= n || seen[s] {
                    return Err(FieldError::NotLatin(format!("{what} {i} is not a permutation")));
                }
                seen[s] = true;
            }
            Ok(())
        };
        for (i, row) in grid.iter().enumerate() {
            if row.len() != n {
                return Err(FieldError::NotLatin(format!("row {i} has length {}", row.len())));
            }
            check(&mut row.iter().copied(), "row", i)?;
        }
        for c in 0..n {
            check(&mut grid.iter().map(|row| row[c]), "column", c)?;
        }
        Ok(LatinSquare { n, grid })
    }

    pub fn cayley_table_cyclic(n: usize) -> LatinSquare {
        let grid = (0..n)
            .map(|x| (0..n).map(|y| (x + y) % n).collect())
            .collect();
        LatinSquare::new(grid).expect("addition table is Latin")
    }
}

/// Brute-force orthogonality: superimposing must produce all n^2 ordered
/// symbol pairs.
pub fn orthogonal(a: &LatinSquare, b: &LatinSquare) -> bool {
    if a.n != b.n {
        return false;
    }
    let n = a.n;
    let mut seen = vec![false; n * n];
    for x in 0..n {
        for y in 0..n {
            let code = a.grid[x][y] * n + b.grid[x][y];
            if seen[code] {
                return false;
            }
            seen[code] = true;
        }
    }
    true
}

fn check_pairwise_orthogonal(squares: &[LatinSquare]) -> Result<(), FieldError> {
    for i in 0..squares.len() {
        for j in (i + 1)..squares.len() {
            if !orthogonal(&squares[i], &squares[j]) {
                return Err(FieldError::NotOrthogonal { a: i, b: j });
            }
        }
    }
    Ok(())
}

/// The classical complete set of q-1 MOLS over GF(q):
/// `L_a(x, y) = a*x + y` for each nonzero a.
pub fn mols_from_field(q: usize) -> Result<Vec<LatinSquare>, FieldError> {
    let field = FiniteField::new(q)?;
    let mut out = Vec::with_capacity(q - 1);
    for a in 1..q {
        let grid = (0..q)
            .map(|x| (0..q).map(|y| field.add(field.mul(a, x), y)).collect())
            .collect();
        out.push(LatinSquare::new(grid)?);
    }
    check_pairwise_orthogonal(&out)?;
    Ok(out)
}

/// MacNeish product: min(|A|, |B|) MOLS of order m*n from MOLS of orders m
/// and n, by coordinatewise composition. Inputs and output are both
/// validated by brute force.
pub fn mols_product(
    a: &[LatinSquare],
    b: &[LatinSquare],
) -> Result<Vec<LatinSquare>, FieldError> {
    check_pairwise_orthogonal(a)?;
    check_pairwise_orthogonal(b)?;
    let count = a.len().min(b.len());
    let (m, n) = (a[0].n, b[0].n);
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let grid = (0..m * n)
            .map(|x| {
                let (x1, x2) = (x / n, x % n);
                (0..m * n)
                    .map(|y| {
                        let (y1, y2) = (y / n, y % n);
                        a[i].grid[x1][y1] * n + b[i].grid[x2][y2]
                    })
                    .collect()
            })
            .collect();
        out.push(LatinSquare::new(grid)?);
    }
    check_pairwise_orthogonal(&out)?;
    Ok(out)
}

/// A TD(k, n): k groups of n points, n^2 blocks meeting each group once and
/// covering every cross-group pair exactly once.
#[derive(Clone, Debug)]
pub struct TransversalDesign {
    pub k: usize,
    pub n: usize,
    /// Group g occupies points `g*n .. (g+1)*n`.
    pub blocks: Vec<Vec<usize>>,
}

/// Builds TD(k, n) from k-2 MOLS of order n. TD(2, n) needs none.
pub fn transversal_design(k: usize, n: usize, mols: &[LatinSquare]) -> Result<TransversalDesign, FieldError> {
    assert!(k >= 2, "a transversal design needs at least 2 groups");
    if mols.len() + 2 < k {
        return Err(FieldError::NotEnoughSquares {
            needed: k - 2,
            got: mols.len(),
        });
    }
    let mols = &mols[..k - 2];
    for (i, sq) in mols.iter().enumerate() {
        if sq.n != n {
            return Err(FieldError::Mismatch(format!(
                "square {i} has order {} (need {n})",
                sq.n
            )));
        }
    }
    check_pairwise_orthogonal(mols)?;
    let mut blocks = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            let mut block = Vec::with_capacity(k);
            block.push(x);
            block.push(n + y);
            for (g, sq) in mols.iter().enumerate() {
                block.push((g + 2) * n + sq.grid[x][y]);
            }
            blocks.push(block);
        }
    }
    let td = TransversalDesign { k, n, blocks };
    td.check()?;
    Ok(td)
}

impl TransversalDesign {
    /// Exhaustive cross-pair coverage check; never assumed from the
    /// construction.
    pub fn check(&self) -> Result<(), FieldError> {
        let (k, n) = (self.k, self.n);
        if self.blocks.len() != n * n {
            return Err(FieldError::Mismatch(format!(
                "expected {} blocks, found {}",
                n * n,
                self.blocks.len()
            )));
        }
        let points = k * n;
        let mut counts = vec![0u32; points * points];
        for block in &self.blocks {
            let mut groups = vec![false; k];
            for &p in block {
                let g = p / n;
                if p >= points || groups[g] {
                    return Err(FieldError::Mismatch(format!(
                        "block {block:?} does not meet each group exactly once"
                    )));
                }
                groups[g] = true;
            }
            for i in 0..block.len() {
                for j in (i + 1)..block.len() {
                    counts[block[i] * points + block[j]] += 1;
                }
            }
        }
        for a in 0..points {
            for b in (a + 1)..points {
                let expected = u32::from(a / n != b / n);
                if counts[a * points + b] != expected {
                    return Err(FieldError::Mismatch(format!(
                        "cross pair ({a},{b}) covered {} times",
                        counts[a * points + b]
                    )));
                }
            }
        }
        Ok(())
    }
}

/// The product lift: an S(2,k,v) on each of the k groups of a TD(k,v),
/// plus the TD blocks, yields an S(2,k,kv). The result is re-verified.
pub fn product_lift(design: &Design, td: &TransversalDesign) -> Result<Design, FieldError> {
    let (v, k) = (design.v(), design.k());
    if td.n != v || td.k != k {
        return Err(FieldError::Mismatch(format!(
            "need TD({k},{v}), got TD({},{})",
            td.k, td.n
        )));
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for g in 0..k {
        for block in design.blocks() {
            blocks.push(block.iter().map(|&p| g * v + p).collect());
        }
    }
    blocks.extend(td.blocks.iter().cloned());
    let lifted = Design::new(k * v, k, blocks);
    let report = lifted.verify();
    if !report.pass {
        return Err(FieldError::Mismatch(format!(
            "lifted design failed verification: {}",
            report.summary()
        )));
    }
    Ok(lifted)
}

/// Convenience: builds TD(k, n) from field MOLS, using MacNeish on the
/// prime-power factorization of n when n itself is not a prime power.
pub fn transversal_design_auto(k: usize, n: usize) -> Result<TransversalDesign, FieldError> {
    let mols = best_mols(n)?;
    transversal_design(k, n, &mols)
}

/// MOLS of order n from fields and the MacNeish product over the
/// prime-power factorization. Guarantees only the MacNeish bound.
pub fn best_mols(n: usize) -> Result<Vec<LatinSquare>, FieldError> {
    if prime_power(n).is_some() {
        return mols_from_field(n);
    }
    // factor into prime powers and fold with the product construction
    let mut parts: Vec<usize> = Vec::new();
    let mut m = n;
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            let mut pk = 1;
            while m.is_multiple_of(d) {
                pk *= d;
                m /= d;
            }
            parts.push(pk);
        }
        d += 1;
    }
    if m > 1 {
        parts.push(m);
    }
    let mut acc = mols_from_field(parts[0])?;
    for &pk in &parts[1..] {
        let next = mols_from_field(pk)?;
        acc = mols_product(&acc, &next)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::fano_blocks;

    #[test]
    fn field_7_has_generator_3() {
        let f = FiniteField::new(7).unwrap();
        let mut seen = [false; 7];
        let mut x = 1;
        for _ in 0..6 {
            x = f.mul(x, 3);
            seen[x] = true;
        }
        assert!((1..7).all(|y| seen[y]));
    }

    #[test]
    fn field_9_cyclic_multiplicative_group() {
        let f = FiniteField::new(9).unwrap();
        assert_eq!(f.modulus, vec![1, 0]); // x^2 + 1
        assert!(f.multiplicative_group_is_cyclic());
    }

    #[test]
    fn non_prime_power_rejected() {
        assert!(matches!(
            FiniteField::new(6),
            Err(FieldError::NotAPrimePower { q: 6 })
        ));
        assert!(FiniteField::new(2000).is_err());
    }

    #[test]
    fn pinned_moduli_are_irreducible() {
        for &(q, _) in PINNED_MODULI {
            let f = FiniteField::new(q).unwrap();
            assert!(f.modulus_is_irreducible(), "modulus for q={q}");
            assert!(f.multiplicative_group_is_cyclic(), "q={q}");
        }
    }

    #[test]
    fn field_axioms_spot_check() {
        for q in [8usize, 9, 25, 27] {
            let f = FiniteField::new(q).unwrap();
            // deterministic pseudo-random triples
            let mut s = 1usize;
            for _ in 0..50 {
                s = (s * 1103515245 + 12345) % 0x8000_0000;
                let a = s % q;
                let b = (s / q) % q;
                let c = (s / q / q) % q;
                assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a)), 1);
                }
            }
        }
    }

    #[test]
    fn mols_counts_and_orthogonality() {
        for q in [3usize, 4, 5] {
            let mols = mols_from_field(q).unwrap();
            assert_eq!(mols.len(), q - 1);
        }
    }

    #[test]
    fn macneish_product_order_12() {
        let a = mols_from_field(3).unwrap();
        let b = mols_from_field(4).unwrap();
        let prod = mols_product(&a, &b).unwrap();
        assert_eq!(prod.len(), 2);
        assert_eq!(prod[0].n, 12);
    }

    #[test]
    fn product_count_is_min() {
        let a = mols_from_field(2).unwrap();
        let b = mols_from_field(3).unwrap();
        assert_eq!(mols_product(&a, &b).unwrap().len(), 1);
    }

    #[test]
    fn td_3_from_cyclic_table() {
        let sq = LatinSquare::cayley_table_cyclic(7);
        let td = transversal_design(3, 7, &[sq]).unwrap();
        assert_eq!(td.blocks.len(), 49);
    }

    #[test]
    fn td_4_3_cross_pairs() {
        let mols = mols_from_field(3).unwrap();
        let td = transversal_design(4, 3, &mols).unwrap();
        assert_eq!(td.blocks.len(), 9);
        // check() already verified each of the 54 cross pairs exactly once
    }

    #[test]
    fn td_2_needs_no_squares() {
        let td = transversal_design(2, 4, &[]).unwrap();
        assert_eq!(td.blocks.len(), 16);
    }

    #[test]
    fn insufficient_mols_error_names_count() {
        let err = transversal_design(5, 3, &mols_from_field(3).unwrap()[..1]).unwrap_err();
        assert!(matches!(err, FieldError::NotEnoughSquares { needed: 3, got: 1 }));
    }

    #[test]
    fn lift_fano_to_21_points() {
        let fano = Design::new(7, 3, fano_blocks());
        let td = transversal_design_auto(3, 7).unwrap();
        let lifted = product_lift(&fano, &td).unwrap();
        assert_eq!(lifted.v(), 21);
        assert_eq!(lifted.blocks().len(), 70);
    }

    #[test]
    fn lift_parameter_mismatch() {
        let fano = Design::new(7, 3, fano_blocks());
        let td = transversal_design_auto(3, 9).unwrap();
        assert!(matches!(product_lift(&fano, &td), Err(FieldError::Mismatch(_))));
    }
}
