//! Permutations on `{0, …, v-1}` and parsing of disjoint-cycle notation.

use std::fmt;

use crate::error::GroupError;

/// A permutation of `{0, …, degree-1}`, stored as the image table:
/// `images[i]` is where point `i` goes.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    /// Builds a permutation from its image table, checking bijectivity.
    pub fn from_images(images: Vec<u32>) -> Result<Self, GroupError> {
        let v = images.len();
        let mut seen = vec![false; v];
        for &img in &images {
            let img = img as usize;
            if img >= v {
                return Err(GroupError::PointOutOfRange { point: img, degree: v });
            }
            if seen[img] {
                return Err(GroupError::NotABijection { point: img });
            }
            seen[img] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &img)| i as u32 == img)
    }

    /// `result(i) = self(other(i))`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation, GroupError> {
        if self.degree() != other.degree() {
            return Err(GroupError::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(Permutation {
            images: other.images.iter().map(|&i| self.images[i as usize]).collect(),
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u32; self.images.len()];
        for (i, &img) in self.images.iter().enumerate() {
            images[img as usize] = i as u32;
        }
        Permutation { images }
    }

    /// Image of a point set, returned sorted.
    pub fn apply_set(&self, set: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = set.iter().map(|&p| self.apply(p)).collect();
        out.sort_unstable();
        out
    }

    /// Parses one permutation in disjoint-cycle notation, e.g. `(0 1 2)(3 4)`.
    /// Fixed points are omitted; `()` denotes the identity.
    pub fn parse_cycles(text: &str, degree: usize) -> Result<Self, GroupError> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut moved = vec![false; degree];
        let mut rest = text.trim();
        if rest.is_empty() {
            return Err(GroupError::CycleSyntax {
                text: text.to_string(),
                reason: "empty permutation".into(),
            });
        }
        while !rest.is_empty() {
            let Some(stripped) = rest.strip_prefix('(') else {
                return Err(GroupError::CycleSyntax {
                    text: text.to_string(),
                    reason: format!("expected '(' at `{rest}`"),
                });
            };
            let Some(close) = stripped.find(')') else {
                return Err(GroupError::CycleSyntax {
                    text: text.to_string(),
                    reason: "unclosed cycle".into(),
                });
            };
            let body = &stripped[..close];
            rest = stripped[close + 1..].trim_start();
            let points: Vec<usize> = body
                .split([' ', ',', '\t'])
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse::<usize>().map_err(|_| GroupError::CycleSyntax {
                        text: text.to_string(),
                        reason: format!("bad point `{s}`"),
                    })
                })
                .collect::<Result<_, _>>()?;
            for &p in &points {
                if p >= degree {
                    return Err(GroupError::PointOutOfRange { point: p, degree });
                }
                if moved[p] {
                    return Err(GroupError::CycleSyntax {
                        text: text.to_string(),
                        reason: format!("point {p} appears twice"),
                    });
                }
                moved[p] = true;
            }
            for i in 0..points.len() {
                images[points[i]] = points[(i + 1) % points.len()] as u32;
            }
        }
        Permutation::from_images(images)
    }

    /// Renders in disjoint-cycle notation; the identity prints as `()`.
    pub fn to_cycles(&self) -> String {
        let v = self.degree();
        let mut seen = vec![false; v];
        let mut out = String::new();
        for start in 0..v {
            if seen[start] || self.apply(start) == start {
                seen[start] = true;
                continue;
            }
            out.push('(');
            let mut p = start;
            loop {
                seen[p] = true;
                out.push_str(&p.to_string());
                p = self.apply(p);
                if p == start {
                    break;
                }
                out.push(' ');
            }
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({})", self.to_cycles())
    }
}
