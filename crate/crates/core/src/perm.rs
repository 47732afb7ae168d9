//! Permutations of `{0..m-1}` stored as image arrays.

use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};

/// A bijection of `{0..m-1}`; `images[x]` is the image of `x`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<usize>,
}

impl Perm {
    pub fn identity(m: usize) -> Perm {
        Perm { images: (0..m).collect() }
    }

    /// Builds a permutation from an image array, rejecting non-bijections.
    pub fn from_images(images: Vec<usize>) -> Result<Perm> {
        let m = images.len();
        let mut seen = vec![false; m];
        for &v in &images {
            if v >= m {
                return Err(Error::Structure(format!(
                    "permutation value {v} out of range 0..{m}"
                )));
            }
            if seen[v] {
                return Err(Error::Structure(format!(
                    "permutation repeats value {v}; not a bijection"
                )));
            }
            seen[v] = true;
        }
        Ok(Perm { images })
    }

    /// Builds a permutation of `{0..m-1}` from disjoint cycles; points not
    /// mentioned are fixed.
    pub fn from_cycles(m: usize, cycles: &[Vec<usize>]) -> Result<Perm> {
        let mut images: Vec<usize> = (0..m).collect();
        let mut moved = vec![false; m];
        for cycle in cycles {
            for (k, &p) in cycle.iter().enumerate() {
                let q = cycle[(k + 1) % cycle.len()];
                if p >= m || q >= m {
                    return Err(Error::Structure(format!(
                        "cycle point {} out of range 0..{m}",
                        p.max(q)
                    )));
                }
                if moved[p] {
                    return Err(Error::Structure(format!("cycles overlap at point {p}")));
                }
                moved[p] = true;
                images[p] = q;
            }
        }
        Ok(Perm { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            inv[y] = x;
        }
        Perm { images: inv }
    }

    /// `self ∘ other`: applies `other` first, then `self`.
    pub fn compose(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm {
            images: other.images.iter().map(|&y| self.images[y]).collect(),
        }
    }

    /// Integer power; negative exponents use the inverse.
    pub fn pow(&self, k: i64) -> Perm {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut acc = Perm::identity(self.degree());
        for _ in 0..k.unsigned_abs() {
            acc = base.compose(&acc);
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(x, &y)| x == y)
    }

    pub fn commutes_with(&self, other: &Perm) -> bool {
        self.compose(other) == other.compose(self)
    }

    /// Lengths of all cycles (fixed points included), sorted ascending.
    pub fn cycle_lengths(&self) -> Vec<usize> {
        let m = self.degree();
        let mut seen = vec![false; m];
        let mut lens = Vec::new();
        for start in 0..m {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                p = self.images[p];
                len += 1;
            }
            lens.push(len);
        }
        lens.sort_unstable();
        lens
    }

    /// Order of the permutation (lcm of cycle lengths).
    pub fn order(&self) -> usize {
        self.cycle_lengths().into_iter().fold(1, |a, b| a.lcm(&b))
    }

    /// Nontrivial cycles as lists of points, each cycle starting at its least
    /// point, cycles sorted by that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let m = self.degree();
        let mut seen = vec![false; m];
        let mut out = Vec::new();
        for start in 0..m {
            if seen[start] || self.images[start] == start {
                seen[start] = true;
                continue;
            }
            let mut cycle = Vec::new();
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                cycle.push(p);
                p = self.images[p];
            }
            out.push(cycle);
        }
        out
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "id");
        }
        for cycle in cycles {
            write!(f, "(")?;
            for (k, p) in cycle.iter().enumerate() {
                if k > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{p}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_applies_right_factor_first() {
        // f = (0,1), g = (1,2); (f∘g)(1) = f(2) = 2.
        let f = Perm::from_cycles(3, &[vec![0, 1]]).unwrap();
        let g = Perm::from_cycles(3, &[vec![1, 2]]).unwrap();
        assert_eq!(f.compose(&g).apply(1), 2);
    }

    #[test]
    fn inverse_and_pow() {
        let p = Perm::from_images(vec![1, 2, 3, 0]).unwrap();
        assert!(p.compose(&p.inverse()).is_identity());
        assert_eq!(p.pow(4), Perm::identity(4));
        assert_eq!(p.pow(-1), p.inverse());
        assert_eq!(p.order(), 4);
    }

    #[test]
    fn rejects_non_bijection() {
        assert!(Perm::from_images(vec![0, 0, 1]).is_err());
        assert!(Perm::from_images(vec![0, 3]).is_err());
    }

    #[test]
    fn cycle_roundtrip() {
        let p = Perm::from_cycles(4, &[vec![0, 2], vec![1, 3]]).unwrap();
        assert_eq!(p.images(), &[2, 3, 0, 1]);
        assert_eq!(p.cycle_lengths(), vec![2, 2]);
        assert_eq!(format!("{p}"), "(0,2)(1,3)");
    }
}
