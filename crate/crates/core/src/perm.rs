//! Permutations of `{0, .., degree-1}` stored as image vectors.

use std::fmt;

/// A permutation of `{0, .., n-1}`. `images[i]` is the image of point `i`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm {
    images: Vec<u8>,
}

impl Perm {
    pub fn identity(degree: usize) -> Perm {
        Perm {
            images: (0..degree as u8).collect(),
        }
    }

    /// Builds a permutation from an image vector, checking bijectivity.
    pub fn from_images(images: Vec<u8>) -> Result<Perm, String> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if (i as usize) >= n || seen[i as usize] {
                return Err(format!("not a bijection of 0..{n}"));
            }
            seen[i as usize] = true;
        }
        Ok(Perm { images })
    }

    /// Builds a permutation of `{0,..,degree-1}` from disjoint cycles given with
    /// 1-based points, the external file convention.
    pub fn from_cycles(degree: usize, cycles: &[Vec<u32>]) -> Result<Perm, String> {
        let mut images: Vec<u8> = (0..degree as u8).collect();
        let mut moved = vec![false; degree];
        for cycle in cycles {
            for window in 0..cycle.len() {
                let a = cycle[window];
                let b = cycle[(window + 1) % cycle.len()];
                if a == 0 || b == 0 || a as usize > degree || b as usize > degree {
                    return Err(format!("cycle point out of range 1..={degree}"));
                }
                let a = (a - 1) as usize;
                if moved[a] {
                    return Err(format!("point {} appears twice in cycles", a + 1));
                }
                moved[a] = true;
                images[a] = (b - 1) as u8;
            }
        }
        Perm::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, point: u8) -> u8 {
        self.images[point as usize]
    }

    /// `(self * other)(x) = self(other(x))`.
    pub fn compose(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm {
            images: other.images.iter().map(|&i| self.images[i as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0u8; self.degree()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j as usize] = i as u8;
        }
        Perm { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i as u8 == j)
    }

    pub fn images(&self) -> &[u8] {
        &self.images
    }

    /// Disjoint cycle decomposition with 1-based points, fixed points omitted.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.images[start] as usize == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                cycle.push(p as u32 + 1);
                p = self.images[p] as usize;
            }
            out.push(cycle);
        }
        out
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            write!(f, "(")?;
            for (i, p) in c.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
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
    fn compose_and_inverse() {
        let a = Perm::from_cycles(4, &[vec![1, 2, 3, 4]]).unwrap();
        let b = Perm::from_cycles(4, &[vec![1, 3]]).unwrap();
        let ab = a.compose(&b);
        assert_eq!(ab.apply(0), 3); // 1 -> 3 -> 4
        assert!(a.compose(&a.inverse()).is_identity());
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Perm::from_images(vec![0, 0]).is_err());
        assert!(Perm::from_cycles(3, &[vec![1, 2], vec![2, 3]]).is_err());
        assert!(Perm::from_cycles(2, &[vec![1, 5]]).is_err());
    }
}
