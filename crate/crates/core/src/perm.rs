//! Finite permutations on `{0, .., n-1}` (0-based images).

use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidPermutation(format!("{images:?}")));
            }
        }
        Ok(Perm(images))
    }

    pub fn identity(n: usize) -> Self {
        Perm((0..n).collect())
    }

    /// Product of the given cycles (disjoint or not, rightmost applied first).
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut p = Perm::identity(n);
        for c in cycles.iter().rev() {
            let mut q = Perm::identity(n);
            for (i, &a) in c.iter().enumerate() {
                if a >= n {
                    return Err(Error::InvalidPermutation(format!("cycle entry {a} >= {n}")));
                }
                q.0[a] = c[(i + 1) % c.len()];
            }
            Perm::new(q.0.clone())?;
            p = q.compose(&p);
        }
        Ok(p)
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut p = Perm::identity(n);
        p.0.swap(a, b);
        p
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(self.len(), other.len());
        Perm(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Perm(inv)
    }

    /// Cycles of length at least 2, each starting at its smallest entry,
    /// ordered by that entry.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        cycles_of(&self.0).into_iter().filter(|c| c.len() > 1).collect()
    }

    pub fn order(&self) -> usize {
        self.cycles().iter().fold(1, |acc, c| acc.lcm(&c.len()))
    }
}

/// All cycles (fixed points included) of a map known to be a permutation.
pub(crate) fn cycles_of(map: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; map.len()];
    let mut out = Vec::new();
    for start in 0..map.len() {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            cycle.push(i);
            i = map[i];
        }
        out.push(cycle);
    }
    out
}

impl TryFrom<Vec<usize>> for Perm {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Perm::new(v)
    }
}

impl From<Perm> for Vec<usize> {
    fn from(p: Perm) -> Vec<usize> {
        p.0
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "()");
        }
        for c in self.cycles() {
            let parts: Vec<String> = c.iter().map(|i| i.to_string()).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_convention() {
        // (0 1)(1 2) = (0 1 2)
        let p = Perm::transposition(3, 0, 1).compose(&Perm::transposition(3, 1, 2));
        assert_eq!(p, Perm::from_cycles(3, &[&[0, 1, 2]]).unwrap());
        assert_eq!(p.apply(0), 1);
        assert_eq!(p.apply(2), 0);
    }

    #[test]
    fn transposition_identity_for_three_cycle() {
        // (0 2) = (0 1)(1 2)(0 1)
        let t01 = Perm::transposition(3, 0, 1);
        let t12 = Perm::transposition(3, 1, 2);
        assert_eq!(t01.compose(&t12).compose(&t01), Perm::transposition(3, 0, 2));
    }

    #[test]
    fn cycles_and_order() {
        let p = Perm::new(vec![1, 2, 0, 4, 3, 5]).unwrap();
        assert_eq!(p.cycles(), vec![vec![0, 1, 2], vec![3, 4]]);
        assert_eq!(p.order(), 6);
        assert_eq!(p.compose(&p.inverse()), Perm::identity(6));
    }

    #[test]
    fn rejects_invalid() {
        assert!(Perm::new(vec![0, 0]).is_err());
        assert!(Perm::new(vec![2, 0]).is_err());
        assert!(crate::json::from_str::<Perm>("[1,1]", None).is_err());
        assert_eq!(crate::json::from_str::<Perm>("[1,0]", None).unwrap(), Perm::transposition(2, 0, 1));
    }
}
