use std::fmt;

use num_rational::Ratio;

use super::BaseSequence;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// The set of points whose first `depth` digits encode `residue`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cylinder {
    pub depth: usize,
    pub residue: usize,
}

/// Set operation selector for [`ClopenSet::apply`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetOp {
    Union,
    Intersection,
    Difference,
    Complement,
}

/// Finite union of cylinders of one common depth, kept at the smallest depth
/// that can represent it.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ClopenSet {
    base: BaseSequence,
    depth: usize,
    residues: Vec<usize>,
}

impl ClopenSet {
    pub fn empty(base: &BaseSequence) -> Self {
        ClopenSet { base: base.clone(), depth: 0, residues: Vec::new() }
    }

    pub fn full(base: &BaseSequence) -> Self {
        ClopenSet { base: base.clone(), depth: 0, residues: vec![0] }
    }

    /// Builds and canonicalizes; residues may be unsorted or repeated.
    pub fn new(base: &BaseSequence, depth: usize, mut residues: Vec<usize>) -> Result<Self> {
        let modulus = base.checked_modulus(depth).ok_or(Error::DepthLimit { depth, limit: depth.saturating_sub(1) })?;
        if let Some(&r) = residues.iter().find(|&&r| r >= modulus) {
            return Err(Error::ResidueOutOfRange { residue: r, modulus });
        }
        residues.sort_unstable();
        residues.dedup();
        Ok(Self::from_sorted(base, depth, residues))
    }

    pub fn cylinder(base: &BaseSequence, c: &Cylinder) -> Result<Self> {
        Self::new(base, c.depth, vec![c.residue])
    }

    /// Caller guarantees residues are sorted, distinct and in range.
    pub(crate) fn from_sorted(base: &BaseSequence, depth: usize, residues: Vec<usize>) -> Self {
        let mut set = ClopenSet { base: base.clone(), depth, residues };
        set.canonicalize();
        set
    }

    pub fn base(&self) -> &BaseSequence {
        &self.base
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn residues(&self) -> &[usize] {
        &self.residues
    }

    pub fn is_empty(&self) -> bool {
        self.residues.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.depth == 0 && self.residues == [0]
    }

    fn canonicalize(&mut self) {
        if self.residues.is_empty() {
            self.depth = 0;
            return;
        }
        while self.depth > 0 {
            let parent_mod = self.base.modulus(self.depth - 1);
            let r = self.base.radix(self.depth - 1);
            // Every member's full sibling family must be present.
            if !self.residues.len().is_multiple_of(r) {
                break;
            }
            let parents: Vec<usize> = self.residues.iter().copied().filter(|&w| w < parent_mod).collect();
            if parents.len() * r != self.residues.len() {
                break;
            }
            let complete =
                parents.iter().all(|&p| (1..r).all(|j| self.residues.binary_search(&(p + j * parent_mod)).is_ok()));
            if !complete {
                break;
            }
            self.residues = parents;
            self.depth -= 1;
        }
    }

    /// Residues of the same set at a depth `d >= self.depth()`, sorted.
    pub fn residues_at(&self, d: usize) -> Vec<usize> {
        assert!(d >= self.depth, "cannot coarsen by refinement");
        let k = self.base.modulus(self.depth);
        let factor = self.base.modulus(d) / k;
        let mut out = Vec::with_capacity(self.residues.len() * factor);
        for j in 0..factor {
            out.extend(self.residues.iter().map(|&w| w + j * k));
        }
        out.sort_unstable();
        out
    }

    /// Membership mask over all residues at depth `d >= self.depth()`.
    pub fn mask_at(&self, d: usize) -> Vec<bool> {
        let k = self.base.modulus(self.depth);
        let n = self.base.modulus(d);
        let mut mask = vec![false; n];
        let mut here = vec![false; k];
        for &w in &self.residues {
            here[w] = true;
        }
        for (v, m) in mask.iter_mut().enumerate() {
            *m = here[v % k];
        }
        mask
    }

    pub fn contains_residue(&self, depth: usize, residue: usize) -> bool {
        let w = if depth >= self.depth {
            residue % self.base.modulus(self.depth)
        } else {
            // A coarser cylinder lies inside only if every refinement does.
            let sub = ClopenSet::from_sorted(&self.base, depth, vec![residue]);
            return sub.is_subset(self);
        };
        self.residues.binary_search(&w).is_ok()
    }

    pub fn contains_cylinder(&self, c: &Cylinder) -> bool {
        self.contains_residue(c.depth, c.residue)
    }

    pub fn union(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a && !b)
    }

    pub fn complement(&self) -> Self {
        let n = self.base.modulus(self.depth);
        let residues = (0..n).filter(|w| self.residues.binary_search(w).is_err()).collect();
        Self::from_sorted(&self.base, self.depth, residues)
    }

    /// Dispatches on `op`; `b` is ignored for complement.
    pub fn apply(&self, other: &Self, op: SetOp) -> Result<Self> {
        self.base.same_as(&other.base)?;
        Ok(match op {
            SetOp::Union => self.union(other),
            SetOp::Intersection => self.intersection(other),
            SetOp::Difference => self.difference(other),
            SetOp::Complement => self.complement(),
        })
    }

    fn combine(&self, other: &Self, keep: impl Fn(bool, bool) -> bool) -> Self {
        debug_assert_eq!(self.base, other.base);
        let d = self.depth.max(other.depth);
        let a = self.mask_at(d);
        let b = other.mask_at(d);
        let residues = (0..a.len()).filter(|&w| keep(a[w], b[w])).collect();
        Self::from_sorted(&self.base, d, residues)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.difference(other).is_empty()
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.intersection(other).is_empty()
    }

    /// Haar measure: `|residues| / K_depth`.
    pub fn measure<T: Scalar>(&self) -> Ratio<T> {
        Ratio::new(T::from_residue(self.residues.len()), T::from_residue(self.base.modulus(self.depth)))
    }

    /// The cylinders of depth `d >= self.depth()` making up the set.
    pub fn cylinders_at(&self, d: usize) -> Vec<Cylinder> {
        self.residues_at(d).into_iter().map(|residue| Cylinder { depth: d, residue }).collect()
    }

    /// Lowest-residue cylinder at depth `d`, if nonempty.
    pub fn first_cylinder_at(&self, d: usize) -> Option<Cylinder> {
        if d < self.depth {
            return None;
        }
        self.residues.first().map(|&residue| Cylinder { depth: d, residue })
    }
}

impl fmt::Debug for ClopenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} mod {}", self.residues, self.base.modulus(self.depth))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    fn b2() -> BaseSequence {
        BaseSequence::dyadic()
    }

    fn set(d: usize, r: &[usize]) -> ClopenSet {
        ClopenSet::new(&b2(), d, r.to_vec()).unwrap()
    }

    #[test]
    fn complement_of_full_is_empty() {
        let full = ClopenSet::full(&b2());
        assert_eq!(full.complement(), ClopenSet::empty(&b2()));
        assert_eq!(ClopenSet::empty(&b2()).complement(), full);
    }

    #[test]
    fn siblings_merge() {
        let u = set(1, &[0]).apply(&set(1, &[1]), SetOp::Union).unwrap();
        assert!(u.is_full());
        assert_eq!(u.depth(), 0);
        assert_eq!(u.residues(), &[0]);
    }

    #[test]
    fn intersection_example() {
        let i = set(2, &[0, 1]).apply(&set(2, &[1, 2]), SetOp::Intersection).unwrap();
        assert_eq!(i, set(2, &[1]));
        assert_eq!(i.depth(), 2);
    }

    #[test]
    fn measures() {
        assert_eq!(set(3, &[5]).measure::<i64>(), Ratio::new(1, 8));
        assert_eq!(ClopenSet::empty(&b2()).measure::<i64>(), Ratio::from_integer(0));
        assert_eq!(set(2, &[0, 1, 2]).measure::<i64>(), Ratio::new(3, 4));
        assert_eq!(ClopenSet::full(&b2()).measure::<i64>(), Ratio::from_integer(1));
    }

    #[test]
    fn canonical_depth_is_minimal() {
        // {0, 2} mod 4 is {0} mod 2
        assert_eq!(set(2, &[0, 2]), set(1, &[0]));
        assert_eq!(set(2, &[0, 2]).depth(), 1);
        // mixed radices: {0,2,4} mod 6 over pre [2] period [3] is {0} mod 2
        let b = BaseSequence::new(vec![2], vec![3]).unwrap();
        let u = ClopenSet::new(&b, 2, vec![0, 2, 4]).unwrap();
        assert_eq!(u.depth(), 1);
        assert_eq!(u.residues(), &[0]);
    }

    #[test]
    fn refine_then_canonicalize_is_identity() {
        let u = set(2, &[1, 2]);
        for d in 2..7 {
            let r = ClopenSet::new(&b2(), d, u.residues_at(d)).unwrap();
            assert_eq!(r, u);
        }
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(matches!(ClopenSet::new(&b2(), 2, vec![4]), Err(Error::ResidueOutOfRange { residue: 4, modulus: 4 })));
    }

    #[test]
    fn base_mismatch_is_reported() {
        let b3 = BaseSequence::constant(3).unwrap();
        let err = set(1, &[0]).apply(&ClopenSet::full(&b3), SetOp::Union);
        assert_eq!(err, Err(Error::BaseMismatch));
    }

    #[test]
    fn coarse_cylinder_containment() {
        let u = set(2, &[0, 2]);
        assert!(u.contains_residue(1, 0));
        assert!(!set(2, &[0]).contains_residue(1, 0));
        assert!(u.contains_residue(3, 4));
    }
}
