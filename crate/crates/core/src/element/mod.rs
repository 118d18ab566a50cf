//! Elements of the topological full group of an odometer.
//!
//! An element is stored as a cocycle table over the cylinders of one depth
//! `d`: on the cylinder `w mod K_d` it translates by `n(w)`, so
//! `g(x) = x + n(x mod K_d)`. Bijectivity of the residue map
//! `w -> (w + n(w)) mod K_d` is exactly the condition for such a table to
//! define a homeomorphism. Tables are kept at their smallest depth, which
//! makes `==` the group equality.

mod wreath;

pub use wreath::{OrderResult, WreathForm};

use std::fmt;

use crate::cantor::{BaseSequence, ClopenSet, Point, DEFAULT_DEPTH_LIMIT};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TfgElement<T> {
    base: BaseSequence,
    depth: usize,
    cocycle: Vec<T>,
}

impl<T: Scalar> TfgElement<T> {
    pub fn identity(base: &BaseSequence) -> Self {
        Self::odometer_power(base, T::zero())
    }

    /// The odometer `x -> x + 1`.
    pub fn odometer(base: &BaseSequence) -> Self {
        Self::odometer_power(base, T::one())
    }

    pub fn odometer_power(base: &BaseSequence, k: T) -> Self {
        TfgElement { base: base.clone(), depth: 0, cocycle: vec![k] }
    }

    /// Validates length, depth and bijectivity, then canonicalizes.
    pub fn from_cocycle(base: &BaseSequence, depth: usize, cocycle: Vec<T>) -> Result<Self> {
        base.check_depth(depth, DEFAULT_DEPTH_LIMIT)?;
        let expected = base.modulus(depth);
        if cocycle.len() != expected {
            return Err(Error::TableLength { got: cocycle.len(), expected });
        }
        residue_permutation(&cocycle)?;
        Ok(Self::from_valid(base, depth, cocycle))
    }

    /// Table already known to be bijective.
    pub(crate) fn from_valid(base: &BaseSequence, depth: usize, cocycle: Vec<T>) -> Self {
        let mut g = TfgElement { base: base.clone(), depth, cocycle };
        g.canonicalize();
        g
    }

    /// Glues elements along disjoint clopen pieces; identity off the pieces.
    /// Fails if pieces overlap or the glued map is not a bijection.
    pub fn piecewise(base: &BaseSequence, pieces: &[(ClopenSet, &TfgElement<T>)]) -> Result<Self> {
        let depth = pieces.iter().map(|(u, g)| u.depth().max(g.depth)).max().unwrap_or(0);
        let k = base.modulus(depth);
        let mut table = vec![T::zero(); k];
        let mut covered = vec![false; k];
        for (u, g) in pieces {
            base.same_as(u.base())?;
            base.same_as(&g.base)?;
            for r in u.residues_at(depth) {
                if std::mem::replace(&mut covered[r], true) {
                    return Err(Error::OverlappingPieces);
                }
                table[r] = g.value_at(r).clone();
            }
        }
        residue_permutation(&table)?;
        Ok(Self::from_valid(base, depth, table))
    }

    fn canonicalize(&mut self) {
        while self.depth > 0 {
            let parent = self.base.modulus(self.depth - 1);
            let radix = self.base.radix(self.depth - 1);
            let constant = (0..parent).all(|p| (1..radix).all(|j| self.cocycle[p + j * parent] == self.cocycle[p]));
            if !constant {
                break;
            }
            self.cocycle.truncate(parent);
            self.depth -= 1;
        }
    }

    pub fn base(&self) -> &BaseSequence {
        &self.base
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn cocycle(&self) -> &[T] {
        &self.cocycle
    }

    pub fn is_identity(&self) -> bool {
        self.depth == 0 && self.cocycle[0].is_zero()
    }

    /// Translation applied on the cylinder of residue `r` at any depth
    /// `>= self.depth()`.
    pub fn value_at(&self, r: usize) -> &T {
        &self.cocycle[r % self.cocycle.len()]
    }

    /// The cocycle refined to depth `d >= self.depth()`.
    pub fn table_at(&self, d: usize) -> Vec<T> {
        assert!(d >= self.depth);
        (0..self.base.modulus(d)).map(|r| self.value_at(r).clone()).collect()
    }

    /// Where each depth-`d` cylinder goes, for `d >= self.depth()`.
    pub fn residue_map_at(&self, d: usize) -> Vec<usize> {
        assert!(d >= self.depth);
        let k = self.base.modulus(d);
        (0..k).map(|r| (T::from_residue(r) + self.value_at(r).clone()).residue(k)).collect()
    }

    /// `self ∘ h`: apply `h` first.
    pub fn compose(&self, h: &Self) -> Self {
        assert_eq!(self.base, h.base, "composing elements over different bases");
        let d = self.depth.max(h.depth);
        let k = self.base.modulus(d);
        let table = (0..k)
            .map(|w| {
                let n = h.value_at(w);
                let moved = (T::from_residue(w) + n.clone()).residue(k);
                n.clone() + self.value_at(moved).clone()
            })
            .collect();
        Self::from_valid(&self.base, d, table)
    }

    pub fn try_compose(&self, h: &Self) -> Result<Self> {
        self.base.same_as(&h.base)?;
        Ok(self.compose(h))
    }

    pub fn inverse(&self) -> Self {
        let k = self.cocycle.len();
        let mut table = vec![T::zero(); k];
        for (w, n) in self.cocycle.iter().enumerate() {
            let v = (T::from_residue(w) + n.clone()).residue(k);
            table[v] = -n.clone();
        }
        Self::from_valid(&self.base, self.depth, table)
    }

    /// `self^k` for any integer `k`, by repeated squaring.
    pub fn power(&self, k: &T) -> Self {
        let mut base = if k.is_negative() { self.inverse() } else { self.clone() };
        let mut e = k.abs();
        let two = T::one() + T::one();
        let mut acc = Self::identity(&self.base);
        while !e.is_zero() {
            if e.is_odd() {
                acc = acc.compose(&base);
            }
            e = e / two.clone();
            if !e.is_zero() {
                base = base.compose(&base);
            }
        }
        acc
    }

    pub fn conjugate_by(&self, h: &Self) -> Self {
        h.compose(self).compose(&h.inverse())
    }

    pub fn commutes_with(&self, h: &Self) -> bool {
        self.compose(h) == h.compose(self)
    }

    pub fn apply_to_point(&self, x: &Point) -> Point {
        assert_eq!(&self.base, x.base(), "point over a different base");
        x.add_integer(self.value_at(x.residue(self.depth)))
    }

    pub fn image_of_clopen(&self, u: &ClopenSet) -> ClopenSet {
        assert_eq!(&self.base, u.base(), "clopen set over a different base");
        let d = self.depth.max(u.depth());
        let k = self.base.modulus(d);
        let mut image: Vec<usize> =
            u.residues_at(d).into_iter().map(|r| (T::from_residue(r) + self.value_at(r).clone()).residue(k)).collect();
        image.sort_unstable();
        ClopenSet::from_sorted(&self.base, d, image)
    }

    pub fn preimage_of_clopen(&self, u: &ClopenSet) -> ClopenSet {
        self.inverse().image_of_clopen(u)
    }

    /// Complement of the fixed-point set: cylinders with nonzero translation.
    pub fn support(&self) -> ClopenSet {
        let moved = (0..self.cocycle.len()).filter(|&w| !self.cocycle[w].is_zero()).collect();
        ClopenSet::from_sorted(&self.base, self.depth, moved)
    }

    pub fn is_supported_in(&self, u: &ClopenSet) -> bool {
        self.support().is_subset(u)
    }

    /// The index map: mean translation over the cylinders.
    ///
    /// Panics if the sum is not divisible by the modulus, which cannot happen
    /// for a bijective table.
    pub fn index(&self) -> T {
        let sum = self.cocycle.iter().fold(T::zero(), |a, b| a + b.clone());
        let k = T::from_residue(self.cocycle.len());
        let (q, r) = sum.div_rem(&k);
        assert!(r.is_zero(), "cocycle sum not divisible by modulus: corrupted element");
        q
    }

    pub fn wreath_form(&self) -> WreathForm<T> {
        WreathForm::of(self, self.depth)
    }

    pub fn wreath_form_at(&self, d: usize) -> WreathForm<T> {
        WreathForm::of(self, d)
    }

    pub fn order(&self) -> OrderResult<T> {
        wreath::order(self)
    }

    pub fn is_torsion(&self) -> bool {
        matches!(self.order(), OrderResult::Finite(_))
    }
}

/// Checks bijectivity of `w -> (w + n(w)) mod K` and returns the map.
pub(crate) fn residue_permutation<T: Scalar>(table: &[T]) -> Result<Vec<usize>> {
    let k = table.len();
    let mut seen: Vec<Option<usize>> = vec![None; k];
    let mut map = Vec::with_capacity(k);
    for (w, n) in table.iter().enumerate() {
        let v = (T::from_residue(w) + n.clone()).residue(k);
        if let Some(first) = seen[v] {
            return Err(Error::NotBijective { first, second: w });
        }
        seen[v] = Some(w);
        map.push(v);
    }
    Ok(map)
}

impl<T: fmt::Debug> fmt::Debug for TfgElement<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tfg(d={}, {:?})", self.depth, self.cocycle)
    }
}
