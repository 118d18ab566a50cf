//! Generalized permutations `mu[U; f_1, .., f_n; pi]` and generalized
//! 2-cycles `delta_{U; g}`.
//!
//! `mu[U; f; pi]` maps `f_i(U)` onto `f_{pi(i)}(U)` by `f_{pi(i)} ∘ f_i^{-1}`
//! and fixes everything else; the images `f_i(U)` must be pairwise disjoint.
//! Permutation indices are 0-based here.

use std::collections::BTreeMap;

use crate::cantor::ClopenSet;
use crate::element::{OrderResult, TfgElement};
use crate::error::{Error, Result};
use crate::perm::Perm;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenPermSpec<T> {
    u: ClopenSet,
    maps: Vec<TfgElement<T>>,
    pi: Perm,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoCycleSpec<T> {
    u: ClopenSet,
    g: TfgElement<T>,
}

/// `factors[0] ∘ factors[1] ∘ ...`, the identity for an empty list.
pub fn product<'a, T: Scalar + 'a>(
    base: &crate::BaseSequence,
    factors: impl IntoIterator<Item = &'a TfgElement<T>>,
) -> TfgElement<T> {
    factors.into_iter().fold(TfgElement::identity(base), |acc, g| acc.compose(g))
}

impl<T: Scalar> GenPermSpec<T> {
    pub fn new(u: ClopenSet, maps: Vec<TfgElement<T>>, pi: Perm) -> Result<Self> {
        if pi.len() != maps.len() {
            return Err(Error::InvalidPermutation(format!(
                "permutation on {} letters for {} maps",
                pi.len(),
                maps.len()
            )));
        }
        for f in &maps {
            u.base().same_as(f.base())?;
        }
        let images: Vec<ClopenSet> = maps.iter().map(|f| f.image_of_clopen(&u)).collect();
        for i in 0..images.len() {
            for j in i + 1..images.len() {
                if !images[i].is_disjoint(&images[j]) {
                    return Err(Error::ImagesNotDisjoint(i, j));
                }
            }
        }
        Ok(GenPermSpec { u, maps, pi })
    }

    pub fn u(&self) -> &ClopenSet {
        &self.u
    }

    pub fn maps(&self) -> &[TfgElement<T>] {
        &self.maps
    }

    pub fn pi(&self) -> &Perm {
        &self.pi
    }

    /// Same base data, different permutation.
    pub fn with_pi(&self, pi: Perm) -> Result<Self> {
        if pi.len() != self.maps.len() {
            return Err(Error::InvalidPermutation("length mismatch".into()));
        }
        Ok(GenPermSpec { u: self.u.clone(), maps: self.maps.clone(), pi })
    }

    pub fn realize(&self) -> TfgElement<T> {
        let base = self.u.base();
        let moves: Vec<(ClopenSet, TfgElement<T>)> = (0..self.maps.len())
            .filter(|&i| self.pi.apply(i) != i)
            .map(|i| {
                let fi = &self.maps[i];
                let piece = fi.image_of_clopen(&self.u);
                (piece, self.maps[self.pi.apply(i)].compose(&fi.inverse()))
            })
            .collect();
        let pieces: Vec<(ClopenSet, &TfgElement<T>)> = moves.iter().map(|(u, g)| (u.clone(), g)).collect();
        TfgElement::piecewise(base, &pieces).expect("disjoint images glue to a bijection")
    }

    /// `mu[U; h f_1, .., h f_n; pi]`, which realizes `h g h^{-1}`.
    pub fn conjugate(&self, h: &TfgElement<T>) -> Self {
        GenPermSpec { u: self.u.clone(), maps: self.maps.iter().map(|f| h.compose(f)).collect(), pi: self.pi.clone() }
    }

    /// `mu[h^{-1}(U); f_1 h, .., f_n h; pi]`, which realizes the same element.
    pub fn reparameterize(&self, h: &TfgElement<T>) -> Self {
        GenPermSpec {
            u: h.preimage_of_clopen(&self.u),
            maps: self.maps.iter().map(|f| f.compose(h)).collect(),
            pi: self.pi.clone(),
        }
    }

    /// Transposition factors of `pi`, realized as 2-cycles. The cycle
    /// `(a_1 .. a_m)` becomes `(a_1 a_2)(a_2 a_3)..(a_{m-1} a_m)`, and the
    /// transposition `(i j)` becomes `delta_{f_i(U); f_j f_i^{-1}}`.
    pub fn to_two_cycles(&self) -> Vec<TwoCycleSpec<T>> {
        let mut out = Vec::new();
        for cycle in self.pi.cycles() {
            for pair in cycle.windows(2) {
                let (i, j) = (pair[0], pair[1]);
                let fi = &self.maps[i];
                out.push(TwoCycleSpec { u: fi.image_of_clopen(&self.u), g: self.maps[j].compose(&fi.inverse()) });
            }
        }
        out
    }
}

/// Checks `realize(pi ∘ sigma) == realize(pi) ∘ realize(sigma)` exactly.
pub fn perm_hom<T: Scalar>(spec: &GenPermSpec<T>, pi: &Perm, sigma: &Perm) -> Result<bool> {
    let a = spec.with_pi(pi.clone())?.realize();
    let b = spec.with_pi(sigma.clone())?.realize();
    let ab = spec.with_pi(pi.compose(sigma))?.realize();
    Ok(ab == a.compose(&b))
}

pub fn conjugate_spec<T: Scalar>(h: &TfgElement<T>, spec: &GenPermSpec<T>) -> GenPermSpec<T> {
    spec.conjugate(h)
}

pub fn genperm_to_two_cycles<T: Scalar>(spec: &GenPermSpec<T>) -> Vec<TwoCycleSpec<T>> {
    spec.to_two_cycles()
}

impl<T: Scalar> TwoCycleSpec<T> {
    pub fn new(u: ClopenSet, g: TfgElement<T>) -> Result<Self> {
        u.base().same_as(g.base())?;
        if !g.image_of_clopen(&u).is_disjoint(&u) {
            return Err(Error::TwoCycleNotDisjoint);
        }
        Ok(TwoCycleSpec { u, g })
    }

    pub fn u(&self) -> &ClopenSet {
        &self.u
    }

    pub fn g(&self) -> &TfgElement<T> {
        &self.g
    }

    /// `g` on `U`, `g^{-1}` on `g(U)`, identity elsewhere.
    pub fn realize(&self) -> TfgElement<T> {
        let gi = self.g.inverse();
        let image = self.g.image_of_clopen(&self.u);
        TfgElement::piecewise(self.u.base(), &[(self.u.clone(), &self.g), (image, &gi)])
            .expect("disjoint 2-cycle glues to a bijection")
    }

    /// Image of the base set; the support of the 2-cycle is `U ∪ g(U)`.
    pub fn image(&self) -> ClopenSet {
        self.g.image_of_clopen(&self.u)
    }

    /// Restriction to a clopen subset of `U`.
    pub fn restrict(&self, part: &ClopenSet) -> Self {
        TwoCycleSpec { u: part.clone(), g: self.g.clone() }
    }

    /// The same involution based on the other half: `delta_{g(U); g^{-1}}`.
    pub fn flipped(&self) -> Self {
        TwoCycleSpec { u: self.image(), g: self.g.inverse() }
    }

    /// Splits along a partition of `U` into pairwise commuting 2-cycles whose
    /// product is the original. Empty parts are dropped.
    pub fn split(&self, parts: &[ClopenSet]) -> Result<Vec<Self>> {
        let base = self.u.base();
        let mut union = ClopenSet::empty(base);
        for p in parts {
            base.same_as(p.base())?;
            if !union.is_disjoint(p) {
                return Err(Error::InvalidPartition("parts overlap".into()));
            }
            union = union.union(p);
        }
        if union != self.u {
            return Err(Error::InvalidPartition("parts do not cover the base set".into()));
        }
        Ok(parts.iter().filter(|p| !p.is_empty()).map(|p| self.restrict(p)).collect())
    }

    /// Writes an involution as a single 2-cycle, based on the lowest residue
    /// of each transposed pair of cylinders.
    pub fn of_involution(g: &TfgElement<T>) -> Result<Self> {
        match g.order() {
            OrderResult::Finite(m) if m <= T::one() + T::one() => {}
            _ => return Err(Error::InvalidPermutation("element is not an involution".into())),
        }
        let map = g.residue_map_at(g.depth());
        let lows = (0..map.len()).filter(|&w| map[w] > w).collect();
        let u = ClopenSet::from_sorted(g.base(), g.depth(), lows);
        TwoCycleSpec::new(u, g.clone())
    }
}

pub fn split_two_cycle<T: Scalar>(spec: &TwoCycleSpec<T>, parts: &[ClopenSet]) -> Result<Vec<TwoCycleSpec<T>>> {
    spec.split(parts)
}

/// Decomposes a torsion element into generalized permutations with pairwise
/// disjoint supports, one per period length `k >= 2`:
/// `g^(k) = mu[V^(k); id, g, .., g^(k-1); (0 1 .. k-1)]` where `V^(k)` takes
/// the lowest residue of every length-`k` cycle of the residue map.
pub fn torsion_to_genperms<T: Scalar>(g: &TfgElement<T>) -> Result<Vec<GenPermSpec<T>>> {
    let wf = g.wreath_form();
    let mut by_len: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (cycle, sum) in wf.cycles_with_carry() {
        if !sum.is_zero() {
            return Err(Error::InfiniteOrder);
        }
        if cycle.len() > 1 {
            by_len.entry(cycle.len()).or_default().push(cycle[0]);
        }
    }
    let base = g.base();
    let mut out = Vec::with_capacity(by_len.len());
    for (k, mut lows) in by_len {
        lows.sort_unstable();
        let v = ClopenSet::from_sorted(base, g.depth(), lows);
        let mut maps = Vec::with_capacity(k);
        let mut p = TfgElement::identity(base);
        for _ in 0..k {
            maps.push(p.clone());
            p = g.compose(&p);
        }
        let pi = Perm::new((0..k).map(|i| (i + 1) % k).collect()).expect("k-cycle");
        out.push(GenPermSpec::new(v, maps, pi)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cantor::BaseSequence;

    type E = TfgElement<i64>;

    fn b2() -> BaseSequence {
        BaseSequence::dyadic()
    }

    fn set(d: usize, r: &[usize]) -> ClopenSet {
        ClopenSet::new(&b2(), d, r.to_vec()).unwrap()
    }

    fn el(d: usize, n: &[i64]) -> E {
        E::from_cocycle(&b2(), d, n.to_vec()).unwrap()
    }

    fn f() -> E {
        E::odometer(&b2())
    }

    fn three_maps() -> Vec<E> {
        vec![E::identity(&b2()), f(), f().power(&2)]
    }

    #[test]
    fn identity_permutation_realizes_identity() {
        let spec = GenPermSpec::new(set(2, &[0]), three_maps(), Perm::identity(3)).unwrap();
        assert!(spec.realize().is_identity());
    }

    #[test]
    fn transposition_example() {
        let spec = GenPermSpec::new(set(1, &[0]), vec![E::identity(&b2()), f()], Perm::transposition(2, 0, 1)).unwrap();
        assert_eq!(spec.realize(), el(1, &[1, -1]));
    }

    #[test]
    fn three_cycle_example() {
        let spec = GenPermSpec::new(set(2, &[0]), three_maps(), Perm::new(vec![1, 2, 0]).unwrap()).unwrap();
        let g = spec.realize();
        assert_eq!(g, el(2, &[1, 1, -2, 0]));
        assert_eq!(g.order(), OrderResult::Finite(3));
    }

    #[test]
    fn overlapping_images_rejected() {
        let err = GenPermSpec::new(set(1, &[0]), vec![E::identity(&b2()), f().power(&2)], Perm::identity(2));
        assert_eq!(err, Err(Error::ImagesNotDisjoint(0, 1)));
    }

    #[test]
    fn two_cycle_examples() {
        let empty = TwoCycleSpec::new(ClopenSet::empty(&b2()), f()).unwrap();
        assert!(empty.realize().is_identity());
        let d = TwoCycleSpec::new(set(1, &[0]), f()).unwrap();
        assert_eq!(d.realize(), el(1, &[1, -1]));
        let d2 = TwoCycleSpec::new(set(2, &[0]), f().power(&2)).unwrap();
        assert_eq!(d2.realize(), el(2, &[2, 0, -2, 0]));
        assert_eq!(TwoCycleSpec::new(set(1, &[0]), f().power(&2)), Err(Error::TwoCycleNotDisjoint));
    }

    #[test]
    fn two_cycle_is_mu_of_transposition() {
        let u = set(3, &[1, 4]);
        let g = f().power(&2);
        let delta = TwoCycleSpec::new(u.clone(), g.clone()).unwrap().realize();
        let mu = GenPermSpec::new(u, vec![E::identity(&b2()), g], Perm::transposition(2, 0, 1)).unwrap().realize();
        assert_eq!(delta, mu);
    }

    #[test]
    fn homomorphism_on_all_of_s3() {
        let spec = GenPermSpec::new(set(2, &[0]), three_maps(), Perm::identity(3)).unwrap();
        let all: Vec<Perm> = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]]
            .iter()
            .map(|p| Perm::new(p.to_vec()).unwrap())
            .collect();
        let mut checked = 0;
        for p in &all {
            for s in &all {
                assert!(perm_hom(&spec, p, s).unwrap());
                checked += 1;
            }
        }
        assert_eq!(checked, 36);
    }

    #[test]
    fn three_set_trick() {
        // (0 2) = (0 1)(1 2)(0 1) survives realization
        let spec = GenPermSpec::new(set(2, &[0]), three_maps(), Perm::identity(3)).unwrap();
        let t = |a, b| spec.with_pi(Perm::transposition(3, a, b)).unwrap().realize();
        assert_eq!(t(0, 2), t(0, 1).compose(&t(1, 2)).compose(&t(0, 1)));
    }

    #[test]
    fn conjugation_examples() {
        let spec =
            GenPermSpec::new(set(2, &[0]), vec![E::identity(&b2()), f().power(&2)], Perm::transposition(2, 0, 1))
                .unwrap();
        let delta = spec.realize();
        assert_eq!(conjugate_spec(&E::identity(&b2()), &spec).realize(), delta);
        assert_eq!(conjugate_spec(&f(), &spec).realize(), delta.conjugate_by(&f()));
        for h in [f(), el(1, &[1, -1]), el(2, &[6, 0, -2, 0])] {
            assert_eq!(spec.reparameterize(&h).realize(), delta);
        }
    }

    #[test]
    fn split_examples() {
        let d = TwoCycleSpec::new(set(1, &[0]), f()).unwrap();
        let single = d.split(&[set(1, &[0])]).unwrap();
        assert_eq!(single.len(), 1);
        assert_eq!(single[0].realize(), d.realize());

        let parts = d.split(&[set(2, &[0]), set(2, &[2])]).unwrap();
        assert_eq!(parts.len(), 2);
        let (a, b) = (parts[0].realize(), parts[1].realize());
        assert!(a.commutes_with(&b));
        assert_eq!(a.compose(&b), d.realize());
        assert_eq!(a.order(), OrderResult::Finite(2));

        let empty = TwoCycleSpec::new(ClopenSet::empty(&b2()), f()).unwrap();
        let none = empty.split(&[]).unwrap();
        assert!(none.is_empty());
        assert!(product(&b2(), none.iter().map(|s| s.realize()).collect::<Vec<_>>().iter()).is_identity());

        assert!(d.split(&[set(2, &[0])]).is_err());
        assert!(d.split(&[set(1, &[0]), set(2, &[0])]).is_err());
    }

    #[test]
    fn torsion_decomposition_examples() {
        assert!(torsion_to_genperms(&E::identity(&b2())).unwrap().is_empty());

        let delta = el(1, &[1, -1]);
        let specs = torsion_to_genperms(&delta).unwrap();
        assert_eq!(specs.len(), 1);
        assert_eq!(specs[0].realize(), delta);
        let x2 = specs[0].realize().support();
        assert!(x2.is_full());

        let c3 = el(2, &[1, 1, -2, 0]);
        let specs = torsion_to_genperms(&c3).unwrap();
        assert_eq!(specs.len(), 1);
        assert_eq!(specs[0].u(), &set(2, &[0]));
        assert_eq!(specs[0].maps().len(), 3);
        assert_eq!(specs[0].realize(), c3);

        assert_eq!(torsion_to_genperms(&f()), Err(Error::InfiniteOrder));
    }

    #[test]
    fn mixed_periods_split_by_length() {
        // (0 1) on depth-2 residues 0,1 and a 3-cycle... build at depth 3:
        // swap 0<->1, cycle 2->3->4->2, rest fixed
        let sigma = [1usize, 0, 3, 4, 2, 5, 6, 7];
        let table: Vec<i64> = sigma.iter().enumerate().map(|(w, &s)| s as i64 - w as i64).collect();
        let g = E::from_cocycle(&b2(), 3, table).unwrap();
        let specs = torsion_to_genperms(&g).unwrap();
        assert_eq!(specs.len(), 2);
        let parts: Vec<E> = specs.iter().map(|s| s.realize()).collect();
        assert!(parts[0].support().is_disjoint(&parts[1].support()));
        assert!(parts[0].commutes_with(&parts[1]));
        assert_eq!(product(&b2(), &parts), g);
    }

    #[test]
    fn two_cycle_normal_form() {
        let spec = GenPermSpec::new(set(2, &[0]), three_maps(), Perm::transposition(3, 0, 1)).unwrap();
        assert_eq!(genperm_to_two_cycles(&spec).len(), 1);
        let cyc = spec.with_pi(Perm::new(vec![1, 2, 0]).unwrap()).unwrap();
        let twos = genperm_to_two_cycles(&cyc);
        assert_eq!(twos.len(), 2);
        let realized: Vec<E> = twos.iter().map(|t| t.realize()).collect();
        assert_eq!(product(&b2(), &realized), cyc.realize());
        let id = spec.with_pi(Perm::identity(3)).unwrap();
        assert!(genperm_to_two_cycles(&id).is_empty());
    }

    #[test]
    fn involution_as_two_cycle() {
        let g = el(2, &[2, 2, -2, -2]);
        let t = TwoCycleSpec::of_involution(&g).unwrap();
        assert_eq!(t.realize(), g);
        assert!(TwoCycleSpec::of_involution(&f()).is_err());
    }
}
