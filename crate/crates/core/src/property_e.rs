//! Factorization of an element supported in `U1 ∪ U2` into elements supported
//! in `U1` or in `U2`, with an exactly checkable certificate.
//!
//! Pipeline: peel off a power of the first-return map of `U1` to reach index
//! zero, split the remainder into two torsion elements, write each as
//! generalized 2-cycles, and cut every 2-cycle along the blocks
//! `U1 \ U2`, `U2 \ U1`, `U1 ∩ U2`. Blocks that cross between the two
//! differences are routed through `U1 ∩ U2` with `(a c) = (a b)(b c)(a b)`.

use crate::cantor::ClopenSet;
use crate::element::{OrderResult, TfgElement};
use crate::error::{Error, Result};
use crate::genperm::{product, torsion_to_genperms, TwoCycleSpec};
use crate::scalar::Scalar;
use crate::towers::first_return;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Tag {
    U1,
    U2,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor<T> {
    pub element: TfgElement<T>,
    pub tag: Tag,
}

/// `target = factors[0] ∘ factors[1] ∘ ...`, each factor supported in the
/// set named by its tag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate<T> {
    pub target: TfgElement<T>,
    pub u1: ClopenSet,
    pub u2: ClopenSet,
    pub factors: Vec<Factor<T>>,
}

/// `input = t2 ∘ t1` with both factors of finite order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionFactorization<T> {
    pub input: TfgElement<T>,
    pub t1: TfgElement<T>,
    pub t2: TfgElement<T>,
    pub order1: T,
    pub order2: T,
}

impl<T: Scalar> TorsionFactorization<T> {
    fn new(input: TfgElement<T>, t1: TfgElement<T>, t2: TfgElement<T>) -> Result<Self> {
        let order = |t: &TfgElement<T>| match t.order() {
            OrderResult::Finite(m) => Ok(m),
            OrderResult::Infinite => Err(Error::Internal("kernel factor of infinite order".into())),
        };
        let (order1, order2) = (order(&t1)?, order(&t2)?);
        if t2.compose(&t1) != input {
            return Err(Error::Internal("kernel factors do not recompose".into()));
        }
        Ok(TorsionFactorization { input, t1, t2, order1, order2 })
    }

    pub fn verify(&self) -> bool {
        self.input.index().is_zero()
            && self.t2.compose(&self.t1) == self.input
            && self.t1.order() == OrderResult::Finite(self.order1.clone())
            && self.t2.order() == OrderResult::Finite(self.order2.clone())
    }
}

impl<T: Scalar> Certificate<T> {
    pub fn product(&self) -> TfgElement<T> {
        product(self.target.base(), self.factors.iter().map(|f| &f.element))
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Index of the product of the factors carrying `tag`.
    pub fn index_of(&self, tag: Tag) -> T {
        self.factors.iter().filter(|f| f.tag == tag).fold(T::zero(), |a, f| a + f.element.index())
    }
}

/// True iff every factor is supported in its tagged set and the factors
/// recompose to the target.
pub fn verify_certificate<T: Scalar>(c: &Certificate<T>) -> bool {
    let base = c.target.base();
    if c.u1.base() != base || c.u2.base() != base {
        return false;
    }
    let local = c.factors.iter().all(|f| {
        f.element.base() == base
            && f.element.is_supported_in(match f.tag {
                Tag::U1 => &c.u1,
                Tag::U2 => &c.u2,
            })
    });
    local && c.product() == c.target
}

/// `(index(g), f_u^{-k} ∘ g)` with `f_u` the first-return map of the
/// odometer to `u`. The remainder has index zero and its support stays
/// inside `u ∪ support(g)`.
pub fn coset_reduce<T: Scalar>(g: &TfgElement<T>, u: &ClopenSet) -> Result<(T, TfgElement<T>)> {
    u.base().same_as(g.base())?;
    let (fu, _) = first_return::<T>(u)?;
    let k = g.index();
    let h = fu.power(&-k.clone()).compose(g);
    Ok((k, h))
}

/// Writes an index-zero `h` as `t2 ∘ t1` with `t1`, `t2` torsion and both
/// supported in `w` (default: the support of `h`).
///
/// With `h = (sigma, c)` in wreath form over the cylinders `R` of `w` and
/// `pi` the ascending cycle through `R`: `t1 = (pi, c)` and
/// `t2 = (sigma pi^{-1}, 0)`. `t1` has one nontrivial cycle whose carry sum
/// is the index, zero; `t2` has no carries.
pub fn factor_kernel<T: Scalar>(h: &TfgElement<T>, w: Option<&ClopenSet>) -> Result<TorsionFactorization<T>> {
    let base = h.base();
    let index = h.index();
    if !index.is_zero() {
        return Err(Error::NonzeroIndex(index.to_string()));
    }
    let id = TfgElement::identity(base);
    if h.is_torsion() {
        return TorsionFactorization::new(h.clone(), h.clone(), id);
    }
    let support = h.support();
    let w = match w {
        Some(w) => {
            base.same_as(w.base())?;
            if !support.is_subset(w) {
                return Err(Error::SupportEscapes);
            }
            w.clone()
        }
        None => support,
    };
    let d = w.depth().max(h.depth());
    let form = h.wreath_form_at(d);
    let k = base.modulus(d);
    let kt = T::from_residue(k);
    let rs = w.residues_at(d);

    let mut pi: Vec<usize> = (0..k).collect();
    for (i, &r) in rs.iter().enumerate() {
        pi[r] = rs[(i + 1) % rs.len()];
    }
    let mut pi_inv = vec![0; k];
    for (r, &p) in pi.iter().enumerate() {
        pi_inv[p] = r;
    }
    let t1_table: Vec<T> =
        (0..k).map(|r| T::from_residue(pi[r]) - T::from_residue(r) + kt.clone() * form.carry[r].clone()).collect();
    let t2_table: Vec<T> = (0..k).map(|r| T::from_residue(form.sigma[pi_inv[r]]) - T::from_residue(r)).collect();
    let t1 = TfgElement::from_cocycle(base, d, t1_table)?;
    let t2 = TfgElement::from_cocycle(base, d, t2_table)?;
    TorsionFactorization::new(h.clone(), t1, t2)
}

/// Factors `g`, supported in `u1 ∪ u2`, into elements supported in `u1` or
/// `u2`. Fails when `u1 ∩ u2` is empty or the support escapes.
pub fn decompose_local<T: Scalar>(g: &TfgElement<T>, u1: &ClopenSet, u2: &ClopenSet) -> Result<Certificate<T>> {
    let base = g.base();
    base.same_as(u1.base())?;
    base.same_as(u2.base())?;
    let overlap = u1.intersection(u2);
    if overlap.is_empty() {
        return Err(Error::EmptyOverlap);
    }
    let w = u1.union(u2);
    if !g.is_supported_in(&w) {
        return Err(Error::SupportEscapes);
    }
    let mut cert = Certificate { target: g.clone(), u1: u1.clone(), u2: u2.clone(), factors: Vec::new() };
    if g.is_identity() {
        return Ok(cert);
    }
    for (u, tag) in [(u1, Tag::U1), (u2, Tag::U2)] {
        if g.is_supported_in(u) {
            cert.factors.push(Factor { element: g.clone(), tag });
            return Ok(cert);
        }
    }

    let (k, h) = coset_reduce(g, u1)?;
    if !k.is_zero() {
        let (fu, _) = first_return::<T>(u1)?;
        cert.factors.push(Factor { element: fu.power(&k), tag: Tag::U1 });
    }
    let kernel = factor_kernel(&h, Some(&w))?;
    let splitter = BlockSplitter { u1, u2, overlap: &overlap };
    for t in [&kernel.t2, &kernel.t1] {
        for spec in torsion_to_genperms(t)? {
            for delta in spec.to_two_cycles() {
                splitter.push(&delta, &mut cert.factors)?;
            }
        }
    }
    if !verify_certificate(&cert) {
        return Err(Error::Internal("certificate failed to verify".into()));
    }
    Ok(cert)
}

struct BlockSplitter<'a> {
    u1: &'a ClopenSet,
    u2: &'a ClopenSet,
    overlap: &'a ClopenSet,
}

impl BlockSplitter<'_> {
    /// Appends factors whose product is `delta`.
    fn push<T: Scalar>(&self, delta: &TwoCycleSpec<T>, out: &mut Vec<Factor<T>>) -> Result<()> {
        let only1 = self.u1.difference(self.u2);
        let only2 = self.u2.difference(self.u1);
        let blocks = [&only1, &only2, self.overlap];
        let phi = delta.g();
        let u = delta.u();
        let image_pre: Vec<ClopenSet> = blocks.iter().map(|b| phi.preimage_of_clopen(b)).collect();

        let mut parts = Vec::with_capacity(9);
        let mut cross = Vec::new();
        for (i, bi) in blocks.iter().enumerate() {
            for (j, pj) in image_pre.iter().enumerate() {
                let q = u.intersection(bi).intersection(pj);
                if q.is_empty() {
                    continue;
                }
                parts.push(q.clone());
                match (i, j) {
                    (0, 1) => cross.push(delta.restrict(&q)),
                    (1, 0) => cross.push(delta.restrict(&q).flipped()),
                    _ => {
                        let tag = if i != 1 && j != 1 { Tag::U1 } else { Tag::U2 };
                        out.push(Factor { element: delta.restrict(&q).realize(), tag });
                    }
                }
            }
        }
        // the blocks partition u only if u avoids the complement of u1 ∪ u2
        delta.split(&parts)?;

        let base = u.base();
        for c in cross {
            let d = [self.u1.depth(), self.u2.depth(), c.u().depth(), phi.depth()].into_iter().max().unwrap();
            let k = base.modulus(d);
            let target = self.overlap.residues_at(d)[0];
            for w in c.u().residues_at(d) {
                let cyl = ClopenSet::from_sorted(base, d, vec![w]);
                let j = T::from_residue((target + k - w) % k);
                let fj = TfgElement::odometer_power(base, j);
                let ab = TwoCycleSpec::new(cyl.clone(), fj.clone())?.realize();
                let bc = TwoCycleSpec::new(fj.image_of_clopen(&cyl), c.g().compose(&fj.inverse()))?.realize();
                out.push(Factor { element: ab.clone(), tag: Tag::U1 });
                out.push(Factor { element: bc, tag: Tag::U2 });
                out.push(Factor { element: ab, tag: Tag::U1 });
            }
        }
        Ok(())
    }
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

    #[test]
    fn coset_examples() {
        let u = set(1, &[0]);
        assert_eq!(coset_reduce(&E::identity(&b2()), &u).unwrap(), (0, E::identity(&b2())));
        let full = ClopenSet::full(&b2());
        assert_eq!(coset_reduce(&f(), &full).unwrap(), (1, E::identity(&b2())));
        let delta = el(1, &[1, -1]);
        let (k, h) = coset_reduce(&f(), &u).unwrap();
        assert_eq!(k, 1);
        assert_eq!(h, delta.inverse());
        assert_eq!(h.index(), 0);
        assert!(coset_reduce(&f(), &ClopenSet::empty(&b2())).is_err());
    }

    #[test]
    fn kernel_examples() {
        let id = E::identity(&b2());
        let tf = factor_kernel(&id, None).unwrap();
        assert!(tf.t1.is_identity() && tf.t2.is_identity());

        let h = el(1, &[2, -2]);
        let tf = factor_kernel(&h, None).unwrap();
        assert_eq!(tf.t1, el(1, &[3, -3]));
        assert_eq!(tf.t2, el(1, &[1, -1]));
        assert_eq!((tf.order1, tf.order2), (2, 2));
        assert!(tf.verify());

        let c3 = el(2, &[1, 1, -2, 0]);
        let tf = factor_kernel(&c3, None).unwrap();
        assert_eq!(tf.t1, c3);
        assert!(tf.t2.is_identity());

        assert!(matches!(factor_kernel(&f(), None), Err(Error::NonzeroIndex(_))));
    }

    #[test]
    fn kernel_respects_restriction() {
        let h = el(3, &[8, 0, 0, 0, -8, 0, 0, 0]);
        let w = set(2, &[0, 1]);
        let tf = factor_kernel(&h, Some(&w)).unwrap();
        assert!(tf.t1.is_supported_in(&w) && tf.t2.is_supported_in(&w));
        assert!(tf.verify());
        assert_eq!(factor_kernel(&h, Some(&set(2, &[1]))), Err(Error::SupportEscapes));
    }

    #[test]
    fn palindrome_example() {
        let u1 = set(2, &[0, 1]);
        let u2 = set(2, &[1, 2]);
        let g = el(2, &[2, 0, -2, 0]);
        let c = decompose_local(&g, &u1, &u2).unwrap();
        let d1 = el(2, &[1, -1, 0, 0]);
        let d2 = el(2, &[0, 1, -1, 0]);
        let expected = vec![
            Factor { element: d1.clone(), tag: Tag::U1 },
            Factor { element: d2, tag: Tag::U2 },
            Factor { element: d1, tag: Tag::U1 },
        ];
        assert_eq!(c.factors, expected);
        assert!(verify_certificate(&c));
    }

    #[test]
    fn short_circuits() {
        let u1 = set(2, &[0, 1]);
        let u2 = set(2, &[1, 2]);
        let c = decompose_local(&E::identity(&b2()), &u1, &u2).unwrap();
        assert!(c.is_empty());
        let g = el(2, &[1, -1, 0, 0]);
        let c = decompose_local(&g, &u1, &u2).unwrap();
        assert_eq!(c.factors, vec![Factor { element: g, tag: Tag::U1 }]);
        assert_eq!(decompose_local(&f(), &u1, &u2).unwrap_err(), Error::SupportEscapes);
        assert_eq!(
            decompose_local(&E::identity(&b2()), &set(1, &[0]), &set(1, &[1])).unwrap_err(),
            Error::EmptyOverlap
        );
    }

    #[test]
    fn odometer_over_covering_pair() {
        let u1 = set(1, &[0]).union(&set(2, &[1]));
        let u2 = set(1, &[1]);
        let c = decompose_local(&f(), &u1, &u2).unwrap();
        assert!(verify_certificate(&c));
        assert_eq!(c.index_of(Tag::U1) + c.index_of(Tag::U2), 1);
    }

    #[test]
    fn tampered_certificates_fail() {
        let u1 = set(2, &[0, 1]);
        let u2 = set(2, &[1, 2]);
        let g = el(2, &[2, 0, -2, 0]);
        let c = decompose_local(&g, &u1, &u2).unwrap();
        let mut bad = c.clone();
        bad.factors[1].tag = Tag::U1;
        assert!(!verify_certificate(&bad));
        let mut swapped = c.clone();
        swapped.factors.swap(0, 1);
        assert!(!verify_certificate(&swapped));
    }
}
