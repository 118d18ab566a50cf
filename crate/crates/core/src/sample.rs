//! Seeded random objects for property checks and the self-test suites.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cantor::{BaseSequence, ClopenSet, Point};
use crate::element::{TfgElement, WreathForm};
use crate::perm::{cycles_of, Perm};
use crate::scalar::Scalar;

/// Deterministic generator used throughout; stable across platforms.
pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Largest table size the samplers produce.
pub const MAX_CYLINDERS: usize = 512;

/// A depth in `0..=max_depth` whose modulus stays within [`MAX_CYLINDERS`].
pub fn depth<R: Rng>(rng: &mut R, base: &BaseSequence, max_depth: usize) -> usize {
    let top = (0..=max_depth)
        .take_while(|&d| base.checked_modulus(d).is_some_and(|k| k <= MAX_CYLINDERS))
        .last()
        .unwrap_or(0);
    rng.gen_range(0..=top)
}

pub fn clopen<R: Rng>(rng: &mut R, base: &BaseSequence, max_depth: usize) -> ClopenSet {
    let d = depth(rng, base, max_depth);
    let rs = (0..base.modulus(d)).filter(|_| rng.gen_bool(0.5)).collect();
    ClopenSet::new(base, d, rs).expect("residues in range")
}

pub fn nonempty_clopen<R: Rng>(rng: &mut R, base: &BaseSequence, max_depth: usize) -> ClopenSet {
    loop {
        let u = clopen(rng, base, max_depth);
        if !u.is_empty() {
            return u;
        }
    }
}

pub fn perm<R: Rng>(rng: &mut R, n: usize) -> Perm {
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(rng);
    Perm::new(v).expect("shuffle of 0..n")
}

fn carry<R: Rng, T: Scalar>(rng: &mut R, bound: i64) -> T {
    T::from_i64(rng.gen_range(-bound..=bound)).expect("small carry fits")
}

fn lift<T: Scalar>(base: &BaseSequence, d: usize, sigma: Vec<usize>, carry: Vec<T>) -> TfgElement<T> {
    WreathForm { base: base.clone(), depth: d, sigma, carry }.lift().expect("a permutation with carries is an element")
}

/// Uniform residue permutation with carries in `[-bound, bound]`.
pub fn element<R: Rng, T: Scalar>(rng: &mut R, base: &BaseSequence, max_depth: usize, bound: i64) -> TfgElement<T> {
    let d = depth(rng, base, max_depth);
    let k = base.modulus(d);
    let sigma = perm(rng, k).images().to_vec();
    let c = (0..k).map(|_| carry(rng, bound)).collect();
    lift(base, d, sigma, c)
}

/// Like [`element`] but every cycle's carries sum to zero, so the element
/// has finite order.
pub fn torsion<R: Rng, T: Scalar>(rng: &mut R, base: &BaseSequence, max_depth: usize, bound: i64) -> TfgElement<T> {
    let d = depth(rng, base, max_depth);
    let k = base.modulus(d);
    let sigma = perm(rng, k).images().to_vec();
    let mut c = vec![T::zero(); k];
    for cycle in cycles_of(&sigma) {
        let mut sum = T::zero();
        for &w in &cycle[1..] {
            c[w] = carry(rng, bound);
            sum = sum + c[w].clone();
        }
        c[cycle[0]] = -sum;
    }
    lift(base, d, sigma, c)
}

/// Carries summing to zero overall: index zero.
pub fn index_zero<R: Rng, T: Scalar>(rng: &mut R, base: &BaseSequence, max_depth: usize, bound: i64) -> TfgElement<T> {
    let d = depth(rng, base, max_depth);
    let k = base.modulus(d);
    let sigma = perm(rng, k).images().to_vec();
    let mut c: Vec<T> = (0..k).map(|_| carry(rng, bound)).collect();
    let sum = c[1..].iter().fold(T::zero(), |a, x| a + x.clone());
    c[0] = -sum;
    lift(base, d, sigma, c)
}

/// Element permuting the cylinders of `w` among themselves, refined by up
/// to `extra` further levels, identity off `w`. With `zero_index` the
/// carries sum to zero.
pub fn supported_in<R: Rng, T: Scalar>(
    rng: &mut R,
    w: &ClopenSet,
    extra: usize,
    bound: i64,
    zero_index: bool,
) -> TfgElement<T> {
    let base = w.base();
    let mut d = w.depth();
    for _ in 0..rng.gen_range(0..=extra) {
        if base.checked_modulus(d + 1).is_some_and(|k| k <= MAX_CYLINDERS) {
            d += 1;
        }
    }
    let k = base.modulus(d);
    let rs = w.residues_at(d);
    let mut shuffled = rs.clone();
    shuffled.shuffle(rng);
    let mut sigma: Vec<usize> = (0..k).collect();
    let mut c = vec![T::zero(); k];
    for (&r, &s) in rs.iter().zip(&shuffled) {
        sigma[r] = s;
        c[r] = carry(rng, bound);
    }
    if zero_index {
        if let Some(&r0) = rs.first() {
            let sum = rs[1..].iter().fold(T::zero(), |a, &r| a + c[r].clone());
            c[r0] = -sum;
        }
    }
    lift(base, d, sigma, c)
}

/// Eventually periodic point with short pre-period and period.
pub fn point<R: Rng>(rng: &mut R, base: &BaseSequence) -> Point {
    let pre_len = rng.gen_range(0..4);
    let pre = (0..pre_len).map(|i| rng.gen_range(0..base.radix(i))).collect();
    let min_radix = base.pre_period().iter().chain(base.period()).copied().min().unwrap();
    let period = (0..rng.gen_range(1..4)).map(|_| rng.gen_range(0..min_radix)).collect();
    Point::new(base, pre, period).expect("digits below every radix")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn draw(seed: u64) -> Vec<TfgElement<i64>> {
        let base = BaseSequence::new(vec![2], vec![3]).unwrap();
        let mut r = rng(seed);
        let mut out = Vec::new();
        for _ in 0..50 {
            out.push(element(&mut r, &base, 6, 3));
            let t: TfgElement<i64> = torsion(&mut r, &base, 4, 3);
            assert!(t.is_torsion());
            let z: TfgElement<i64> = index_zero(&mut r, &base, 4, 3);
            assert_eq!(z.index(), 0);
            let w = nonempty_clopen(&mut r, &base, 3);
            let s: TfgElement<i64> = supported_in(&mut r, &w, 2, 3, true);
            assert!(s.is_supported_in(&w));
            assert_eq!(s.index(), 0);
            let p = point(&mut r, &base);
            assert_eq!(p.base(), &base);
            out.extend([t, z, s]);
        }
        out
    }

    #[test]
    fn samplers_are_valid_and_deterministic() {
        assert_eq!(draw(7), draw(7));
        assert_ne!(draw(7), draw(8));
    }
}
