//! Pointwise reference computations on the integers, which are dense in the
//! Cantor set. They read the cocycle table and nothing else, so they share
//! no code with composition, inversion, images or the index map.

use crate::cantor::ClopenSet;
use crate::element::TfgElement;
use crate::scalar::Scalar;

fn to_i128<T: Scalar>(x: &T) -> i128 {
    x.to_i128().expect("oracle values fit in i128")
}

/// `g(x) = x + n(x mod K_d)`.
pub fn apply<T: Scalar>(g: &TfgElement<T>, x: i128) -> i128 {
    let k = g.base().modulus(g.depth()) as i128;
    x + to_i128(g.value_at(x.rem_euclid(k) as usize))
}

/// Whether two elements agree on `0..K_D`, which fixes them at depth `D`.
pub fn agree<T: Scalar>(a: &TfgElement<T>, b: impl Fn(i128) -> i128) -> bool {
    let k = a.base().modulus(a.depth()) as i128;
    (0..k).all(|x| apply(a, x) == b(x))
}

/// Net number of integers carried from the negatives to the nonnegatives.
pub fn flux<T: Scalar>(g: &TfgElement<T>) -> i128 {
    let m = g.cocycle().iter().map(|n| to_i128(n).abs()).max().unwrap_or(0) + 1;
    let up = (-m..0).filter(|&x| apply(g, x) >= 0).count() as i128;
    let down = (0..m).filter(|&x| apply(g, x) < 0).count() as i128;
    up - down
}

/// Residues of `g(u)` at depth `max(depth g, depth u)`, by translating each
/// cylinder.
pub fn image_residues<T: Scalar>(g: &TfgElement<T>, u: &ClopenSet) -> (usize, Vec<usize>) {
    let d = g.depth().max(u.depth());
    let k = u.base().modulus(d) as i128;
    let mut out: Vec<usize> =
        u.residues_at(d).into_iter().map(|r| apply(g, r as i128).rem_euclid(k) as usize).collect();
    out.sort_unstable();
    (d, out)
}

/// Smallest `k >= 1` with `x + k ∈ u`.
pub fn return_time(u: &ClopenSet, x: i128) -> i128 {
    let k = u.base().modulus(u.depth()) as i128;
    (1..=k)
        .find(|s| u.contains_residue(u.depth(), (x + s).rem_euclid(k) as usize))
        .expect("nonempty set is met within one period")
}
