use super::{residue_permutation, TfgElement};
use crate::cantor::BaseSequence;
use crate::error::{Error, Result};
use crate::perm::cycles_of;
use crate::scalar::Scalar;

/// An element at depth `d` as a residue permutation plus one integer carry
/// per cylinder: `n(w) = sigma(w) - w + K_d * carry(w)`.
///
/// Writing `x = w + K_d * q`, the element acts as
/// `x -> sigma(w) + K_d * (q + carry(w))`, i.e. as an element of the wreath
/// product of the adic integers with the symmetric group on `K_d` letters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WreathForm<T> {
    pub base: BaseSequence,
    pub depth: usize,
    pub sigma: Vec<usize>,
    pub carry: Vec<T>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrderResult<T> {
    Finite(T),
    Infinite,
}

impl<T: Scalar> WreathForm<T> {
    pub(crate) fn of(g: &TfgElement<T>, d: usize) -> Self {
        let k = g.base.modulus(d);
        let kt = T::from_residue(k);
        let sigma = g.residue_map_at(d);
        let carry = (0..k)
            .map(|w| {
                let n = g.value_at(w).clone();
                let shift = n - T::from_residue(sigma[w]) + T::from_residue(w);
                let (c, r) = shift.div_rem(&kt);
                debug_assert!(r.is_zero());
                c
            })
            .collect();
        WreathForm { base: g.base.clone(), depth: d, sigma, carry }
    }

    pub fn lift(&self) -> Result<TfgElement<T>> {
        let k = self.base.modulus(self.depth);
        if self.sigma.len() != k || self.carry.len() != k {
            return Err(Error::TableLength { got: self.sigma.len().min(self.carry.len()), expected: k });
        }
        let kt = T::from_residue(k);
        let table: Vec<T> = (0..k)
            .map(|w| T::from_residue(self.sigma[w]) - T::from_residue(w) + kt.clone() * self.carry[w].clone())
            .collect();
        let map = residue_permutation(&table)?;
        if map != self.sigma {
            return Err(Error::InvalidPermutation("sigma entries out of range".into()));
        }
        TfgElement::from_cocycle(&self.base, self.depth, table)
    }

    /// All cycles of `sigma` (fixed points included) with their carry sums.
    pub fn cycles_with_carry(&self) -> Vec<(Vec<usize>, T)> {
        cycles_of(&self.sigma)
            .into_iter()
            .map(|c| {
                let s = c.iter().fold(T::zero(), |a, &w| a + self.carry[w].clone());
                (c, s)
            })
            .collect()
    }

    pub fn carry_sum(&self) -> T {
        self.carry.iter().fold(T::zero(), |a, c| a + c.clone())
    }
}

/// Finite iff every sigma-cycle has carry sum zero; the order is then the
/// lcm of the cycle lengths. Cross-checked against exact powers.
pub(crate) fn order<T: Scalar>(g: &TfgElement<T>) -> OrderResult<T> {
    let wf = g.wreath_form();
    let mut m = T::one();
    for (cycle, sum) in wf.cycles_with_carry() {
        if !sum.is_zero() {
            return OrderResult::Infinite;
        }
        m = m.lcm(&T::from_residue(cycle.len()));
    }
    assert!(g.power(&m).is_identity(), "order criterion disagrees with exact power");
    OrderResult::Finite(m)
}
