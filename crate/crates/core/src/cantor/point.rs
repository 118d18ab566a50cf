use std::fmt;

use num_integer::Integer;

use super::base::minimal_periodic;
use super::{BaseSequence, Cylinder};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Eventually periodic point of the mixed-radix integers, digits
/// least-significant first.
///
/// Canonical: shortest pre-period, shortest period. Periodicity of the
/// digits need not line up with the base's period; arithmetic aligns both.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Point {
    base: BaseSequence,
    pre: Vec<usize>,
    period: Vec<usize>,
}

impl Point {
    pub fn new(base: &BaseSequence, pre: Vec<usize>, period: Vec<usize>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::Parse("point period must be nonempty".into()));
        }
        let p = Point { base: base.clone(), pre, period };
        let end = p.stable_from() + p.cycle_len();
        for index in 0..end {
            let (digit, radix) = (p.digit(index), base.radix(index));
            if digit >= radix {
                return Err(Error::InvalidDigit { index, digit, radix });
            }
        }
        Ok(p.canonical())
    }

    pub fn zero(base: &BaseSequence) -> Self {
        Point { base: base.clone(), pre: Vec::new(), period: vec![0] }
    }

    /// The image of an ordinary integer in the adic group.
    pub fn from_integer<T: Scalar>(base: &BaseSequence, n: &T) -> Self {
        Self::zero(base).add_integer(n)
    }

    pub fn base(&self) -> &BaseSequence {
        &self.base
    }

    pub fn pre_digits(&self) -> &[usize] {
        &self.pre
    }

    pub fn period_digits(&self) -> &[usize] {
        &self.period
    }

    pub fn digit(&self, i: usize) -> usize {
        if i < self.pre.len() {
            self.pre[i]
        } else {
            self.period[(i - self.pre.len()) % self.period.len()]
        }
    }

    /// From this index on, both digits and radices are periodic.
    fn stable_from(&self) -> usize {
        self.pre.len().max(self.base.pre_period().len())
    }

    fn cycle_len(&self) -> usize {
        self.period.len().lcm(&self.base.period().len())
    }

    fn canonical(self) -> Self {
        let (pre, period) = minimal_periodic(self.pre, self.period);
        Point { base: self.base, pre, period }
    }

    /// The depth-`d` cylinder containing this point.
    pub fn cylinder_of(&self, d: usize) -> Cylinder {
        let mut residue = 0usize;
        let mut k = 1usize;
        for i in 0..d {
            residue += self.digit(i) * k;
            k *= self.base.radix(i);
        }
        Cylinder { depth: d, residue }
    }

    pub fn residue(&self, d: usize) -> usize {
        self.cylinder_of(d).residue
    }

    /// `self + n` in the adic group, i.e. the odometer applied `n` times.
    pub fn add_integer<T: Scalar>(&self, n: &T) -> Self {
        if n.is_zero() {
            return self.clone();
        }
        transduce(&self.base, &[self], n.clone(), |carry, digits, radix| {
            let r = T::from_residue(radix);
            let (q, m) = (T::from_residue(digits[0]) + carry.clone()).div_mod_floor(&r);
            (m.to_usize().unwrap(), q)
        })
    }

    pub fn add(&self, other: &Point) -> Result<Self> {
        self.base.same_as(&other.base)?;
        Ok(transduce(&self.base, &[self, other], 0usize, |carry, digits, radix| {
            let s = digits[0] + digits[1] + carry;
            (s % radix, s / radix)
        }))
    }

    pub fn negate(&self) -> Self {
        let complement = transduce(&self.base, &[self], (), |_, digits, radix| (radix - 1 - digits[0], ()));
        complement.add_integer(&1i64)
    }

    pub fn sub(&self, other: &Point) -> Result<Self> {
        self.add(&other.negate())
    }

    /// The integer this point equals, if it is one: tail all zeros
    /// (nonnegative) or all maximal digits (negative).
    pub fn as_integer<T: Scalar>(&self) -> Option<T> {
        let start = self.pre.len();
        let end = self.stable_from() + self.cycle_len();
        let all_zero = (start..end).all(|i| self.digit(i) == 0);
        let all_max = (start..end).all(|i| self.digit(i) + 1 == self.base.radix(i));
        if !all_zero && !all_max {
            return None;
        }
        let mut value = T::zero();
        let mut k = T::one();
        for i in 0..start {
            value = value + T::from_residue(self.digit(i)) * k.clone();
            k = k * T::from_residue(self.base.radix(i));
        }
        // all-zero wins when both hold (impossible: radices are at least 2)
        Some(if all_zero { value } else { value - k })
    }

    /// `self - other` as an integer, when the two lie in one odometer orbit.
    pub fn integer_offset<T: Scalar>(&self, other: &Point) -> Result<Option<T>> {
        Ok(self.sub(other)?.as_integer())
    }
}

/// Runs a digit-by-digit transducer over eventually periodic inputs.
///
/// Past the point where every input and the radix sequence are periodic, the
/// transducer state is compared at cycle boundaries; the first repeat closes
/// the output period. Terminates whenever the reachable state set is finite.
fn transduce<S: Clone + PartialEq>(
    base: &BaseSequence,
    inputs: &[&Point],
    init: S,
    mut step: impl FnMut(&S, &[usize], usize) -> (usize, S),
) -> Point {
    let stable = inputs.iter().map(|p| p.pre.len()).chain(std::iter::once(base.pre_period().len())).max().unwrap();
    let cycle = inputs.iter().map(|p| p.period.len()).fold(base.period().len(), |a, b| a.lcm(&b));

    let mut out = Vec::new();
    let mut state = init;
    let mut digits = vec![0usize; inputs.len()];
    let mut run = |out: &mut Vec<usize>, state: &mut S, from: usize, to: usize| {
        for i in from..to {
            for (d, p) in digits.iter_mut().zip(inputs) {
                *d = p.digit(i);
            }
            let (digit, next) = step(state, &digits, base.radix(i));
            out.push(digit);
            *state = next;
        }
    };
    run(&mut out, &mut state, 0, stable);
    let mut boundaries: Vec<S> = vec![state.clone()];
    loop {
        let from = stable + (boundaries.len() - 1) * cycle;
        run(&mut out, &mut state, from, from + cycle);
        if let Some(j) = boundaries.iter().position(|s| *s == state) {
            let start = stable + j * cycle;
            let period = out.split_off(start);
            return Point { base: base.clone(), pre: out, period }.canonical();
        }
        boundaries.push(state.clone());
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Point({:?}({:?})*)", self.pre, self.period)
    }
}
