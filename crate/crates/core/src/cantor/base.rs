use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest depth any dense table may be refined to unless a caller
/// configures otherwise.
pub const DEFAULT_DEPTH_LIMIT: usize = 24;

#[derive(Debug, PartialEq, Eq, Hash)]
struct Radices {
    pre: Vec<usize>,
    period: Vec<usize>,
}

/// Eventually periodic radix sequence `r_0, r_1, ...` defining the odometer
/// on the mixed-radix integers `Z_(r_0, r_1, ...)`.
///
/// Cheap to clone; stored in canonical form (shortest pre-period and period),
/// so two bases describing the same sequence compare equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BaseSequence(Arc<Radices>);

impl BaseSequence {
    pub fn new(pre: Vec<usize>, period: Vec<usize>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::InvalidBase("period must be nonempty".into()));
        }
        if let Some(r) = pre.iter().chain(&period).find(|&&r| r < 2) {
            return Err(Error::InvalidBase(format!("radix {r} is smaller than 2")));
        }
        let (pre, period) = minimal_periodic(pre, period);
        Ok(BaseSequence(Arc::new(Radices { pre, period })))
    }

    /// The constant sequence `r, r, r, ...`.
    pub fn constant(radix: usize) -> Result<Self> {
        Self::new(Vec::new(), vec![radix])
    }

    /// The dyadic odometer.
    pub fn dyadic() -> Self {
        Self::constant(2).unwrap()
    }

    pub fn pre_period(&self) -> &[usize] {
        &self.0.pre
    }

    pub fn period(&self) -> &[usize] {
        &self.0.period
    }

    pub fn radix(&self, i: usize) -> usize {
        let r = &self.0;
        if i < r.pre.len() {
            r.pre[i]
        } else {
            r.period[(i - r.pre.len()) % r.period.len()]
        }
    }

    /// `K_d`, the product of the first `d` radices. Panics on `usize`
    /// overflow; use [`Self::checked_modulus`] for untrusted depths.
    pub fn modulus(&self, d: usize) -> usize {
        self.checked_modulus(d).unwrap_or_else(|| panic!("modulus at depth {d} overflows usize"))
    }

    pub fn checked_modulus(&self, d: usize) -> Option<usize> {
        (0..d).try_fold(1usize, |acc, i| acc.checked_mul(self.radix(i)))
    }

    /// Rejects depths beyond `limit` (and depths whose modulus overflows).
    pub fn check_depth(&self, depth: usize, limit: usize) -> Result<()> {
        if depth > limit || self.checked_modulus(depth).is_none() {
            return Err(Error::DepthLimit { depth, limit });
        }
        Ok(())
    }

    /// Smallest depth `d` with `m | K_d`, if one exists within `max_depth`.
    pub fn depth_dividing(&self, m: usize, max_depth: usize) -> Option<usize> {
        let mut k = 1usize;
        for d in 0..=max_depth {
            if k.is_multiple_of(m) {
                return Some(d);
            }
            k = k.checked_mul(self.radix(d))?;
        }
        None
    }

    pub(crate) fn same_as(&self, other: &BaseSequence) -> Result<()> {
        if Arc::ptr_eq(&self.0, &other.0) || self == other {
            Ok(())
        } else {
            Err(Error::BaseMismatch)
        }
    }
}

impl fmt::Debug for BaseSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Base({:?};{:?})", self.0.pre, self.0.period)
    }
}

impl fmt::Display for BaseSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| v.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(",");
        if self.0.pre.is_empty() {
            write!(f, "{}", join(&self.0.period))
        } else {
            write!(f, "{};{}", join(&self.0.pre), join(&self.0.period))
        }
    }
}

impl std::str::FromStr for BaseSequence {
    type Err = Error;

    /// Accepts `"2"`, `"2,3"` (period only) or `"2;3"` (pre-period `;` period).
    fn from_str(s: &str) -> Result<Self> {
        let list = |part: &str| -> Result<Vec<usize>> {
            part.split(',')
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad radix {t:?}"))))
                .collect()
        };
        match s.split_once(';') {
            Some((pre, period)) => Self::new(list(pre)?, list(period)?),
            None => Self::new(Vec::new(), list(s)?),
        }
    }
}

/// Shortest (pre-period, period) pair describing the same infinite sequence.
pub(crate) fn minimal_periodic<T: PartialEq + Clone>(mut pre: Vec<T>, period: Vec<T>) -> (Vec<T>, Vec<T>) {
    let p = period.len();
    let q = (1..=p).find(|&q| p.is_multiple_of(q) && (q..p).all(|i| period[i] == period[i - q])).unwrap_or(p);
    let mut period: Vec<T> = period[..q].to_vec();
    while let Some(last) = pre.last() {
        if *last != period[period.len() - 1] {
            break;
        }
        pre.pop();
        period.rotate_right(1);
    }
    (pre, period)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modulus_examples() {
        let b2 = BaseSequence::constant(2).unwrap();
        assert_eq!(b2.modulus(3), 8);
        assert_eq!(b2.modulus(0), 1);
        let b23 = BaseSequence::new(vec![2], vec![3]).unwrap();
        assert_eq!(b23.modulus(3), 18);
        assert_eq!(b23.modulus(0), 1);
    }

    #[test]
    fn modulus_strictly_increasing_and_divisible() {
        let b = BaseSequence::new(vec![5, 2], vec![3, 2, 4]).unwrap();
        for d in 0..12 {
            assert!(b.modulus(d + 1) > b.modulus(d));
            assert_eq!(b.modulus(d + 1) % b.modulus(d), 0);
        }
    }

    #[test]
    fn rejects_bad_radices() {
        assert!(BaseSequence::new(vec![], vec![]).is_err());
        assert!(BaseSequence::new(vec![1], vec![2]).is_err());
        assert!(BaseSequence::constant(0).is_err());
    }

    #[test]
    fn canonical_form() {
        let a = BaseSequence::new(vec![2, 2], vec![2, 2]).unwrap();
        assert_eq!(a, BaseSequence::dyadic());
        let b = BaseSequence::new(vec![3], vec![2, 3]).unwrap();
        assert_eq!(b.pre_period(), &[] as &[usize]);
        assert_eq!(b.period(), &[3, 2]);
    }

    #[test]
    fn parse_shorthand() {
        assert_eq!("2".parse::<BaseSequence>().unwrap(), BaseSequence::dyadic());
        let b: BaseSequence = "2;3".parse().unwrap();
        assert_eq!(b.pre_period(), &[2]);
        assert_eq!(b.period(), &[3]);
        assert_eq!(b.to_string(), "2;3");
        assert!("x".parse::<BaseSequence>().is_err());
    }

    #[test]
    fn depth_guard() {
        let b = BaseSequence::dyadic();
        assert!(b.check_depth(24, DEFAULT_DEPTH_LIMIT).is_ok());
        assert!(matches!(b.check_depth(25, DEFAULT_DEPTH_LIMIT), Err(Error::DepthLimit { depth: 25, limit: 24 })));
    }

    #[test]
    fn depth_dividing_examples() {
        let b23 = BaseSequence::new(vec![2], vec![3]).unwrap();
        assert_eq!(b23.depth_dividing(1, 10), Some(0));
        assert_eq!(b23.depth_dividing(3, 10), Some(2));
        assert_eq!(b23.depth_dividing(9, 10), Some(3));
        assert_eq!(b23.depth_dividing(4, 10), None);
    }
}
