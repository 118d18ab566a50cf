use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// Integer type used for cocycle values, carries and the index map.
///
/// Residues and depths are always `usize`; only the translation amounts an
/// element applies are generic. `i64` covers everything at desk scale,
/// `i128` and `BigInt` are there for long words and large powers.
pub trait Scalar:
    Integer + Signed + Clone + Hash + Debug + Display + FromStr + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    fn from_residue(r: usize) -> Self {
        Self::from_usize(r).expect("residue does not fit the scalar type")
    }

    /// Least nonnegative residue of `self` modulo `modulus`.
    fn residue(&self, modulus: usize) -> usize {
        self.mod_floor(&Self::from_residue(modulus)).to_usize().expect("reduced residue is in range")
    }
}

impl<T> Scalar for T where
    T: Integer
        + Signed
        + Clone
        + Hash
        + Debug
        + Display
        + FromStr
        + FromPrimitive
        + ToPrimitive
        + Send
        + Sync
        + 'static
{
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn residue_is_floor_mod() {
        assert_eq!((-1i64).residue(4), 3);
        assert_eq!(9i64.residue(4), 1);
        assert_eq!(BigInt::from(-9).residue(4), 3);
        assert_eq!(0i128.residue(1), 0);
    }
}
