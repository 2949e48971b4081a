use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// A positive integer or infinity; the codomain of Reidemeister numbers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtNat {
    Finite(BigInt),
    Infinity,
}

impl ExtNat {
    pub fn finite(value: impl Into<BigInt>) -> Self {
        let v = value.into();
        assert!(v >= BigInt::one(), "ExtNat finite values are >= 1");
        ExtNat::Finite(v)
    }

    pub fn one() -> Self {
        ExtNat::Finite(BigInt::one())
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtNat::Infinity)
    }

    pub fn as_finite(&self) -> Option<&BigInt> {
        match self {
            ExtNat::Finite(v) => Some(v),
            ExtNat::Infinity => None,
        }
    }
}

/// `|x|` for nonzero `x`, infinity for zero.
pub fn ext_abs(x: &BigInt) -> ExtNat {
    if x.is_zero() {
        ExtNat::Infinity
    } else {
        ExtNat::Finite(x.abs())
    }
}

impl Mul for ExtNat {
    type Output = ExtNat;

    fn mul(self, rhs: ExtNat) -> ExtNat {
        match (self, rhs) {
            (ExtNat::Finite(a), ExtNat::Finite(b)) => ExtNat::Finite(a * b),
            _ => ExtNat::Infinity,
        }
    }
}

impl<'a> Mul<&'a ExtNat> for &'a ExtNat {
    type Output = ExtNat;

    fn mul(self, rhs: &ExtNat) -> ExtNat {
        self.clone() * rhs.clone()
    }
}

impl std::iter::Product for ExtNat {
    fn product<I: Iterator<Item = ExtNat>>(iter: I) -> Self {
        iter.fold(ExtNat::one(), |acc, x| acc * x)
    }
}

impl fmt::Display for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtNat::Finite(v) => write!(f, "{v}"),
            ExtNat::Infinity => f.write_str("inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ext_abs_cases() {
        assert_eq!(ext_abs(&BigInt::from(0)), ExtNat::Infinity);
        assert_eq!(ext_abs(&BigInt::from(-5)), ExtNat::finite(5));
        assert_eq!(ext_abs(&BigInt::from(1)), ExtNat::finite(1));
    }

    #[test]
    fn infinity_absorbs() {
        assert_eq!(ExtNat::finite(3) * ExtNat::Infinity, ExtNat::Infinity);
        assert_eq!(ExtNat::Infinity * ExtNat::finite(2), ExtNat::Infinity);
        assert_eq!(ExtNat::finite(3) * ExtNat::finite(4), ExtNat::finite(12));
        assert_eq!(ExtNat::Infinity.to_string(), "inf");
    }
}
