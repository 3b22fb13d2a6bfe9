use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A positive integer of unbounded size.
///
/// Every value on a Collatz orbit is a `Nat`; arithmetic never wraps.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Nat(BigUint);

impl Nat {
    pub fn new(value: BigUint) -> Result<Nat> {
        if value.is_zero() {
            return Err(Error::Domain("0 is not a positive integer".into()));
        }
        Ok(Nat(value))
    }

    pub fn one() -> Nat {
        Nat(BigUint::one())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_even(&self) -> bool {
        self.0.is_even()
    }

    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn into_inner(self) -> BigUint {
        self.0
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }

    /// Residue of the value modulo 4, in `0..4`.
    pub fn mod4(&self) -> u8 {
        (self.0.iter_u32_digits().next().unwrap_or(0) & 3) as u8
    }

    // Callers guarantee the value is nonzero.
    pub(crate) fn from_nonzero(value: BigUint) -> Nat {
        debug_assert!(!value.is_zero());
        Nat(value)
    }
}

impl TryFrom<u64> for Nat {
    type Error = Error;

    fn try_from(n: u64) -> Result<Nat> {
        Nat::new(BigUint::from(n))
    }
}

impl TryFrom<BigUint> for Nat {
    type Error = Error;

    fn try_from(n: BigUint) -> Result<Nat> {
        Nat::new(n)
    }
}

impl From<Nat> for BigUint {
    fn from(n: Nat) -> BigUint {
        n.0
    }
}

impl FromStr for Nat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Nat> {
        let v = BigUint::from_str(s.trim())
            .map_err(|e| Error::Domain(format!("cannot parse {s:?} as a positive integer: {e}")))?;
        Nat::new(v)
    }
}

impl fmt::Display for Nat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// 2-adic valuation: the exponent of the largest power of 2 dividing `n`.
/// `None` for zero.
pub fn v2(n: &BigUint) -> Option<u64> {
    n.trailing_zeros()
}
