//! Integer scalars for the elimination kernels.
//!
//! Elimination runs first over `i128` with checked arithmetic and is restarted
//! over [`BigInt`] on the first overflow, so results are always exact.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Overflow;

pub(crate) type Checked<T> = std::result::Result<T, Overflow>;

pub(crate) trait Scalar: Clone + PartialEq + Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn is_unit(&self) -> bool;
    fn from_big(b: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
    /// `|self| < |other|`
    fn abs_lt(&self, other: &Self) -> bool;
    fn neg(&self) -> Checked<Self>;
    /// `self + c * x`
    fn add_mul(&self, c: &Self, x: &Self) -> Checked<Self>;
    /// Quotient rounded to the nearest integer, so the remainder is at most
    /// half the divisor in absolute value.
    fn quo_round(&self, d: &Self) -> Checked<Self>;
    /// `self | other`
    fn divides(&self, other: &Self) -> bool;
}

impl Scalar for i128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn from_big(b: &BigInt) -> Option<Self> {
        // keep headroom so that a single add_mul of in-range values is detectable
        b.to_i128()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn abs_lt(&self, other: &Self) -> bool {
        self.unsigned_abs() < other.unsigned_abs()
    }
    fn neg(&self) -> Checked<Self> {
        self.checked_neg().ok_or(Overflow)
    }
    fn add_mul(&self, c: &Self, x: &Self) -> Checked<Self> {
        c.checked_mul(*x)
            .and_then(|p| self.checked_add(p))
            .ok_or(Overflow)
    }
    fn quo_round(&self, d: &Self) -> Checked<Self> {
        let q = self.checked_div(*d).ok_or(Overflow)?;
        let r = self - q * d;
        if r == 0 {
            return Ok(q);
        }
        let (ra, da) = (r.unsigned_abs(), d.unsigned_abs());
        if ra > da - ra {
            let step = if (r < 0) == (*d < 0) { 1 } else { -1 };
            q.checked_add(step).ok_or(Overflow)
        } else {
            Ok(q)
        }
    }
    fn divides(&self, other: &Self) -> bool {
        if *self == 0 {
            *other == 0
        } else {
            other.checked_rem(*self).is_none_or(|r| r == 0)
        }
    }
}

impl Scalar for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn is_unit(&self) -> bool {
        self.abs().is_one()
    }
    fn from_big(b: &BigInt) -> Option<Self> {
        Some(b.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn abs_lt(&self, other: &Self) -> bool {
        self.magnitude() < other.magnitude()
    }
    fn neg(&self) -> Checked<Self> {
        Ok(-self)
    }
    fn add_mul(&self, c: &Self, x: &Self) -> Checked<Self> {
        Ok(self + c * x)
    }
    fn quo_round(&self, d: &Self) -> Checked<Self> {
        let (q, r) = self.div_rem(d);
        if Zero::is_zero(&r) {
            return Ok(q);
        }
        let twice = r.magnitude() * 2u32;
        if &twice > d.magnitude() {
            if r.sign() == d.sign() {
                Ok(q + 1)
            } else {
                Ok(q - 1)
            }
        } else {
            Ok(q)
        }
    }
    fn divides(&self, other: &Self) -> bool {
        if Zero::is_zero(self) {
            Zero::is_zero(other)
        } else {
            Zero::is_zero(&(other % self))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounded_quotient_leaves_small_remainder() {
        for a in -20i128..=20 {
            for d in [-7i128, -3, -2, -1, 1, 2, 3, 7] {
                let q = a.quo_round(&d).unwrap();
                let r = a - q * d;
                assert!(2 * r.abs() <= d.abs(), "a={a} d={d} q={q}");
                let qb = BigInt::from(a).quo_round(&BigInt::from(d)).unwrap();
                let rb = BigInt::from(a) - &qb * d;
                assert!(rb.magnitude() * 2u32 <= BigInt::from(d).magnitude().clone());
            }
        }
    }

    #[test]
    fn overflow_is_reported() {
        assert_eq!(i128::MAX.add_mul(&2, &1), Err(Overflow));
        assert_eq!(i128::MIN.neg(), Err(Overflow));
    }
}
