use std::hash::Hash;
use std::ops::{AddAssign, Div, Mul};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

/// Exact integer carrier for the enumerations: `i128` when the inputs are
/// small enough to rule out overflow, `BigInt` otherwise.
pub(crate) trait Scalar:
    Clone + Ord + Hash + Zero + for<'a> AddAssign<&'a Self> + Mul<Output = Self> + Div<Output = Self>
{
    fn from_big(v: &BigInt) -> Self;
    fn to_big(&self) -> BigInt;
}

impl Scalar for i128 {
    fn from_big(v: &BigInt) -> Self {
        v.to_i128().expect("value checked to fit in i128")
    }

    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Scalar for BigInt {
    fn from_big(v: &BigInt) -> Self {
        v.clone()
    }

    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

/// True when every intermediate value bounded by `bound` fits in `i128`
/// with room to spare.
pub(crate) fn fits_i128(bound: &BigInt) -> bool {
    bound.bits() < 120
}
