//! Scalar abstraction shared by the prime field and its extension.
//!
//! Everything that only needs field arithmetic (Möbius substitution, point
//! enumeration, root scans) is written against [`FiniteField`] so the same
//! code runs over `Gf3` and `Gf81`.

use std::fmt::Debug;
use std::hash::Hash;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_traits::{One, Zero};

use crate::gf::Gf3;

pub trait FiniteField:
    Copy
    + Eq
    + Ord
    + Hash
    + Debug
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + 'static
{
    /// Number of elements.
    const ORDER: usize;

    /// All field elements in a fixed order, zero first.
    fn elements() -> Vec<Self>;

    fn from_gf3(c: Gf3) -> Self;

    /// `x^p`; the generator of the Galois group over the prime field.
    fn frobenius(self) -> Self;

    fn pow(self, mut exp: u64) -> Self {
        let mut base = self;
        let mut acc = Self::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc *= base;
            }
            base *= base;
            exp >>= 1;
        }
        acc
    }

    fn inv(self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.pow(Self::ORDER as u64 - 2))
        }
    }

    fn is_square(self) -> bool {
        self.is_zero() || self.pow((Self::ORDER as u64 - 1) / 2).is_one()
    }
}

/// Evaluates a dense polynomial (ascending coefficients) by Horner's rule.
pub fn eval_dense<F: FiniteField>(coeffs: &[F], at: F) -> F {
    coeffs.iter().rev().fold(F::zero(), |acc, &c| acc * at + c)
}
