//! Exact arithmetic in `Z[τ]` and in the Hamilton quaternions over `Z` and
//! `Z[τ]`, the icosian maximal order, and reduction to `Mat₂(F_N)`.

mod field;
mod order;
mod quaternion;
mod reduce;

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

pub use field::{Embedding, OFElem};
pub use order::{MaximalOrder, Mod2Class};
pub use quaternion::Quaternion;
pub use reduce::{Mat2, ModNEmbedding, ReduceModN};

pub(crate) use field::gcd;

/// Coefficient ring of a quaternion: `Z` (as `i64`) or `Z[τ]`.
///
/// Arithmetic on the underlying `i64` coordinates is overflow-checked in
/// every build profile of this workspace.
pub trait Coeff:
    Copy
    + Eq
    + Ord
    + Hash
    + Debug
    + Display
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// Descriptor used in serialized documents.
    const RING: &'static str;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(n: i64) -> Self;
    /// gcd of the integer coordinates (0 for zero).
    fn content(&self) -> i64;
    /// Exact division by a rational integer.
    fn div_int(&self, k: i64) -> Option<Self>;
    /// Integer coordinates in the ring's `Z`-basis.
    fn coords(&self) -> Vec<i64>;
    /// `self / d` when the quotient lies in the ring.
    fn checked_div(&self, d: &Self) -> Option<Self>;

    fn is_zero(&self) -> bool {
        *self == Self::zero()
    }
}

impl Coeff for i64 {
    const RING: &'static str = "Z";

    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn from_int(n: i64) -> Self {
        n
    }
    fn content(&self) -> i64 {
        self.abs()
    }
    fn div_int(&self, k: i64) -> Option<Self> {
        if k == 0 || self % k != 0 {
            None
        } else {
            Some(self / k)
        }
    }
    fn coords(&self) -> Vec<i64> {
        vec![*self]
    }
    fn checked_div(&self, d: &Self) -> Option<Self> {
        self.div_int(*d)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("modulus {0} must be an odd prime greater than 2")]
    BadModulus(u64),
    #[error("{root} is not a square root of {target} modulo {modulus}")]
    BadRoot { root: u64, target: i64, modulus: u64 },
    #[error("reduction of Z[tau] coefficients needs a square root of 5 modulo {0}")]
    MissingSqrt5(u64),
    #[error("denominator {den} is not invertible modulo {modulus}")]
    DenominatorNotInvertible { den: i64, modulus: u64 },
}
