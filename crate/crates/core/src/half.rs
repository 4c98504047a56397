//! Half-integer angular momenta stored as doubled integers.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use crate::error::Error;

/// A half-integer `j` stored exactly as `2j`.
///
/// Spins are nonnegative, but projections (m-values) and intermediate
/// differences may be negative, so the doubled value is signed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt {
    twice: i32,
}

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt { twice: 0 };

    /// Builds from the doubled value, so `from_twice(3)` is 3/2.
    pub const fn from_twice(twice: i32) -> Self {
        HalfInt { twice }
    }

    pub const fn from_int(n: i32) -> Self {
        HalfInt { twice: 2 * n }
    }

    pub const fn twice(self) -> i32 {
        self.twice
    }

    pub const fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }

    /// The integer value, if this half-integer is in fact an integer.
    pub const fn as_integer(self) -> Option<i32> {
        if self.twice % 2 == 0 {
            Some(self.twice / 2)
        } else {
            None
        }
    }

    pub const fn is_negative(self) -> bool {
        self.twice < 0
    }

    pub const fn abs(self) -> Self {
        HalfInt { twice: self.twice.abs() }
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt { twice: self.twice + rhs.twice }
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt { twice: self.twice - rhs.twice }
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt { twice: -self.twice }
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice % 2 == 0 {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

/// Parses `"3"`, `"-2"`, or `"5/2"`. Only halves are accepted as fractions.
impl FromStr for HalfInt {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::domain(format!("`{s}` is not an integer or half-integer"));
        match s.split_once('/') {
            None => {
                let n: i32 = s.trim().parse().map_err(|_| bad())?;
                Ok(HalfInt::from_int(n))
            }
            Some((num, den)) => {
                if den.trim() != "2" {
                    return Err(bad());
                }
                let n: i32 = num.trim().parse().map_err(|_| bad())?;
                Ok(HalfInt::from_twice(n))
            }
        }
    }
}
