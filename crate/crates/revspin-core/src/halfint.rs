//! Exact half-integer arithmetic for spin quantum numbers.
//!
//! Spins and magnetic quantum numbers take values in (1/2)Z. Storing twice
//! the value as an `i32` keeps ladder bookkeeping (j + m, index offsets,
//! parities) exact; conversion to `f64` happens only at the boundary of
//! floating-point formulas.

use crate::error::{Error, Result};
use std::fmt;
use std::iter::FusedIterator;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

/// A half-integer, represented exactly by twice its value.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInt {
    twice: i32,
}

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt { twice: 0 };
    pub const HALF: HalfInt = HalfInt { twice: 1 };
    pub const ONE: HalfInt = HalfInt { twice: 2 };

    /// Construct from twice the value: `from_twice(3)` is 3/2.
    pub const fn from_twice(twice: i32) -> Self {
        HalfInt { twice }
    }

    pub const fn from_int(n: i32) -> Self {
        HalfInt { twice: 2 * n }
    }

    pub const fn twice(self) -> i32 {
        self.twice
    }

    pub fn value(self) -> f64 {
        f64::from(self.twice) / 2.0
    }

    pub const fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }

    pub const fn is_negative(self) -> bool {
        self.twice < 0
    }

    pub const fn abs(self) -> Self {
        HalfInt { twice: self.twice.abs() }
    }

    /// True when `self` is a valid magnetic quantum number of spin `j`:
    /// |self| <= j and j - self is an integer.
    pub fn is_projection_of(self, j: HalfInt) -> bool {
        j.twice >= 0 && self.twice.abs() <= j.twice && (j.twice - self.twice) % 2 == 0
    }

    /// Ladder dimension 2j+1. Meaningful for nonnegative spins.
    pub fn dim(self) -> usize {
        debug_assert!(self.twice >= 0);
        (self.twice + 1) as usize
    }

    /// Position of `self` in the descending ladder j, j-1, ..., -j.
    pub fn index_in(self, j: HalfInt) -> Option<usize> {
        if self.is_projection_of(j) {
            Some(((j.twice - self.twice) / 2) as usize)
        } else {
            None
        }
    }

    /// Magnetic quantum numbers of spin `self` in descending order.
    pub fn projections(self) -> Projections {
        Projections { next: self.twice, low: -self.twice }
    }

    pub(crate) fn require_spin(self) -> Result<Self> {
        if self.twice < 0 {
            Err(Error::NegativeSpin(self))
        } else {
            Ok(self)
        }
    }

    pub(crate) fn require_projection_of(self, j: HalfInt) -> Result<Self> {
        if self.is_projection_of(j) {
            Ok(self)
        } else {
            Err(Error::InvalidProjection { j, m: self })
        }
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

impl fmt::Debug for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for HalfInt {
    type Err = Error;

    /// Accepts `"3"`, `"-2"`, `"5/2"`, `"-7/2"`. The numerator of a `/2`
    /// form must be odd; even ones are written as plain integers.
    fn from_str(text: &str) -> Result<Self> {
        let bad = || Error::HalfIntParse(text.to_owned());
        if let Some(num) = text.strip_suffix("/2") {
            let n: i32 = num.parse().map_err(|_| bad())?;
            if n % 2 == 0 {
                return Err(bad());
            }
            Ok(HalfInt { twice: n })
        } else {
            let n: i32 = text.parse().map_err(|_| bad())?;
            n.checked_mul(2).map(|twice| HalfInt { twice }).ok_or_else(bad)
        }
    }
}

/// Descending iterator over the magnetic quantum numbers of a spin.
#[derive(Clone, Debug)]
pub struct Projections {
    next: i32,
    low: i32,
}

impl Iterator for Projections {
    type Item = HalfInt;

    fn next(&mut self) -> Option<HalfInt> {
        if self.next < self.low {
            return None;
        }
        let out = HalfInt { twice: self.next };
        self.next -= 2;
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = if self.next < self.low {
            0
        } else {
            ((self.next - self.low) / 2 + 1) as usize
        };
        (n, Some(n))
    }
}

impl ExactSizeIterator for Projections {}
impl FusedIterator for Projections {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_round_trip() {
        for text in ["0", "1", "-3", "1/2", "-1/2", "7/2", "-11/2", "17"] {
            let h: HalfInt = text.parse().unwrap();
            assert_eq!(h.to_string(), text);
            assert_eq!(h.to_string().parse::<HalfInt>().unwrap(), h);
        }
    }

    #[test]
    fn parse_rejects_malformed_input() {
        for text in ["", "2/2", "4/2", "1/3", "0.5", "half", "3/", "/2", "- 1", "++2"] {
            assert!(text.parse::<HalfInt>().is_err(), "accepted {text:?}");
        }
    }

    #[test]
    fn projections_descend_through_the_ladder() {
        let j: HalfInt = "3/2".parse().unwrap();
        let ms: Vec<i32> = j.projections().map(|m| m.twice()).collect();
        assert_eq!(ms, vec![3, 1, -1, -3]);
        assert_eq!(j.projections().len(), 4);
        assert_eq!(j.dim(), 4);
    }

    #[test]
    fn projection_membership_requires_matching_lattice() {
        let j = HalfInt::from_int(2);
        assert!(HalfInt::from_int(1).is_projection_of(j));
        assert!(!HalfInt::HALF.is_projection_of(j));
        assert!(!HalfInt::from_int(3).is_projection_of(j));
        assert!(HalfInt::from_twice(-3).is_projection_of(HalfInt::from_twice(5)));
    }

    #[test]
    fn ladder_index_is_descending() {
        let j = HalfInt::from_twice(5);
        assert_eq!(HalfInt::from_twice(5).index_in(j), Some(0));
        assert_eq!(HalfInt::from_twice(3).index_in(j), Some(1));
        assert_eq!(HalfInt::from_twice(-5).index_in(j), Some(5));
        assert_eq!(HalfInt::from_twice(4).index_in(j), None);
    }

    #[test]
    fn arithmetic_is_exact() {
        let a = HalfInt::from_twice(3);
        let b = HalfInt::HALF;
        assert_eq!((a + b).twice(), 4);
        assert_eq!((a - b).twice(), 2);
        assert_eq!((-a).twice(), -3);
        assert_eq!(a.abs(), a);
        assert_eq!((-a).abs(), a);
        assert_eq!(a.value(), 1.5);
    }
}
