use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// A half-integer, stored as twice its value.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HalfInt {
    twice: i64,
}

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt { twice: 0 };
    pub const HALF: HalfInt = HalfInt { twice: 1 };
    pub const ONE: HalfInt = HalfInt { twice: 2 };

    pub const fn from_twice(twice: i64) -> Self {
        HalfInt { twice }
    }

    pub const fn from_int(n: i64) -> Self {
        HalfInt { twice: 2 * n }
    }

    pub const fn twice(self) -> i64 {
        self.twice
    }

    pub fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }

    pub fn abs(self) -> Self {
        HalfInt { twice: self.twice.abs() }
    }

    pub fn is_negative(self) -> bool {
        self.twice < 0
    }

    /// Dimension `2m + 1` of the spin-`m` irreducible.
    pub fn dim(self) -> usize {
        debug_assert!(self.twice >= 0);
        (self.twice + 1) as usize
    }

    /// True when `self - other` is an integer.
    pub fn same_parity(self, other: HalfInt) -> bool {
        (self.twice - other.twice) % 2 == 0
    }

    pub fn to_f64(self) -> f64 {
        self.twice as f64 / 2.0
    }

    /// Spins `lo, lo + 1, ..., hi` (inclusive), empty if `lo > hi`.
    pub fn range_step_one(lo: HalfInt, hi: HalfInt) -> impl Iterator<Item = HalfInt> {
        let (lo, hi) = (lo.twice, hi.twice);
        (0..).map(move |k| lo + 2 * k).take_while(move |&t| t <= hi).map(HalfInt::from_twice)
    }

    /// Spins `0, 1/2, 1, ..., hi`.
    pub fn spins_up_to(hi: HalfInt) -> impl Iterator<Item = HalfInt> {
        (0..=hi.twice.max(-1)).map(HalfInt::from_twice)
    }
}

impl Ord for HalfInt {
    fn cmp(&self, other: &Self) -> Ordering {
        self.twice.cmp(&other.twice)
    }
}

impl PartialOrd for HalfInt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
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

impl From<i64> for HalfInt {
    fn from(n: i64) -> Self {
        HalfInt::from_int(n)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
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

    /// Accepts `3`, `-2`, `3/2`, `-1/2`, and decimal halves such as `1.5`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || Error::InvalidArgument(format!("not a half-integer: {s:?}"));
        if let Some((n, d)) = s.split_once('/') {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            match d.trim() {
                "2" => Ok(HalfInt::from_twice(n)),
                "1" => Ok(HalfInt::from_int(n)),
                _ => Err(bad()),
            }
        } else if let Ok(n) = s.parse::<i64>() {
            Ok(HalfInt::from_int(n))
        } else {
            let x: f64 = s.parse().map_err(|_| bad())?;
            let t = (2.0 * x).round();
            if (2.0 * x - t).abs() > 1e-12 {
                return Err(bad());
            }
            Ok(HalfInt::from_twice(t as i64))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        for s in ["0", "1/2", "-3/2", "4"] {
            let h: HalfInt = s.parse().unwrap();
            assert_eq!(h.to_string(), s);
        }
        assert_eq!("1.5".parse::<HalfInt>().unwrap(), HalfInt::from_twice(3));
        assert!("1/3".parse::<HalfInt>().is_err());
        assert!("0.3".parse::<HalfInt>().is_err());
    }

    #[test]
    fn parity_and_ranges() {
        let h = HalfInt::from_twice(3);
        assert!(!h.is_integer());
        assert!(h.same_parity(HalfInt::HALF));
        assert!(!h.same_parity(HalfInt::ONE));
        let v: Vec<_> = HalfInt::range_step_one(HalfInt::HALF, HalfInt::from_twice(5)).collect();
        assert_eq!(v, vec![HalfInt::from_twice(1), HalfInt::from_twice(3), HalfInt::from_twice(5)]);
        assert_eq!(HalfInt::spins_up_to(HalfInt::ONE).count(), 3);
    }
}
