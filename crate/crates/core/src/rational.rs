//! Exact nonnegative rationals for interval endpoints.
//!
//! Interval checks compare prime values against endpoints such as
//! `4(n+2)/3`, which is not representable in binary floating point. A
//! `Rational` stores the endpoint as a reduced numerator/denominator pair
//! and compares against integers by cross multiplication in `u128`, so no
//! comparison is ever subject to rounding.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A nonnegative rational in lowest terms with a nonzero denominator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rational {
    num: u64,
    den: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Rational {
    /// Builds `num/den` reduced to lowest terms. `den` must be nonzero.
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidArgument("rational with zero denominator".into()));
        }
        let g = gcd(num, den);
        Ok(Rational {
            num: num / g.max(1),
            den: den / g.max(1),
        })
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    /// Smallest integer strictly greater than `self`.
    pub fn floor_plus_one(&self) -> u64 {
        self.num / self.den + 1
    }

    /// Smallest integer greater than or equal to `self`.
    pub fn ceil(&self) -> u64 {
        self.num.div_ceil(self.den)
    }

    /// Exact comparison against an integer.
    pub fn cmp_u64(&self, x: u64) -> Ordering {
        (self.num as u128).cmp(&(x as u128 * self.den as u128))
    }
}

impl From<u64> for Rational {
    fn from(n: u64) -> Self {
        Rational { num: n, den: 1 }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        // Denominators fit u64, so the cross products fit u128 exactly.
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_to_lowest_terms() {
        let r = Rational::new(16, 12).unwrap();
        assert_eq!((r.num(), r.den()), (4, 3));
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(Rational::new(1, 0).is_err());
    }

    #[test]
    fn ordering_is_exact() {
        // 16/3 = 5.333...: 5 < 16/3 < 6
        let r = Rational::new(16, 3).unwrap();
        assert_eq!(r.cmp_u64(5), Ordering::Greater);
        assert_eq!(r.cmp_u64(6), Ordering::Less);
        // Equality only when exact.
        assert_eq!(Rational::new(12, 3).unwrap().cmp_u64(4), Ordering::Equal);
    }

    #[test]
    fn floor_plus_one_and_ceil() {
        let r = Rational::new(16, 3).unwrap();
        assert_eq!(r.floor_plus_one(), 6);
        assert_eq!(r.ceil(), 6);
        let whole = Rational::from(4u64);
        assert_eq!(whole.floor_plus_one(), 5);
        assert_eq!(whole.ceil(), 4);
    }

    #[test]
    fn cross_comparison_avoids_overflow() {
        let a = Rational::new(u64::MAX, 3).unwrap();
        let b = Rational::new(u64::MAX, 4).unwrap();
        assert!(a > b);
    }
}
