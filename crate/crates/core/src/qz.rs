//! Exact arithmetic in ℚ/ℤ, the additive model of the torsion of 𝕜ˣ.
//!
//! An element `a/b` stands for the root of unity `exp(2πi·a/b)`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseQzError {
    #[error("empty fraction")]
    Empty,
    #[error("malformed fraction {0:?}")]
    Malformed(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

/// An element of ℚ/ℤ in canonical reduced form: `0 <= num < den`, `gcd(num, den) = 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct QZ {
    num: u64,
    den: u64,
}

impl QZ {
    pub const ZERO: QZ = QZ { num: 0, den: 1 };

    /// The class of `num/den` modulo 1.
    ///
    /// # Panics
    /// If `den == 0`.
    pub fn new(num: i64, den: u64) -> QZ {
        assert!(den != 0, "zero denominator");
        let r = num.rem_euclid(den as i64) as u64;
        let g = r.gcd(&den);
        QZ { num: r / g, den: den / g }
    }

    fn from_wide(num: i128, den: u128) -> QZ {
        let r = num.rem_euclid(den as i128) as u128;
        let g = r.gcd(&den);
        QZ {
            num: (r / g) as u64,
            den: (den / g) as u64,
        }
    }

    pub fn numerator(&self) -> u64 {
        self.num
    }

    /// The denominator, which is also the order of the element.
    pub fn denominator(&self) -> u64 {
        self.den
    }

    pub fn order(&self) -> u64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// Write `self` as `k/level`. Returns `None` when the order does not divide `level`.
    pub fn at_level(&self, level: u64) -> Option<u64> {
        if level.is_multiple_of(self.den) {
            Some(self.num * (level / self.den))
        } else {
            None
        }
    }

    pub fn times(&self, k: i64) -> QZ {
        QZ::from_wide(self.num as i128 * k as i128, self.den as u128)
    }
}

impl Default for QZ {
    fn default() -> Self {
        QZ::ZERO
    }
}

impl Add for QZ {
    type Output = QZ;
    fn add(self, rhs: QZ) -> QZ {
        let l = self.den.lcm(&rhs.den);
        let a = self.num as u128 * (l / self.den) as u128 + rhs.num as u128 * (l / rhs.den) as u128;
        QZ::from_wide(a as i128, l as u128)
    }
}

impl AddAssign for QZ {
    fn add_assign(&mut self, rhs: QZ) {
        *self = *self + rhs;
    }
}

impl Neg for QZ {
    type Output = QZ;
    fn neg(self) -> QZ {
        if self.num == 0 {
            self
        } else {
            QZ {
                num: self.den - self.num,
                den: self.den,
            }
        }
    }
}

impl Sub for QZ {
    type Output = QZ;
    fn sub(self, rhs: QZ) -> QZ {
        self + (-rhs)
    }
}

impl SubAssign for QZ {
    fn sub_assign(&mut self, rhs: QZ) {
        *self = *self - rhs;
    }
}

impl Mul<QZ> for i64 {
    type Output = QZ;
    fn mul(self, rhs: QZ) -> QZ {
        rhs.times(self)
    }
}

impl std::iter::Sum for QZ {
    fn sum<I: Iterator<Item = QZ>>(iter: I) -> QZ {
        iter.fold(QZ::ZERO, |a, b| a + b)
    }
}

/// Ordered by the representative in `[0, 1)`.
impl Ord for QZ {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128)
            .cmp(&(other.num as u128 * self.den as u128))
            .then(self.den.cmp(&other.den))
    }
}

impl PartialOrd for QZ {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for QZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num == 0 {
            write!(f, "0")
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl fmt::Debug for QZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QZ({self})")
    }
}

impl FromStr for QZ {
    type Err = ParseQzError;

    /// Accepts `a/b` or a bare integer `a` (which is `0` in ℚ/ℤ). Negative numerators are reduced.
    fn from_str(s: &str) -> Result<QZ, ParseQzError> {
        let s = s.trim();
        if s.is_empty() {
            return Err(ParseQzError::Empty);
        }
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num: i64 = n.parse().map_err(|_| ParseQzError::Malformed(s.to_string()))?;
        let den: u64 = d.parse().map_err(|_| ParseQzError::Malformed(s.to_string()))?;
        if den == 0 {
            return Err(ParseQzError::ZeroDenominator(s.to_string()));
        }
        Ok(QZ::new(num, den))
    }
}

impl Serialize for QZ {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for QZ {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<QZ, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
