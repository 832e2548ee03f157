//! Exact fractions for rates and capacities.

use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

/// A rational number kept in lowest terms with a positive denominator.
///
/// Serializes as the string `"n/d"` (or `"n"` when the denominator is 1) so
/// reports stay exact and readable.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rational {
    numer: i64,
    denom: i64,
}

impl Rational {
    /// Creates `numer/denom` reduced to lowest terms.
    ///
    /// # Panics
    /// Panics if `denom == 0`.
    #[must_use]
    pub fn new(numer: i64, denom: i64) -> Self {
        assert_ne!(denom, 0, "zero denominator");
        let sign = if denom < 0 { -1 } else { 1 };
        let g = gcd(numer.unsigned_abs(), denom.unsigned_abs()) as i64;
        Self {
            numer: sign * numer / g,
            denom: sign * denom / g,
        }
    }

    #[must_use]
    pub const fn one() -> Self {
        Self { numer: 1, denom: 1 }
    }

    #[must_use]
    pub const fn numer(&self) -> i64 {
        self.numer
    }

    #[must_use]
    pub const fn denom(&self) -> i64 {
        self.denom
    }

    #[must_use]
    pub fn is_one(&self) -> bool {
        self.numer == 1 && self.denom == 1
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if a == 0 && b == 0 {
        return 1;
    }
    let (mut a, mut b) = (a, b);
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        (i128::from(self.numer) * i128::from(other.denom))
            .cmp(&(i128::from(other.numer) * i128::from(self.denom)))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom == 1 {
            write!(f, "{}", self.numer)
        } else {
            write!(f, "{}/{}", self.numer, self.denom)
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Rational {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n, d),
            None => (s, "1"),
        };
        let numer: i64 = n
            .trim()
            .parse()
            .map_err(|_| format!("bad numerator in {s:?}"))?;
        let denom: i64 = d
            .trim()
            .parse()
            .map_err(|_| format!("bad denominator in {s:?}"))?;
        if denom == 0 {
            return Err(format!("zero denominator in {s:?}"));
        }
        Ok(Self::new(numer, denom))
    }
}

impl Serialize for Rational {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_to_lowest_terms() {
        assert_eq!(Rational::new(2, 16), Rational::new(1, 8));
        assert_eq!(Rational::new(4, 16).to_string(), "1/4");
        assert_eq!(Rational::new(-2, -4), Rational::new(1, 2));
        assert_eq!(Rational::new(3, -6).to_string(), "-1/2");
    }

    #[test]
    fn displays_integers_bare() {
        assert_eq!(Rational::new(5, 5).to_string(), "1");
        assert_eq!(Rational::new(0, 7).to_string(), "0");
    }

    #[test]
    fn parses_both_forms() {
        assert_eq!("3/16".parse::<Rational>().unwrap(), Rational::new(3, 16));
        assert_eq!("1".parse::<Rational>().unwrap(), Rational::one());
        assert!("1/0".parse::<Rational>().is_err());
    }

    #[test]
    fn orders_by_value() {
        assert!(Rational::new(2, 16) < Rational::new(3, 16));
        assert!(Rational::new(1, 8) < Rational::new(2, 5));
    }

    #[test]
    fn serde_round_trip() {
        let r = Rational::new(3, 14);
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(json, "\"3/14\"");
        assert_eq!(serde_json::from_str::<Rational>(&json).unwrap(), r);
    }
}
