//! Fixed-point decimal values with one fractional digit.
//!
//! Profits, costs and budgets are stored as integer tenths so that solver
//! arithmetic and comparisons are exact. `"3.6"` parses to `Tenths(36)` and
//! formats back to `"3.6"`.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Sub};
use std::str::FromStr;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tenths(pub i64);

impl Tenths {
    pub const ZERO: Tenths = Tenths(0);

    pub const fn new(tenths: i64) -> Self {
        Tenths(tenths)
    }

    pub const fn get(self) -> i64 {
        self.0
    }

    pub fn is_negative(self) -> bool {
        self.0 < 0
    }

    /// Decimal rendering with a mandatory single fractional digit.
    pub fn to_decimal_string(self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Tenths {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.0 < 0 { "-" } else { "" };
        let abs = self.0.unsigned_abs();
        write!(f, "{}{}.{}", sign, abs / 10, abs % 10)
    }
}

impl FromStr for Tenths {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || Error::Decimal(s.to_string());
        let trimmed = s.trim();
        let (negative, body) = match trimmed.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, trimmed.strip_prefix('+').unwrap_or(trimmed)),
        };
        let (int_part, frac_part) = match body.split_once('.') {
            Some((i, f)) => (i, Some(f)),
            None => (body, None),
        };
        if int_part.is_empty() || !int_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let frac_digit = match frac_part {
            None => 0,
            Some(f) if f.len() == 1 && f.as_bytes()[0].is_ascii_digit() => i64::from(f.as_bytes()[0] - b'0'),
            Some(_) => return Err(bad()),
        };
        let whole: i64 = int_part.parse().map_err(|_| bad())?;
        let magnitude = whole
            .checked_mul(10)
            .and_then(|w| w.checked_add(frac_digit))
            .ok_or_else(bad)?;
        Ok(Tenths(if negative { -magnitude } else { magnitude }))
    }
}

impl From<i64> for Tenths {
    fn from(tenths: i64) -> Self {
        Tenths(tenths)
    }
}

impl Add for Tenths {
    type Output = Tenths;
    fn add(self, rhs: Tenths) -> Tenths {
        Tenths(self.0 + rhs.0)
    }
}

impl Sub for Tenths {
    type Output = Tenths;
    fn sub(self, rhs: Tenths) -> Tenths {
        Tenths(self.0 - rhs.0)
    }
}

impl Sum for Tenths {
    fn sum<I: Iterator<Item = Tenths>>(iter: I) -> Tenths {
        Tenths(iter.map(|t| t.0).sum())
    }
}

impl Serialize for Tenths {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Tenths {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct TenthsVisitor;

        impl Visitor<'_> for TenthsVisitor {
            type Value = Tenths;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a decimal string with at most one fractional digit")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Tenths, E> {
                v.parse().map_err(E::custom)
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Tenths, E> {
                i64::try_from(v)
                    .ok()
                    .and_then(|v| v.checked_mul(10))
                    .map(Tenths)
                    .ok_or_else(|| E::custom(format!("value out of range: {v}")))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Tenths, E> {
                v.checked_mul(10)
                    .map(Tenths)
                    .ok_or_else(|| E::custom(format!("value out of range: {v}")))
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Tenths, E> {
                // Floats only go through their shortest decimal rendering, so
                // 3.6 is read as "3.6" and anything finer is rejected.
                let text = format!("{v}");
                text.parse().map_err(E::custom)
            }
        }

        deserializer.deserialize_any(TenthsVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_table_values_exactly() {
        assert_eq!("3.6".parse::<Tenths>().unwrap(), Tenths(36));
        assert_eq!("17.5".parse::<Tenths>().unwrap(), Tenths(175));
        assert_eq!("19".parse::<Tenths>().unwrap(), Tenths(190));
        assert_eq!("0.0".parse::<Tenths>().unwrap(), Tenths(0));
        assert_eq!("-1.5".parse::<Tenths>().unwrap(), Tenths(-15));
    }

    #[test]
    fn rejects_excess_precision_and_garbage() {
        for bad in ["3.65", "", ".5", "1.", "abc", "1e3", "1.x", "--1"] {
            assert!(bad.parse::<Tenths>().is_err(), "{bad:?} should be rejected");
        }
    }

    #[test]
    fn formats_with_one_digit() {
        assert_eq!(Tenths(240).to_string(), "24.0");
        assert_eq!(Tenths(36).to_string(), "3.6");
        assert_eq!(Tenths(5).to_string(), "0.5");
        assert_eq!(Tenths(-5).to_string(), "-0.5");
    }

    #[test]
    fn json_numbers_and_strings() {
        let v: Vec<Tenths> = serde_json::from_str(r#"["3.6", 19, 17.5]"#).unwrap();
        assert_eq!(v, vec![Tenths(36), Tenths(190), Tenths(175)]);
        assert!(serde_json::from_str::<Tenths>("3.65").is_err());
        assert_eq!(serde_json::to_string(&Tenths(190)).unwrap(), "\"19.0\"");
    }

    proptest! {
        #[test]
        fn decimal_round_trip(t in -1_000_000i64..1_000_000) {
            let text = Tenths(t).to_string();
            prop_assert_eq!(text.parse::<Tenths>().unwrap(), Tenths(t));
        }
    }
}
