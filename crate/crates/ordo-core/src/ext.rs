//! Extended reals: finite values plus both infinities, totally ordered.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Sub};
use std::str::FromStr;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

/// A real number or one of the two infinities. NaN is unrepresentable.
#[derive(Clone, Copy, PartialEq)]
pub struct ExtendedValue(f64);

impl ExtendedValue {
    pub const NEG_INF: Self = Self(f64::NEG_INFINITY);
    pub const POS_INF: Self = Self(f64::INFINITY);
    pub const ZERO: Self = Self(0.0);
    pub const ONE: Self = Self(1.0);

    /// Returns `None` for NaN.
    pub fn new(x: f64) -> Option<Self> {
        if x.is_nan() {
            None
        } else {
            Some(Self(x))
        }
    }

    /// Panics on NaN.
    pub fn finite(x: f64) -> Self {
        Self::new(x).expect("NaN is not an extended value")
    }

    pub fn from_count(c: usize) -> Self {
        Self(c as f64)
    }

    pub fn get(self) -> f64 {
        self.0
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    pub fn is_pos_inf(self) -> bool {
        self.0 == f64::INFINITY
    }

    pub fn is_neg_inf(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }

    /// Finite integral value, if any.
    pub fn as_integer(self) -> Option<i64> {
        (self.0.is_finite() && self.0.fract() == 0.0).then_some(self.0 as i64)
    }

    /// Saturating difference used for bound duality: `POS_INF - x = POS_INF`
    /// for every `x` that is not `POS_INF`, and `x - NEG_INF = POS_INF`.
    pub fn minus(self, rhs: Self) -> Self {
        if rhs.is_neg_inf() || self.is_pos_inf() {
            Self::POS_INF
        } else {
            Self(self.0 - rhs.0)
        }
    }
}

impl Eq for ExtendedValue {}

impl PartialOrd for ExtendedValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtendedValue {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.partial_cmp(&other.0).expect("no NaN by construction")
    }
}

impl Add for ExtendedValue {
    type Output = Self;
    /// `NEG_INF + POS_INF` is `POS_INF`; arc weights never carry `NEG_INF`.
    fn add(self, rhs: Self) -> Self {
        if self.is_pos_inf() || rhs.is_pos_inf() {
            Self::POS_INF
        } else {
            Self(self.0 + rhs.0)
        }
    }
}

impl Sub for ExtendedValue {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.minus(rhs)
    }
}

impl std::iter::Sum for ExtendedValue {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, Add::add)
    }
}

impl From<u32> for ExtendedValue {
    fn from(x: u32) -> Self {
        Self(f64::from(x))
    }
}

impl From<i32> for ExtendedValue {
    fn from(x: i32) -> Self {
        Self(f64::from(x))
    }
}

impl fmt::Debug for ExtendedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for ExtendedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_pos_inf() {
            f.write_str("inf")
        } else if self.is_neg_inf() {
            f.write_str("-inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid extended value `{0}`")]
pub struct ParseExtendedError(pub String);

impl FromStr for ExtendedValue {
    type Err = ParseExtendedError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "inf" | "+inf" => Ok(Self::POS_INF),
            "-inf" => Ok(Self::NEG_INF),
            t => t
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .map(Self)
                .ok_or_else(|| ParseExtendedError(s.to_string())),
        }
    }
}

impl Serialize for ExtendedValue {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        if self.is_pos_inf() {
            ser.serialize_str("inf")
        } else if self.is_neg_inf() {
            ser.serialize_str("-inf")
        } else if let Some(i) = self.as_integer() {
            ser.serialize_i64(i)
        } else {
            ser.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for ExtendedValue {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = ExtendedValue;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number, \"inf\" or \"-inf\"")
            }
            fn visit_f64<E: de::Error>(self, x: f64) -> Result<ExtendedValue, E> {
                ExtendedValue::new(x).ok_or_else(|| E::custom("NaN"))
            }
            fn visit_i64<E: de::Error>(self, x: i64) -> Result<ExtendedValue, E> {
                Ok(ExtendedValue(x as f64))
            }
            fn visit_u64<E: de::Error>(self, x: u64) -> Result<ExtendedValue, E> {
                Ok(ExtendedValue(x as f64))
            }
            fn visit_str<E: de::Error>(self, s: &str) -> Result<ExtendedValue, E> {
                s.parse().map_err(E::custom)
            }
        }
        de.deserialize_any(V)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinities_bracket_every_finite() {
        let xs = [-1e300, -3.5, 0.0, 2.0, 1e300];
        for x in xs {
            let v = ExtendedValue::finite(x);
            assert!(ExtendedValue::NEG_INF < v && v < ExtendedValue::POS_INF);
        }
    }

    #[test]
    fn addition_absorbs_positive_infinity() {
        let two = ExtendedValue::from(2);
        assert_eq!(two + ExtendedValue::POS_INF, ExtendedValue::POS_INF);
        assert_eq!(ExtendedValue::POS_INF + ExtendedValue::POS_INF, ExtendedValue::POS_INF);
        assert_eq!(two + two, ExtendedValue::from(4));
    }

    #[test]
    fn minus_saturates() {
        let three = ExtendedValue::from(3);
        assert_eq!(three.minus(ExtendedValue::NEG_INF), ExtendedValue::POS_INF);
        assert_eq!(ExtendedValue::POS_INF.minus(three), ExtendedValue::POS_INF);
        assert_eq!(three.minus(ExtendedValue::ONE), ExtendedValue::from(2));
    }

    #[test]
    fn parse_and_serde_round_trip() {
        for s in ["inf", "-inf", "0", "2.5", "-3"] {
            let v: ExtendedValue = s.parse().unwrap();
            let j = serde_json::to_string(&v).unwrap();
            let back: ExtendedValue = serde_json::from_str(&j).unwrap();
            assert_eq!(v, back);
        }
        assert!("nan".parse::<ExtendedValue>().is_err());
        assert!("x".parse::<ExtendedValue>().is_err());
    }
}
