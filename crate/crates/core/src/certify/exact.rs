use std::fmt;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Largest magnitude written as a JSON number; beyond it, a decimal string.
pub const JSON_SAFE_MAX: i128 = 1 << 53;

/// An exact integer that survives JSON readers limited to doubles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactInt(pub i128);

impl ExactInt {
    pub fn value(self) -> i128 {
        self.0
    }
}

impl From<u128> for ExactInt {
    fn from(n: u128) -> Self {
        ExactInt(i128::try_from(n).expect("count fits in i128"))
    }
}

impl From<i128> for ExactInt {
    fn from(n: i128) -> Self {
        ExactInt(n)
    }
}

impl From<u64> for ExactInt {
    fn from(n: u64) -> Self {
        ExactInt(n as i128)
    }
}

impl fmt::Display for ExactInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for ExactInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.abs() <= JSON_SAFE_MAX {
            s.serialize_i64(self.0 as i64)
        } else {
            s.serialize_str(&self.0.to_string())
        }
    }
}

struct ExactVisitor;

impl<'de> Visitor<'de> for ExactVisitor {
    type Value = ExactInt;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an integer or a decimal string")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<ExactInt, E> {
        Ok(ExactInt(v as i128))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<ExactInt, E> {
        Ok(ExactInt(v as i128))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<ExactInt, E> {
        v.parse::<i128>().map(ExactInt).map_err(E::custom)
    }
}

impl<'de> Deserialize<'de> for ExactInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(ExactVisitor)
    }
}
