//! Identifier and fixed-point quantity types shared by every module.
//!
//! Distances and travel costs are integers in thousandths (millimeters for
//! distances), so that shortest-path sums and route totals are exact and
//! independent of summation order.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Sub};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Road-network node identifier (OSM ids are numeric).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u64);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for NodeId {
    type Err = std::num::ParseIntError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.trim().parse().map(NodeId)
    }
}

impl From<u64> for NodeId {
    fn from(v: u64) -> Self {
        NodeId(v)
    }
}

macro_rules! fixed_point {
    ($name:ident, $doc:literal) => {
        #[doc = $doc]
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
        pub struct $name(i64);

        impl $name {
            pub const ZERO: $name = $name(0);

            /// Rounds a real value to the nearest thousandth.
            pub fn from_f64(value: f64) -> Self {
                $name((value * 1000.0).round() as i64)
            }

            pub const fn from_milli(milli: i64) -> Self {
                $name(milli)
            }

            pub const fn milli(self) -> i64 {
                self.0
            }

            pub fn as_f64(self) -> f64 {
                self.0 as f64 / 1000.0
            }

            pub fn checked_add(self, rhs: Self) -> Option<Self> {
                self.0.checked_add(rhs.0).map($name)
            }
        }

        impl Add for $name {
            type Output = $name;
            fn add(self, rhs: $name) -> $name {
                $name(self.0 + rhs.0)
            }
        }

        impl AddAssign for $name {
            fn add_assign(&mut self, rhs: $name) {
                self.0 += rhs.0;
            }
        }

        impl Sub for $name {
            type Output = $name;
            fn sub(self, rhs: $name) -> $name {
                $name(self.0 - rhs.0)
            }
        }

        impl Sum for $name {
            fn sum<I: Iterator<Item = $name>>(iter: I) -> $name {
                iter.fold($name::ZERO, |a, b| a + b)
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let sign = if self.0 < 0 { "-" } else { "" };
                let abs = self.0.unsigned_abs();
                write!(f, "{}{}.{:03}", sign, abs / 1000, abs % 1000)
            }
        }

        impl Serialize for $name {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                s.serialize_f64(self.as_f64())
            }
        }

        impl<'de> Deserialize<'de> for $name {
            fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
                let v = f64::deserialize(d)?;
                if !v.is_finite() {
                    return Err(serde::de::Error::custom("non-finite fixed-point value"));
                }
                Ok($name::from_f64(v))
            }
        }
    };
}

fixed_point!(Distance, "Length in meters, stored as integer millimeters.");
fixed_point!(Cost, "Travel cost, stored as integer thousandths of a cost unit.");

impl Distance {
    pub fn from_meters(m: f64) -> Self {
        Distance::from_f64(m)
    }

    pub fn meters(self) -> f64 {
        self.as_f64()
    }

    /// Travel cost of this distance at `rate` cost units per meter.
    pub fn cost_at(self, rate_per_m: f64) -> Cost {
        Cost::from_milli((self.0 as f64 * rate_per_m).round() as i64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_is_fixed_three_decimals() {
        assert_eq!(Distance::from_meters(100.0).to_string(), "100.000");
        assert_eq!(Distance::from_meters(0.0125).to_string(), "0.013");
        assert_eq!(Cost::from_milli(-1500).to_string(), "-1.500");
    }

    #[test]
    fn json_round_trip_is_exact() {
        for mm in [0_i64, 1, 999, 1_234_567, 98_765_432_123] {
            let d = Distance::from_milli(mm);
            let text = serde_json::to_string(&d).unwrap();
            let back: Distance = serde_json::from_str(&text).unwrap();
            assert_eq!(back, d, "{text}");
        }
    }

    #[test]
    fn cost_rate_rounds_per_arc() {
        assert_eq!(Distance::from_meters(2.0).cost_at(1.0), Cost::from_f64(2.0));
        assert_eq!(Distance::from_meters(10.0).cost_at(0.25), Cost::from_f64(2.5));
    }
}
