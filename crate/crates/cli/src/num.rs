//! Nine-significant-digit numbers.
//!
//! Every number a report carries is rounded once, when the report is built,
//! so that printing and re-parsing it is lossless. Non-finite values travel
//! as the strings `"inf"`, `"-inf"` and `"nan"` because JSON has no spelling
//! for them.

use serde::de::{self, Deserializer, Visitor};
use serde::Serializer;
use std::fmt;

pub const SIGNIFICANT_DIGITS: usize = 9;

/// Round to nine significant digits. Non-finite input passes through.
pub fn round9(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().unwrap_or(x)
}

/// Text form used in CSV cells and human output.
///
/// Plain decimal for moderate magnitudes, exponent form otherwise. Both are
/// the shortest text that parses back to the rounded value.
pub fn fmt9(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let r = round9(x);
    if r == 0.0 {
        return "0".into();
    }
    let e = r.abs().log10().floor();
    if (-4.0..15.0).contains(&e) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

fn parse_special(s: &str) -> Option<f64> {
    match s {
        "inf" => Some(f64::INFINITY),
        "-inf" => Some(f64::NEG_INFINITY),
        "nan" => Some(f64::NAN),
        _ => None,
    }
}

/// Serde adapter for a single `f64` field.
pub mod sig9 {
    use super::*;

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_f64(round9(*x))
        } else {
            s.serialize_str(&fmt9(*x))
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        d.deserialize_any(F64Visitor)
    }
}

/// Serde adapter for `Vec<(f64, f64)>`.
pub mod sig9_pairs {
    use super::*;
    use serde::{Deserialize, Serialize};

    #[derive(Serialize, Deserialize)]
    struct Pair(#[serde(with = "sig9")] f64, #[serde(with = "sig9")] f64);

    pub fn serialize<S: Serializer>(v: &[(f64, f64)], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|&(a, b)| Pair(a, b)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<(f64, f64)>, D::Error> {
        let v: Vec<Pair> = Vec::deserialize(d)?;
        Ok(v.into_iter().map(|Pair(a, b)| (a, b)).collect())
    }
}

struct F64Visitor;

impl<'de> Visitor<'de> for F64Visitor {
    type Value = f64;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a number or one of \"inf\", \"-inf\", \"nan\"")
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<f64, E> {
        Ok(v)
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<f64, E> {
        Ok(v as f64)
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<f64, E> {
        Ok(v as f64)
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<f64, E> {
        parse_special(v).ok_or_else(|| E::invalid_value(de::Unexpected::Str(v), &self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_keeps_nine_digits() {
        assert_eq!(round9(std::f64::consts::PI), 3.14159265);
        assert_eq!(round9(-1.866254157123), -1.86625416);
        assert_eq!(round9(1.0e-300 / 3.0), 3.33333333e-301);
        assert_eq!(round9(0.0), 0.0);
        assert!(round9(f64::NAN).is_nan());
    }

    #[test]
    fn rounding_is_idempotent() {
        for &x in &[1.0 / 3.0, 2.0f64.sqrt(), -7.123456789e12, 6.02214076e23, 1.2345678949999e-7] {
            assert_eq!(round9(round9(x)), round9(x));
            assert_eq!(fmt9(x).parse::<f64>().unwrap(), round9(x));
        }
    }

    #[test]
    fn text_forms() {
        assert_eq!(fmt9(std::f64::consts::FRAC_PI_2), "1.57079633");
        assert_eq!(fmt9(0.0), "0");
        assert_eq!(fmt9(-2.5e-9), "-2.5e-9");
        assert_eq!(fmt9(1.0e20 / 3.0), "3.33333333e19");
        assert_eq!(fmt9(f64::INFINITY), "inf");
        assert_eq!(fmt9(f64::NEG_INFINITY), "-inf");
        assert_eq!(fmt9(f64::NAN), "nan");
    }
}
