//! Arbitrary-precision rationals and their text/JSON forms.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

/// Exact rational scalar. Always kept in lowest terms with a positive denominator.
pub type Rat = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse rational from {0:?}")]
pub struct ParseRatError(pub String);

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_big(n: BigInt) -> Rat {
    Rat::from_integer(n)
}

pub fn rvec(xs: &[i64]) -> Vec<Rat> {
    xs.iter().map(|&x| rat(x)).collect()
}

/// Parses `"3"`, `"-3/4"` or a plain decimal such as `"0.25"`.
pub fn parse_rat(s: &str) -> Result<Rat, ParseRatError> {
    let t = s.trim();
    let err = || ParseRatError(s.to_string());
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| err())?;
        let d: BigInt = d.trim().parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Rat::new(n, d));
    }
    if let Some((ip, fp)) = t.split_once('.') {
        let neg = ip.starts_with('-');
        let ip = ip.trim_start_matches(['-', '+']);
        if fp.is_empty() || !fp.chars().all(|c| c.is_ascii_digit()) {
            return Err(err());
        }
        let whole: BigInt = if ip.is_empty() { BigInt::zero() } else { ip.parse().map_err(|_| err())? };
        let frac: BigInt = fp.parse().map_err(|_| err())?;
        let scale = num_traits::pow(BigInt::from(10), fp.len());
        let v = Rat::new(whole * &scale + frac, scale);
        return Ok(if neg { -v } else { v });
    }
    let n: BigInt = t.parse().map_err(|_| err())?;
    Ok(Rat::from_integer(n))
}

/// Canonical text form: `"n"` for integers, `"n/d"` otherwise.
pub fn fmt_rat(r: &Rat) -> String {
    r.to_string()
}

pub fn fmt_vec(v: &[Rat]) -> String {
    let parts: Vec<String> = v.iter().map(fmt_rat).collect();
    format!("({})", parts.join(","))
}

/// Scales a vector to coprime integers, keeping signs.
/// The zero vector is returned unchanged.
pub fn primitive_integer(v: &[Rat]) -> Vec<BigInt> {
    use num_integer::Integer;
    let mut l = BigInt::one();
    for x in v {
        l = l.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rat::from_integer(l.clone())).to_integer()).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| if x.is_zero() || y.is_zero() { acc } else { acc + x * y })
}

pub fn is_nonneg(x: &Rat) -> bool {
    !x.is_negative()
}

/// Wrapper that prints a rational in canonical text form.
pub struct Show<'a>(pub &'a Rat);

impl fmt::Display for Show<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Serde adapters storing rationals as `"num/den"` strings.
pub mod serde_rat {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rat(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        parse_rat(&s).map_err(serde::de::Error::custom)
    }
}

pub mod serde_rat_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rat], s: S) -> Result<S::Ok, S::Error> {
        let strs: Vec<String> = v.iter().map(fmt_rat).collect();
        strs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rat>, D::Error> {
        let strs = Vec::<String>::deserialize(d)?;
        strs.iter().map(|x| parse_rat(x).map_err(serde::de::Error::custom)).collect()
    }
}

pub mod serde_rat_vecs {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Vec<Rat>], s: S) -> Result<S::Ok, S::Error> {
        let strs: Vec<Vec<String>> = v.iter().map(|r| r.iter().map(fmt_rat).collect()).collect();
        strs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Rat>>, D::Error> {
        let strs = Vec::<Vec<String>>::deserialize(d)?;
        strs.iter().map(|r| r.iter().map(|x| parse_rat(x).map_err(serde::de::Error::custom)).collect()).collect()
    }
}

pub mod serde_rat_map {
    use super::*;
    use std::collections::BTreeMap;

    pub fn serialize<S: Serializer>(m: &BTreeMap<String, Rat>, s: S) -> Result<S::Ok, S::Error> {
        let strs: BTreeMap<&String, String> = m.iter().map(|(k, v)| (k, fmt_rat(v))).collect();
        strs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<String, Rat>, D::Error> {
        let strs = BTreeMap::<String, String>::deserialize(d)?;
        strs.into_iter().map(|(k, v)| parse_rat(&v).map(|r| (k, r)).map_err(serde::de::Error::custom)).collect()
    }
}
