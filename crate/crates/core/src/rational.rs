//! Exact rationals and their JSON form.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

pub type Rational = num_rational::BigRational;

/// Bound on numerators and denominators of sampled rationals.
pub const SAMPLE_BOUND: i64 = 97;

/// Default seed for every randomized check.
pub const DEFAULT_SEED: u64 = 0x0B01_21A7;

pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// A rational `n/d` with `n, d` drawn uniformly from `[-97, 97] \ {0}`.
pub fn random_nonzero<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    frac(nonzero_int(rng), nonzero_int(rng))
}

/// Positive variant of [`random_nonzero`].
pub fn random_positive<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    random_nonzero(rng).abs()
}

fn nonzero_int<R: Rng + ?Sized>(rng: &mut R) -> i64 {
    loop {
        let v = rng.gen_range(-SAMPLE_BOUND..=SAMPLE_BOUND);
        if v != 0 {
            return v;
        }
    }
}

/// Lossless JSON form: `{"n": "<int>", "d": "<int>"}` with `d > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalJson {
    pub n: String,
    pub d: String,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RationalParseError {
    #[error("`{0}` is not an integer")]
    NotInteger(String),
    #[error("zero denominator")]
    ZeroDenominator,
}

impl From<&Rational> for RationalJson {
    fn from(r: &Rational) -> Self {
        RationalJson {
            n: r.numer().to_string(),
            d: r.denom().to_string(),
        }
    }
}

impl TryFrom<&RationalJson> for Rational {
    type Error = RationalParseError;

    fn try_from(j: &RationalJson) -> Result<Self, Self::Error> {
        let n: BigInt =
            j.n.trim()
                .parse()
                .map_err(|_| RationalParseError::NotInteger(j.n.clone()))?;
        let d: BigInt =
            j.d.trim()
                .parse()
                .map_err(|_| RationalParseError::NotInteger(j.d.clone()))?;
        if d.is_zero() {
            return Err(RationalParseError::ZeroDenominator);
        }
        Ok(Rational::new(n, d))
    }
}

/// Parses `"p"` or `"p/q"`.
pub fn parse_rational(s: &str) -> Result<Rational, RationalParseError> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    Rational::try_from(&RationalJson {
        n: n.to_string(),
        d: d.to_string(),
    })
}

/// `serde(with = ...)` adapter for a single rational.
pub mod serde_rational {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        RationalJson::from(r).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let j = RationalJson::deserialize(d)?;
        Rational::try_from(&j).map_err(serde::de::Error::custom)
    }
}

/// `serde(with = ...)` adapter for a vector of rationals.
pub mod serde_rational_vec {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(RationalJson::from)
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        Vec::<RationalJson>::deserialize(d)?
            .iter()
            .map(|j| Rational::try_from(j).map_err(serde::de::Error::custom))
            .collect()
    }
}
