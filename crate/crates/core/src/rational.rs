//! Exact rational helpers shared by every module.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `3`, `-1/2`, `0.5` or `1/16` into an exact rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let s = text.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().ok()?;
        let d: BigInt = den.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let negative = whole.trim_start().starts_with('-');
        let w: BigInt = match whole.trim() {
            "" | "-" | "+" => BigInt::zero(),
            t => t.parse().ok()?,
        };
        let f: BigInt = frac.parse().ok()?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let magnitude = w.abs() * &scale + f;
        let n = if negative { -magnitude } else { magnitude };
        return Some(Rational::new(n, scale));
    }
    s.parse::<BigInt>().ok().map(Rational::from_integer)
}

pub fn is_integral(q: &Rational) -> bool {
    q.denom().is_one()
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values.into_iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

/// Ordinary binomial coefficient for `0 <= k`, zero when `n < k`.
pub fn binomial(n: i64, k: i64) -> i64 {
    if k < 0 || n < k {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1i64, |acc, i| acc * (n - i) / (i + 1))
}

/// Wire form of a rational: numerator and denominator as decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalJson {
    pub n: String,
    pub d: String,
}

impl From<&Rational> for RationalJson {
    fn from(q: &Rational) -> Self {
        RationalJson {
            n: q.numer().to_string(),
            d: q.denom().to_string(),
        }
    }
}

impl TryFrom<&RationalJson> for Rational {
    type Error = crate::Error;

    fn try_from(value: &RationalJson) -> crate::Result<Self> {
        let bad = |msg: &str| crate::Error::InvalidInput(msg.to_string());
        let n: BigInt = value.n.parse().map_err(|_| bad("bad numerator"))?;
        let d: BigInt = value.d.parse().map_err(|_| bad("bad denominator"))?;
        if d.is_zero() {
            return Err(bad("zero denominator"));
        }
        Ok(Rational::new(n, d))
    }
}

/// `(m^3 - m) / 6`, i.e. `binom(m + 1, 3)` read as a polynomial in `m`.
pub fn cubic_binomial(m: i64) -> i64 {
    (m * m * m - m) / 6
}

pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}
