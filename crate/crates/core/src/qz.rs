//! Exact classes in `(Q/Z)` with denominator prime to `p`, and the Kubert
//! V-function evaluated through `p`-adic digit sums.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact rational used for every V and W value.
pub type Rational = num_rational::Ratio<i64>;

/// Iteration cap for [`mult_order`].
pub const ORDER_ITERATION_CAP: u64 = 1_000_000;

/// A rational prime, checked at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for Prime {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u64(self.0)
    }
}

impl<'de> Deserialize<'de> for Prime {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let p = u64::deserialize(d)?;
        Prime::new(p).map_err(serde::de::Error::custom)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut k = 3u64;
    while k.saturating_mul(k) <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 2;
    }
    true
}

/// An element `num/den` of `Q/Z`, always stored reduced with `0 <= num < den`.
///
/// Zero is stored as `0/1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QzClass {
    num: u64,
    den: u64,
}

impl QzClass {
    pub const ZERO: QzClass = QzClass { num: 0, den: 1 };

    /// Builds the class of `num/den` modulo 1. `num` may be negative or
    /// larger than `den`; it is reduced by true (non-negative) modulus.
    pub fn new(num: i128, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::ZeroDenominator);
        }
        let r = num.rem_euclid(den as i128) as u64;
        let g = r.gcd(&den);
        Ok(QzClass {
            num: r / g,
            den: den / g,
        })
    }

    /// Like [`QzClass::new`] but also checks that the reduced denominator is
    /// prime to `p`.
    pub fn for_prime(p: Prime, num: i128, den: u64) -> Result<Self> {
        let x = Self::new(num, den)?;
        x.check_prime(p)?;
        Ok(x)
    }

    /// `i/(p^r-1)` style constructor used by the searches; `den` must be
    /// nonzero.
    pub(crate) fn from_parts_unchecked(num: u64, den: u64) -> Self {
        let g = num.gcd(&den);
        if num == 0 {
            return Self::ZERO;
        }
        QzClass {
            num: num / g,
            den: den / g,
        }
    }

    pub fn check_prime(&self, p: Prime) -> Result<()> {
        if self.den.is_multiple_of(p.get()) {
            Err(Error::DenominatorDivisibleByP {
                p: p.get(),
                den: self.den,
            })
        } else {
            Ok(())
        }
    }

    #[inline]
    pub fn num(&self) -> u64 {
        self.num
    }

    #[inline]
    pub fn den(&self) -> u64 {
        self.den
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// The class of `-x`.
    pub fn negate(&self) -> QzClass {
        if self.num == 0 {
            *self
        } else {
            QzClass {
                num: self.den - self.num,
                den: self.den,
            }
        }
    }

    /// The class of `k * x`. The denominator of the result divides that of `x`.
    pub fn scale(&self, k: i64) -> QzClass {
        let den = self.den as i128;
        let prod = (self.num as i128 * (k as i128).rem_euclid(den)).rem_euclid(den);
        Self::from_parts_unchecked(prod as u64, self.den)
    }

    /// Sum of two classes.
    pub fn add(&self, other: &QzClass) -> QzClass {
        let l = self.den.lcm(&other.den) as u128;
        let a =
            self.num as u128 * (l / self.den as u128) + other.num as u128 * (l / other.den as u128);
        Self::from_parts_unchecked((a % l) as u64, l as u64)
    }

    pub fn sub(&self, other: &QzClass) -> QzClass {
        self.add(&other.negate())
    }
}

impl fmt::Display for QzClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for QzClass {
    type Err = Error;

    /// Accepts `num/den` or a bare integer, with an optional leading minus.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::MalformedFraction(s.to_string());
        let t = s.trim();
        let (neg, body) = match t.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, t),
        };
        let (n, d) = match body.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (body, "1"),
        };
        if n.is_empty() || n.starts_with(['+', '-']) || d.starts_with(['+', '-']) {
            return Err(bad());
        }
        let n: i128 = n.parse().map_err(|_| bad())?;
        let d: u64 = d.parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(Error::ZeroDenominator);
        }
        QzClass::new(if neg { -n } else { n }, d)
    }
}

impl Serialize for QzClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for QzClass {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Smallest `r >= 1` with `p^r = 1 (mod den)`.
pub fn mult_order(p: Prime, den: u64) -> Result<u64> {
    if den == 0 {
        return Err(Error::ZeroDenominator);
    }
    if den.is_multiple_of(p.get()) && den != 1 {
        return Err(Error::DenominatorDivisibleByP { p: p.get(), den });
    }
    if den == 1 {
        return Ok(1);
    }
    let m = den as u128;
    let base = p.get() as u128 % m;
    let mut acc = base;
    let mut r = 1u64;
    while acc != 1 {
        if r >= ORDER_ITERATION_CAP {
            return Err(Error::OrderCapExceeded {
                p: p.get(),
                den,
                cap: ORDER_ITERATION_CAP,
            });
        }
        acc = acc * base % m;
        r += 1;
    }
    Ok(r)
}

/// Sum of the base-`p` digits of `a`.
pub fn digit_sum(a: &BigUint, p: u64) -> u64 {
    if p <= 256 {
        a.to_radix_le(p as u32).iter().map(|&d| d as u64).sum()
    } else {
        let base = BigUint::from(p);
        let mut rest = a.clone();
        let mut s = 0u64;
        while !rest.is_zero() {
            let (q, r) = rest.div_rem(&base);
            s += r.to_u64().expect("digit below p");
            rest = q;
        }
        s
    }
}

/// Kubert's `V_p(x)`: for `x = a/(p^r - 1)` with `0 <= a < p^r - 1`, the
/// base-`p` digit sum of `a` divided by `r (p - 1)`.
pub fn kubert_v(p: Prime, x: &QzClass) -> Result<Rational> {
    x.check_prime(p)?;
    if x.is_zero() {
        return Ok(Rational::zero());
    }
    let r = mult_order(p, x.den)?;
    let modulus = BigUint::from(p.get()).pow(r as u32) - 1u32;
    let a = BigUint::from(x.num) * (&modulus / x.den);
    let s = digit_sum(&a, p.get());
    let denom = r * (p.get() - 1);
    Ok(Rational::new(s as i64, denom as i64))
}

/// Iterates the base-`p` digits of `a`, least significant first.
pub(crate) fn small_digit_sum(mut a: u64, p: u64) -> u64 {
    let mut s = 0;
    while a > 0 {
        s += a % p;
        a /= p;
    }
    s
}
