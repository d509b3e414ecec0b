//! Exact rational arithmetic and the small number-theory toolkit the
//! screening engine is built on.
//!
//! Every quantity that appears in a report is a [`Rational`]. Hot loops work
//! on integer numerators over a known common denominator instead, which is
//! still exact: `{ka/n}` is `(k·a mod n)/n`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An exact fraction, always stored in lowest terms with a positive
/// denominator. Serializes as the string `"num/den"`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        Ok(Rational(BigRational::new(numer.into(), denom)))
    }

    /// Builds `numer/denom` for a denominator known to be nonzero.
    pub(crate) fn ratio(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Self {
        Rational(BigRational::new(numer.into(), denom.into()))
    }

    pub fn from_integer(value: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(value.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    /// Converts to `u64` when the value is a nonnegative integer that fits.
    pub fn to_u64(&self) -> Option<u64> {
        if self.is_integer() {
            self.numer().to_u64()
        } else {
            None
        }
    }

    pub fn as_big_rational(&self) -> &BigRational {
        &self.0
    }
}

impl From<BigRational> for Rational {
    fn from(value: BigRational) -> Self {
        Rational(value)
    }
}

impl From<i64> for Rational {
    fn from(value: i64) -> Self {
        Rational::from_integer(value)
    }
}

impl From<u64> for Rational {
    fn from(value: u64) -> Self {
        Rational::from_integer(value)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Accepts `"num/den"` or a bare integer.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidInput(format!("not a rational: {s:?}"));
        match s.split_once('/') {
            Some((n, d)) => {
                let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
                let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
                Rational::new(n, d)
            }
            None => Ok(Rational::from_integer(
                BigInt::from_str(s).map_err(|_| bad())?,
            )),
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        // Only the canonical "num/den" spelling is accepted so that reports
        // re-serialize byte for byte.
        let parsed: Rational = s.parse().map_err(serde::de::Error::custom)?;
        if parsed.to_string() != s {
            return Err(serde::de::Error::custom(format!(
                "non-canonical rational {s:?}"
            )));
        }
        Ok(parsed)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl<'a> Neg for &'a Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

/// Fractional part `x − ⌊x⌋`, always in `[0, 1)`.
pub fn frac(x: &Rational) -> Rational {
    let floor = BigRational::from_integer(x.floor());
    Rational(&x.0 - floor)
}

/// Numerator of `{k·a/n}` over the denominator `n`.
#[inline]
pub(crate) fn frac_numer(k: u64, a: u64, n: u64) -> u64 {
    ((k as u128 * a as u128) % n as u128) as u64
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Least common multiple, failing instead of wrapping.
pub fn lcm(a: u64, b: u64) -> Result<u64> {
    if a == 0 || b == 0 {
        return Ok(0);
    }
    (a / gcd(a, b))
        .checked_mul(b)
        .ok_or_else(|| Error::Overflow(format!("lcm({a}, {b})")))
}

/// Distinct prime divisors of `n`, ascending. `n = 0` and `n = 1` have none.
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut primes = Vec::new();
    if n < 2 {
        return primes;
    }
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n % p == 0 {
            primes.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        primes.push(n);
    }
    primes
}

/// Coprimality test against a modulus whose prime divisors are known.
#[inline]
pub(crate) fn coprime_to(k: u64, primes: &[u64]) -> bool {
    primes.iter().all(|&p| k % p != 0)
}

/// The Möbius function, computed from the factorization of `n`.
pub fn mobius(n: u64) -> Result<i8> {
    if n == 0 {
        return Err(Error::InvalidInput("mobius is defined for n >= 1".into()));
    }
    let mut m = n;
    let mut sign = 1i8;
    for p in prime_divisors(n) {
        m /= p;
        if m % p == 0 {
            return Ok(0);
        }
        sign = -sign;
    }
    Ok(sign)
}

/// Smallest positive `j` such that `u + j·v` is prime to `n`.
///
/// Requires `gcd(u, v) = 1` and nonzero arguments; a suitable `j` then
/// always exists (the product of the primes of `n` not dividing `u` works),
/// so the scan is bounded by that product.
pub fn coprime_shift(u: i64, v: i64, n: i64) -> Result<u64> {
    if u == 0 || v == 0 || n == 0 {
        return Err(Error::InvalidInput(
            "coprime_shift needs nonzero u, v, n".into(),
        ));
    }
    let (bu, bv) = (BigInt::from(u), BigInt::from(v));
    if !bu.gcd(&bv).is_one() {
        return Err(Error::InvalidInput(format!("gcd({u}, {v}) != 1")));
    }
    let n_abs = n.unsigned_abs();
    let bound: u64 = prime_divisors(n_abs)
        .into_iter()
        .filter(|p| u.unsigned_abs() % p != 0)
        .product();
    let bn = BigInt::from(n_abs);
    for j in 1..=bound.max(1) {
        let value = &bu + &bv * BigInt::from(j);
        if value.gcd(&bn).is_one() {
            return Ok(j);
        }
    }
    Err(Error::Internal(format!(
        "no j <= {bound} makes {u} + j*{v} prime to {n}"
    )))
}

/// Compares `lhs_num/lhs_den` and `rhs_num/rhs_den` without division.
pub(crate) fn cmp_fractions(lhs_num: u128, lhs_den: u128, rhs_num: u128, rhs_den: u128) -> Ordering {
    (lhs_num * rhs_den).cmp(&(rhs_num * lhs_den))
}
