//! Exact Gaussian-rational scalars: `a + b*i` with arbitrary-precision
//! rational `a` and `b`. This is the field every other module computes over.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// Arbitrary-precision rational, always reduced with positive denominator.
pub type Rational = num_rational::BigRational;

/// A Gaussian rational `re + im*i`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    pub re: Rational,
    pub im: Rational,
}

impl Scalar {
    pub fn new(re: Rational, im: Rational) -> Self {
        Scalar { re, im }
    }

    pub fn from_rational(re: Rational) -> Self {
        Scalar { re, im: Rational::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    /// `p/q` as a real scalar. Panics if `q == 0`.
    pub fn from_frac(p: i64, q: i64) -> Self {
        Scalar::from_rational(Rational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn i() -> Self {
        Scalar { re: Rational::zero(), im: Rational::one() }
    }

    pub fn conj(&self) -> Self {
        Scalar { re: self.re.clone(), im: -self.im.clone() }
    }

    /// `re^2 + im^2`, the exact squared modulus.
    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(Scalar { re: &self.re / &n, im: -&self.im / &n })
    }

    /// Canonical ordering key: lexicographic on `(re, im)`. Used wherever a
    /// deterministic eigenvalue order is needed.
    pub fn lex_cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.re.cmp(&other.re).then_with(|| self.im.cmp(&other.im))
    }

    pub fn zero() -> Self {
        Scalar::default()
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        Scalar { re: self.re + rhs.re, im: self.im + rhs.im }
    }
}

impl<'a> Add<&'a Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        Scalar { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        Scalar { re: self.re - rhs.re, im: self.im - rhs.im }
    }
}

impl<'a> Sub<&'a Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        Scalar { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        (&self).mul(&rhs)
    }
}

impl<'a> Mul<&'a Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        Scalar {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Div for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        let inv = rhs.inv().expect("division by zero scalar");
        (&self).mul(&inv)
    }
}

impl<'a> Div<&'a Scalar> for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &'a Scalar) -> Scalar {
        let inv = rhs.inv().expect("division by zero scalar");
        self.mul(&inv)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: -self.re, im: -self.im }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: -self.re.clone(), im: -self.im.clone() }
    }
}

impl AddAssign for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        self.re += rhs.re;
        self.im += rhs.im;
    }
}

impl SubAssign for Scalar {
    fn sub_assign(&mut self, rhs: Scalar) {
        self.re -= rhs.re;
        self.im -= rhs.im;
    }
}

impl MulAssign for Scalar {
    fn mul_assign(&mut self, rhs: Scalar) {
        *self = (&*self).mul(&rhs);
    }
}

fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    /// `"p/q"` for real values, `"p/q+r/ti"` otherwise; denominator 1 omitted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", fmt_rational(&self.re));
        }
        let im_part = if self.im.is_one() {
            "i".to_string()
        } else if (-self.im.clone()).is_one() {
            "-i".to_string()
        } else {
            format!("{}i", fmt_rational(&self.im))
        };
        if self.re.is_zero() {
            write!(f, "{im_part}")
        } else if im_part.starts_with('-') {
            write!(f, "{}{}", fmt_rational(&self.re), im_part)
        } else {
            write!(f, "{}+{}", fmt_rational(&self.re), im_part)
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn parse_rational(s: &str) -> Result<Rational, Error> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        Ok(Rational::new(p, q))
    } else {
        let p: BigInt = s.parse().map_err(|_| bad())?;
        Ok(Rational::from_integer(p))
    }
}

impl FromStr for Scalar {
    type Err = Error;

    /// Accepts `"3"`, `"-1/2"`, `"i"`, `"2i"`, `"1/2+3/4i"`, `"1/2 - 3/4 i"`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty scalar".into()));
        }
        // Split into at most two signed terms: a sign opens a new term unless
        // it is the leading sign of the current one.
        let mut terms: Vec<String> = Vec::new();
        let mut cur = String::new();
        for ch in compact.chars() {
            if (ch == '+' || ch == '-') && !cur.is_empty() && !cur.ends_with('/') {
                terms.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
        }
        terms.push(cur);
        if terms.len() > 2 {
            return Err(Error::Parse(format!("invalid scalar: {s:?}")));
        }
        let mut re = Rational::zero();
        let mut im = Rational::zero();
        let mut seen_re = false;
        let mut seen_im = false;
        for t in &terms {
            let (imaginary, body) = match t.strip_suffix('i') {
                Some(rest) => (true, rest),
                None => (false, t.as_str()),
            };
            let value = if imaginary && (body.is_empty() || body == "+" || body == "-") {
                let one = Rational::one();
                if body == "-" {
                    -one
                } else {
                    one
                }
            } else {
                let body = body.strip_prefix('+').unwrap_or(body);
                parse_rational(body)?
            };
            if imaginary {
                if seen_im {
                    return Err(Error::Parse(format!("invalid scalar: {s:?}")));
                }
                im = value;
                seen_im = true;
            } else {
                if seen_re {
                    return Err(Error::Parse(format!("invalid scalar: {s:?}")));
                }
                re = value;
                seen_re = true;
            }
        }
        Ok(Scalar { re, im })
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(|e| D::Error::custom(format!("{e}")))
    }
}

/// Exact binomial coefficient; zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for j in 0..k.min(n - k) {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

/// `lambda^k` as a scalar power with exact arithmetic.
pub fn scalar_pow(lambda: &Scalar, k: usize) -> Scalar {
    let mut acc = Scalar::one();
    for _ in 0..k {
        acc = (&acc).mul(lambda);
    }
    acc
}
