//! Gaussian rationals `a + b i` with `a, b` exact rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Scalar {
    pub re: Rat,
    pub im: Rat,
}

impl Scalar {
    pub fn new(re: Rat, im: Rat) -> Self {
        Scalar { re, im }
    }
    pub fn real(re: Rat) -> Self {
        Scalar { re, im: Rat::zero() }
    }
    pub fn int(n: i64) -> Self {
        Scalar::real(rat_int(n))
    }
    pub fn frac(n: i64, d: i64) -> Self {
        Scalar::real(rat(n, d))
    }
    pub fn i() -> Self {
        Scalar { re: Rat::zero(), im: Rat::one() }
    }
    /// i^k for any integer k.
    pub fn i_pow(k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => Scalar::one(),
            1 => Scalar::i(),
            2 => Scalar::int(-1),
            _ => -Scalar::i(),
        }
    }
    pub fn conj(&self) -> Self {
        Scalar { re: self.re.clone(), im: -self.im.clone() }
    }
    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }
    pub fn norm_sq(&self) -> Rat {
        &self.re * &self.re + &self.im * &self.im
    }
    pub fn inv(&self) -> Self {
        let n = self.norm_sq();
        assert!(!n.is_zero(), "division by zero scalar");
        Scalar { re: &self.re / &n, im: -(&self.im / &n) }
    }
    pub fn scale(&self, r: &Rat) -> Self {
        Scalar { re: &self.re * r, im: &self.im * r }
    }
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar { re: Rat::zero(), im: Rat::zero() }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar { re: Rat::one(), im: Rat::zero() }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        Scalar { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}
impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        Scalar { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}
impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        if self.im.is_zero() && o.im.is_zero() {
            return Scalar::real(&self.re * &o.re);
        }
        Scalar {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}
impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, o: &Scalar) -> Scalar {
        if o.im.is_zero() {
            return Scalar { re: &self.re / &o.re, im: &self.im / &o.re };
        }
        self * &o.inv()
    }
}

macro_rules! owned_ops {
    ($tr:ident, $f:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $f(self, o: Scalar) -> Scalar {
                (&self).$f(&o)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $f(self, o: &Scalar) -> Scalar {
                (&self).$f(o)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);
owned_ops!(Div, div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: -self.re, im: -self.im }
    }
}
impl<'a> Neg for &'a Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: -self.re.clone(), im: -self.im.clone() }
    }
}
impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        self.re += &o.re;
        if !o.im.is_zero() {
            self.im += &o.im;
        }
    }
}
impl AddAssign<Scalar> for Scalar {
    fn add_assign(&mut self, o: Scalar) {
        *self += &o;
    }
}
impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, o: &Scalar) {
        self.re -= &o.re;
        if !o.im.is_zero() {
            self.im -= &o.im;
        }
    }
}
impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, o: &Scalar) {
        *self = &*self * o;
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}
impl From<Rat> for Scalar {
    fn from(r: Rat) -> Self {
        Scalar::real(r)
    }
}

pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Debug, thiserror::Error, PartialEq)]
#[error("cannot parse {0:?} as a rational")]
pub struct ParseError(pub String);

pub fn parse_rat(s: &str) -> Result<Rat, ParseError> {
    let t = s.trim();
    let err = || ParseError(s.to_string());
    if let Some((n, d)) = t.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| err())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        Ok(BigRational::new(n, d))
    } else {
        Ok(BigRational::from_integer(BigInt::from_str(t).map_err(|_| err())?))
    }
}

/// Canonical text: `p/q` when real, otherwise `p/q+r/s*i`.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", fmt_rat(&self.re));
        }
        let sign = if self.im.is_negative() { "-" } else { "+" };
        write!(f, "{}{}{}*i", fmt_rat(&self.re), sign, fmt_rat(&self.im.abs()))
    }
}

impl FromStr for Scalar {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, ParseError> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let Some(body) = t.strip_suffix("*i") else {
            return Ok(Scalar::real(parse_rat(&t)?));
        };
        // split at the last sign that is not the leading one
        let cut = body
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(k, _)| k)
            .last();
        match cut {
            Some(k) => {
                let re = parse_rat(&body[..k])?;
                let im_txt = &body[k..];
                let im = parse_rat(im_txt.strip_prefix('+').unwrap_or(im_txt))?;
                Ok(Scalar::new(re, im))
            }
            None => Ok(Scalar::new(Rat::zero(), parse_rat(body)?)),
        }
    }
}

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
