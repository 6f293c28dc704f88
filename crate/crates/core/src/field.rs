//! Exact scalar arithmetic over the rationals and over prime fields.
//!
//! Every computation in the crate fixes one [`FieldSpec`] and threads it
//! through explicitly; a [`Scalar`] is only meaningful relative to that
//! spec. Mixing scalars from different fields is a programming error and
//! panics rather than silently coercing.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::CoreError;

/// The ground field of a computation: the rationals or F_p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldSpec {
    Rationals,
    /// Prime field with the given characteristic.
    Prime(u64),
}

impl FieldSpec {
    /// Builds a prime-field spec, rejecting non-prime characteristics.
    pub fn prime(p: u64) -> Result<FieldSpec, CoreError> {
        if !is_prime(p) {
            return Err(CoreError::Arithmetic(format!(
                "{p} is not prime; prime fields require a prime characteristic"
            )));
        }
        Ok(FieldSpec::Prime(p))
    }

    /// 0 for the rationals, p for F_p.
    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rat(BigRational::zero()),
            FieldSpec::Prime(_) => Scalar::Fp(0),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rat(BigRational::one()),
            FieldSpec::Prime(_) => Scalar::Fp(1),
        }
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rat(BigRational::from_integer(BigInt::from(n))),
            FieldSpec::Prime(p) => Scalar::Fp(reduce_i64(n, *p)),
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Rationals, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
            (FieldSpec::Prime(p), Scalar::Fp(x), Scalar::Fp(y)) => {
                Scalar::Fp(((*x as u128 + *y as u128) % *p as u128) as u64)
            }
            _ => panic!("scalar/field mismatch in add"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Rationals, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
            (FieldSpec::Prime(p), Scalar::Fp(x), Scalar::Fp(y)) => {
                Scalar::Fp(((*x as u128 * *y as u128) % *p as u128) as u64)
            }
            _ => panic!("scalar/field mismatch in mul"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (FieldSpec::Rationals, Scalar::Rat(x)) => Scalar::Rat(-x),
            (FieldSpec::Prime(p), Scalar::Fp(x)) => Scalar::Fp(if *x == 0 { 0 } else { p - x }),
            _ => panic!("scalar/field mismatch in neg"),
        }
    }

    /// Multiplicative inverse; division by zero is an arithmetic error.
    pub fn inv(&self, a: &Scalar) -> Result<Scalar, CoreError> {
        match (self, a) {
            (FieldSpec::Rationals, Scalar::Rat(x)) => {
                if x.is_zero() {
                    Err(CoreError::Arithmetic("division by zero".into()))
                } else {
                    Ok(Scalar::Rat(x.recip()))
                }
            }
            (FieldSpec::Prime(p), Scalar::Fp(x)) => {
                if *x == 0 {
                    Err(CoreError::Arithmetic(format!("division by zero in F_{p}")))
                } else {
                    Ok(Scalar::Fp(mod_pow(*x, p - 2, *p)))
                }
            }
            _ => panic!("scalar/field mismatch in inv"),
        }
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Result<Scalar, CoreError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// Parses a coefficient written as a decimal integer or `a/b`.
    ///
    /// Over F_p the fraction is reduced mod p; a denominator divisible by p
    /// is an arithmetic error (there is no such element of the field).
    pub fn parse_scalar(&self, text: &str) -> Result<Scalar, CoreError> {
        let text = text.trim();
        let (num_str, den_str) = match text.split_once('/') {
            Some((n, d)) => (n.trim(), Some(d.trim())),
            None => (text, None),
        };
        let num: i64 = num_str
            .parse()
            .map_err(|_| CoreError::Arithmetic(format!("malformed coefficient `{text}`")))?;
        let den: i64 = match den_str {
            Some(d) => d
                .parse()
                .map_err(|_| CoreError::Arithmetic(format!("malformed coefficient `{text}`")))?,
            None => 1,
        };
        if den == 0 {
            return Err(CoreError::Arithmetic(format!(
                "zero denominator in coefficient `{text}`"
            )));
        }
        let n = self.from_i64(num);
        let d = self.from_i64(den);
        self.div(&n, &d).map_err(|_| {
            CoreError::Arithmetic(format!(
                "coefficient `{text}` has denominator divisible by the characteristic"
            ))
        })
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Rat(x) => x.is_zero(),
            Scalar::Fp(x) => *x == 0,
        }
    }

    pub fn is_one(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Rat(x) => x.is_one(),
            Scalar::Fp(x) => *x == 1,
        }
    }

    /// Renders a scalar the same way the input format expects coefficients.
    pub fn render(&self, a: &Scalar) -> String {
        match a {
            Scalar::Rat(x) => {
                if x.denom().is_one() {
                    format!("{}", x.numer())
                } else {
                    format!("{}/{}", x.numer(), x.denom())
                }
            }
            Scalar::Fp(x) => format!("{x}"),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::Prime(p) => write!(f, "F{p}"),
        }
    }
}

/// An exact field element. Only valid together with the [`FieldSpec`] it
/// was created from.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(BigRational),
    Fp(u64),
}

impl Scalar {
    /// Absolute size estimate used by pivot heuristics; exactness is never
    /// affected by this value.
    pub fn complexity(&self) -> usize {
        match self {
            Scalar::Rat(x) => x.numer().abs().bits() as usize + x.denom().bits() as usize,
            Scalar::Fp(_) => 1,
        }
    }
}

fn reduce_i64(n: i64, p: u64) -> u64 {
    let m = (n % p as i64 + p as i64) as u64 % p;
    m
}

fn mod_pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc: u128 = 1;
    let mut b = base as u128 % p as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % p as u128;
        }
        b = b * b % p as u128;
        exp >>= 1;
    }
    base = acc as u64;
    base
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
        if n == small {
            return true;
        }
        if n % small == 0 {
            return false;
        }
    }
    let mut d = 37u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_validation() {
        assert!(FieldSpec::prime(2).is_ok());
        assert!(FieldSpec::prime(101).is_ok());
        assert!(FieldSpec::prime(1).is_err());
        assert!(FieldSpec::prime(91).is_err());
    }

    #[test]
    fn rational_parse_and_arithmetic() {
        let q = FieldSpec::Rationals;
        let half = q.parse_scalar("1/2").unwrap();
        let sum = q.add(&half, &half);
        assert!(q.is_one(&sum));
        assert_eq!(q.render(&half), "1/2");
        assert_eq!(q.render(&q.from_i64(-3)), "-3");
    }

    #[test]
    fn prime_field_inverse() {
        let f7 = FieldSpec::prime(7).unwrap();
        let three = f7.from_i64(3);
        let inv = f7.inv(&three).unwrap();
        assert!(f7.is_one(&f7.mul(&three, &inv)));
    }

    #[test]
    fn half_is_rejected_in_f2() {
        let f2 = FieldSpec::prime(2).unwrap();
        assert!(f2.parse_scalar("1/2").is_err());
        assert!(f2.parse_scalar("1/3").is_ok());
    }

    #[test]
    fn malformed_coefficients_rejected() {
        let q = FieldSpec::Rationals;
        assert!(q.parse_scalar("x").is_err());
        assert!(q.parse_scalar("1/0").is_err());
        assert!(q.parse_scalar("2/4").is_ok());
    }
}
