//! Exact coefficient fields: the rationals and prime fields F_p.
//!
//! Every computation in this crate happens over one of these two fields.
//! Rationals are arbitrary precision; prime-field arithmetic is u64 based
//! with Barrett reduction so that elimination loops stay cheap.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Largest prime modulus accepted. Keeps every product of two canonical
/// representatives inside u64 (p^2 < 2^62).
pub const MAX_PRIME: u64 = (1 << 31) - 1;

/// The default prime used for large computations.
pub const DEFAULT_PRIME: u64 = 32003;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("modulus must satisfy 2 < p <= {MAX_PRIME}, got {0}")]
    ModulusOutOfRange(u64),
    #[error("division by zero")]
    DivisionByZero,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<FieldSpec, FieldError> {
        if p <= 2 || p > MAX_PRIME {
            return Err(FieldError::ModulusOutOfRange(p));
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(FieldSpec::Prime(p))
    }

    pub fn default_prime() -> FieldSpec {
        FieldSpec::Prime(DEFAULT_PRIME)
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, FieldSpec::Rationals)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

/// Prime-field context: modulus plus a Barrett constant for fast reduction
/// of any u64 value (in particular of sums a + b*c with a, b, c < p).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fp {
    pub p: u64,
    m: u64, // floor(2^64 / p)
}

impl Fp {
    pub fn new(p: u64) -> Fp {
        debug_assert!(p > 2 && p <= MAX_PRIME);
        Fp {
            p,
            m: u64::MAX / p,
        }
    }

    /// Reduce an arbitrary u64 modulo p.
    #[inline(always)]
    pub fn reduce(&self, x: u64) -> u64 {
        let q = ((x as u128 * self.m as u128) >> 64) as u64;
        let mut r = x.wrapping_sub(q.wrapping_mul(self.p));
        while r >= self.p {
            r -= self.p;
        }
        r
    }

    #[inline(always)]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline(always)]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline(always)]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline(always)]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.reduce(a * b)
    }

    /// a + b*c mod p, the elimination workhorse.
    #[inline(always)]
    pub fn mul_add(&self, a: u64, b: u64, c: u64) -> u64 {
        self.reduce(a + b * c)
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> Result<u64, FieldError> {
        if a == 0 {
            return Err(FieldError::DivisionByZero);
        }
        Ok(self.pow(a, self.p - 2))
    }

    pub fn from_i64(&self, n: i64) -> u64 {
        let r = n.rem_euclid(self.p as i64);
        r as u64
    }
}

/// A scalar in whichever field the ambient computation uses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scalar {
    Rat(BigRational),
    Fp(u64),
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Fp(x) => *x == 0,
        }
    }

    /// Exact string form: integers as-is, fractions as "a/b".
    pub fn to_exact_string(&self) -> String {
        match self {
            Scalar::Rat(r) => {
                if r.denom().is_one() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Fp(x) => x.to_string(),
        }
    }
}

impl FieldSpec {
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
            FieldSpec::Rationals => Scalar::Rat(rat_int(n)),
            FieldSpec::Prime(p) => Scalar::Fp(Fp::new(*p).from_i64(n)),
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Rationals, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
            (FieldSpec::Prime(p), Scalar::Fp(x), Scalar::Fp(y)) => Scalar::Fp(Fp::new(*p).add(*x, *y)),
            _ => panic!("scalar kind mismatch"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Rationals, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x - y),
            (FieldSpec::Prime(p), Scalar::Fp(x), Scalar::Fp(y)) => Scalar::Fp(Fp::new(*p).sub(*x, *y)),
            _ => panic!("scalar kind mismatch"),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Rationals, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
            (FieldSpec::Prime(p), Scalar::Fp(x), Scalar::Fp(y)) => Scalar::Fp(Fp::new(*p).mul(*x, *y)),
            _ => panic!("scalar kind mismatch"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (FieldSpec::Rationals, Scalar::Rat(x)) => Scalar::Rat(-x.clone()),
            (FieldSpec::Prime(p), Scalar::Fp(x)) => Scalar::Fp(Fp::new(*p).neg(*x)),
            _ => panic!("scalar kind mismatch"),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Result<Scalar, FieldError> {
        match (self, a) {
            (FieldSpec::Rationals, Scalar::Rat(x)) => {
                if x.is_zero() {
                    Err(FieldError::DivisionByZero)
                } else {
                    Ok(Scalar::Rat(x.recip()))
                }
            }
            (FieldSpec::Prime(p), Scalar::Fp(x)) => Ok(Scalar::Fp(Fp::new(*p).inv(*x)?)),
            _ => panic!("scalar kind mismatch"),
        }
    }
}

/// Parse an exact scalar string in the given field.
pub fn parse_scalar(field: &FieldSpec, text: &str) -> Option<Scalar> {
    match field {
        FieldSpec::Rationals => {
            let r = if let Some((n, d)) = text.split_once('/') {
                let n = BigInt::from_str(n.trim()).ok()?;
                let d = BigInt::from_str(d.trim()).ok()?;
                if d.is_zero() {
                    return None;
                }
                BigRational::new(n, d)
            } else {
                BigRational::from(BigInt::from_str(text.trim()).ok()?)
            };
            Some(Scalar::Rat(r))
        }
        FieldSpec::Prime(p) => {
            let fp = Fp::new(*p);
            if let Some((n, d)) = text.split_once('/') {
                let n: i64 = n.trim().parse().ok()?;
                let d: i64 = d.trim().parse().ok()?;
                let dv = fp.from_i64(d);
                let inv = fp.inv(dv).ok()?;
                Some(Scalar::Fp(fp.mul(fp.from_i64(n), inv)))
            } else {
                let n: i64 = text.trim().parse().ok()?;
                Some(Scalar::Fp(fp.from_i64(n)))
            }
        }
    }
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

pub fn rat_is_integer(r: &BigRational) -> bool {
    r.denom().is_one()
}

pub fn rat_abs(r: &BigRational) -> BigRational {
    r.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        assert!(FieldSpec::prime(32003).is_ok());
        assert!(FieldSpec::prime(5).is_ok());
        assert_eq!(FieldSpec::prime(9), Err(FieldError::NotPrime(9)));
        assert_eq!(FieldSpec::prime(2), Err(FieldError::ModulusOutOfRange(2)));
    }

    #[test]
    fn barrett_matches_naive() {
        let fp = Fp::new(32003);
        for x in [0u64, 1, 31999, 32003, 32004, 123456789, u64::MAX / 3] {
            assert_eq!(fp.reduce(x), x % 32003);
        }
        let fp = Fp::new(MAX_PRIME); // 2^31 - 1 is prime
        for x in [0u64, MAX_PRIME, MAX_PRIME * MAX_PRIME, u64::MAX / 5] {
            assert_eq!(fp.reduce(x), x % MAX_PRIME);
        }
    }

    #[test]
    fn inverse() {
        let fp = Fp::new(32003);
        for a in [1u64, 2, 17, 32002] {
            assert_eq!(fp.mul(a, fp.inv(a).unwrap()), 1);
        }
        assert!(fp.inv(0).is_err());
    }

    #[test]
    fn scalar_strings() {
        let q = FieldSpec::Rationals;
        let s = parse_scalar(&q, "-3/4").unwrap();
        assert_eq!(s.to_exact_string(), "-3/4");
        let s = parse_scalar(&q, "7").unwrap();
        assert_eq!(s.to_exact_string(), "7");
        let f = FieldSpec::Prime(5);
        let s = parse_scalar(&f, "1/2").unwrap();
        assert_eq!(s, Scalar::Fp(3)); // 2*3 = 6 = 1 mod 5
    }
}
