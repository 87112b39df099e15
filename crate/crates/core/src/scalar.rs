//! Exact coefficient fields: the rationals and prime fields `GF(p)`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Field {
    Rational,
    Prime(u64),
}

/// A field element. Over `GF(p)` the value is kept as an integer in `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Scalar(BigRational);

impl Scalar {
    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    pub fn prime(p: u64) -> Result<Field> {
        if is_prime(p) {
            Ok(Field::Prime(p))
        } else {
            Err(Error::InvalidScalar(format!("{p} is not prime")))
        }
    }

    fn modulus(&self) -> Option<BigInt> {
        match self {
            Field::Rational => None,
            Field::Prime(p) => Some(BigInt::from(*p)),
        }
    }

    fn reduce_int(&self, n: BigInt) -> BigInt {
        match self.modulus() {
            None => n,
            Some(m) => {
                let r = n % &m;
                if r.is_negative() {
                    r + m
                } else {
                    r
                }
            }
        }
    }

    /// Maps an exact rational into the field.
    pub fn element(&self, q: BigRational) -> Result<Scalar> {
        match self.modulus() {
            None => Ok(Scalar(q)),
            Some(m) => {
                let num = self.reduce_int(q.numer().clone());
                let den = self.reduce_int(q.denom().clone());
                if den.is_zero() {
                    return Err(Error::InvalidScalar(format!(
                        "denominator {} vanishes modulo {m}",
                        q.denom()
                    )));
                }
                let inv = den.modpow(&(&m - BigInt::from(2)), &m);
                Ok(Scalar(BigRational::from_integer((num * inv) % m)))
            }
        }
    }

    pub fn from_ratio(&self, num: i64, den: i64) -> Result<Scalar> {
        if den == 0 {
            return Err(Error::InvalidScalar("division by zero".into()));
        }
        self.element(BigRational::new(num.into(), den.into()))
    }

    pub fn from_big_ratio(&self, num: BigInt, den: BigInt) -> Result<Scalar> {
        if den.is_zero() {
            return Err(Error::InvalidScalar("division by zero".into()));
        }
        self.element(BigRational::new(num, den))
    }

    pub fn zero(&self) -> Scalar {
        Scalar(BigRational::zero())
    }

    pub fn one(&self) -> Scalar {
        Scalar(BigRational::one())
    }

    fn wrap(&self, q: BigRational) -> Scalar {
        match self {
            Field::Rational => Scalar(q),
            Field::Prime(_) => Scalar(BigRational::from_integer(self.reduce_int(q.to_integer()))),
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.wrap(&a.0 + &b.0)
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.wrap(&a.0 * &b.0)
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        self.wrap(-&a.0)
    }
}
