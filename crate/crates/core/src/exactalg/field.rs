//! Base fields: the rationals and prime fields.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Coefficient field of every ring in the crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BaseField {
    Rationals,
    Prime(u64),
}

/// An element of a [`BaseField`]. Prime-field residues are stored reduced into `0..p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldElem {
    Q(BigRational),
    Fp(u64),
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u128;
    let m = p as u128;
    let mut b = base as u128 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    base = acc as u64;
    base
}

impl BaseField {
    pub fn prime(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(BaseField::Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn zero(&self) -> FieldElem {
        match self {
            BaseField::Rationals => FieldElem::Q(BigRational::zero()),
            BaseField::Prime(_) => FieldElem::Fp(0),
        }
    }

    pub fn one(&self) -> FieldElem {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> FieldElem {
        match *self {
            BaseField::Rationals => FieldElem::Q(BigRational::from_integer(BigInt::from(v))),
            BaseField::Prime(p) => FieldElem::Fp(v.rem_euclid(p as i64) as u64),
        }
    }

    /// Maps `num/den` into the field; fails when `den` vanishes in it.
    pub fn from_fraction(&self, num: &BigInt, den: &BigInt) -> Result<FieldElem> {
        match *self {
            BaseField::Rationals => {
                if den.is_zero() {
                    return Err(Error::Parse("zero denominator".into()));
                }
                Ok(FieldElem::Q(BigRational::new(num.clone(), den.clone())))
            }
            BaseField::Prime(p) => {
                let pb = BigInt::from(p);
                let n = num.mod_floor(&pb);
                let d = den.mod_floor(&pb);
                if d.is_zero() {
                    return Err(Error::Parse(format!("denominator vanishes mod {p}")));
                }
                let n = u64::try_from(n).expect("reduced residue fits");
                let d = u64::try_from(d).expect("reduced residue fits");
                Ok(FieldElem::Fp(((n as u128 * pow_mod(d, p - 2, p) as u128) % p as u128) as u64))
            }
        }
    }

    pub fn is_zero(&self, a: &FieldElem) -> bool {
        match a {
            FieldElem::Q(q) => q.is_zero(),
            FieldElem::Fp(v) => *v == 0,
        }
    }

    pub fn is_one(&self, a: &FieldElem) -> bool {
        match a {
            FieldElem::Q(q) => q.is_one(),
            FieldElem::Fp(v) => *v == 1,
        }
    }

    pub fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        match (self, a, b) {
            (_, FieldElem::Q(x), FieldElem::Q(y)) => FieldElem::Q(x + y),
            (BaseField::Prime(p), FieldElem::Fp(x), FieldElem::Fp(y)) => {
                FieldElem::Fp(((*x as u128 + *y as u128) % *p as u128) as u64)
            }
            _ => panic!("field element kind does not match {self:?}"),
        }
    }

    pub fn neg(&self, a: &FieldElem) -> FieldElem {
        match (self, a) {
            (_, FieldElem::Q(x)) => FieldElem::Q(-x),
            (BaseField::Prime(p), FieldElem::Fp(x)) => FieldElem::Fp(if *x == 0 { 0 } else { p - x }),
            _ => panic!("field element kind does not match {self:?}"),
        }
    }

    pub fn sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        match (self, a, b) {
            (_, FieldElem::Q(x), FieldElem::Q(y)) => FieldElem::Q(x * y),
            (BaseField::Prime(p), FieldElem::Fp(x), FieldElem::Fp(y)) => {
                FieldElem::Fp(((*x as u128 * *y as u128) % *p as u128) as u64)
            }
            _ => panic!("field element kind does not match {self:?}"),
        }
    }

    pub fn inv(&self, a: &FieldElem) -> Option<FieldElem> {
        if self.is_zero(a) {
            return None;
        }
        Some(match (self, a) {
            (_, FieldElem::Q(x)) => FieldElem::Q(x.recip()),
            (BaseField::Prime(p), FieldElem::Fp(x)) => FieldElem::Fp(pow_mod(*x, p - 2, *p)),
            _ => panic!("field element kind does not match {self:?}"),
        })
    }

    /// Checks that an element belongs to this field (variant and range).
    pub fn contains(&self, a: &FieldElem) -> bool {
        match (self, a) {
            (BaseField::Rationals, FieldElem::Q(_)) => true,
            (BaseField::Prime(p), FieldElem::Fp(v)) => v < p,
            _ => false,
        }
    }
}

impl fmt::Display for BaseField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseField::Rationals => write!(f, "Q"),
            BaseField::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

impl FieldElem {
    /// Whether the printed form needs a leading minus sign.
    pub(crate) fn is_negative(&self) -> bool {
        match self {
            FieldElem::Q(q) => q.is_negative(),
            FieldElem::Fp(_) => false,
        }
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElem::Q(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            FieldElem::Fp(v) => write!(f, "{v}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_inverse() {
        let f = BaseField::prime(101).unwrap();
        for v in 1..101 {
            let a = f.from_i64(v);
            let b = f.inv(&a).unwrap();
            assert!(f.is_one(&f.mul(&a, &b)));
        }
        assert!(f.inv(&f.zero()).is_none());
    }

    #[test]
    fn rejects_composite_modulus() {
        assert_eq!(BaseField::prime(91), Err(Error::NotPrime(91)));
        assert!(BaseField::prime(2).is_ok());
    }

    #[test]
    fn fractions_reduce_mod_p() {
        let f = BaseField::Prime(7);
        let half = f.from_fraction(&BigInt::from(1), &BigInt::from(2)).unwrap();
        assert_eq!(half, FieldElem::Fp(4));
        assert!(f.from_fraction(&BigInt::from(1), &BigInt::from(14)).is_err());
    }
}
