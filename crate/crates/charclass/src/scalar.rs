//! Exact scalars: arbitrary-precision rationals and odd prime fields.

use crate::error::{Error, Result};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, Zero};
use std::fmt;

/// Arbitrary-precision rational; always stored in lowest terms with a
/// positive denominator (the invariant is maintained by `BigRational`).
pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// The common interface of the two coefficient fields.
///
/// `Fp` values carry their prime, so zero and one are derived from an
/// existing element rather than from a nullary constructor.
pub trait Scalar: Clone + PartialEq + fmt::Debug + fmt::Display {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
    fn mul(&self, other: &Self) -> Self;
    fn inv(&self) -> Option<Self>;
    /// Image of an integer under the unique ring map from Z.
    fn of_i64(&self, n: i64) -> Self;
}

impl Scalar for Rat {
    fn zero_like(&self) -> Self {
        Rat::zero()
    }
    fn one_like(&self) -> Self {
        Rat::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn of_i64(&self, n: i64) -> Self {
        rat_int(n)
    }
}

pub fn is_prime(n: u64) -> bool {
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

/// An element of F_p for an odd prime p, stored as a residue in [0, p).
///
/// p = 2 is rejected at construction: the ring presentations served by this
/// crate are only valid away from characteristic 2.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct Fp {
    prime: u64,
    value: u64,
}

impl Fp {
    pub fn new(prime: u64, value: i64) -> Result<Fp> {
        if prime == 2 || !is_prime(prime) {
            return Err(Error::BadPrime(prime));
        }
        Ok(Fp::reduced(prime, value))
    }

    fn reduced(prime: u64, value: i64) -> Fp {
        let p = prime as i64;
        let v = ((value % p) + p) % p;
        Fp {
            prime,
            value: v as u64,
        }
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    /// Reduce a rational mod p. Fails when p divides the denominator.
    pub fn from_rat(prime: u64, x: &Rat) -> Result<Fp> {
        if prime == 2 || !is_prime(prime) {
            return Err(Error::BadPrime(prime));
        }
        let p = BigInt::from(prime);
        let den = x.denom();
        if (den % &p).is_zero() {
            return Err(Error::NonIntegralClass {
                p: prime,
                coeff: x.to_string(),
            });
        }
        let num_red = big_mod(x.numer(), prime);
        let den_red = Fp {
            prime,
            value: big_mod(den, prime),
        };
        let inv = den_red.inv().expect("denominator is a unit mod p");
        Ok(Fp {
            prime,
            value: num_red,
        }
        .mul(&inv))
    }

    fn pow(&self, mut e: u64) -> Fp {
        let mut base = *self;
        let mut acc = Fp {
            prime: self.prime,
            value: 1,
        };
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }
}

fn big_mod(x: &BigInt, p: u64) -> u64 {
    use num::ToPrimitive;
    let p_big = BigInt::from(p);
    let mut r = x % &p_big;
    if r.is_negative() {
        r += &p_big;
    }
    r.to_u64().expect("residue fits in u64")
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Scalar for Fp {
    fn zero_like(&self) -> Self {
        Fp {
            prime: self.prime,
            value: 0,
        }
    }
    fn one_like(&self) -> Self {
        Fp {
            prime: self.prime,
            value: 1,
        }
    }
    fn is_zero(&self) -> bool {
        self.value == 0
    }
    fn add(&self, other: &Self) -> Self {
        assert_eq!(self.prime, other.prime, "mixed primes in F_p arithmetic");
        Fp {
            prime: self.prime,
            value: (self.value + other.value) % self.prime,
        }
    }
    fn neg(&self) -> Self {
        Fp {
            prime: self.prime,
            value: (self.prime - self.value) % self.prime,
        }
    }
    fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.prime, other.prime, "mixed primes in F_p arithmetic");
        Fp {
            prime: self.prime,
            value: (self.value * other.value) % self.prime,
        }
    }
    fn inv(&self) -> Option<Self> {
        if self.value == 0 {
            None
        } else {
            Some(self.pow(self.prime - 2))
        }
    }
    fn of_i64(&self, n: i64) -> Self {
        Fp::reduced(self.prime, n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_two_and_composites() {
        assert!(Fp::new(2, 1).is_err());
        assert!(Fp::new(9, 1).is_err());
        assert!(Fp::new(3, 1).is_ok());
    }

    #[test]
    fn fp_inverse() {
        let x = Fp::new(7, 3).unwrap();
        let inv = x.inv().unwrap();
        assert_eq!(x.mul(&inv).value(), 1);
        assert!(Fp::new(7, 0).unwrap().inv().is_none());
    }

    #[test]
    fn rat_reduction_mod_p() {
        // -1/45 mod 7: 45 = 3, 3^-1 = 5, -5 = 2.
        let x = rat(-1, 45);
        let r = Fp::from_rat(7, &x).unwrap();
        assert_eq!(r.value(), 2);
        // 1/3 mod 3 is not defined.
        assert!(Fp::from_rat(3, &rat(1, 3)).is_err());
    }
}
